"""Directed-edge adjacency for one surface of the merged mesh.

Provides the region flood (advancing-front growth that never crosses
intersection edges) and boundary-cycle walking used by loop completion and
sub-surface construction. Faces are triangles over global vertex ids; on a
manifold surface each directed edge belongs to exactly one face.
"""
from __future__ import annotations

from collections import deque

import numpy as np

from .errors import TopologyError


class SurfaceTopology:
    def __init__(self, faces: np.ndarray):
        self.faces = np.asarray(faces, dtype=np.int64)
        self.edge_face: dict[tuple[int, int], int] = {}
        for fi, (a, b, c) in enumerate(map(tuple, self.faces)):
            for u, v in ((a, b), (b, c), (c, a)):
                if (u, v) in self.edge_face:
                    raise TopologyError(f"directed edge {(u, v)} used twice")
                self.edge_face[(u, v)] = fi

    def face_of(self, u: int, v: int) -> int | None:
        return self.edge_face.get((u, v))

    def third(self, fi: int, u: int, v: int) -> int:
        a, b, c = self.faces[fi]
        for x in (a, b, c):
            if x != u and x != v:
                return int(x)
        raise TopologyError(f"face {fi} is degenerate")

    def flood_regions(self, walls: set[tuple[int, int]]) -> np.ndarray:
        """Label faces by flooding across shared edges not listed in walls.

        walls holds undirected vertex pairs as (min, max) tuples. Every face
        gets a label; label order follows the lowest face id per region.
        """
        n = len(self.faces)
        labels = np.full(n, -1, dtype=np.int64)
        current = 0
        for seed in range(n):
            if labels[seed] >= 0:
                continue
            labels[seed] = current
            queue = deque([seed])
            while queue:
                fi = queue.popleft()
                a, b, c = self.faces[fi]
                for u, v in ((a, b), (b, c), (c, a)):
                    key = (u, v) if u < v else (v, u)
                    if key in walls:
                        continue
                    g = self.edge_face.get((v, u))
                    if g is not None and labels[g] < 0:
                        labels[g] = current
                        queue.append(g)
            current += 1
        return labels

    def flood_from(self, seeds, walls: set[tuple[int, int]]) -> np.ndarray:
        """Faces reachable from the seed faces without crossing walls."""
        visited = set()
        queue = deque()
        for s in seeds:
            if s not in visited:
                visited.add(int(s))
                queue.append(int(s))
        while queue:
            fi = queue.popleft()
            a, b, c = self.faces[fi]
            for u, v in ((a, b), (b, c), (c, a)):
                key = (u, v) if u < v else (v, u)
                if key in walls:
                    continue
                g = self.edge_face.get((v, u))
                if g is not None and g not in visited:
                    visited.add(g)
                    queue.append(g)
        return np.asarray(sorted(visited), dtype=np.int64)

    def region_boundary(self, member: np.ndarray) -> list[tuple[int, int]]:
        """Directed edges of member faces whose twin lies outside the set."""
        flags = np.zeros(len(self.faces), dtype=bool)
        flags[np.asarray(member, dtype=np.int64)] = True
        out = []
        for fi in np.nonzero(flags)[0]:
            a, b, c = self.faces[int(fi)]
            for u, v in ((a, b), (b, c), (c, a)):
                g = self.edge_face.get((v, u))
                if g is None or not flags[g]:
                    out.append((int(u), int(v)))
        return out

    def next_boundary_edge(self, u: int, v: int, in_region) -> tuple[int, int]:
        """Fan-walk around v inside the region to the successor boundary edge."""
        fi = self.edge_face[(u, v)]
        w = self.third(fi, u, v)
        while True:
            g = self.edge_face.get((w, v))
            if g is None or not in_region(g):
                return (v, w)
            w = self.third(g, w, v)

    def boundary_cycles(self, member: np.ndarray) -> list[list[tuple[int, int]]]:
        """Decompose a face set's directed boundary into closed edge cycles."""
        flags = np.zeros(len(self.faces), dtype=bool)
        flags[member] = True

        def in_region(g):
            return bool(flags[g])

        edges = sorted(self.region_boundary(np.asarray(member)))
        unused = set(edges)
        cycles = []
        for start in edges:
            if start not in unused:
                continue
            cyc = [start]
            unused.discard(start)
            cur = self.next_boundary_edge(start[0], start[1], in_region)
            guard = 0
            while cur != start:
                if cur not in unused:
                    raise TopologyError(f"boundary walk left the region at edge {cur}")
                cyc.append(cur)
                unused.discard(cur)
                cur = self.next_boundary_edge(cur[0], cur[1], in_region)
                guard += 1
                if guard > 4 * len(self.faces) + 16:
                    raise TopologyError("boundary walk did not close")
            cycles.append(cyc)
        return cycles
