"""Core primitives: points, axis-aligned boxes, indexed triangle meshes.

All coordinates are float64. Meshes are value types: once built they are
treated as read-only and can be shared freely across threads.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyInput, GeometryError, NotClosed, TopologyError


def as_points(data) -> np.ndarray:
    """Coerce to an (n, 3) float64 array and reject NaN/Inf."""
    pts = np.asarray(data, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(1, 3)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise GeometryError(f"expected (n, 3) coordinates, got shape {pts.shape}")
    if not np.isfinite(pts).all():
        raise GeometryError("non-finite coordinate in point data")
    return pts


@dataclass(frozen=True)
class Aabb:
    """Axis-aligned box; the empty box is a first-class value (lo > hi)."""

    lo: np.ndarray
    hi: np.ndarray

    @staticmethod
    def empty() -> "Aabb":
        return Aabb(np.full(3, np.inf), np.full(3, -np.inf))

    @staticmethod
    def of_points(pts: np.ndarray) -> "Aabb":
        pts = as_points(pts)
        return Aabb(pts.min(axis=0), pts.max(axis=0))

    @property
    def is_empty(self) -> bool:
        return bool((self.lo > self.hi).any())

    @property
    def extent(self) -> np.ndarray:
        return self.hi - self.lo

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    def overlaps(self, other: "Aabb") -> bool:
        if self.is_empty or other.is_empty:
            return False
        return bool((self.lo <= other.hi).all() and (other.lo <= self.hi).all())

    def contains_point(self, p) -> bool:
        p = np.asarray(p, dtype=np.float64)
        return bool((self.lo <= p).all() and (p <= self.hi).all())

    def inflated(self, margin: float) -> "Aabb":
        return Aabb(self.lo - margin, self.hi + margin)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Aabb):
            return NotImplemented
        if self.is_empty and other.is_empty:
            return True
        return bool(np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi))


def aabb_intersection(a: Aabb, b: Aabb) -> Aabb:
    """Componentwise max of mins / min of maxes; empty when disjoint."""
    lo = np.maximum(a.lo, b.lo)
    hi = np.minimum(a.hi, b.hi)
    if (lo > hi).any():
        return Aabb.empty()
    return Aabb(lo, hi)


@dataclass
class TriMesh:
    """Indexed triangle surface with a source tag ('A' or 'B').

    vertices: (n, 3) float64, faces: (m, 3) integer indices. The winding of
    each face defines its outward normal.
    """

    vertices: np.ndarray
    faces: np.ndarray
    source: str = "A"
    name: str = ""
    _closed: bool | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.vertices = as_points(self.vertices) if len(self.vertices) else np.zeros((0, 3))
        self.faces = np.asarray(self.faces, dtype=np.int64).reshape(-1, 3)
        if len(self.faces) and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise GeometryError("face index out of range")

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @property
    def closed(self) -> bool:
        if self._closed is None:
            self._closed = len(boundary_edges(self.faces)) == 0 and self.num_faces > 0
        return self._closed

    def face_coords(self, i: int) -> np.ndarray:
        return self.vertices[self.faces[i]]

    def reversed(self) -> "TriMesh":
        return TriMesh(self.vertices, self.faces[:, ::-1].copy(), self.source, self.name)

    def boundary_loops(self) -> list[list[int]]:
        return chain_boundary_loops(boundary_edges(self.faces))


def directed_edges(faces: np.ndarray) -> np.ndarray:
    """All 3m directed edges (u, v) of the face array, face-major order."""
    faces = np.asarray(faces)
    return np.stack(
        [faces[:, [0, 1, 2]].ravel(), faces[:, [1, 2, 0]].ravel()], axis=1
    )


def boundary_edges(faces: np.ndarray) -> np.ndarray:
    """Directed edges whose reverse does not occur (surface boundary)."""
    if len(faces) == 0:
        return np.zeros((0, 2), dtype=np.int64)
    de = directed_edges(faces)
    have = set(map(tuple, de))
    mask = [(v, u) not in have for u, v in de]
    return de[np.asarray(mask, dtype=bool)]


def chain_boundary_loops(bedges: np.ndarray) -> list[list[int]]:
    """Chain directed boundary edges into closed vertex cycles."""
    nxt = {}
    for u, v in map(tuple, bedges):
        if u in nxt:
            raise TopologyError(f"vertex {u} has two outgoing boundary edges")
        nxt[u] = v
    loops = []
    seen = set()
    for start in sorted(nxt):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        v = nxt[start]
        while v != start:
            cyc.append(v)
            seen.add(v)
            v = nxt[v]
        loops.append(cyc)
    return loops


def is_closed_manifold(mesh: TriMesh) -> bool:
    """Every undirected edge shared by exactly two faces, opposite directions."""
    if mesh.num_faces == 0:
        return False
    de = directed_edges(mesh.faces)
    seen = {}
    for u, v in map(tuple, de):
        if u == v or (u, v) in seen:
            return False
        seen[(u, v)] = True
    for u, v in seen:
        if (v, u) not in seen:
            return False
    return True


def mesh_aabb(mesh: TriMesh) -> Aabb:
    """Smallest box containing all vertices."""
    if mesh.num_vertices == 0:
        raise EmptyInput("mesh has no vertices")
    return Aabb.of_points(mesh.vertices)


def triangle_normals(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
    """Non-unit face normals (cross products), (m, 3)."""
    p = vertices[faces]
    return np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])


def triangle_areas(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
    return 0.5 * np.linalg.norm(triangle_normals(vertices, faces), axis=1)


def signed_volume(mesh: TriMesh) -> float:
    """Divergence-theorem volume: sum of det(v0, v1, v2) / 6 over faces.

    Positive when all windings point outward. Raises NotClosed for open
    surfaces, where the quantity is not translation-invariant.
    """
    if not mesh.closed:
        raise NotClosed("signed_volume requires a closed surface")
    p = mesh.vertices[mesh.faces]
    return float(np.einsum("ij,ij->i", p[:, 0], np.cross(p[:, 1], p[:, 2])).sum() / 6.0)


def euler_characteristic(mesh: TriMesh) -> int:
    """V - E + F counting only referenced vertices and undirected edges."""
    if mesh.num_faces == 0:
        return 0
    verts = np.unique(mesh.faces)
    de = directed_edges(mesh.faces)
    und = np.unique(np.sort(de, axis=1), axis=0)
    return int(len(verts) - len(und) + len(mesh.faces))


def connected_face_components(faces: np.ndarray) -> list[np.ndarray]:
    """Group face ids into edge-connected components."""
    if len(faces) == 0:
        return []
    owner = {}
    for fi, tri in enumerate(faces):
        for k in range(3):
            u, v = tri[k], tri[(k + 1) % 3]
            owner.setdefault((min(u, v), max(u, v)), []).append(fi)
    parent = list(range(len(faces)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for fids in owner.values():
        for other in fids[1:]:
            ra, rb = find(fids[0]), find(other)
            if ra != rb:
                parent[rb] = ra
    groups = {}
    for fi in range(len(faces)):
        groups.setdefault(find(fi), []).append(fi)
    return [np.asarray(g, dtype=np.int64) for g in sorted(groups.values(), key=lambda g: g[0])]


def compact_submesh(vertices: np.ndarray, faces: np.ndarray, source="A", name="") -> TriMesh:
    """Build a TriMesh from a face subset, dropping unreferenced vertices."""
    if len(faces) == 0:
        return TriMesh(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64), source, name)
    used, inverse = np.unique(np.asarray(faces, dtype=np.int64).ravel(), return_inverse=True)
    return TriMesh(vertices[used], inverse.reshape(-1, 3), source, name)
