"""Broad phase: shared-box clipping and the octree candidate-pair search.

Triangles are placed in every node their bounding box touches, so the
candidate set is a superset of all box-overlapping pairs inside the root
cube. Boxes for all clipped triangles are computed once up front.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError
from .geometry import Aabb, TriMesh, aabb_intersection, mesh_aabb

CUBE_INFLATE = 1e-9


@dataclass
class OctreeConfig:
    max_depth: int = 8
    leaf_capacity: int = 32

    def __post_init__(self):
        if self.max_depth < 1 or self.leaf_capacity < 1:
            raise GeometryError("octree depth and capacity must be >= 1")


@dataclass
class OctreeNode:
    lo: np.ndarray
    hi: np.ndarray
    depth: int
    tris_a: np.ndarray
    tris_b: np.ndarray
    children: list = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


def triangle_boxes(mesh: TriMesh) -> tuple[np.ndarray, np.ndarray]:
    """Per-triangle AABB corners, (m, 3) lo and (m, 3) hi."""
    p = mesh.vertices[mesh.faces]
    return p.min(axis=1), p.max(axis=1)


def clip_to_shared_region(a: TriMesh, b: TriMesh):
    """Split both meshes against the shared box and build the root cube.

    Returns (ids_a, ids_b, root_cube). The id arrays hold the triangles whose
    boxes touch the shared region; both are empty when the meshes' boxes are
    disjoint and the pipeline short-circuits.
    """
    box_ab = aabb_intersection(mesh_aabb(a), mesh_aabb(b))
    if box_ab.is_empty:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), Aabb.empty()

    def inside(mesh):
        lo, hi = triangle_boxes(mesh)
        mask = ((lo <= box_ab.hi) & (hi >= box_ab.lo)).all(axis=1)
        return np.nonzero(mask)[0], lo, hi

    ids_a, lo_a, hi_a = inside(a)
    ids_b, lo_b, hi_b = inside(b)
    if len(ids_a) == 0 or len(ids_b) == 0:
        return ids_a, ids_b, Aabb.empty()

    # Cube extension: center-preserving, grown to cover every clipped
    # triangle box, then inflated to dodge boundary-exact misses.
    all_lo = np.minimum(lo_a[ids_a].min(axis=0), lo_b[ids_b].min(axis=0))
    all_hi = np.maximum(hi_a[ids_a].max(axis=0), hi_b[ids_b].max(axis=0))
    center = box_ab.center
    half = max(
        float(box_ab.extent.max()) * 0.5,
        float(np.abs(all_lo - center).max()),
        float(np.abs(all_hi - center).max()),
    )
    half *= 1.0 + CUBE_INFLATE
    if half == 0.0:
        half = CUBE_INFLATE
    cube = Aabb(center - half, center + half)
    return ids_a, ids_b, cube


def build_octree(
    ids_a: np.ndarray,
    ids_b: np.ndarray,
    boxes_a: tuple[np.ndarray, np.ndarray],
    boxes_b: tuple[np.ndarray, np.ndarray],
    root: Aabb,
    cfg: OctreeConfig | None = None,
) -> OctreeNode:
    """Recursive eight-way subdivision of the root cube.

    A node is a leaf when it reaches max depth, when both triangle counts
    are within the capacity, or when either count is zero.
    """
    cfg = cfg or OctreeConfig()
    lo_a, hi_a = boxes_a
    lo_b, hi_b = boxes_b

    def make(lo, hi, depth, ia, ib):
        node = OctreeNode(lo, hi, depth, ia, ib)
        if (
            depth >= cfg.max_depth
            or (len(ia) <= cfg.leaf_capacity and len(ib) <= cfg.leaf_capacity)
            or len(ia) == 0
            or len(ib) == 0
        ):
            return node
        mid = 0.5 * (lo + hi)
        for oct_index in range(8):
            sel = np.array([oct_index & 1, (oct_index >> 1) & 1, (oct_index >> 2) & 1])
            clo = np.where(sel == 0, lo, mid)
            chi = np.where(sel == 0, mid, hi)
            sub_a = ia[((lo_a[ia] <= chi) & (hi_a[ia] >= clo)).all(axis=1)]
            sub_b = ib[((lo_b[ib] <= chi) & (hi_b[ib] >= clo)).all(axis=1)]
            node.children.append(make(clo, chi, depth + 1, sub_a, sub_b))
        return node

    ids_a = np.asarray(ids_a, dtype=np.int64)
    ids_b = np.asarray(ids_b, dtype=np.int64)
    return make(np.asarray(root.lo, float), np.asarray(root.hi, float), 0, ids_a, ids_b)


def candidate_pairs(tree: OctreeNode) -> np.ndarray:
    """Union over leaves of tris_a x tris_b, deduplicated and sorted."""
    chunks = []

    def walk(node):
        if node.is_leaf:
            if len(node.tris_a) and len(node.tris_b):
                ga, gb = np.meshgrid(node.tris_a, node.tris_b, indexing="ij")
                chunks.append(np.stack([ga.ravel(), gb.ravel()], axis=1))
            return
        for child in node.children:
            walk(child)

    walk(tree)
    if not chunks:
        return np.zeros((0, 2), dtype=np.int64)
    pairs = np.concatenate(chunks, axis=0)
    return np.unique(pairs, axis=0)


def find_candidates(a: TriMesh, b: TriMesh, cfg: OctreeConfig | None = None) -> np.ndarray:
    """Full broad phase: clip, build the tree, collect pairs."""
    ids_a, ids_b, cube = clip_to_shared_region(a, b)
    if len(ids_a) == 0 or len(ids_b) == 0:
        return np.zeros((0, 2), dtype=np.int64)
    tree = build_octree(ids_a, ids_b, triangle_boxes(a), triangle_boxes(b), cube, cfg)
    return candidate_pairs(tree)
