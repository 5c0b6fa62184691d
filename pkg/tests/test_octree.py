import numpy as np
import pytest

from meshbool.geometry import TriMesh
from meshbool.octree import (
    OctreeConfig,
    build_octree,
    candidate_pairs,
    clip_to_shared_region,
    find_candidates,
    triangle_boxes,
)
from meshes import cube, icosphere, oracle_aabb_pairs, tangent_cylinders


def random_soup(rng, n, offset=(0, 0, 0), scale=1.0):
    tris = rng.uniform(0, 1, size=(n, 3, 3)) * scale + np.asarray(offset, dtype=float)
    verts = tris.reshape(-1, 3)
    faces = np.arange(3 * n).reshape(n, 3)
    return TriMesh(verts, faces)


def test_disjoint_cubes_empty_clip():
    ids_a, ids_b, cube_box = clip_to_shared_region(cube((0, 0, 0)), cube((5, 5, 5)))
    assert len(ids_a) == 0 and len(ids_b) == 0
    assert find_candidates(cube((0, 0, 0)), cube((5, 5, 5))).shape == (0, 2)


def test_identical_meshes_full_clip():
    a = cube()
    ids_a, ids_b, cube_box = clip_to_shared_region(a, cube())
    assert len(ids_a) == a.num_faces and len(ids_b) == a.num_faces
    assert not cube_box.is_empty
    extent = cube_box.extent
    assert extent[0] == pytest.approx(extent[1]) == pytest.approx(extent[2])


def test_offset_cube_clip_matches_box_oracle():
    a = cube((0, 0, 0), 1.0)
    b = cube((0.5, 0.5, 0.5), 1.0)
    ids_a, ids_b, _ = clip_to_shared_region(a, b)
    from meshbool.geometry import aabb_intersection, mesh_aabb

    box = aabb_intersection(mesh_aabb(a), mesh_aabb(b))
    lo, hi = triangle_boxes(a)
    expect = {i for i in range(a.num_faces) if ((lo[i] <= box.hi) & (hi[i] >= box.lo)).all()}
    assert set(ids_a.tolist()) == expect


def test_leaf_rules_trivial():
    a = cube()
    b = cube((0.5, 0.5, 0.5))
    ids_a, ids_b, root = clip_to_shared_region(a, b)
    tree = build_octree(np.array([], dtype=np.int64), ids_b, triangle_boxes(a),
                        triangle_boxes(b), root, OctreeConfig())
    assert tree.is_leaf  # one side empty
    tree = build_octree(ids_a[:1], ids_b[:1], triangle_boxes(a), triangle_boxes(b),
                        root, OctreeConfig(leaf_capacity=8))
    assert tree.is_leaf  # both under capacity


def test_leaf_invariant_walk_cube_sphere():
    a = cube((-1, -1, -1), 2.0)
    b = icosphere(1.3, subdivisions=3)
    cfg = OctreeConfig(max_depth=6, leaf_capacity=32)
    ids_a, ids_b, root = clip_to_shared_region(a, b)
    tree = build_octree(ids_a, ids_b, triangle_boxes(a), triangle_boxes(b), root, cfg)

    def walk(node):
        if node.is_leaf:
            assert (
                node.depth >= cfg.max_depth
                or (len(node.tris_a) <= cfg.leaf_capacity and len(node.tris_b) <= cfg.leaf_capacity)
                or len(node.tris_a) == 0
                or len(node.tris_b) == 0
            )
        else:
            assert len(node.children) == 8
            for ch in node.children:
                walk(ch)

    walk(tree)


def test_candidates_single_leaf_cross_product():
    a = cube()
    b = cube((0.5, 0.5, 0.5))
    ids_a, ids_b, root = clip_to_shared_region(a, b)
    tree = build_octree(ids_a[:1], ids_b[:1], triangle_boxes(a), triangle_boxes(b),
                        root, OctreeConfig())
    pairs = candidate_pairs(tree)
    assert pairs.tolist() == [[int(ids_a[0]), int(ids_b[0])]]


def test_superset_property_random_configurations():
    rng = np.random.default_rng(42)
    for trial in range(100):
        a = random_soup(rng, rng.integers(4, 24))
        b = random_soup(rng, rng.integers(4, 24), offset=rng.uniform(-0.5, 0.5, 3))
        got = set(map(tuple, find_candidates(a, b)))
        ids_a, ids_b, _ = clip_to_shared_region(a, b)
        in_a, in_b = set(ids_a.tolist()), set(ids_b.tolist())
        expect = {
            (i, j) for (i, j) in oracle_aabb_pairs(a, b) if i in in_a and j in in_b
        }
        assert expect <= got, f"trial {trial}: missing {expect - got}"


def test_determinism():
    a, b = tangent_cylinders(1.0, n_theta=12, n_rings=5)
    p1 = find_candidates(a, b)
    p2 = find_candidates(a, b)
    assert np.array_equal(p1, p2)


def test_capacity_monotonicity_keeps_true_pairs():
    from meshbool.intersect import tri_tri_intersect

    a = cube((0, 0, 0), 1.0)
    b = cube((0.4, 0.4, 0.4), 1.0)
    sets = {}
    for cap in (2, 8, 64):
        sets[cap] = set(map(tuple, find_candidates(a, b, OctreeConfig(leaf_capacity=cap))))
    truth = set()
    for i in range(a.num_faces):
        for j in range(b.num_faces):
            res = tri_tri_intersect(a.face_coords(i), b.face_coords(j), 1e-12)
            if res is not None and not getattr(res, "degenerate", False):
                truth.add((i, j))
    for cap, got in sets.items():
        assert truth <= got, f"capacity {cap} lost a truly intersecting pair"
