"""Boolean operations on pairs of manifold triangulated surfaces.

Two-stage pipeline: coordinate-based intersection and re-triangulation,
then purely index-based loop / sub-surface / sub-block assembly and
classification of union, intersection and both subtractions.
"""

from .blocks import BooleanResult, point_in_closed_mesh, preprocess_trivial_cases
from .errors import (
    AssemblyError,
    ClassificationError,
    CoincidentInput,
    DegeneratePolygon,
    DegenerateTriangle,
    EmptyInput,
    GeometryError,
    IoError,
    MeshBoolError,
    NotClosed,
    NotSimple,
    ParseError,
    TopologyError,
)
from .geometry import Aabb, TriMesh, aabb_intersection, mesh_aabb, signed_volume
from .io import dump_debug, load_mesh, save_mesh
from .octree import OctreeConfig
from .pipeline import (
    PipelineOptions,
    PipelineState,
    boolean_a_minus_b,
    boolean_b_minus_a,
    boolean_intersection,
    boolean_union,
    run_pipeline,
)

__version__ = "0.1.0"

__all__ = [
    "Aabb",
    "BooleanResult",
    "OctreeConfig",
    "PipelineOptions",
    "PipelineState",
    "TriMesh",
    "aabb_intersection",
    "boolean_a_minus_b",
    "boolean_b_minus_a",
    "boolean_intersection",
    "boolean_union",
    "dump_debug",
    "load_mesh",
    "mesh_aabb",
    "point_in_closed_mesh",
    "preprocess_trivial_cases",
    "run_pipeline",
    "save_mesh",
    "signed_volume",
    "MeshBoolError",
    "ParseError",
    "EmptyInput",
    "IoError",
    "GeometryError",
    "DegenerateTriangle",
    "DegeneratePolygon",
    "NotSimple",
    "NotClosed",
    "TopologyError",
    "AssemblyError",
    "ClassificationError",
    "CoincidentInput",
]
