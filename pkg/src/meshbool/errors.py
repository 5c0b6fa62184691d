"""Exception hierarchy with CLI exit codes attached.

Exit code classes: 2 = input/parse, 3 = geometry, 4 = topology,
5 = classification/assembly.
"""


class MeshBoolError(Exception):
    exit_code = 1


class ParseError(MeshBoolError):
    """Malformed mesh file; message carries line or byte offset."""

    exit_code = 2


class EmptyInput(MeshBoolError):
    exit_code = 2


class IoError(MeshBoolError):
    exit_code = 2


class GeometryError(MeshBoolError):
    exit_code = 3


class DegenerateTriangle(GeometryError):
    pass


class DegeneratePolygon(GeometryError):
    pass


class NotSimple(GeometryError):
    pass


class NotClosed(GeometryError):
    pass


class CoplanarPairError(GeometryError):
    """Raised in strict mode when overlapping coplanar triangles are found."""


class TopologyError(MeshBoolError):
    exit_code = 4


class AssemblyError(MeshBoolError):
    exit_code = 5


class ClassificationError(MeshBoolError):
    exit_code = 5


class CoincidentInput(MeshBoolError):
    exit_code = 5
