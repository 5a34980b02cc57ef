from enum import Enum, IntEnum


class GeneratedKind(str, Enum):
    SP_ALGEBRA = "sp-algebra"
    SYMPLECTIC = "symplectic"
    SIEGEL_POINT = "siegel-point"


class CheckSuite(str, Enum):
    KERNEL = "kernel"
    POLARIZED = "polarized"
    SYMPLECTIC = "symplectic"
    SIEGEL = "siegel"
    COADJOINT = "coadjoint"
    ALL = "all"


class CompositionOrder(str, Enum):
    LEFT = "left"  # Ad*(G1 G2) = Ad*(G1) o Ad*(G2)
    RIGHT = "right"  # Ad*(G1 G2) = Ad*(G2) o Ad*(G1)


class ExitCode(IntEnum):
    SUCCESS = 0
    CHECK_FAILED = 1
    USAGE = 2
