"""liebi: Atiyah classes of Lie bialgebras with exact rational arithmetic."""

from loguru import logger

from .atiyah import (
    AtiyahReport,
    atiyah_vanishes,
    c1_vanishes,
    center_obstruction,
    full_report,
    lambda_cocycle,
    modular_vector,
)
from .bialgebra import (
    LieBialgebra,
    RMatrix,
    build_double,
    coboundary_bialgebra,
    validate_bialgebra,
)
from .catalog import get_entry, list_entries
from .lie import LieAlgebra, validate_lie
from .runtime_environment import get_runtime_environment

# Silent as a library; `configure_logging` turns output back on.
logger.disable("liebi")

__all__ = [
    "AtiyahReport",
    "atiyah_vanishes",
    "build_double",
    "c1_vanishes",
    "center_obstruction",
    "coboundary_bialgebra",
    "full_report",
    "get_entry",
    "get_runtime_environment",
    "lambda_cocycle",
    "LieAlgebra",
    "LieBialgebra",
    "list_entries",
    "modular_vector",
    "RMatrix",
    "validate_bialgebra",
    "validate_lie",
]
