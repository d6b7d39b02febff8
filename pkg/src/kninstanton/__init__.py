"""Geometry, horizon structure and charged geodesic motion on Wick-rotated Kerr-Newman-(A)dS instantons."""

from .geometry import InstantonParams
from .integrals import MotionConstants, TangentState

__version__ = "0.1.0"
SCHEMA_VERSION = "1"

__all__ = ["InstantonParams", "MotionConstants", "TangentState", "SCHEMA_VERSION", "__version__"]
