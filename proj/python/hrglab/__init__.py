"""Random hyperbolic graph simulation lab."""

from ._core import *  # noqa: F401,F403
from ._core import ModelParams, PointSet, Graph, __doc__  # noqa: F401

__version__ = "0.1.0"
