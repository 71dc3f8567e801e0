"""Lower-bound graph families for CONGEST, exact oracles, a bandwidth-exact simulator and two-party protocols."""

from ._kernels import backend, use_backend
from .comm import disj, eq
from .graph import Graph, Partition, apsp_exact, cut_edges

__version__ = "0.1.0"

__all__ = ["Graph", "Partition", "apsp_exact", "cut_edges", "disj", "eq", "backend", "use_backend", "__version__"]
