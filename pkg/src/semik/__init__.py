"""Semiring K-theory at desk scale: Boolean and tropical semimodules,
ordered groups of matricial limits, and finite semiring classification."""

__version__ = "0.1.0"

from semik.core import BOOL, NAT, NEG_INF, TROP, SemiMatrix, TableKernel  # noqa: E402
from semik.kernels import BACKEND  # noqa: E402

__all__ = ["BOOL", "NAT", "NEG_INF", "TROP", "SemiMatrix", "TableKernel", "BACKEND", "__version__"]
