"""Exact toolkit for Laurent superpotentials: critical loci, local Jacobian
rings, Artinian decompositions, Koszul and matrix-factorization checks, and
mutations of the Bl4 tori."""

from __future__ import annotations

__version__ = "0.1.0"

from .scalars import GF, QQ, field_for_char  # noqa: E402
from .laurent import LaurentPoly  # noqa: E402

__all__ = ["GF", "QQ", "LaurentPoly", "field_for_char", "__version__"]
