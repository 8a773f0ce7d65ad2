from __future__ import annotations

from superpot.laurent import LaurentPoly
from superpot.scalars import QQ, UniPoly


def P(text, names, field=QQ):
    """Polynomial dict from an expression."""
    return LaurentPoly.parse(text, names, field).terms


def upoly(coeffs, field=QQ):
    return UniPoly(field, coeffs)


def to_sympy(p: UniPoly, z):
    return sum(
        (int(c.v) if hasattr(c, "v") else c) * z**i for i, c in enumerate(p.coeffs)
    )
