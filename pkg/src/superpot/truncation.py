"""Truncated local rings ``k[u_1..u_n]/(u)^N`` at a rational point.

Elements are dicts ``{exponent tuple: coefficient}`` with total degree < N;
``u_i = z_i - p_i`` are the coordinates translated to the point.
"""

from __future__ import annotations

import itertools
from math import comb

from . import polys


class TruncatedLocalRing:
    def __init__(self, field, n, N):
        if N < 1:
            raise ValueError("truncation order must be positive")
        self.field = field
        self.n = n
        self.N = N
        monos = []
        for d in range(N):
            for combo in itertools.combinations_with_replacement(range(n), d):
                e = [0] * n
                for i in combo:
                    e[i] += 1
                monos.append(tuple(e))
        self.monomials = monos
        self.index = {m: i for i, m in enumerate(monos)}

    @property
    def dim(self):
        return len(self.monomials)

    def expected_dim(self):
        return comb(self.N - 1 + self.n, self.n)

    def truncate(self, a):
        return {e: c for e, c in a.items() if sum(e) < self.N}

    def mul(self, a, b):
        N = self.N
        out = {}
        for e1, c1 in a.items():
            d1 = sum(e1)
            for e2, c2 in b.items():
                if d1 + sum(e2) >= N:
                    continue
                e = tuple(x + y for x, y in zip(e1, e2))
                v = out.get(e)
                v = c1 * c2 if v is None else v + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return out

    def add(self, a, b):
        return polys.add(a, b)

    def variable(self, i):
        return self.truncate(polys.var(self.field, i, self.n))

    def const(self, c):
        return polys.const(self.field, c, self.n)

    def shift_vector(self, a, m):
        """Sparse coordinate vector of ``u^m * a`` (truncated)."""
        out = {}
        N = self.N
        dm = sum(m)
        for e, c in a.items():
            if sum(e) + dm < N:
                out[self.index[tuple(x + y for x, y in zip(e, m))]] = c
        return out

    def is_zero_power(self):
        """``m^N = 0``: no monomial of degree N is in the basis."""
        return all(sum(m) < self.N for m in self.monomials)

    def laurent_image(self, W, point):
        """Taylor image of a Laurent polynomial at ``point``."""
        return W.taylor(point, self.N)
