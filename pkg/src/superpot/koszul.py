"""Koszul complexes of the partial derivatives and regular-sequence tests.

Homological indexing: ``H[0]`` is the end whose homology is the Jacobian
quotient, ``H[k]`` sits on the ``k``-th exterior power.

A finite-dimensional model cannot see concentration in degree zero (its
Euler characteristic is zero), so the localised homology at a point is
computed on the completion as the stable image of
``H(K(S/m^N')) -> H(K(S/m^N))`` over the truncation tower.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import linalg
from . import polys
from .critlocus import (
    CriticalPoint,
    NotCritical,
    jacobian,
    rational_model,
    truncation_oracle,
)
from .groebner import GroebnerBasis, PolyIdeal, buchberger, colon, groebner, normal_form
from .truncation import TruncatedLocalRing


class DimensionMismatch(ValueError):
    pass


class NoStabilization(RuntimeError):
    def __init__(self, n_max, last=None):
        self.n_max = n_max
        self.last = last
        super().__init__(f"no stabilisation up to N = {n_max}")


def _columns(base, element):
    """Columns of multiplication by ``element`` as sparse vectors."""
    if isinstance(base, TruncatedLocalRing):
        return [base.shift_vector(element, m) for m in base.monomials]
    m = base.mult_matrix(element)
    return [linalg.to_sparse(c) for c in linalg.transpose(m)] if m else []


@dataclass
class KoszulComplex:
    base: object
    elements: list
    n: int
    base_dim: int
    subsets: list
    differentials: list

    def ranks(self):
        return [len(s) * self.base_dim for s in self.subsets]


def build(base, elements) -> KoszulComplex:
    """Koszul complex of ``elements`` over a finite model of the base ring."""
    n = len(elements)
    d = base.dim
    mult = []
    for e in elements:
        cols = _columns(base, e)
        if len(cols) != d:
            raise DimensionMismatch("element does not belong to the base")
        mult.append(cols)
    subsets = [list(combinations(range(n), k)) for k in range(n + 1)]
    pos = [{s: i for i, s in enumerate(level)} for level in subsets]
    diffs = [None]
    for k in range(1, n + 1):
        cols = []
        for s in subsets[k]:
            for b in range(d):
                col = {}
                for p, j in enumerate(s):
                    t = s[:p] + s[p + 1 :]
                    off = pos[k - 1][t] * d
                    sign = -1 if p % 2 else 1
                    for idx, c in mult[j][b].items():
                        key = off + idx
                        v = col.get(key, 0) + (c if sign > 0 else -c)
                        if v:
                            col[key] = v
                        else:
                            col.pop(key, None)
                cols.append(col)
        diffs.append(cols)
    K = KoszulComplex(base, list(elements), n, d, subsets, diffs)
    if not d_squared_zero(K):
        raise AssertionError("Koszul differential does not square to zero")
    return K


def _apply(cols, v):
    out = {}
    for j, a in v.items():
        for i, c in cols[j].items():
            x = out.get(i, 0) + a * c
            if x:
                out[i] = x
            else:
                out.pop(i, None)
    return out


def d_squared_zero(K: KoszulComplex, full=None) -> bool:
    """``d^2 = 0``.  Over a truncation the differential is linear over the base
    ring, so the free generators ``e_S * 1`` suffice unless ``full`` is set."""
    if full is None:
        full = not isinstance(K.base, TruncatedLocalRing)
    d = K.base_dim
    for k in range(2, K.n + 1):
        lower = K.differentials[k - 1]
        cols = K.differentials[k]
        picked = cols if full else cols[::d]
        for col in picked:
            if _apply(lower, col):
                return False
    return True


def cohomology_dims(K: KoszulComplex):
    field = _field(K.base)
    ranks = [0] * (K.n + 2)
    for k in range(1, K.n + 1):
        ranks[k] = linalg.sparse_rank(K.differentials[k], field)
    sizes = K.ranks()
    return [sizes[k] - ranks[k] - ranks[k + 1] for k in range(K.n + 1)]


def euler_characteristic(dims):
    return sum((-1) ** k * x for k, x in enumerate(dims))


def _field(base):
    return base.field


# ---------------------------------------------------------------------------
# completed (localised) homology at a rational point


def _project_index(big: TruncatedLocalRing, small: TruncatedLocalRing):
    return {i: small.index[m] for i, m in enumerate(big.monomials) if m in small.index}


def stable_image_dims(big: KoszulComplex, small: KoszulComplex, proj, ranks=None):
    """Dimensions of the image of ``H(big) -> H(small)`` under a basis projection.

    ``proj`` maps base indices of ``big`` onto those of ``small`` and kills the
    rest (``K``).  The projection is a surjective chain map, so the image of
    the boundaries upstairs is the boundaries downstairs and the modular law
    gives ``dim = |C_k| - rk d'_k + rk d'_k|K - rk d_(k+1)``.  ``ranks`` is an
    optional dict reused between calls.
    """
    field = _field(small.base)
    ranks = {} if ranks is None else ranks
    db = big.base_dim

    def rk(K, k, label, cols):
        key = (id(K), k, label)
        if key not in ranks:
            ranks[key] = (K, linalg.sparse_rank(cols(), field))
        return ranks[key][1]

    out = []
    for k in range(small.n + 1):
        size = len(small.subsets[k]) * small.base_dim
        if k == 0:
            r_big = r_high = 0
        else:
            cols = big.differentials[k]
            r_big = rk(big, k, "all", lambda: cols)
            r_high = rk(
                big,
                k,
                ("high", small.base_dim),
                lambda: [c for j, c in enumerate(cols) if j % db not in proj],
            )
        r_small = rk(small, k + 1, "all", lambda: small.differentials[k + 1]) if k < small.n else 0
        out.append(size - r_big + r_high - r_small)
    return out


def stable_image_dims_kernel(big: KoszulComplex, small: KoszulComplex, proj):
    """Same dimensions through explicit cycles; slower, kept as a cross-check."""
    field = _field(small.base)
    out = []
    db, ds = big.base_dim, small.base_dim
    for k in range(small.n + 1):
        if k == 0:
            size = len(small.subsets[0]) * db
            cycles = [{i: field.one} for i in range(size)]
        else:
            cycles, _ = linalg.sparse_kernel(big.differentials[k], field)
        bounds = small.differentials[k + 1] if k + 1 <= small.n else []
        ech = linalg.Echelon(field)
        for b in bounds:
            ech.add(b)
        rb = len(ech)
        for z in cycles:
            pz = {}
            for idx, c in z.items():
                s, b = divmod(idx, db)
                if b in proj:
                    pz[s * ds + proj[b]] = c
            if pz:
                ech.add(pz)
        out.append(len(ech) - rb)
    return out


def _local_generators(W, point, N):
    return [W.log_derivative(i).taylor(point, N) for i in range(W.n_vars)]


def completed_complex(W, point, N):
    ring = TruncatedLocalRing(W.field, W.n_vars, N)
    return build(ring, _local_generators(W, point, N))


def localized_cohomology(W, point, N=None, max_delta=8, n_max=16):
    """Koszul homology of the partials over the completion at a rational point.

    Returns ``{"dims", "N", "N_prime", "stabilized"}``.  ``N`` defaults to the
    first order where ``dim S/(I + m^N)`` is stable; ``N' = N + delta`` grows
    until the stable-image dimensions repeat, and the result is confirmed at
    ``N + 1``.
    """
    point = tuple(W.field(x) for x in point)
    if not W.is_critical(point):
        raise NotCritical(f"{point} is not a critical point")
    if N is None:
        status, _, n0 = truncation_oracle(jacobian(W), point, max_n=n_max)
        N = (n0 + 1) if n0 is not None else n_max
    results = []
    complexes = {}
    ranks = {}

    def at(level):
        if level not in complexes:
            complexes[level] = completed_complex(W, point, level)
        return complexes[level]

    for level in (N, N + 1):
        small = at(level)
        last = None
        found = None
        for delta in range(1, max_delta + 1):
            big = at(level + delta)
            proj = _project_index(big.base, small.base)
            dims = stable_image_dims(big, small, proj, ranks)
            if dims == last:
                found = (dims, level + delta - 1)
                break
            last = dims
        if found is None:
            return {"dims": last, "N": level, "N_prime": level + max_delta, "stabilized": False}
        results.append((level, found))
    (n1, (d1, p1)), (_, (d2, _)) = results
    return {"dims": d1, "N": n1, "N_prime": p1, "stabilized": d1 == d2}


def localized_cohomology_at(W, cp: CriticalPoint, **kw):
    """Same as :func:`localized_cohomology`, base-changing closed points to their residue field."""
    K, WK, pt = rational_model(W, cp)
    return localized_cohomology(WK, pt, **kw)


# ---------------------------------------------------------------------------
# regular sequences


def _max_ideal_gb(W, point=None, cp=None):
    field = W.field
    n = W.n_vars
    if cp is not None and cp.coords is None:
        return cp.maximal_ideal
    point = point if point is not None else cp.coords
    gens = [polys.sub(polys.var(field, i, n), polys.const(field, p, n)) for i, p in enumerate(point)]
    return buchberger(gens, field=field, n_vars=n)


def is_regular_sequence(W, point=None, cp: CriticalPoint | None = None, generators=None) -> bool:
    """Whether the partial derivatives form a regular sequence in the local ring at the point.

    Step ``k`` checks that ``g_k`` is a nonzerodivisor on ``(S/J)_p`` with
    ``J = (g_1..g_(k-1))``: this holds iff the annihilator ``J : (J : g_k)`` of
    ``(J : g_k)/J`` contains an element ``s`` with ``s(p) != 0``.
    """
    field = W.field
    n = W.n_vars
    if point is not None:
        point = tuple(field(x) for x in point)
        if not W.is_critical(point):
            raise NotCritical(f"{point} is not a critical point")
    M = _max_ideal_gb(W, point, cp)
    if generators is None:
        generators = []
        for i in range(n):
            num, _ = W.log_derivative(i).clear_denominators()
            generators.append(num)
    if len(generators) != n:
        return False
    J = None
    for g in generators:
        if not g:
            return False
        if normal_form(g, M):
            return False  # a unit at the point: the ideal is not proper there
        if J is None:
            J = buchberger([g], field=field, n_vars=n)
            continue
        Q = colon(J, g)
        A = _annihilator(J, Q)
        s = next((a for a in A.basis if normal_form(a, M)), None)
        if s is None:
            return False
        for q in Q.basis:
            if normal_form(polys.mul(s, q), J):
                raise AssertionError("colon certificate failed to reduce")
        J = groebner(PolyIdeal(field, n, list(J.basis) + [g]))
    return True


def _annihilator(J: GroebnerBasis, Q: GroebnerBasis) -> GroebnerBasis:
    from .groebner import colon_ideal

    return colon_ideal(J, Q)
