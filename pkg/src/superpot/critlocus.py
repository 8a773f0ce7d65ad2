"""Critical loci of Laurent superpotentials on the torus.

The Jacobian ideal is generated by the logarithmic derivatives ``z_i dW/dz_i``
(cleared to polynomials) and saturated at ``z_1 ... z_n``, so its zero set is
exactly the critical locus inside the torus.  Isolation of a point is decided
by saturating at the maximal ideal of the point; local Jacobian rings come
from saturating at an element that vanishes on every other component.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from . import linalg
from . import polys
from .artin import ArtinAlgebra, local_decomposition
from .groebner import (
    GroebnerBasis,
    NotZeroDimensional,
    PolyIdeal,
    buchberger,
    ideal_dimension,
    quotient_basis,
    normal_form,
    saturate,
    saturate_ideal,
)
from .laurent import LaurentPoly
from .scalars import UniPoly, squarefree_part

ISOLATED = "Isolated"
NON_ISOLATED = "NonIsolated"
UNKNOWN = "UnknownAtBound"

EXHAUSTIVE_LIMIT = 10**7


class SearchSpaceTooLarge(ValueError):
    pass


class NotCritical(ValueError):
    pass


class NotIsolated(ValueError):
    pass


@dataclass
class JacobianData:
    W: LaurentPoly
    generators: list
    gb: GroebnerBasis
    krull_dim: int

    @property
    def field(self):
        return self.W.field

    @property
    def n_vars(self):
        return self.W.n_vars

    def is_unit(self):
        return self.gb.is_unit()

    def quotient_dim(self):
        return len(quotient_basis(self.gb)) if self.krull_dim == 0 else None


@dataclass
class LocalAlgebra:
    gb: GroebnerBasis
    algebra: ArtinAlgebra
    basis: list
    mult_matrices: list
    max_ideal_nilpotency: int
    residue_degree: int = 1

    @property
    def dim(self):
        return self.algebra.dim

    @property
    def milnor(self):
        return self.dim // self.residue_degree


@dataclass
class CriticalPoint:
    coords: tuple | None
    residue_degree: int
    critical_value: object
    isolated: str
    milnor: int | None = None
    nondegenerate: bool | None = None
    maximal_ideal: GroebnerBasis | None = None
    coordinate_polys: list | None = None
    local: LocalAlgebra | None = dc_field(default=None, repr=False)

    def key(self):
        if self.coords is not None:
            return (0, tuple(_ckey(c) for c in self.coords))
        return (1, tuple(tuple(sorted((e, _ckey(c)) for e, c in g.items())) for g in self.maximal_ideal.basis))

    def to_json(self, W: LaurentPoly):
        field = W.field
        out = {}
        if self.coords is not None:
            out["coords"] = [field.format(c) for c in self.coords]
        else:
            out["min_ideal"] = [polys.fmt(g, W.names, field) for g in self.maximal_ideal.basis]
            out["coordinate_minpolys"] = [p.format(n) for p, n in zip(self.coordinate_polys, W.names)]
        out["residue_degree"] = self.residue_degree
        out["isolated"] = self.isolated
        out["milnor"] = self.milnor
        cv = self.critical_value
        if isinstance(cv, UniPoly):
            out["critical_value"] = {"minpoly": cv.format("t")}
        else:
            out["critical_value"] = field.format(cv)
        out["nondegenerate"] = self.nondegenerate
        return out


def _ckey(c):
    return c.v if hasattr(c, "v") else c


# ---------------------------------------------------------------------------
# Jacobian ideal


def jacobian(W: LaurentPoly) -> JacobianData:
    n = W.n_vars
    field = W.field
    gens = []
    for i in range(n):
        d = W.log_derivative(i)
        if d.is_zero():
            continue
        num, _ = d.clear_denominators()
        lo = polys.min_exponents(num, n)
        gens.append(polys.shift(num, tuple(-x for x in lo)))
    ideal = PolyIdeal(field, n, gens)
    if n == 0:
        gb = buchberger(gens, field=field, n_vars=0)
        return JacobianData(W, gens, gb, ideal_dimension(gb))
    prod = {(1,) * n: field.one}
    gb = saturate(ideal, prod)
    return JacobianData(W, gens, gb, ideal_dimension(gb))


def _point(W, point):
    return tuple(W.field(x) for x in point)


def _max_ideal(field, point):
    n = len(point)
    gens = []
    for i, p in enumerate(point):
        g = polys.var(field, i, n)
        g = polys.sub(g, polys.const(field, p, n))
        gens.append(g)
    return PolyIdeal(field, n, gens)


def is_critical(W: LaurentPoly, point) -> bool:
    return W.is_critical(_point(W, point))


# ---------------------------------------------------------------------------
# isolation and local rings at rational points


def _isolating_ideal(jac: JacobianData, point):
    """``I : m^oo`` for the maximal ideal ``m`` of the point."""
    return saturate_ideal(jac.gb, _max_ideal(jac.field, point))


def is_isolated(W: LaurentPoly, point, jac: JacobianData | None = None) -> str:
    point = _point(W, point)
    if not W.is_critical(point):
        raise NotCritical(f"{point} is not a critical point")
    jac = jac or jacobian(W)
    sat = _isolating_ideal(jac, point)
    for g in sat.basis:
        if polys.evaluate(g, point, W.field):
            return ISOLATED
    return NON_ISOLATED


def _localizer(W, jac, point):
    sat = _isolating_ideal(jac, point)
    field = W.field
    best = None
    for g in sat.basis:
        v = polys.evaluate(g, point, field)
        if v and (best is None or len(g) < len(best[0])):
            best = (g, v)
    if best is None:
        raise NotIsolated(f"{point} is not an isolated critical point")
    g, v = best
    return polys.scale(g, field.one / v)


def local_jacobian(W: LaurentPoly, point, jac: JacobianData | None = None, s=None) -> LocalAlgebra:
    """Local Jacobian ring at a rational isolated critical point."""
    point = _point(W, point)
    if not W.is_critical(point):
        raise NotCritical(f"{point} is not a critical point")
    jac = jac or jacobian(W)
    if s is None:
        s = _localizer(W, jac, point)
    elif not polys.evaluate(s, point, W.field):
        raise ValueError("the localising element must not vanish at the point")
    gb = saturate(jac.gb, s)
    return _local_from_gb(W, gb, point)


def _local_from_gb(W, gb, point=None, residue_degree=1, max_ideal=None):
    alg = ArtinAlgebra.from_quotient(gb, list(W.names))
    n = W.n_vars
    field = W.field
    var_elems = [alg.coords(polys.var(field, i, n)) for i in range(n)]
    mats = [alg.mult_matrix(v) for v in var_elems]
    if max_ideal is None:
        max_ideal = _max_ideal(field, point).generators
    m_elems = [alg.coords(g) for g in max_ideal]
    nilp = _nilpotency(alg, m_elems)
    return LocalAlgebra(gb, alg, alg.monomials, mats, nilp, residue_degree)


def _nilpotency(alg, gens):
    """Smallest N with (ideal generated by gens)^N = 0."""
    ideal = alg.ideal_span([g for g in gens if any(g)])
    power = ideal
    n = 1
    while power:
        power = alg.product_span(ideal, power)
        n += 1
    return n


def is_local(local: LocalAlgebra, point) -> bool:
    """Every standard monomial minus its value at the point is nilpotent."""
    alg = local.algebra
    d = alg.dim
    field = alg.field
    for m in local.basis:
        v = polys.evaluate({m: field.one}, point, field)
        x = alg.coords(polys.sub({m: field.one}, polys.const(field, v, len(point))))
        if any(alg.power(x, d)):
            return False
    return True


def _element_of_laurent(alg, W: LaurentPoly):
    """Image of a Laurent polynomial in a quotient algebra where the z_i are units."""
    num, m = W.clear_denominators()
    field = W.field
    u = alg.coords(num)
    mono = alg.coords({m: field.one})
    inv = linalg.solve(alg.mult_matrix(mono), alg.unit, field)
    if inv is None:
        raise ZeroDivisionError("a coordinate is not invertible in the quotient")
    return alg.mul(inv, u)


def potential_image(W: LaurentPoly, local: LocalAlgebra, point=None):
    """Image of ``W`` in the local algebra, as a coordinate vector."""
    return _element_of_laurent(local.algebra, W)


# ---------------------------------------------------------------------------
# discovery


def _nondegenerate(W, point, milnor=None):
    if W.field.characteristic == 2:
        return None
    if point is None:
        # For an isolated point the Hessian is invertible exactly when the
        # local ring is the residue field.
        return milnor == 1
    return bool(W.hessian_det(point))


def analyse_point(W: LaurentPoly, point, jac: JacobianData | None = None) -> CriticalPoint:
    """Full report for a rational critical point (exact isolation test)."""
    point = _point(W, point)
    jac = jac or jacobian(W)
    status = is_isolated(W, point, jac)
    if status == ISOLATED:
        loc = local_jacobian(W, point, jac)
        return CriticalPoint(
            coords=point,
            residue_degree=1,
            critical_value=W.evaluate(point),
            isolated=ISOLATED,
            milnor=loc.dim,
            nondegenerate=_nondegenerate(W, point),
            local=loc,
        )
    return CriticalPoint(
        coords=point,
        residue_degree=1,
        critical_value=W.evaluate(point),
        isolated=NON_ISOLATED,
        nondegenerate=_nondegenerate(W, point) if W.field.characteristic != 2 else None,
    )


def _fast_terms(W):
    p = W.field.characteristic
    out = []
    for i in range(W.n_vars):
        d = W.log_derivative(i)
        out.append([(e, c.v) for e, c in d.terms.items()])
    return out, p


def exhaustive_points(W: LaurentPoly):
    """All F_p-rational torus points where every log-derivative vanishes."""
    p = W.field.characteristic
    n = W.n_vars
    if p == 0:
        raise ValueError("exhaustive search needs a prime field")
    if (p - 1) ** n > EXHAUSTIVE_LIMIT:
        raise SearchSpaceTooLarge(f"{p - 1}^{n} torus points exceed the search limit")
    derivs, _ = _fast_terms(W)
    found = []
    for pt in itertools.product(range(1, p), repeat=n):
        ok = True
        for terms in derivs:
            s = 0
            for e, c in terms:
                t = c
                for x, k in zip(pt, e):
                    if k:
                        t = t * pow(x, k, p)
                s += t
            if s % p:
                ok = False
                break
        if ok:
            found.append(tuple(W.field(x) for x in pt))
    return found


def eigen_points(W: LaurentPoly, jac: JacobianData | None = None):
    """All closed points of a zero-dimensional critical locus."""
    jac = jac or jacobian(W)
    if jac.is_unit():
        return []
    if jac.krull_dim != 0:
        raise NotZeroDimensional("the critical locus is positive dimensional")
    field = W.field
    n = W.n_vars
    alg = ArtinAlgebra.from_quotient(jac.gb, list(W.names))
    w_img = _element_of_laurent(alg, W)
    out = []
    for fac in local_decomposition(alg):
        e = fac.idempotent
        e_poly = {m: c for m, c in zip(alg.monomials, e) if c}
        factor_gens = list(jac.gb.basis) + [polys.sub(polys.const(field, 1, n), e_poly)]
        coord_polys = []
        rad_gens = []
        for i in range(n):
            zi = alg.mul(alg.coords(polys.var(field, i, n)), e)
            s = squarefree_part(alg.element_minpoly(zi, e))
            coord_polys.append(s)
            rad_gens.append({(0,) * i + (k,) + (0,) * (n - i - 1): c for k, c in enumerate(s.coeffs) if c})
        local_gb = buchberger(factor_gens, field=field, n_vars=n)
        max_gb = buchberger(factor_gens + rad_gens, field=field, n_vars=n)
        r = len(quotient_basis(max_gb))
        wv = alg.mul(w_img, e)
        cv = squarefree_part(alg.element_minpoly(wv, e))
        coords = None
        if r == 1:
            coords = tuple(-s.coeffs[0] for s in coord_polys)
            cv_val = W.evaluate(coords)
        else:
            cv_val = cv if cv.degree > 1 else -cv.coeffs[0]
        loc = _local_from_gb(W, local_gb, coords, r, max_gb.basis)
        milnor = fac.dim // r
        out.append(
            CriticalPoint(
                coords=coords,
                residue_degree=r,
                critical_value=cv_val,
                isolated=ISOLATED,
                milnor=milnor,
                nondegenerate=_nondegenerate(W, coords, milnor) if coords else _nondegenerate(W, None, milnor),
                maximal_ideal=max_gb,
                coordinate_polys=coord_polys,
                local=loc,
            )
        )
    out.sort(key=lambda c: (c.residue_degree, c.key()))
    return out


def find_critical_points(W: LaurentPoly, strategy="eigen", candidates=None, jac=None):
    """Critical points by ``exhaustive`` search, ``eigen`` decomposition or ``candidates``."""
    jac = jac or jacobian(W)
    if strategy == "eigen":
        return eigen_points(W, jac)
    if strategy == "exhaustive":
        pts = exhaustive_points(W)
    elif strategy == "candidates":
        pts = []
        for c in candidates or []:
            c = _point(W, c)
            if any(not x for x in c):
                continue
            if W.is_critical(c) and c not in pts:
                pts.append(c)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    out = [analyse_point(W, p, jac) for p in pts]
    out.sort(key=CriticalPoint.key)
    return out


# ---------------------------------------------------------------------------
# isolated part and bounds


@dataclass
class IsolatedPart:
    points: list
    locals: list
    total_dim: int
    cross_checked: bool | None = None

    @property
    def geometric_points(self):
        return sum(p.residue_degree for p in self.points)


def isolated_part(W: LaurentPoly, points=None, jac=None) -> IsolatedPart:
    """Product of the local Jacobian rings over the isolated points.

    ``total_dim`` is the dimension over the base field, i.e. the sum of
    ``residue_degree * milnor``.  Without explicit points the critical locus
    must be zero dimensional (or empty).
    """
    jac = jac or jacobian(W)
    if points is None:
        if jac.is_unit():
            return IsolatedPart([], [], 0, True)
        points = eigen_points(W, jac)
    iso = [p for p in points if p.isolated == ISOLATED]
    keys = [p.key() for p in iso]
    if len(set(keys)) != len(keys):
        raise ValueError("points must be pairwise distinct")
    locs = [p.local for p in iso]
    total = sum(p.residue_degree * p.milnor for p in iso)
    check = None
    if jac.krull_dim == 0:
        everything = eigen_points(W, jac)
        check = sum(p.residue_degree * p.milnor for p in everything) == jac.quotient_dim()
    return IsolatedPart(iso, locs, total, check)


def bound_checks(part: IsolatedPart, D: int):
    if D < 0:
        raise ValueError("the Betti bound must be non-negative")
    pts = part.geometric_points
    return {
        "D": D,
        "closed_points": len(part.points),
        "geometric_points": pts,
        "total_dim": part.total_dim,
        "points_ok": pts <= D,
        "dim_ok": part.total_dim <= D,
        "ok": pts <= D and part.total_dim <= D,
    }


# ---------------------------------------------------------------------------
# truncation oracle (independent of the saturation route)


def translated_generators(jac: JacobianData, point):
    """Jacobian generators rewritten in ``u = z - point``."""
    W = jac.W
    out = []
    for g in jac.generators:
        lp = LaurentPoly(W.field, W.names, g)
        out.append(lp.taylor(point, polys.total_degree(g) + 1))
    return out


def truncated_dims(jac: JacobianData, point, N: int) -> int:
    """``dim S / (I + m^N)`` from a Gröbner basis of ``I + (u)^N`` in ``u = z - point``."""
    field = jac.field
    n = jac.n_vars
    point = _point(jac.W, point)
    gens = translated_generators(jac, point)
    for combo in itertools.combinations_with_replacement(range(n), N):
        e = [0] * n
        for i in combo:
            e[i] += 1
        gens.append({tuple(e): field.one})
    gb = buchberger(gens, field=field, n_vars=n, degree_cap=max(200, 2 * N + 10))
    return len(quotient_basis(gb))


def _top_pair(jac: JacobianData, point, N: int):
    """``(d_N, d_(N+1) - d_N)`` from one Gröbner basis of ``I + (u)^(N+1)``.

    The images of the degree-``N`` monomials in ``S/(I + m^(N+1))`` span
    ``(I + m^N)/(I + m^(N+1))``; its dimension is the step.
    """
    field = jac.field
    n = jac.n_vars
    point = _point(jac.W, point)
    gens = translated_generators(jac, point)
    for combo in itertools.combinations_with_replacement(range(n), N + 1):
        e = [0] * n
        for i in combo:
            e[i] += 1
        gens.append({tuple(e): field.one})
    gb = buchberger(gens, field=field, n_vars=n, degree_cap=max(200, 2 * N + 12))
    qb = quotient_basis(gb)
    index = {m: i for i, m in enumerate(qb)}
    vecs = []
    for combo in itertools.combinations_with_replacement(range(n), N):
        e = [0] * n
        for i in combo:
            e[i] += 1
        nf = normal_form({tuple(e): field.one}, gb)
        vecs.append({index[m]: c for m, c in nf.items()})
    step = linalg.sparse_rank(vecs, field)
    return len(qb) - step, step


def truncated_dims_linear(jac: JacobianData, point, N: int) -> int:
    """``dim S / (I + m^N)`` by linear algebra in ``k[u]/(u)^N`` (slow, for cross-checks)."""
    field = jac.field
    n = jac.n_vars
    point = _point(jac.W, point)
    monos = _monomials_below(n, N)
    index = {m: i for i, m in enumerate(monos)}
    gens = translated_generators(jac, point)
    ech = linalg.Echelon(field)
    for g in gens:
        for a in monos:
            v = {}
            for e, c in g.items():
                m = tuple(x + y for x, y in zip(e, a))
                if sum(m) < N:
                    v[index[m]] = c
            if v:
                ech.add(v)
    return len(monos) - len(ech)


def _monomials_below(n, N):
    out = []
    for d in range(N):
        for combo in itertools.combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def truncation_oracle(jac: JacobianData, point, max_n=64, sweep=12):
    """``(status, value, N)`` from the sequence ``d_N = dim S / (I + m^N)``.

    ``d_N`` is non-decreasing and constant from the first ``N`` with
    ``d_N = d_(N+1)`` on.  Small ``N`` are swept directly; if nothing
    stabilises there, ``d_max_n`` is compared with ``d_(max_n + 1)``, which
    decides stabilisation by ``max_n``.  The stable value is the Milnor number.
    """
    prev = truncated_dims(jac, point, 1)
    for N in range(1, min(sweep, max_n) + 1):
        nxt = truncated_dims(jac, point, N + 1)
        if nxt == prev:
            return ISOLATED, prev, N
        prev = nxt
    top, step = _top_pair(jac, point, max_n)
    if step:
        return UNKNOWN, top, None
    lo, hi = sweep + 1, max_n
    while lo < hi:
        mid = (lo + hi) // 2
        if truncated_dims(jac, point, mid) == top:
            hi = mid
        else:
            lo = mid + 1
    return ISOLATED, top, lo


# ---------------------------------------------------------------------------
# base change to the residue field


def rational_model(W: LaurentPoly, cp: CriticalPoint):
    """``(K, W_K, point_K)`` with ``K`` the residue field of ``cp``.

    For a rational point this is the base field itself.  For a closed point of
    higher degree, ``K = k[t]/(q)`` for a primitive element of the residue
    field and the point becomes ``K``-rational.
    """
    if cp.coords is not None:
        return W.field, W, cp.coords
    from .scalars import ExtensionField

    field = W.field
    n = W.n_vars
    res = ArtinAlgebra.from_quotient(cp.maximal_ideal, list(W.names))
    r = res.dim
    zs = [res.coords(polys.var(field, i, n)) for i in range(n)]
    candidates = list(zs)
    for c in range(1, 6):
        for i in range(n):
            for j in range(i + 1, n):
                candidates.append(res.add(zs[i], res.scale(field(c), zs[j])))
    # prefer a primitive element whose minimal polynomial is integral with
    # small coefficients: arithmetic in the residue field stays cheap
    theta, q, best = None, None, None
    for x in candidates:
        m = res.element_minpoly(x)
        if m.degree != r:
            continue
        score = _height(m)
        if best is None or score < best:
            theta, q, best = x, m, score
    if theta is None:
        raise ValueError("no primitive element found for the residue field")
    K = ExtensionField(field, q)
    powers = [res.unit]
    for _ in range(r - 1):
        powers.append(res.mul(powers[-1], theta))
    cols = linalg.transpose(powers)
    coords = []
    for z in zs:
        sol = linalg.solve(cols, z, field)
        coords.append(K.from_poly(UniPoly(field, sol)))
    WK = W.map_coefficients(K)
    if not WK.is_critical(coords):
        raise AssertionError("base-changed point is not critical")
    return K, WK, tuple(coords)


def _height(q: UniPoly):
    if q.field.characteristic:
        return (0, 0)
    from fractions import Fraction

    cs = [Fraction(c) for c in q.coeffs]
    integral = all(c.denominator == 1 for c in cs)
    return (0 if integral else 1, max(abs(c.numerator) * c.denominator for c in cs))


def rational_models(W: LaurentPoly, points):
    return [rational_model(W, p) for p in points]
