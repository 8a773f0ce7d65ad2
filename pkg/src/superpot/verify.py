"""Reproduction checks, one function per acceptance criterion.

Each check returns a :class:`Check` with the individual expectations that
failed; the CLI and the test suite both run these.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from . import linalg
from .artin import (
    ArtinAlgebra,
    change_basis,
    fingerprint,
    local_decomposition,
    pairing_orthogonal,
    truncated_polynomial_algebra,
)
from .critlocus import (
    ISOLATED,
    NON_ISOLATED,
    analyse_point,
    eigen_points,
    exhaustive_points,
    is_isolated,
    jacobian,
    rational_model,
    truncation_oracle,
)
from .groebner import is_reduced, s_polynomials_reduce_to_zero
from .koszul import is_regular_sequence, localized_cohomology_at
from .mfcheck import (
    check_factorization,
    end_cohomology,
    entries_in_max_ideal,
    koszul_mf,
    koszul_tensor_parity,
    m_nullhomotopic,
)
from .mutate import BETTI, builtin, chart_points, clifford, load_catalog, verify_catalog
from .scalars import GF, QQ, UniPoly, factor_univariate, field_for_char, seed

CHARS = (0, 2, 3, 5, 7)
CATALOG = (
    "clifford1",
    "clifford2",
    "clifford3",
    "quadric",
    "bl4",
    "cubic",
    "bl4_uv",
    "bl4_st",
    "bl4_upvp",
    "bl4_sptp",
)
# rational points on the line 1 + x + y = 0 and the isolated point of the cubic
CUBIC_CANDIDATES = [(1, 1), (-2, 1), (1, -2), (Fraction(-1, 2), Fraction(-1, 2))]


@dataclass
class Check:
    number: int
    name: str
    budget: float
    failures: list = dc_field(default_factory=list)
    notes: list = dc_field(default_factory=list)
    seconds: float = 0.0

    def expect(self, cond, message):
        if not cond:
            self.failures.append(message)
        return bool(cond)

    @property
    def ok(self):
        return not self.failures

    def line(self):
        state = "PASS" if self.ok else "FAIL"
        out = f"{state} criterion {self.number} ({self.name}) {self.seconds:.2f}s / {self.budget:g}s"
        if self.failures:
            out += ": " + "; ".join(self.failures[:5])
            if len(self.failures) > 5:
                out += f" (+{len(self.failures) - 5} more)"
        return out

    def to_json(self):
        return {
            "criterion": self.number,
            "name": self.name,
            "ok": self.ok,
            "seconds": round(self.seconds, 3),
            "budget": self.budget,
            "failures": self.failures,
            "notes": self.notes,
        }


def _timed(number, name, budget):
    def wrap(fn):
        def run(**kw):
            c = Check(number, name, budget)
            start = time.perf_counter()
            try:
                fn(c, **kw)
            except Exception as exc:  # a crash is a failed criterion, not a crashed suite
                c.failures.append(f"{type(exc).__name__}: {exc}")
            c.seconds = time.perf_counter() - start
            c.expect(c.seconds < budget, f"took {c.seconds:.1f}s, budget {budget:g}s")
            return c

        run.__name__ = fn.__name__
        run.number = number
        run.label = name
        return run

    return wrap


# ---------------------------------------------------------------------------
# the catalog of potentials and their critical points


@dataclass
class CatalogEntry:
    name: str
    char: int
    W: object
    jac: object
    points: list


def _points_for(W, jac, name, char):
    if jac.is_unit():
        return []
    if jac.krull_dim == 0:
        return eigen_points(W, jac)
    if char:
        cands = exhaustive_points(W)
    elif name == "cubic":
        cands = [tuple(W.field(x) for x in p) for p in CUBIC_CANDIDATES]
    else:
        cands = []
    return [analyse_point(W, p, jac) for p in cands if W.is_critical(p)]


@lru_cache(maxsize=None)
def catalog_entry(name, char) -> CatalogEntry:
    field = field_for_char(char)
    W = builtin(name, field)
    jac = jacobian(W)
    return CatalogEntry(name, char, W, jac, _points_for(W, jac, name, char))


def catalog_entries(names=CATALOG, chars=CHARS):
    return [catalog_entry(n, p) for n in names for p in chars]


def _label(e, cp):
    where = cp.coords if cp.coords is not None else f"deg{cp.residue_degree}"
    return f"{e.name}/char{e.char}@{where}"


# ---------------------------------------------------------------------------
# criteria


@_timed(1, "clifford", 1.0)
def criterion_1(c: Check):
    for n in (1, 2, 3):
        W = clifford(n, QQ)
        jac = jacobian(W)
        c.expect(jac.krull_dim == 0, f"n={n}: Jacobian not zero-dimensional")
        c.expect(jac.quotient_dim() == n + 1, f"n={n}: quotient dim {jac.quotient_dim()}")
        for cp in eigen_points(W, jac):
            c.expect(cp.isolated == ISOLATED, f"n={n}: point not isolated")
            if cp.coords is not None:
                c.expect(is_isolated(W, cp.coords, jac) == ISOLATED, f"n={n}: saturation disagrees")
    W = clifford(2, GF(3))
    jac = jacobian(W)
    facs = local_decomposition(ArtinAlgebra.from_quotient(jac.gb, list(W.names)))
    c.expect(len(facs) == 1, f"F3: {len(facs)} local factors")
    if facs:
        c.expect(facs[0].dim == 3, f"F3: factor dim {facs[0].dim}")
        c.expect(facs[0].filtration == [1, 1, 1], f"F3: filtration {facs[0].filtration}")


@_timed(2, "quadric", 2.0)
def criterion_2(c: Check):
    W = builtin("quadric", QQ)
    jac = jacobian(W)
    c.expect(jac.quotient_dim() == 3, f"char 0: Jac dim {jac.quotient_dim()}")
    pts = eigen_points(W, jac)
    c.expect(len(pts) == 1 and pts[0].residue_degree == 3, "char 0: expected one closed point of degree 3")
    if pts:
        y = UniPoly(QQ, [-4, 0, 0, 1])
        want = fingerprint(truncated_polynomial_algebra(QQ, y))
        c.expect(fingerprint(pts[0].local.algebra) == want, "char 0: fingerprint differs from k[y]/(y^3-4)")
        c.expect(pts[0].coordinate_polys[1] == y, "char 0: y-coordinate minimal polynomial is not y^3-4")
    F3 = GF(3)
    W = builtin("quadric", F3)
    jac = jacobian(W)
    pts = eigen_points(W, jac)
    c.expect(len(pts) == 1 and pts[0].coords is not None, "char 3: expected one rational point")
    if pts:
        cp = pts[0]
        c.expect(is_isolated(W, cp.coords, jac) == ISOLATED, "char 3: not isolated")
        c.expect(cp.milnor == 3, f"char 3: milnor {cp.milnor}")
        want = fingerprint(truncated_polynomial_algebra(F3, UniPoly(F3, [-1, 1]) ** 3))
        c.expect(fingerprint(cp.local.algebra) == want, "char 3: fingerprint differs from k[y]/(y-1)^3")
    W = builtin("quadric", GF(2))
    c.expect(jacobian(W).is_unit(), "char 2: Jacobian ideal is not the unit ideal")


@_timed(3, "bl4", 2.0)
def criterion_3(c: Check):
    W = builtin("bl4", QQ)
    pts = eigen_points(W)
    rational = [p for p in pts if p.coords is not None]
    closed = [p for p in pts if p.coords is None]
    c.expect([p.coords for p in rational] == [(-1, -1)], f"char 0: rational points {[p.coords for p in rational]}")
    if rational:
        c.expect(rational[0].milnor == 1 and rational[0].nondegenerate, "char 0: (-1,-1) not Milnor 1 nondegenerate")
    xi = UniPoly(QQ, [-1, -1, 1])
    c.expect(
        len(closed) == 1 and closed[0].residue_degree == 2 and all(q == xi for q in closed[0].coordinate_polys),
        "char 0: expected a degree-2 point with coordinates roots of xi^2-xi-1",
    )
    F5 = GF(5)
    W = builtin("bl4", F5)
    got = {tuple(x.v for x in p.coords): p for p in eigen_points(W) if p.coords is not None}
    c.expect(set(got) == {(4, 4), (3, 3)}, f"char 5: points {sorted(got)}")
    if (4, 4) in got:
        c.expect(got[(4, 4)].milnor == 1, "char 5: (4,4) Milnor")
    if (3, 3) in got:
        c.expect(got[(3, 3)].milnor == 2, "char 5: (3,3) Milnor")
        c.expect(got[(3, 3)].nondegenerate is False, "char 5: (3,3) should be degenerate")


@_timed(4, "cubic", 2.0)
def criterion_4(c: Check):
    W = builtin("cubic", QQ)
    c.expect(W.is_critical((1, 1)), "(1,1) is not critical")
    jac = jacobian(W)
    c.expect(is_isolated(W, (1, 1), jac) == ISOLATED, "char 0: (1,1) not isolated")
    c.expect(bool(W.hessian_det((1, 1))), "char 0: (1,1) degenerate")
    W3 = builtin("cubic", GF(3))
    jac3 = jacobian(W3)
    c.expect(is_isolated(W3, (1, 1), jac3) == NON_ISOLATED, "char 3: (1,1) should be non-isolated")
    c.expect(jac3.krull_dim == 1, f"char 3: Krull dimension {jac3.krull_dim}")


def cubic_qh(field=None) -> ArtinAlgebra:
    text = resources.files("superpot").joinpath("data/cubic_qh.json").read_text()
    return ArtinAlgebra.from_json(json.loads(text), field)


def cubic_pairing():
    text = resources.files("superpot").joinpath("data/cubic_qh.json").read_text()
    return json.loads(text)["pairing"]


@_timed(5, "cubic-qh", 5.0)
def criterion_5(c: Check):
    A = cubic_qh()
    F = A.field
    V = [F(x) for x in (48, 21, 1, -7, -7, -7, -7, -7, -7)]
    H, E1 = A.basis_vector(1), A.basis_vector(3)
    c.expect(A.mul(H, V) == A.scale(F(21), V), "H*V != 21V")
    c.expect(A.mul(E1, V) == A.scale(F(7), V), "E1*V != 7V")
    facs = local_decomposition(A)
    c.expect(sorted(f.dim for f in facs) == [1, 8], f"factor dims {sorted(f.dim for f in facs)}")
    small = [f for f in facs if f.dim == 1]
    if small:
        c.expect(linalg.rank([small[0].idempotent, V], F) == 1, "dim-1 idempotent not proportional to V")
    c.expect(pairing_orthogonal(A, cubic_pairing(), facs), "factors not orthogonal under the pairing")
    c1 = A.scale(F(3), H)
    for k in range(3, 9):
        c1 = A.add(c1, A.scale(F(-1), A.basis_vector(k)))
    lam = builtin("cubic", QQ).evaluate((1, 1))
    c.expect(lam == 21, f"W(1,1) = {lam}")
    c.expect(A.mul(c1, V) == A.scale(F(lam), V), "c1*V != W(1,1) V")
    A3 = cubic_qh(GF(3))
    f3 = local_decomposition(A3)
    c.expect(len(f3) == 1 and f3[0].dim == 9, "F3: expected a single local factor")


def _oracle_status(e, cp):
    K, WK, pt = rational_model(e.W, cp)
    jac = e.jac if K is e.W.field else jacobian(WK)
    sat = is_isolated(WK, pt, jac)
    status, value, _ = truncation_oracle(jac, pt)
    return sat, status, value


@_timed(6, "isolation-oracle", 30.0)
def criterion_6(c: Check, names=CATALOG, chars=CHARS):
    count = 0
    for e in catalog_entries(names, chars):
        for cp in e.points:
            sat, status, value = _oracle_status(e, cp)
            count += 1
            lab = _label(e, cp)
            c.expect(sat == cp.isolated, f"{lab}: saturation {sat} vs {cp.isolated}")
            c.expect((sat == ISOLATED) == (status == ISOLATED), f"{lab}: saturation {sat}, oracle {status}")
            if sat == ISOLATED:
                c.expect(value == cp.milnor, f"{lab}: stable d_N {value} != Milnor {cp.milnor}")
    c.notes.append(f"{count} points compared")


@_timed(7, "koszul", 10.0)
def criterion_7(c: Check, names=CATALOG, chars=CHARS):
    count = 0
    for e in catalog_entries(names, chars):
        for cp in e.points:
            if cp.isolated != ISOLATED:
                continue
            count += 1
            lab = _label(e, cp)
            res = localized_cohomology_at(e.W, cp)
            want = [cp.milnor] + [0] * e.W.n_vars
            c.expect(res["stabilized"] and res["dims"] == want, f"{lab}: Koszul dims {res['dims']}")
            c.expect(is_regular_sequence(e.W, cp=cp), f"{lab}: not a regular sequence")
    W = builtin("cubic", GF(3))
    c.expect(not is_regular_sequence(W, (1, 1)), "cubic char 3 (1,1): regular sequence")
    c.notes.append(f"{count} isolated points")


def mf_report(W, cp, end=True):
    """Factorisation checks at one isolated point (base-changed if needed)."""
    K, WK, pt = rational_model(W, cp)
    n = W.n_vars
    mf = koszul_mf(WK, pt, N=cp.local.max_ideal_nilpotency + 2, check_isolated=False)
    out = {
        "rank": mf.rank,
        "factorization": check_factorization(mf),
        "in_max_ideal": entries_in_max_ideal(mf),
        "nullhomotopic": all(m_nullhomotopic(mf, mf.ring.variable(i))[0] for i in range(n)),
    }
    dims = None
    if end:
        dims = end_cohomology(WK, pt)
        out["end_even"], out["end_odd"] = dims["even"], dims["odd"]
        out["stabilized_at_N"] = dims["N"]
        out["stabilized"] = dims["stabilized"]
    tp = koszul_tensor_parity(mf, (dims["even"] + dims["odd"]) if dims else None)
    out["tensor_parity"] = [tp["even"], tp["odd"]]
    if dims:
        out["deduced_k"] = tp["deduced_k"]
    return out


def _needs_end(e, cp):
    return bool(cp.nondegenerate) or (e.name == "quadric" and e.char == 3)


@_timed(8, "matrix-factorization", 60.0)
def criterion_8(c: Check, names=CATALOG, chars=CHARS):
    count = 0
    for e in catalog_entries(names, chars):
        n = e.W.n_vars
        if n > 3:
            continue
        for cp in e.points:
            if cp.isolated != ISOLATED:
                continue
            count += 1
            lab = _label(e, cp)
            end = _needs_end(e, cp)
            r = mf_report(e.W, cp, end=end)
            c.expect(r["factorization"], f"{lab}: f0 f1 != (W - λ) Id")
            c.expect(r["in_max_ideal"], f"{lab}: entries outside m")
            c.expect(r["nullhomotopic"], f"{lab}: coordinate not nullhomotopic")
            half = 2 ** (n - 1)
            c.expect(r["tensor_parity"] == [half, half], f"{lab}: tensor parity {r['tensor_parity']}")
            if end:
                total = r["end_even"] + r["end_odd"]
                c.expect(r["stabilized"] and total == 2**n, f"{lab}: End cohomology total {total}")
                c.expect(r["deduced_k"] == half, f"{lab}: deduced k {r['deduced_k']}")
    c.notes.append(f"{count} isolated points")


NEW_POINTS = {"uv": (-1, -1), "upvp": (-1, 1), "st": (-1, -1), "sptp": (1, -1)}


@_timed(9, "mutation", 30.0)
def criterion_9(c: Check, catalog=None):
    cat = catalog or load_catalog(QQ)
    rep = verify_catalog(cat)
    c.expect(rep["ok"], f"{len(rep['failures'])} Figure-1 checks failed: {rep['failures'][:3]}")
    if not rep["ok"]:
        return
    pts = chart_points(cat)
    for chart, want in NEW_POINTS.items():
        new = [p for p in pts[chart] if p.status == "new"]
        got = [p.point.coords for p in new]
        c.expect(got == [tuple(QQ(x) for x in want)], f"chart {chart}: new points {got}")
        for p in new:
            c.expect(p.point.milnor == 1, f"chart {chart}: Milnor {p.point.milnor}")
            c.expect(p.point.isolated == ISOLATED, f"chart {chart}: not isolated")
    c.expect(not any(p.status == "new" for p in pts[cat.base]), "base chart has new points")
    periods = {ch: cat.potential(ch).periods(4) for ch in cat.charts}
    c.expect(len({tuple(v) for v in periods.values()}) == 1, f"periods differ: {periods}")
    base = sum(p.point.residue_degree * p.point.milnor for p in pts[cat.base])
    new = sum(1 for ch in NEW_POINTS for p in pts[ch] if p.status == "new")
    c.expect(base == 3, f"base chart accounts for {base}")
    c.expect(base + new == 7 == BETTI["bl4"], f"accounting {base} + {new}")


def random_crt_algebra(rng, field, max_dim=8):
    """``k[x]/(prod q_i^k_i)`` for distinct irreducible q_i; returns the algebra and factor dims."""
    while True:
        parts = []
        dim = 0
        used = set()
        for _ in range(rng.randint(1, 3)):
            d = rng.randint(1, 2)
            q = _random_irreducible(rng, field, d)
            if q is None or q.coeffs in used:
                continue
            k = rng.randint(1, 3)
            if dim + d * k > max_dim:
                continue
            used.add(q.coeffs)
            parts.append((q, k))
            dim += d * k
        if parts:
            break
    p = UniPoly(field, [1])
    for q, k in parts:
        p = p * q**k
    dims = sorted(q.degree * k for q, k in parts)
    return truncated_polynomial_algebra(field, p), dims


def _random_irreducible(rng, field, d):
    for _ in range(50):
        coeffs = [field(rng.randint(-3, 3)) for _ in range(d)] + [field.one]
        q = UniPoly(field, coeffs)
        facs = factor_univariate(q)
        if len(facs) == 1 and facs[0][1] == 1:
            return q
    return None


def random_invertible(rng, field, n):
    while True:
        m = [[field(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        if linalg.det(m, field):
            return m


@_timed(10, "properties", 60.0)
def criterion_10(c: Check, n_algebras=200, n_basis=100):
    rng = random.Random(seed())
    # (a) brute force against the eigen route
    for p in (5, 7):
        for name in CATALOG:
            e = catalog_entry(name, p)
            if e.jac.is_unit() or e.jac.krull_dim != 0:
                continue
            if (p - 1) ** e.W.n_vars > 10**5:
                continue
            brute = sorted(tuple(x.v for x in pt) for pt in exhaustive_points(e.W))
            eig = sorted(tuple(x.v for x in cp.coords) for cp in e.points if cp.coords is not None)
            c.expect(brute == eig, f"(a) {name}/F{p}: brute {brute} vs eigen {eig}")
    # (b) CRT-built algebras, written in a random basis
    for i in range(n_algebras):
        field = rng.choice([QQ, GF(2), GF(3), GF(5), GF(7)])
        A, dims = random_crt_algebra(rng, field)
        B = change_basis(A, random_invertible(rng, field, A.dim))
        got = sorted(f.dim for f in local_decomposition(B))
        c.expect(got == dims, f"(b) #{i} over {field.spec()}: {got} vs {dims}")
    # (c) fingerprints under basis changes
    samples = [cubic_qh(), cubic_qh(GF(3))]
    for name, p in (("quadric", 3), ("bl4", 5), ("clifford2", 3), ("clifford3", 0)):
        e = catalog_entry(name, p)
        samples.append(ArtinAlgebra.from_quotient(e.jac.gb, list(e.W.names)))
    prints = [fingerprint(A) for A in samples]
    for i in range(n_basis):
        k = i % len(samples)
        A = samples[k]
        B = change_basis(A, random_invertible(rng, A.field, A.dim))
        c.expect(fingerprint(B) == prints[k], f"(c) fingerprint changed under basis change #{i}")
    # (d) Gröbner audit on every catalog Jacobian
    for e in catalog_entries():
        gb = e.jac.gb
        c.expect(s_polynomials_reduce_to_zero(gb), f"(d) {e.name}/char{e.char}: S-polynomial audit")
        c.expect(is_reduced(gb), f"(d) {e.name}/char{e.char}: basis not reduced")


CRITERIA = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
]


def run_all(filter_text=None, options=None):
    """Run the criteria; ``filter_text`` picks criteria by number or name, or
    restricts the catalog-wide criteria to one catalog potential.  ``options``
    maps a criterion number to keyword arguments."""
    kw = options or {}
    out = []
    names = [n for n in CATALOG if filter_text and (n == filter_text or n.startswith(filter_text + "_"))]
    for crit in CRITERIA:
        own = kw.get(crit.number, {})
        if filter_text is None or filter_text in crit.label or filter_text == str(crit.number):
            out.append(crit(**own))
        elif names and crit.number in (6, 7, 8):
            out.append(crit(**{"names": tuple(names), **own}))
    return out
