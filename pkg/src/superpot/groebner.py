"""Gröbner bases over a field and the ideal operations built on them.

Polynomials are dicts ``{exponent tuple: coefficient}`` with non-negative
exponents (see :mod:`superpot.polys`).  Colons, saturations and
intersections use one extra variable placed first and eliminated with a
block order.
"""

from __future__ import annotations

import heapq
from itertools import combinations

from . import polys


class DegreeExplosion(RuntimeError):
    pass


class NotZeroDimensional(ValueError):
    pass


DEFAULT_DEGREE_CAP = 200


class MonomialOrder:
    """``grevlex``, ``lex`` or ``block(k)`` (grevlex on the first k variables, then grevlex)."""

    def __init__(self, kind="grevlex", block=0):
        if kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.block = block if kind == "block" else 0

    def key(self, e):
        if self.kind == "lex":
            return e
        if self.kind == "grevlex":
            return (sum(e),) + tuple(-x for x in reversed(e))
        k = self.block
        a, b = e[:k], e[k:]
        return (sum(a),) + tuple(-x for x in reversed(a)) + (sum(b),) + tuple(
            -x for x in reversed(b)
        )

    def __eq__(self, o):
        return isinstance(o, MonomialOrder) and (o.kind, o.block) == (self.kind, self.block)

    def __hash__(self):
        return hash((self.kind, self.block))

    def __repr__(self):
        return f"block({self.block})" if self.kind == "block" else self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a, b):
    return all(not (x and y) for x, y in zip(a, b))


class PolyIdeal:
    def __init__(self, field, n_vars, generators):
        self.field = field
        self.n_vars = n_vars
        self.generators = [dict(g) for g in generators if g]

    def __repr__(self):
        return f"PolyIdeal({self.n_vars} vars, {len(self.generators)} generators)"


class GroebnerBasis:
    """Reduced, monic Gröbner basis sorted by increasing leading monomial."""

    def __init__(self, field, n_vars, order, basis):
        self.field = field
        self.n_vars = n_vars
        self.order = order
        self.basis = basis
        self.leads = [max(g, key=order.key) for g in basis]

    def is_unit(self):
        return len(self.basis) == 1 and polys.is_const(self.basis[0])

    def normal_form(self, f):
        return normal_form(f, self)

    def contains(self, f):
        return not normal_form(f, self)

    def ideal(self):
        return PolyIdeal(self.field, self.n_vars, self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and self.order == other.order
            and self.basis == other.basis
        )

    def __repr__(self):
        names = [f"x{i + 1}" for i in range(self.n_vars)]
        return "GB[" + ", ".join(polys.fmt(g, names, self.field) for g in self.basis) + "]"


def _reduce(f, basis, leads, key, full=True):
    """Remainder of ``f`` modulo a list of monic polynomials with the given leads."""
    f = dict(f)
    heap = [tuple(-x for x in key(e)) + (e,) for e in f]
    heapq.heapify(heap)
    queued = set(f)
    rem = {}
    while heap:
        e = heapq.heappop(heap)[-1]
        queued.discard(e)
        c = f.pop(e, None)
        if not c:
            continue
        for g, lg in zip(basis, leads):
            if _divides(lg, e):
                m = tuple(x - y for x, y in zip(e, lg))
                for e2, c2 in g.items():
                    if e2 == lg:
                        continue
                    t = tuple(x + y for x, y in zip(m, e2))
                    v = f.get(t)
                    v = -c * c2 if v is None else v - c * c2
                    if v:
                        f[t] = v
                        if t not in queued:
                            queued.add(t)
                            heapq.heappush(heap, tuple(-x for x in key(t)) + (t,))
                    else:
                        f.pop(t, None)
                break
        else:
            rem[e] = c
            if not full:
                rem.update(f)
                return rem
    return rem


def _monic(f, key, field):
    lead = max(f, key=key)
    c = f[lead]
    if c == 1:
        return f, lead
    inv = field.one / c
    return {e: v * inv for e, v in f.items()}, lead


def normal_form(f, gb: GroebnerBasis):
    return _reduce(f, gb.basis, gb.leads, gb.order.key)


def _spoly(f, lf, g, lg):
    m = _lcm(lf, lg)
    a = tuple(x - y for x, y in zip(m, lf))
    b = tuple(x - y for x, y in zip(m, lg))
    return polys.sub(polys.shift(f, a), polys.shift(g, b))


_CACHE: dict = {}


def buchberger(ideal, order=GREVLEX, degree_cap=None, field=None, n_vars=None):
    """Reduced Gröbner basis of ``ideal`` (a :class:`PolyIdeal` or list of dicts).

    ``degree_cap`` defaults to the module-level ``DEFAULT_DEGREE_CAP``.
    """
    if degree_cap is None:
        degree_cap = DEFAULT_DEGREE_CAP
    if isinstance(ideal, PolyIdeal):
        field, n_vars, gens = ideal.field, ideal.n_vars, ideal.generators
    else:
        gens = [g for g in ideal if g]
        if field is None or n_vars is None:
            raise ValueError("field and n_vars are needed for a bare generator list")
    cache_key = (field, n_vars, order, degree_cap, frozenset(frozenset(g.items()) for g in gens))
    hit = _CACHE.get(cache_key)
    if hit is not None:
        return hit
    gb = _buchberger(field, n_vars, order, gens, degree_cap)
    if len(_CACHE) > 4096:
        _CACHE.clear()
    _CACHE[cache_key] = gb
    return gb


def _buchberger(field, n, order, gens, cap):
    key = order.key
    basis, leads = [], []
    one = polys.const(field, 1, n)

    def unit():
        return GroebnerBasis(field, n, order, [one])

    def add(h):
        h, lh = _monic(h, key, field)
        if sum(lh) > cap:
            raise DegreeExplosion(f"leading monomial degree {sum(lh)} exceeds cap {cap}")
        basis.append(h)
        leads.append(lh)

    for g in sorted(gens, key=lambda g: key(max(g, key=key))):
        if polys.total_degree(g) > cap:
            raise DegreeExplosion(f"generator degree exceeds cap {cap}")
        h = _reduce(g, basis, leads, key)
        if h:
            if polys.is_const(h):
                return unit()
            add(h)
    pairs = set(combinations(range(len(basis)), 2))
    while pairs:
        i, j = min(pairs, key=lambda p: (key(_lcm(leads[p[0]], leads[p[1]])), p))
        pairs.discard((i, j))
        li, lj = leads[i], leads[j]
        if _coprime(li, lj):
            continue
        m = _lcm(li, lj)
        if sum(m) > cap:
            raise DegreeExplosion(f"S-pair degree {sum(m)} exceeds cap {cap}")
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or not _divides(leads[k], m):
                continue
            if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                skip = True
                break
        if skip:
            continue
        h = _reduce(_spoly(basis[i], li, basis[j], lj), basis, leads, key)
        if not h:
            continue
        if polys.is_const(h):
            return unit()
        add(h)
        new = len(basis) - 1
        pairs.update((k, new) for k in range(new))
    return GroebnerBasis(field, n, order, _interreduce(basis, leads, key, field))


def _interreduce(basis, leads, key, field):
    keep = []
    for i, (g, lg) in enumerate(zip(basis, leads)):
        dominated = False
        for j, lh in enumerate(leads):
            if j != i and _divides(lh, lg) and (lh != lg or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    bs = [basis[i] for i in keep]
    ls = [leads[i] for i in keep]
    out = []
    for idx in range(len(bs)):
        others = bs[:idx] + bs[idx + 1 :]
        olead = ls[:idx] + ls[idx + 1 :]
        tail = dict(bs[idx])
        c = tail.pop(ls[idx])
        r = _reduce(tail, others, olead, key)
        r[ls[idx]] = c
        out.append(_monic(r, key, field)[0])
    out.sort(key=lambda g: key(max(g, key=key)))
    return out


def s_polynomials_reduce_to_zero(gb: GroebnerBasis) -> bool:
    """Independent audit: every S-polynomial of ``gb`` has normal form zero."""
    for i, j in combinations(range(len(gb.basis)), 2):
        s = _spoly(gb.basis[i], gb.leads[i], gb.basis[j], gb.leads[j])
        if normal_form(s, gb):
            return False
    return True


def is_reduced(gb: GroebnerBasis) -> bool:
    for i, g in enumerate(gb.basis):
        if gb.basis[i][gb.leads[i]] != 1:
            return False
        for e in g:
            for j, lh in enumerate(gb.leads):
                if j != i and _divides(lh, e):
                    return False
    return True


# ---------------------------------------------------------------------------
# dimension and standard monomials


def ideal_dimension(gb: GroebnerBasis) -> int:
    """Krull dimension of the quotient ring, ``-1`` for the unit ideal."""
    if gb.is_unit():
        return -1
    n = gb.n_vars
    supports = [frozenset(i for i, x in enumerate(lm) if x) for lm in gb.leads]
    for size in range(n, -1, -1):
        for s in combinations(range(n), size):
            ss = set(s)
            if all(not sup <= ss for sup in supports):
                return size
    return 0


def quotient_basis(gb: GroebnerBasis):
    """Standard monomials, in increasing order, of a zero-dimensional ideal."""
    if gb.is_unit():
        return []
    if ideal_dimension(gb) != 0:
        raise NotZeroDimensional("the quotient ring is infinite dimensional")
    n = gb.n_vars
    start = (0,) * n
    seen = {start}
    todo = [start]
    while todo:
        e = todo.pop()
        for i in range(n):
            f = list(e)
            f[i] += 1
            f = tuple(f)
            if f in seen or any(_divides(lm, f) for lm in gb.leads):
                continue
            seen.add(f)
            todo.append(f)
    return sorted(seen, key=gb.order.key)


def quotient_dimension(gb: GroebnerBasis) -> int:
    return len(quotient_basis(gb))


# ---------------------------------------------------------------------------
# elimination based operations


def _lift(g, k=1):
    return {(0,) * k + e: c for e, c in g.items()}


def _eliminate_first(gb, n, field, order, cap):
    kept = [{e[1:]: c for e, c in g.items()} for g in gb.basis if all(e[0] == 0 for e in g)]
    return buchberger(kept, order, cap, field, n)


def _as_gens(I):
    if isinstance(I, GroebnerBasis):
        return I.field, I.n_vars, I.basis
    if isinstance(I, PolyIdeal):
        return I.field, I.n_vars, I.generators
    raise TypeError("expected a PolyIdeal or GroebnerBasis")


def groebner(I, order=GREVLEX, degree_cap=None):
    if isinstance(I, GroebnerBasis) and I.order == order:
        return I
    field, n, gens = _as_gens(I)
    return buchberger(gens, order, degree_cap, field, n)


def saturate(I, f, order=GREVLEX, degree_cap=None) -> GroebnerBasis:
    """``I : f^oo`` from ``<I, 1 - t f>`` with ``t`` eliminated."""
    field, n, gens = _as_gens(I)
    if not f:
        raise ValueError("cannot saturate at the zero polynomial")
    if polys.is_const(f):
        return groebner(I, order, degree_cap)
    big = [_lift(g) for g in gens]
    tf = polys.shift(_lift(f), (1,) + (0,) * n)
    big.append(polys.sub(polys.const(field, 1, n + 1), tf))
    gb = buchberger(big, MonomialOrder("block", 1), degree_cap, field, n + 1)
    return _eliminate_first(gb, n, field, order, degree_cap)


def intersect(I, J, order=GREVLEX, degree_cap=None) -> GroebnerBasis:
    """``I ∩ J`` from ``<t I, (1 - t) J>`` with ``t`` eliminated."""
    field, n, gi = _as_gens(I)
    _, _, gj = _as_gens(J)
    t = (1,) + (0,) * n
    big = [polys.shift(_lift(g), t) for g in gi]
    for g in gj:
        lg = _lift(g)
        big.append(polys.sub(lg, polys.shift(lg, t)))
    gb = buchberger(big, MonomialOrder("block", 1), degree_cap, field, n + 1)
    return _eliminate_first(gb, n, field, order, degree_cap)


def colon(I, f, order=GREVLEX, degree_cap=None) -> GroebnerBasis:
    """``I : f``, via ``(I ∩ <f>) / f``."""
    field, n, _ = _as_gens(I)
    if not f:
        raise ValueError("colon by the zero polynomial")
    if polys.is_const(f):
        return groebner(I, order, degree_cap)
    inter = intersect(I, PolyIdeal(field, n, [f]), order, degree_cap)
    quo = [polys.divide_exact(g, f) for g in inter.basis]
    return buchberger(quo, order, degree_cap, field, n)


def colon_ideal(I, J, order=GREVLEX, degree_cap=None) -> GroebnerBasis:
    """``I : J`` as the intersection of ``I : g`` over generators ``g`` of ``J``."""
    field, n, gj = _as_gens(J)
    result = None
    for g in gj:
        c = colon(I, g, order, degree_cap)
        result = c if result is None else intersect(result, c, order, degree_cap)
    if result is None:
        return buchberger([polys.const(field, 1, n)], order, degree_cap, field, n)
    return result


def saturate_ideal(I, J, order=GREVLEX, degree_cap=None) -> GroebnerBasis:
    """``I : J^oo`` as the intersection of ``I : g^oo`` over generators ``g`` of ``J``."""
    field, n, gj = _as_gens(J)
    result = None
    for g in gj:
        s = saturate(I, g, order, degree_cap)
        result = s if result is None else intersect(result, s, order, degree_cap)
    if result is None:
        return buchberger([polys.const(field, 1, n)], order, degree_cap, field, n)
    return result


def ideal_sum(I, J, order=GREVLEX, degree_cap=None) -> GroebnerBasis:
    field, n, gi = _as_gens(I)
    _, _, gj = _as_gens(J)
    return buchberger(list(gi) + list(gj), order, degree_cap, field, n)


def ideal_product(I, J, order=GREVLEX, degree_cap=None) -> GroebnerBasis:
    field, n, gi = _as_gens(I)
    _, _, gj = _as_gens(J)
    return buchberger([polys.mul(a, b) for a in gi for b in gj], order, degree_cap, field, n)


def ideal_power(I, k, order=GREVLEX, degree_cap=None) -> GroebnerBasis:
    field, n, gi = _as_gens(I)
    result = buchberger([polys.const(field, 1, n)], order, degree_cap, field, n)
    for _ in range(k):
        result = ideal_product(result, I, order, degree_cap)
    return result


def ideal_contains(I, J) -> bool:
    """Whether every generator of ``J`` lies in ``I``."""
    gb = groebner(I)
    _, _, gj = _as_gens(J)
    return all(gb.contains(g) for g in gj)


def ideals_equal(I, J) -> bool:
    return ideal_contains(I, J) and ideal_contains(J, I)
