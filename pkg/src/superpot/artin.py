"""Finite-dimensional commutative algebras given by multiplication tables.

An algebra of dimension ``d`` stores one ``d x d`` matrix per basis element:
``tables[k][i][j]`` is the coefficient of ``basis[i]`` in ``basis[k] * basis[j]``
(so the matrix acts on column vectors).  Elements are coordinate lists.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field as dc_field

from . import linalg
from . import polys
from .groebner import NotZeroDimensional, ideal_dimension, normal_form, quotient_basis
from .scalars import (
    Field,
    UniPoly,
    factor_univariate,
    field_from_spec,
    poly_xgcd,
    seed,
    squarefree_part,
)


class InvalidAlgebra(ValueError):
    pass


class DecompositionFailed(RuntimeError):
    pass


class ArtinAlgebra:
    def __init__(self, field: Field, labels, tables, unit=None, parity=None, validate=True):
        self.field = field
        self.labels = list(labels)
        self.dim = len(self.labels)
        d = self.dim
        self.tables = [[[field(x) for x in row] for row in t] for t in tables]
        if len(self.tables) != d or any(
            len(t) != d or any(len(r) != d for r in t) for t in self.tables
        ):
            raise InvalidAlgebra("need one d x d table per basis element")
        if unit is None:
            unit = [field.one] + [field.zero] * (d - 1)
        self.unit = [field(x) for x in unit]
        self.parity = list(parity) if parity is not None else None
        if validate:
            self.validate()

    # construction

    @classmethod
    def from_generator_tables(cls, field, labels, unit, gen_tables, parity=None, validate=True):
        """Build all basis tables from the tables of some generating elements.

        ``gen_tables`` maps a label to its matrix.  Missing basis tables are
        recovered by applying words in the generators to the unit.
        """
        labels = list(labels)
        d = len(labels)
        unit = [field(x) for x in unit]
        mats = {k: [[field(x) for x in r] for r in m] for k, m in gen_tables.items()}
        gens = list(mats.values())
        ech = linalg.Echelon(field, track=True)
        reached = []
        frontier = [(unit, linalg.identity(field, d))]
        while frontier and len(ech) < d:
            nxt = []
            for v, m in frontier:
                if ech.add(linalg.to_sparse(v), len(reached)) is None:
                    reached.append(m)
                    for g in gens:
                        nxt.append((linalg.matvec(g, v), linalg.matmul(g, m)))
            frontier = nxt
        if len(ech) < d:
            raise InvalidAlgebra("the given tables do not generate the algebra from the unit")
        tables = []
        for k, lab in enumerate(labels):
            if lab in mats:
                tables.append(mats[lab])
                continue
            ek = {k: field.one}
            coeffs = ech.express(ek)
            t = linalg.zeros(field, d, d)
            for idx, c in coeffs.items():
                t = linalg.mat_add(t, linalg.mat_scale(c, reached[idx]))
            tables.append(t)
        return cls(field, labels, tables, unit, parity, validate)

    @classmethod
    def from_quotient(cls, gb, names=None):
        """The quotient ring of a zero-dimensional ideal on its standard monomials."""
        if gb.is_unit():
            return cls(gb.field, [], [], [], validate=False)
        if ideal_dimension(gb) != 0:
            raise NotZeroDimensional("quotient is not finite dimensional")
        field = gb.field
        basis = quotient_basis(gb)
        index = {m: i for i, m in enumerate(basis)}
        d = len(basis)
        names = names or [f"x{i + 1}" for i in range(gb.n_vars)]
        labels = [polys.fmt({m: 1}, names) for m in basis]
        cache = {}

        def coords(mono):
            if mono not in cache:
                nf = normal_form({mono: field.one}, gb)
                v = [field.zero] * d
                for e, c in nf.items():
                    v[index[e]] = c
                cache[mono] = v
            return cache[mono]

        tables = []
        for m in basis:
            cols = [coords(tuple(a + b for a, b in zip(m, m2))) for m2 in basis]
            tables.append(linalg.transpose(cols))
        alg = cls(field, labels, tables, coords(basis[0]), validate=False)
        alg.monomials = basis
        alg.gb = gb
        alg.coords = lambda f: _poly_coords(f, gb, index, d)
        return alg

    @classmethod
    def from_json(cls, data, field: Field | None = None, validate=True):
        if isinstance(data, str):
            data = json.loads(data)
        if field is None:
            field = field_from_spec(data.get("field", "Q"))
        labels = data["basis"]
        unit = [field.parse(x) for x in data["unit"]]
        raw = data["tables"]
        gen_tables = {k: [[field.parse(x) for x in r] for r in m] for k, m in raw.items()}
        parity = data.get("parity")
        if all(lab in gen_tables for lab in labels):
            return cls(field, labels, [gen_tables[lab] for lab in labels], unit, parity, validate)
        return cls.from_generator_tables(field, labels, unit, gen_tables, parity, validate)

    def to_json(self):
        fmt = self.field.format
        return {
            "field": self.field.spec(),
            "basis": self.labels,
            "unit": [fmt(x) for x in self.unit],
            "tables": {
                lab: [[fmt(x) for x in r] for r in t] for lab, t in zip(self.labels, self.tables)
            },
        }

    # arithmetic

    def basis_vector(self, k):
        v = [self.field.zero] * self.dim
        v[k] = self.field.one
        return v

    def element(self, coeffs):
        return [self.field(x) for x in coeffs]

    def mult_matrix(self, u):
        d = self.dim
        m = linalg.zeros(self.field, d, d)
        for k, c in enumerate(u):
            if c:
                t = self.tables[k]
                for i in range(d):
                    row, trow = m[i], t[i]
                    for j in range(d):
                        if trow[j]:
                            row[j] = row[j] + c * trow[j]
        return m

    def mul(self, u, v):
        d = self.dim
        out = [self.field.zero] * d
        for k, c in enumerate(u):
            if not c:
                continue
            t = self.tables[k]
            for i in range(d):
                s = linalg.sum_products(t[i], v)
                if s:
                    out[i] = out[i] + c * s
        return out

    def add(self, u, v):
        return [a + b for a, b in zip(u, v)]

    def scale(self, c, u):
        return [c * a for a in u]

    def power(self, u, k, one=None):
        result = list(one if one is not None else self.unit)
        for _ in range(k):
            result = self.mul(result, u)
        return result

    def evaluate_poly(self, p: UniPoly, x, one=None):
        """``p(x)`` with constant term times ``one`` (default the unit)."""
        one = one if one is not None else self.unit
        acc = [self.field.zero] * self.dim
        for c in reversed(p.coeffs):
            acc = self.mul(acc, x)
            acc = [a + c * b for a, b in zip(acc, one)]
        return acc

    def element_minpoly(self, x, one=None) -> UniPoly:
        """Minimal polynomial of ``x`` inside the ring with identity ``one``."""
        field = self.field
        one = one if one is not None else self.unit
        ech = linalg.Echelon(field, track=True)
        w = list(one)
        k = 0
        while True:
            rel = ech.add(linalg.to_sparse(w), k)
            if rel is not None:
                coeffs = [field.zero] * (k + 1)
                for i, c in rel.items():
                    coeffs[i] = c
                return UniPoly(field, coeffs).monic()
            w = self.mul(w, x)
            k += 1

    def validate(self):
        """Exhaustive check of unitality, (graded) commutativity and associativity."""
        d = self.dim
        field = self.field
        if linalg.mat_sub(self.mult_matrix(self.unit), linalg.identity(field, d)) != linalg.zeros(
            field, d, d
        ):
            raise InvalidAlgebra("the unit does not act as the identity")
        cols = [linalg.transpose(t) for t in self.tables]
        for i in range(d):
            for j in range(i, d):
                sign = 1
                if self.parity is not None and self.parity[i] % 2 and self.parity[j] % 2:
                    sign = -1
                if any(a != sign * b for a, b in zip(cols[i][j], cols[j][i])):
                    raise InvalidAlgebra(
                        f"{self.labels[i]} and {self.labels[j]} do not (graded-)commute"
                    )
        for i in range(d):
            for j in range(d):
                prod = self.mult_matrix(cols[i][j])
                if linalg.mat_sub(linalg.matmul(self.tables[i], self.tables[j]), prod) != linalg.zeros(
                    field, d, d
                ):
                    raise InvalidAlgebra(
                        f"associativity fails for {self.labels[i]}, {self.labels[j]}"
                    )
        return True

    def span_of(self, vectors):
        ech = linalg.Echelon(self.field)
        out = []
        for v in vectors:
            if ech.add(linalg.to_sparse(v)) is None:
                out.append(v)
        return out

    def ideal_span(self, generators):
        """Basis of the ideal generated by the given elements."""
        vecs = []
        for g in generators:
            m = self.mult_matrix(g)
            vecs.extend(linalg.transpose(m))
        return self.span_of(vecs)

    def product_span(self, a, b):
        return self.span_of([self.mul(x, y) for x in a for y in b])


def _poly_coords(f, gb, index, d):
    nf = normal_form(f, gb)
    v = [gb.field.zero] * d
    for e, c in nf.items():
        v[index[e]] = c
    return v


# ---------------------------------------------------------------------------
# local decomposition


@dataclass
class LocalFactor:
    idempotent: list
    dim: int
    residue_degree: int
    nilpotency: int
    filtration: list
    residue_poly: UniPoly | None = None
    basis: list = dc_field(default_factory=list, repr=False)
    parity: str | None = None

    def fingerprint(self):
        return {
            "dim": self.dim,
            "residue_degree": self.residue_degree,
            "radical_filtration": list(self.filtration),
        }


def _factor_basis(A, e):
    return A.span_of(linalg.transpose(A.mult_matrix(e)))


def _radical(A, e, basis):
    """Nilradical of ``eA``: the ideal generated by ``s(b)`` for the squarefree
    part ``s`` of each basis element's minimal polynomial (exact over perfect fields)."""
    gens = []
    for b in basis:
        mp = A.element_minpoly(b, e)
        s = squarefree_part(mp)
        gens.append(A.evaluate_poly(s, b, e))
    gens = [g for g in gens if any(g)]
    return A.ideal_span(gens)


def _filtration(A, rad, dim):
    dims = [dim]
    power = rad
    while power:
        dims.append(len(power))
        power = A.product_span(rad, power)
    dims.append(0)
    return [dims[k] - dims[k + 1] for k in range(len(dims) - 1)]


def _split(A, e, x):
    """Orthogonal idempotents from the coprime factors of the minimal polynomial of ``x``."""
    mp = A.element_minpoly(x, e)
    facs = factor_univariate(mp)
    if len(facs) < 2:
        return None
    out = []
    for q, m in facs:
        qm = q**m
        rest = mp // qm
        _, _, t = poly_xgcd(qm, rest)
        out.append(A.evaluate_poly(t * rest, x, e))
    return out


def _random_element(A, basis, rng):
    x = [A.field.zero] * A.dim
    for b in basis:
        c = A.field.random_element(rng)
        x = [a + c * y for a, y in zip(x, b)]
    return x


def local_decomposition(A: ArtinAlgebra, max_tries=400):
    """Split ``A`` into local factors ``eA``; idempotents are orthogonal and sum to 1."""
    if A.dim == 0:
        return []
    rng = random.Random(seed())
    queue = [list(A.unit)]
    done = []
    while queue:
        e = queue.pop()
        basis = _factor_basis(A, e)
        d = len(basis)
        pieces = None
        for k in range(A.dim):
            x = A.mul(A.basis_vector(k), e)
            pieces = _split(A, e, x)
            if pieces:
                break
        if pieces:
            queue.extend(pieces)
            continue
        rad = _radical(A, e, basis)
        r = d - len(rad)
        certified = None
        candidates = [A.mul(A.basis_vector(k), e) for k in range(A.dim)]
        tries = 0
        while certified is None:
            if candidates:
                x = candidates.pop(0)
            else:
                tries += 1
                if tries > max_tries:
                    raise DecompositionFailed("could not certify or split a factor")
                x = _random_element(A, basis, rng)
            mp = A.element_minpoly(x, e)
            facs = factor_univariate(mp)
            if len(facs) >= 2:
                pieces = _split(A, e, x)
                break
            if facs and facs[0][0].degree == r:
                certified = facs[0][0]
            elif not facs and r == 0:
                certified = UniPoly.x(A.field)
        if pieces:
            queue.extend(pieces)
            continue
        filt = _filtration(A, rad, d)
        par = None
        if A.parity is not None:
            odd = any(c and A.parity[i] % 2 for i, c in enumerate(e))
            par = "mixed" if odd else "even"
        done.append(
            LocalFactor(
                idempotent=e,
                dim=d,
                residue_degree=r,
                nilpotency=len(filt),
                filtration=filt,
                residue_poly=certified,
                basis=basis,
                parity=par,
            )
        )
    done.sort(key=lambda f: (f.dim, [_ckey(c) for c in f.idempotent]))
    return done


def _ckey(c):
    return c.v if hasattr(c, "v") else c


def fingerprint(A: ArtinAlgebra, factors=None):
    """Basis-independent invariants of ``A`` (and of each local factor)."""
    factors = factors if factors is not None else local_decomposition(A)
    parts = sorted(
        (f.dim, f.residue_degree, tuple(f.filtration)) for f in factors
    )
    rad = sum(f.dim - f.residue_degree for f in factors)
    total = [0] * max((len(f.filtration) for f in factors), default=0)
    for f in factors:
        for k, x in enumerate(f.filtration):
            total[k] += x
    return {
        "dim": A.dim,
        "radical_dim": rad,
        "radical_filtration": total,
        "factors": [
            {"dim": d, "residue_degree": r, "radical_filtration": list(fl)} for d, r, fl in parts
        ],
    }


def check_idempotents(A: ArtinAlgebra, factors) -> bool:
    total = [A.field.zero] * A.dim
    for i, f in enumerate(factors):
        if A.mul(f.idempotent, f.idempotent) != f.idempotent:
            return False
        for g in factors[i + 1 :]:
            if any(A.mul(f.idempotent, g.idempotent)):
                return False
        total = A.add(total, f.idempotent)
    return total == A.unit and sum(f.dim for f in factors) == A.dim


def is_local_factor(A: ArtinAlgebra, f: LocalFactor) -> bool:
    """Every basis element of the factor is nilpotent or a unit there."""
    e = f.idempotent
    for b in f.basis:
        mp = A.element_minpoly(b, e)
        facs = factor_univariate(mp)
        if len(facs) > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# generalised eigenspaces and pairings


@dataclass
class EigenBlock:
    factor: UniPoly
    multiplicity: int
    dim: int
    basis: list

    @property
    def eigenvalue(self):
        if self.factor.degree == 1:
            return -self.factor.coeffs[0]
        return None


def eigen_split(A: ArtinAlgebra, b):
    """Generalised eigenspaces of multiplication by ``b``, one per irreducible factor."""
    field = A.field
    m = A.mult_matrix(b)
    from .scalars import minimal_polynomial

    mp = minimal_polynomial(m, field)
    out = []
    for q, k in factor_univariate(mp):
        qm = linalg.poly_of_matrix(list((q**k).coeffs), m, field)
        ker = linalg.nullspace(qm, field)
        out.append(EigenBlock(q, k, len(ker), ker))
    return out


def pairing_orthogonal(A: ArtinAlgebra, form, factors) -> bool:
    field = A.field
    g = [[field(x) for x in r] for r in form]
    if not linalg.det(g, field):
        raise ValueError("pairing is degenerate")
    for i, f in enumerate(factors):
        for h in factors[i + 1 :]:
            for u in f.basis:
                gu = linalg.matvec(linalg.transpose(g), u)
                for v in h.basis:
                    if linalg.sum_products(gu, v):
                        return False
    return True


def is_frobenius(A: ArtinAlgebra, form) -> bool:
    """``<a*b, c> = <a, b*c>`` on basis elements."""
    field = A.field
    g = [[field(x) for x in r] for r in form]
    d = A.dim
    for k in range(d):
        lk = A.tables[k]
        # <L_k u, v> = <u, L_k v>  <=>  L_k^T G = G L_k
        if linalg.matmul(linalg.transpose(lk), g) != linalg.matmul(g, lk):
            return False
    return True


def product_algebra(algebras):
    """Direct product, with block-diagonal tables; the unit is the sum of units."""
    field = algebras[0].field
    d = sum(a.dim for a in algebras)
    labels, tables, unit = [], [], []
    offset = 0
    for idx, a in enumerate(algebras):
        for k in range(a.dim):
            t = linalg.zeros(field, d, d)
            for i in range(a.dim):
                for j in range(a.dim):
                    t[offset + i][offset + j] = a.tables[k][i][j]
            tables.append(t)
            labels.append(f"{a.labels[k]}#{idx}")
        unit.extend(a.unit)
        offset += a.dim
    return ArtinAlgebra(field, labels, tables, unit, validate=False)


def change_basis(A: ArtinAlgebra, p):
    """Same algebra in the basis given by the columns of the invertible matrix ``p``."""
    field = A.field
    pinv = linalg.inverse(p, field)
    cols = linalg.transpose(p)
    tables = []
    for c in cols:
        m = A.mult_matrix(c)
        tables.append(linalg.matmul(pinv, linalg.matmul(m, p)))
    unit = linalg.matvec(pinv, A.unit)
    return ArtinAlgebra(field, [f"b{i}" for i in range(A.dim)], tables, unit, validate=False)


def truncated_polynomial_algebra(field, p: UniPoly, name="y"):
    """``k[y]/(p)`` on the basis ``1, y, ..., y^(d-1)``."""
    d = p.degree
    x = UniPoly.x(field)
    tables = []
    for k in range(d):
        cols = []
        for j in range(d):
            r = (x ** (k + j)) % p
            col = list(r.coeffs) + [field.zero] * (d - len(r.coeffs))
            cols.append(col)
        tables.append(linalg.transpose(cols))
    labels = ["1"] + [name if k == 1 else f"{name}^{k}" for k in range(1, d)]
    return ArtinAlgebra(field, labels, tables, validate=False)
