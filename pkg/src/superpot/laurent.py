"""Laurent polynomials and rational functions in several variables."""

from __future__ import annotations

import ast
from dataclasses import dataclass
from math import comb

from . import linalg
from . import polys
from .scalars import QQ, Field


class NotLaurent(ValueError):
    """The reduced denominator is not a monomial; ``witness`` is its non-monomial part."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"denominator {witness} is not a monomial")


class ZeroSubstitution(ValueError):
    pass


class ParseError(ValueError):
    pass


def default_names(n):
    return tuple(f"z{i + 1}" for i in range(n))


def _gen_binom(e, k):
    """Binomial coefficient ``e choose k`` for any integer ``e``."""
    if e >= 0:
        return comb(e, k) if k <= e else 0
    # (-1)^k * C(k - e - 1, k)
    return (-1) ** k * comb(k - e - 1, k)


class LaurentPoly:
    """Immutable Laurent polynomial; ``terms`` maps exponent tuples to coefficients."""

    __slots__ = ("field", "names", "terms", "_hash")

    def __init__(self, field: Field, names, terms=None):
        if isinstance(names, int):
            names = default_names(names)
        self.field = field
        self.names = tuple(names)
        n = len(self.names)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != n:
                raise ValueError(f"exponent {e} has wrong length for {n} variables")
            c = field(c)
            if c:
                clean[e] = clean.get(e, field.zero) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, field, names, terms):
        w = object.__new__(cls)
        w.field = field
        w.names = names
        w.terms = terms
        w._hash = None
        return w

    # construction helpers

    @classmethod
    def constant(cls, field, names, c):
        names = default_names(names) if isinstance(names, int) else tuple(names)
        return cls(field, names, {(0,) * len(names): c})

    @classmethod
    def variable(cls, field, names, i):
        names = default_names(names) if isinstance(names, int) else tuple(names)
        e = [0] * len(names)
        e[i] = 1
        return cls(field, names, {tuple(e): 1})

    @classmethod
    def monomial(cls, field, names, exps, c=1):
        names = default_names(names) if isinstance(names, int) else tuple(names)
        return cls(field, names, {tuple(exps): c})

    @property
    def n_vars(self):
        return len(self.names)

    def _wrap(self, terms):
        return LaurentPoly._raw(self.field, self.names, terms)

    def _coerce(self, o):
        if isinstance(o, LaurentPoly):
            if o.field != self.field or o.n_vars != self.n_vars:
                raise ValueError("incompatible Laurent polynomials")
            return o.terms
        return polys.const(self.field, o, self.n_vars)

    def __add__(self, o):
        return self._wrap(polys.add(self.terms, self._coerce(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return self._wrap(polys.sub(self.terms, self._coerce(o)))

    def __rsub__(self, o):
        return self._wrap(polys.sub(self._coerce(o), self.terms))

    def __neg__(self):
        return self._wrap(polys.neg(self.terms))

    def __mul__(self, o):
        return self._wrap(polys.mul(self.terms, self._coerce(o)))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (e, c), = self.terms.items()
            return self._wrap({tuple(-k * x for x in e): c**k})
        return self._wrap(polys.power(self.terms, k, self.n_vars, self.field))

    def __eq__(self, o):
        if isinstance(o, LaurentPoly):
            return self.field == o.field and self.n_vars == o.n_vars and self.terms == o.terms
        try:
            return self.terms == self._coerce(o)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n_vars, frozenset(self.terms.items())))
        return self._hash

    def is_zero(self):
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items())

    def support(self):
        return sorted(self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.n_vars, self.field.zero)

    def degree_bounds(self):
        n = self.n_vars
        if not self.terms:
            return (0,) * n, (0,) * n
        lo = tuple(min(e[i] for e in self.terms) for i in range(n))
        hi = tuple(max(e[i] for e in self.terms) for i in range(n))
        return lo, hi

    def map_coefficients(self, field: Field):
        """Reduce (or coerce) the coefficients into another field."""
        return LaurentPoly(field, self.names, self.terms)

    def rename(self, names):
        return LaurentPoly._raw(self.field, tuple(names), self.terms)

    def __repr__(self):
        return polys.fmt(self.terms, self.names, self.field)

    # calculus

    def log_derivative(self, i):
        """``z_i * dW/dz_i``; stays inside the Laurent ring."""
        if not 0 <= i < self.n_vars:
            raise IndexError(f"variable index {i} out of range")
        return self._wrap(polys.euler_derivative(self.terms, i))

    def derivative(self, i):
        return self._wrap(polys.derivative(self.terms, i))

    def evaluate(self, point):
        point = [self.field(x) for x in point]
        if len(point) != self.n_vars:
            raise ValueError("point has the wrong number of coordinates")
        if any(not x for x in point):
            raise ValueError("torus points have nonzero coordinates")
        return polys.evaluate(self.terms, point, self.field)

    def __call__(self, *point):
        return self.evaluate(point)

    def hessian_matrix(self, point):
        n = self.n_vars
        first = [self.log_derivative(i) for i in range(n)]
        return [[first[j].log_derivative(i).evaluate(point) for j in range(n)] for i in range(n)]

    def hessian_det(self, point):
        return linalg.det(self.hessian_matrix(point), self.field)

    def is_critical(self, point):
        return all(not self.log_derivative(i).evaluate(point) for i in range(self.n_vars))

    def periods(self, order):
        """Constant terms of ``W**m`` for ``m = 0..order``."""
        out = [self.field.one]
        power = polys.const(self.field, 1, self.n_vars)
        for _ in range(order):
            power = polys.mul(power, self.terms)
            out.append(power.get((0,) * self.n_vars, self.field.zero))
        return out

    def clear_denominators(self):
        """``(P, m)`` with ``P`` a polynomial (dict) and ``W = P / z^m``."""
        lo = polys.min_exponents(self.terms, self.n_vars)
        m = tuple(max(0, -x) for x in lo)
        return polys.shift(self.terms, m), m

    def taylor(self, point, order):
        """Expansion at ``point`` in ``u = z - point`` keeping total degree < ``order``.

        Returned as a dict from exponent tuples (non-negative) to coefficients.
        """
        field = self.field
        point = [field(x) for x in point]
        n = self.n_vars
        out = {}
        cache = {}

        def series(i, e):
            key = (i, e)
            if key not in cache:
                p = point[i]
                cache[key] = [
                    (k, p ** (e - k) * _gen_binom(e, k))
                    for k in range(order)
                    if _gen_binom(e, k)
                ]
            return cache[key]

        for e, c in self.terms.items():
            partial = {(): c}
            for i in range(n):
                nxt = {}
                s = series(i, e[i])
                for mono, v in partial.items():
                    d = sum(mono)
                    for k, a in s:
                        if d + k >= order:
                            break
                        m2 = mono + (k,)
                        nxt[m2] = nxt.get(m2, field.zero) + v * a
                partial = nxt
            for mono, v in partial.items():
                if v:
                    out[mono] = out.get(mono, field.zero) + v
        return {m: v for m, v in out.items() if v}

    # serialisation

    def to_json(self):
        return {
            "vars": list(self.names),
            "terms": [
                {"c": self.field.format(c), "e": list(e)} for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data, field: Field = QQ):
        names = tuple(data["vars"])
        terms = {}
        for t in data["terms"]:
            e = tuple(int(x) for x in t["e"])
            terms[e] = terms.get(e, field.zero) + field.parse(t["c"])
        return cls(field, names, terms)

    @classmethod
    def parse(cls, text, names=None, field: Field = QQ):
        """Parse an expression such as ``x + y + 1/(x*y)`` and require it to be Laurent."""
        return parse_rational(text, names, field).as_laurent()

    # composition

    def to_rational(self):
        num, m = self.clear_denominators()
        den = {m: self.field.one}
        return RationalFunc(self.field, self.names, num, den)

    def substitute(self, images, names=None):
        """Compose with a map given by rational functions in the new variables."""
        images = list(images)
        if len(images) != self.n_vars:
            raise ValueError("need one image per variable")
        if any(f.is_zero() for f in images):
            raise ZeroSubstitution("an image function is identically zero")
        names = names or images[0].names
        field = self.field
        result = RationalFunc.constant(field, names, 0)
        cache = {}
        for e, c in self.sorted_terms():
            term = RationalFunc.constant(field, names, c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            result = result + term
        return result


@dataclass(frozen=True)
class TorusPoint:
    coords: tuple

    def __post_init__(self):
        if any(not x for x in self.coords):
            raise ValueError("torus points have nonzero coordinates")

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


class RationalFunc:
    """Quotient of polynomials, kept gcd-reduced with a lex-monic denominator."""

    __slots__ = ("field", "names", "num", "den")

    def __init__(self, field, names, num, den=None, reduce=True):
        names = default_names(names) if isinstance(names, int) else tuple(names)
        n = len(names)
        if den is None:
            den = polys.const(field, 1, n)
        if not den:
            raise ZeroDivisionError("zero denominator")
        self.field = field
        self.names = names
        if reduce:
            num, den = _reduce(field, num, den, n)
        self.num = num
        self.den = den

    @classmethod
    def constant(cls, field, names, c):
        names = default_names(names) if isinstance(names, int) else tuple(names)
        return cls(field, names, polys.const(field, c, len(names)), reduce=False)

    @classmethod
    def variable(cls, field, names, i):
        names = default_names(names) if isinstance(names, int) else tuple(names)
        return cls(field, names, polys.var(field, i, len(names)), reduce=False)

    @property
    def n_vars(self):
        return len(self.names)

    def is_zero(self):
        return not self.num

    def _coerce(self, o):
        if isinstance(o, RationalFunc):
            return o
        if isinstance(o, LaurentPoly):
            return o.to_rational()
        return RationalFunc.constant(self.field, self.names, o)

    def __add__(self, o):
        o = self._coerce(o)
        if self.den == o.den:
            return RationalFunc(self.field, self.names, polys.add(self.num, o.num), self.den)
        num = polys.add(polys.mul(self.num, o.den), polys.mul(o.num, self.den))
        return RationalFunc(self.field, self.names, num, polys.mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunc(self.field, self.names, polys.neg(self.num), self.den, reduce=False)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        return RationalFunc(
            self.field, self.names, polys.mul(self.num, o.num), polys.mul(self.den, o.den)
        )

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of the zero function")
        return RationalFunc(self.field, self.names, self.den, self.num)

    def __truediv__(self, o):
        return self * self._coerce(o).inverse()

    def __rtruediv__(self, o):
        return self._coerce(o) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        n = self.n_vars
        return RationalFunc(
            self.field,
            self.names,
            polys.power(self.num, k, n, self.field),
            polys.power(self.den, k, n, self.field),
            reduce=False,
        )

    def __eq__(self, o):
        if not isinstance(o, (RationalFunc, LaurentPoly, int)):
            return NotImplemented
        o = self._coerce(o)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((frozenset(self.num.items()), frozenset(self.den.items())))

    def evaluate(self, point):
        field = self.field
        point = [field(x) for x in point]
        d = polys.evaluate(self.den, point, field)
        if not d:
            raise ZeroDivisionError("denominator vanishes at the point")
        return polys.evaluate(self.num, point, field) / d

    def is_laurent(self):
        return len(self.den) == 1

    def as_laurent(self) -> LaurentPoly:
        if len(self.den) != 1:
            witness = _strip_monomial(self.den, self.n_vars)
            raise NotLaurent(polys.fmt(witness, self.names, self.field))
        (m, c), = self.den.items()
        inv = self.field.one / c
        neg = tuple(-x for x in m)
        return LaurentPoly(self.field, self.names, polys.shift(self.num, neg, inv))

    def __repr__(self):
        num = polys.fmt(self.num, self.names, self.field)
        if polys.is_const(self.den) and self.den.get((0,) * self.n_vars) == 1:
            return num
        return f"({num})/({polys.fmt(self.den, self.names, self.field)})"


def _strip_monomial(a, n):
    lo = polys.min_exponents(a, n)
    return polys.shift(a, tuple(-x for x in lo))


def _reduce(field, num, den, n):
    if not num:
        return {}, polys.const(field, 1, n)
    # pull out monomial factors first, they make the gcd cheap
    lo_n = polys.min_exponents(num, n)
    lo_d = polys.min_exponents(den, n)
    common = tuple(min(a, b) for a, b in zip(lo_n, lo_d))
    if any(common):
        neg = tuple(-x for x in common)
        num = polys.shift(num, neg)
        den = polys.shift(den, neg)
    if len(den) > 1 or len(num) > 1:
        if len(den) == 1 or len(num) == 1:
            g = polys.const(field, 1, n)
        else:
            g = polys.gcd(num, den, field)
        if not polys.is_const(g):
            num = polys.divide_exact(num, g)
            den = polys.divide_exact(den, g)
    lc = den[max(den)]
    if lc != 1:
        inv = field.one / lc
        num = polys.scale(num, inv)
        den = polys.scale(den, inv)
    return num, den


# ---------------------------------------------------------------------------
# expression parsing


def parse_rational(text, names=None, field: Field = QQ) -> RationalFunc:
    """Parse ``+ - * / ^`` expressions with integer literals and variable names.

    Variables are taken from ``names`` if given, else collected in order of
    first appearance.
    """
    src = text.replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    if names is None:
        seen = []
        for node in ast.walk(tree):
            if isinstance(node, ast.Name) and node.id not in seen:
                seen.append(node.id)
        names = tuple(seen)
    names = tuple(names)
    index = {v: i for i, v in enumerate(names)}

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return RationalFunc.constant(field, names, node.value)
        if isinstance(node, ast.Name):
            if node.id not in index:
                raise ParseError(f"unknown variable {node.id!r}")
            return RationalFunc.variable(field, names, index[node.id])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                k = _int_literal(node.right)
                return walk(node.left) ** k
            a, b = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if b.is_zero():
                    raise ParseError("division by zero")
                return a / b
        raise ParseError(f"unsupported syntax in {text!r}")

    return walk(tree)


def _int_literal(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_int_literal(node.operand)
    raise ParseError("exponents must be integer literals")
