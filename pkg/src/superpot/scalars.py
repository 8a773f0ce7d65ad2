"""Exact scalar fields and univariate polynomials.

Two kinds of field are supported: the rationals (elements are
:class:`fractions.Fraction`) and prime fields ``F_p`` for ``2 <= p < 2**31``
(elements are :class:`Mod`).  Both element types support the usual
arithmetic operators and compare equal to plain integers, so polynomial and
matrix code can be written once for either field.
"""

from __future__ import annotations

import os
import random
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import isqrt

from . import linalg


class FieldError(ValueError):
    pass


class ZeroPolynomial(ValueError):
    pass


MAX_PRIME = 2**31

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for all n below 3.3e24)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def seed() -> int:
    """Seed for the randomised splitting steps (``SUPERPOT_SEED``, default 0)."""
    return int(os.environ.get("SUPERPOT_SEED", "0"))


class Mod:
    """Residue class modulo a prime ``p``, stored as an int in ``[0, p)``."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def _other(self, o):
        if isinstance(o, Mod):
            if o.p != self.p:
                raise FieldError(f"mixing F_{self.p} and F_{o.p}")
            return o.v
        if isinstance(o, int):
            return o
        if isinstance(o, Fraction):
            if o.denominator % self.p == 0:
                raise ZeroDivisionError(f"{o} has no image in F_{self.p}")
            return o.numerator * pow(o.denominator, -1, self.p)
        return None

    def __add__(self, o):
        w = self._other(o)
        return NotImplemented if w is None else Mod(self.v + w, self.p)

    __radd__ = __add__

    def __sub__(self, o):
        w = self._other(o)
        return NotImplemented if w is None else Mod(self.v - w, self.p)

    def __rsub__(self, o):
        w = self._other(o)
        return NotImplemented if w is None else Mod(w - self.v, self.p)

    def __mul__(self, o):
        w = self._other(o)
        return NotImplemented if w is None else Mod(self.v * w, self.p)

    __rmul__ = __mul__

    def __truediv__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        if w % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Mod(self.v * pow(w, -1, self.p), self.p)

    def __rtruediv__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Mod(w * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, e):
        if e < 0:
            if self.v == 0:
                raise ZeroDivisionError("0 has no inverse")
            return Mod(pow(pow(self.v, -1, self.p), -e, self.p), self.p)
        return Mod(pow(self.v, e, self.p), self.p)

    def __eq__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        return (self.v - w) % self.p == 0

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return str(self.v)


class Field:
    """Common interface of :class:`RationalField` and :class:`PrimeField`."""

    characteristic = 0
    zero = one = None

    def __call__(self, x):
        raise NotImplementedError

    def parse(self, text):
        return self(Fraction(str(text).strip()))

    def is_finite(self):
        return self.characteristic != 0

    def order(self):
        return self.characteristic if self.characteristic else None


class RationalField(Field):
    characteristic = 0

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __call__(self, x):
        if isinstance(x, Mod):
            raise FieldError("cannot lift an F_p element to Q")
        return Fraction(x)

    def spec(self):
        return "Q"

    def random_element(self, rng, bound=7):
        return Fraction(rng.randint(-bound, bound))

    def format(self, c):
        return str(c)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    def __init__(self, p):
        if not (2 <= p < MAX_PRIME) or not is_prime(p):
            raise FieldError(f"{p} is not a prime below 2^31")
        self.characteristic = p
        self.p = p
        self.zero = Mod(0, p)
        self.one = Mod(1, p)

    def __call__(self, x):
        if isinstance(x, Mod):
            if x.p != self.p:
                raise FieldError(f"element of F_{x.p} is not in F_{self.p}")
            return x
        if isinstance(x, int):
            return Mod(x, self.p)
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
        return Mod(x.numerator * pow(x.denominator, -1, self.p), self.p)

    def elements(self):
        return [Mod(i, self.p) for i in range(self.p)]

    def units(self):
        return [Mod(i, self.p) for i in range(1, self.p)]

    def spec(self):
        return {"Fp": self.p}

    def random_element(self, rng, bound=None):
        return Mod(rng.randrange(self.p), self.p)

    def format(self, c):
        return str(c.v)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_for_char(c: int) -> Field:
    return QQ if c == 0 else GF(c)


def field_from_spec(spec) -> Field:
    """Parse the file form of a field: ``"Q"`` or ``{"Fp": p}``."""
    if spec in ("Q", "QQ", 0, "0"):
        return QQ
    if isinstance(spec, dict) and set(spec) == {"Fp"}:
        return GF(int(spec["Fp"]))
    if isinstance(spec, int):
        return GF(spec)
    raise FieldError(f"unrecognised field {spec!r}")


# ---------------------------------------------------------------------------
# dense univariate polynomials


class UniPoly:
    """Dense univariate polynomial; ``coeffs`` are ascending with nonzero top."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        cs = [field(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, field, cs):
        cs = list(cs)
        while cs and not cs[-1]:
            cs.pop()
        p = object.__new__(cls)
        p.field = field
        p.coeffs = tuple(cs)
        return p

    @classmethod
    def x(cls, field):
        return cls._raw(field, [field.zero, field.one])

    @classmethod
    def constant(cls, field, c):
        return cls(field, [c])

    @classmethod
    def from_roots(cls, field, roots):
        p = cls.constant(field, 1)
        for r in roots:
            p = p * cls(field, [-field(r), 1])
        return p

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return len(self.coeffs) == 1 and self.coeffs[0] == 1

    def __bool__(self):
        return bool(self.coeffs)

    def monic(self):
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no monic form")
        inv = self.field.one / self.coeffs[-1]
        return UniPoly._raw(self.field, [c * inv for c in self.coeffs])

    def _lift(self, o):
        if isinstance(o, UniPoly):
            return o
        return UniPoly(self.field, [o])

    def __add__(self, o):
        o = self._lift(o)
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly._raw(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly._raw(self.field, [-c for c in self.coeffs])

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        if not isinstance(o, UniPoly):
            c = self.field(o)
            return UniPoly._raw(self.field, [c * a for a in self.coeffs])
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return UniPoly._raw(self.field, [])
        out = [self.field.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
        return UniPoly._raw(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        result = UniPoly.constant(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, d):
        if not d.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dc = d.coeffs
        dd = len(dc) - 1
        inv = self.field.one / dc[-1]
        if len(r) <= dd:
            return UniPoly._raw(self.field, []), self
        q = [self.field.zero] * (len(r) - dd)
        for i in range(len(r) - 1, dd - 1, -1):
            c = r[i]
            if not c:
                continue
            c = c * inv
            q[i - dd] = c
            for j in range(dd + 1):
                r[i - dd + j] = r[i - dd + j] - c * dc[j]
        return UniPoly._raw(self.field, q), UniPoly._raw(self.field, r[:dd])

    def __floordiv__(self, d):
        return self.divmod(d)[0]

    def __mod__(self, d):
        return self.divmod(d)[1]

    def __eq__(self, o):
        if isinstance(o, UniPoly):
            return self.coeffs == o.coeffs
        return self == self._lift(o)

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        return UniPoly._raw(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def powmod(self, e, m):
        result = UniPoly.constant(self.field, 1)
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            base = (base * base) % m
            e >>= 1
        return result

    def sort_key(self):
        """Canonical order: degree, then coefficients from the top."""
        return (self.degree, tuple(_coeff_key(c) for c in reversed(self.coeffs)))

    def __repr__(self):
        return self.format("x")

    def format(self, var="x"):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if mono and c == 1:
                parts.append(mono)
            elif mono and c == -1 and self.field.characteristic == 0:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts).replace("+ -", "- ")


def _coeff_key(c):
    return c.v if isinstance(c, Mod) else c


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    while b.coeffs:
        a, b = b, a % b
    return a.monic() if a.coeffs else a


def poly_xgcd(a: UniPoly, b: UniPoly):
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    f = a.field
    r0, r1 = a, b
    s0, s1 = UniPoly.constant(f, 1), UniPoly(f, [])
    t0, t1 = UniPoly(f, []), UniPoly.constant(f, 1)
    while r1.coeffs:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0.coeffs:
        return r0, s0, t0
    inv = f.one / r0.lc()
    return r0 * inv, s0 * inv, t0 * inv


def poly_lcm(a, b):
    return (a * b // poly_gcd(a, b)).monic()


# ---------------------------------------------------------------------------
# squarefree decomposition


def _pth_root(f: UniPoly) -> UniPoly:
    p = f.field.characteristic
    return UniPoly._raw(f.field, f.coeffs[::p])


def squarefree_decomposition(f: UniPoly):
    """Monic squarefree parts with multiplicities, ``f ~ prod g**m``."""
    if not f.coeffs:
        raise ZeroPolynomial("cannot decompose the zero polynomial")
    f = f.monic()
    if f.degree == 0:
        return []
    if f.field.characteristic == 0:
        return _yun(f)
    return _sqf_char_p(f)


def _yun(f):
    out = []
    fp = f.derivative()
    a = poly_gcd(f, fp)
    b = f // a
    c = fp // a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        g = poly_gcd(b, d)
        b = b // g
        c = d // g
        d = c - b.derivative()
        if g.degree > 0:
            out.append((g, i))
        i += 1
    return out


def _sqf_char_p(f):
    p = f.field.characteristic
    out = {}
    fp = f.derivative()
    if not fp.coeffs:
        for g, m in _sqf_char_p(_pth_root(f)):
            out[g] = out.get(g, 0) + m * p
        return sorted(out.items(), key=lambda t: (t[1], t[0].sort_key()))
    c = poly_gcd(f, fp)
    w = f // c
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, c)
        z = w // y
        if z.degree > 0:
            out[z] = out.get(z, 0) + i
        i += 1
        w = y
        c = c // y
    if c.degree > 0:
        for g, m in _sqf_char_p(_pth_root(c)):
            out[g] = out.get(g, 0) + m * p
    return sorted(out.items(), key=lambda t: (t[1], t[0].sort_key()))


def squarefree_part(f: UniPoly) -> UniPoly:
    out = UniPoly.constant(f.field, 1)
    for g, _ in squarefree_decomposition(f):
        out = out * g
    return out


# ---------------------------------------------------------------------------
# factorisation over F_p


def _ddf(f: UniPoly):
    """Distinct-degree factorisation of a monic squarefree polynomial."""
    p = f.field.characteristic
    x = UniPoly.x(f.field)
    out = []
    h = x
    d = 0
    rest = f
    while rest.degree >= 2 * (d + 1):
        d += 1
        h = h.powmod(p, rest)
        g = poly_gcd(h - x, rest)
        if g.degree > 0:
            out.append((g, d))
            rest = rest // g
            h = h % rest
    if rest.degree > 0:
        out.append((rest, rest.degree))
    return out


def _edf(f: UniPoly, d: int, rng):
    """Equal-degree splitting (Cantor-Zassenhaus) into irreducibles of degree d."""
    n = f.degree
    if n == d:
        return [f]
    field = f.field
    p = field.characteristic
    while True:
        a = UniPoly(field, [field.random_element(rng) for _ in range(n)])
        if a.degree < 1:
            continue
        g = poly_gcd(a, f)
        if 0 < g.degree < n:
            break
        if p == 2:
            t = a
            b = a
            for _ in range(d - 1):
                t = (t * t) % f
                b = b + t
        else:
            b = a.powmod((p**d - 1) // 2, f) - 1
        g = poly_gcd(b, f)
        if 0 < g.degree < n:
            break
    return _edf(g, d, rng) + _edf(f // g, d, rng)


def _factor_squarefree_fp(f: UniPoly, rng):
    out = []
    for g, d in _ddf(f):
        out.extend(_edf(g, d, rng))
    return out


# ---------------------------------------------------------------------------
# factorisation over Q (Zassenhaus: modular factorisation, Hensel lifting,
# subset recombination)


def _int_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _int_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _int_mod(a, m):
    return _int_trim([x % m for x in a])


def _symmetric(a, m):
    h = m // 2
    return [x - m if x > h else x for x in (y % m for y in a)]


def _int_divides(a, b):
    """Return ``b // a`` if ``a`` divides ``b`` exactly in Z[x], else ``None``."""
    r = list(b)
    da = len(a) - 1
    if len(r) - 1 < da:
        return None if any(r) else []
    q = [0] * (len(r) - da)
    lc = a[-1]
    for i in range(len(r) - 1, da - 1, -1):
        c = r[i]
        if c == 0:
            continue
        if c % lc:
            return None
        c //= lc
        q[i - da] = c
        for j in range(da + 1):
            r[i - da + j] -= c * a[j]
    if any(r[:da]):
        return None
    return q


def _content(a):
    from math import gcd

    g = 0
    for x in a:
        g = gcd(g, x)
    return g


def _to_fp(a, p):
    return UniPoly(GF(p), a)


def _from_fp(u: UniPoly):
    return [c.v for c in u.coeffs]


def _hensel_pair(f, g, h, p, k):
    """Lift monic ``f = g h (mod p)`` to ``mod p**k``; ``f`` is monic mod p**k."""
    fp = GF(p)
    gp, hp = _to_fp(g, p), _to_fp(h, p)
    _, s, t = poly_xgcd(gp, hp)
    m = p
    for _ in range(k - 1):
        e = _int_trim([(x - y) for x, y in _zip_long(f, _int_mul(g, h))])
        e = [x % (m * p) for x in e]
        assert all(x % m == 0 for x in e)
        ep = UniPoly(fp, [x // m for x in e])
        dg = (ep * t) % gp
        dh = (ep - hp * dg) // gp
        g = _int_mod([x + m * y for x, y in _zip_long(g, _from_fp(dg))], m * p)
        h = _int_mod([x + m * y for x, y in _zip_long(h, _from_fp(dh))], m * p)
        m *= p
    return g, h


def _zip_long(a, b):
    n = max(len(a), len(b))
    return [
        (a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)
    ]


def _hensel_multi(f, factors, p, k):
    mod = p**k
    if len(factors) == 1:
        return [_int_mod(f, mod)]
    half = len(factors) // 2
    left, right = factors[:half], factors[half:]
    g = [1]
    for u in left:
        g = _int_mod(_int_mul(g, u), p)
    h = [1]
    for u in right:
        h = _int_mod(_int_mul(h, u), p)
    g, h = _hensel_pair(f, g, h, p, k)
    return _hensel_multi(g, left, p, k) + _hensel_multi(h, right, p, k)


def _zassenhaus(f):
    """Irreducible factors in Z[x] of a primitive squarefree ``f`` (lc > 0)."""
    n = len(f) - 1
    if n <= 1:
        return [f]
    lc = f[-1]
    best = None
    q = 2
    tried = 0
    while tried < 8:
        q += 1
        if not is_prime(q) or lc % q == 0:
            continue
        fq = _to_fp(f, q)
        if poly_gcd(fq, fq.derivative()).degree > 0:
            continue
        facs = _factor_squarefree_fp(fq.monic(), random.Random(seed()))
        tried += 1
        if best is None or len(facs) < len(best[1]):
            best = (q, facs)
        if len(facs) == 1:
            return [f]
    p, facs = best
    norm = isqrt(sum(x * x for x in f)) + 1
    bound = 2 * abs(lc) * (2**n) * norm
    k = 1
    while p**k <= bound:
        k += 1
    mod = p**k
    inv_lc = pow(lc, -1, mod)
    fmonic = _int_mod([x * inv_lc for x in f], mod)
    lifted = _hensel_multi(fmonic, [_from_fp(u) for u in facs], p, k)
    result = []
    rest = list(f)
    remaining = list(range(len(lifted)))
    size = 1
    while 2 * size <= len(remaining):
        found = False
        for subset in combinations(remaining, size):
            g = [rest[-1]]
            for i in subset:
                g = _int_mod(_int_mul(g, lifted[i]), mod)
            g = _symmetric(g, mod)
            c = _content(g)
            g = [x // c for x in g]
            quo = _int_divides(g, rest)
            if quo is not None:
                result.append(g)
                rest = quo
                remaining = [i for i in remaining if i not in subset]
                found = True
                break
        if not found:
            size += 1
    result.append(rest)
    return result


def _factor_rational(f: UniPoly):
    out = []
    for g, m in squarefree_decomposition(f):
        den = 1
        for c in g.coeffs:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = [int(c * den) for c in g.coeffs]
        c = _content(ints)
        ints = [x // c for x in ints]
        if ints[-1] < 0:
            ints = [-x for x in ints]
        for h in _zassenhaus(ints):
            out.append((UniPoly(QQ, h).monic(), m))
    return out


def _gcd(a, b):
    from math import gcd

    return gcd(a, b)


def factor_univariate(f: UniPoly, field: Field | None = None):
    """Factor ``f`` into monic irreducibles with multiplicities.

    The product of ``g**m`` over the result equals ``f`` up to its leading
    coefficient.  Factors are sorted by degree, then by coefficients.
    """
    if field is not None and field != f.field:
        f = UniPoly(field, f.coeffs)
    if not f.coeffs:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    if f.degree == 0:
        return []
    if f.field.characteristic == 0:
        facs = _factor_rational(f)
    else:
        rng = random.Random(seed())
        facs = []
        for g, m in squarefree_decomposition(f):
            facs.extend((h.monic(), m) for h in _factor_squarefree_fp(g, rng))
    merged = {}
    for g, m in facs:
        merged[g] = merged.get(g, 0) + m
    return sorted(merged.items(), key=lambda t: t[0].sort_key())


def is_irreducible(f: UniPoly) -> bool:
    facs = factor_univariate(f)
    return len(facs) == 1 and facs[0][1] == 1


# ---------------------------------------------------------------------------
# minimal polynomials of matrices


def _vector_minpoly(m, v, field):
    """Monic minimal polynomial of ``v`` under the matrix ``m``."""
    ech = linalg.Echelon(field, track=True)
    w = v
    k = 0
    while True:
        rel = ech.add(linalg.to_sparse(w), k)
        if rel is not None:
            coeffs = [field.zero] * (k + 1)
            for i, c in rel.items():
                coeffs[i] = c
            return UniPoly(field, coeffs).monic()
        w = linalg.matvec(m, w)
        k += 1


def minimal_polynomial(m, field: Field) -> UniPoly:
    """Monic generator of the annihilator of the square matrix ``m``."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("minimal_polynomial needs a square matrix")
    result = UniPoly.constant(field, 1)
    span = linalg.Echelon(field)
    for j in range(n):
        e = [field.zero] * n
        e[j] = field.one
        if span.contains(linalg.to_sparse(e)):
            continue
        q = _vector_minpoly(m, e, field)
        result = poly_lcm(result, q)
        w = e
        for _ in range(q.degree):
            span.add(linalg.to_sparse(w))
            w = linalg.matvec(m, w)
    return result


def characteristic_polynomial(m, field: Field) -> UniPoly:
    """``det(x I - m)`` via reduction to upper Hessenberg form."""
    n = len(m)
    h = [[field(x) for x in row] for row in m]
    for c in range(n - 2):
        piv = next((i for i in range(c + 1, n) if h[i][c]), None)
        if piv is None:
            continue
        if piv != c + 1:
            h[c + 1], h[piv] = h[piv], h[c + 1]
            for row in h:
                row[c + 1], row[piv] = row[piv], row[c + 1]
        inv = field.one / h[c + 1][c]
        for i in range(c + 2, n):
            f = h[i][c] * inv
            if not f:
                continue
            h[i] = [x - f * y for x, y in zip(h[i], h[c + 1])]
            for row in h:
                row[c + 1] = row[c + 1] + f * row[i]
    x = UniPoly.x(field)
    ps = [UniPoly.constant(field, 1)]
    for k in range(n):
        p = (x - h[k][k]) * ps[k]
        prod = field.one
        for i in range(k - 1, -1, -1):
            prod = prod * h[i + 1][i]
            p = p - ps[i] * (h[i][k] * prod)
        ps.append(p)
    return ps[n]


# ---------------------------------------------------------------------------
# simple algebraic extensions k[t]/(q) of a base field


class ExtElem:
    """Element of :class:`ExtensionField`, stored as ascending coefficients in ``t``."""

    __slots__ = ("K", "c")

    def __init__(self, K, c):
        self.K = K
        self.c = c

    def _other(self, o):
        if isinstance(o, ExtElem):
            if o.K is not self.K and o.K != self.K:
                raise FieldError("mixing different extension fields")
            return o.c
        try:
            return self.K._embed(o)
        except (TypeError, FieldError):
            return None

    def __add__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        return self.K._make(_vadd(self.c, w))

    __radd__ = __add__

    def __neg__(self):
        return ExtElem(self.K, tuple(-x for x in self.c))

    def __sub__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        return self.K._make(_vadd(self.c, tuple(-x for x in w)))

    def __rsub__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        return self.K._make(_vadd(w, tuple(-x for x in self.c)))

    def __mul__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        return self.K._mul(self.c, w)

    __rmul__ = __mul__

    def inverse(self):
        return self.K._inv(self.c)

    def __truediv__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        return self.K._mul(self.c, self.K._inv(w).c)

    def __rtruediv__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        return self.K._mul(w, self.K._inv(self.c).c)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.K.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        return self.c == w

    def __hash__(self):
        return hash(self.c[0]) if len(self.c) == 1 else hash(self.c)

    def __bool__(self):
        return bool(self.c)

    def __repr__(self):
        return self.K.format(self)


def _vadd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] = out[i] + x
    return tuple(out)


class ExtensionField(Field):
    """``base[t]/(q)`` for a monic irreducible ``q``; ``t`` is written ``name``."""

    def __init__(self, base: Field, modulus: UniPoly, name="t"):
        if modulus.field != base or modulus.degree < 1:
            raise FieldError("modulus must be a nonconstant polynomial over the base field")
        self.base = base
        self.modulus = modulus.monic()
        self.degree = modulus.degree
        self.name = name
        self.characteristic = base.characteristic
        self.zero = ExtElem(self, ())
        self.one = ExtElem(self, (base.one,))
        self.gen = self._make((base.zero, base.one))

    def _trim(self, c):
        c = list(c)
        while c and not c[-1]:
            c.pop()
        return tuple(c)

    def _make(self, c):
        c = self._trim(c)
        if len(c) > self.degree:
            c = (UniPoly._raw(self.base, c) % self.modulus).coeffs
        return ExtElem(self, c)

    def _embed(self, x):
        if isinstance(x, ExtElem):
            return x.c
        if isinstance(x, UniPoly):
            return (x % self.modulus).coeffs
        v = self.base(x)
        return (v,) if v else ()

    def _mul(self, a, b):
        if not a or not b:
            return self.zero
        p = UniPoly._raw(self.base, a) * UniPoly._raw(self.base, b)
        return ExtElem(self, (p % self.modulus).coeffs)

    def _inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero in an extension field")
        g, s, _ = poly_xgcd(UniPoly._raw(self.base, a), self.modulus)
        if g.degree != 0:
            raise FieldError("modulus is reducible; element is a zero divisor")
        return ExtElem(self, (s % self.modulus).coeffs)

    def __call__(self, x):
        if isinstance(x, ExtElem) and x.K == self:
            return x
        return ExtElem(self, self._embed(x))

    def from_poly(self, p: UniPoly):
        return ExtElem(self, (p % self.modulus).coeffs)

    def parse(self, text):
        return self(self.base.parse(text))

    def spec(self):
        return {"ext": self.modulus.format(self.name), "over": self.base.spec()}

    def random_element(self, rng, bound=7):
        return self._make(tuple(self.base.random_element(rng, bound) for _ in range(self.degree)))

    def format(self, c):
        return UniPoly._raw(self.base, c.c).format(self.name) if c.c else "0"

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionField)
            and other.base == self.base
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("ext", self.base, self.modulus.coeffs))

    def __repr__(self):
        return f"{self.base!r}[{self.name}]/({self.modulus.format(self.name)})"
