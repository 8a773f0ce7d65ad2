"""Sparse multivariate polynomials as ``{exponent tuple: coefficient}`` dicts.

Exponents may be negative (Laurent polynomials use the same helpers).  Zero
coefficients are never stored; the empty dict is the zero polynomial.
"""

from __future__ import annotations


def const(field, c, n):
    c = field(c)
    return {(0,) * n: c} if c else {}


def var(field, i, n):
    e = [0] * n
    e[i] = 1
    return {tuple(e): field.one}


def add(a, b):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e)
        if v is None:
            out[e] = c
        else:
            v = v + c
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def neg(a):
    return {e: -c for e, c in a.items()}


def sub(a, b):
    return add(a, neg(b))


def scale(a, c):
    if not c:
        return {}
    return {e: c * x for e, x in a.items()}


def shift(a, m, c=None):
    """``c * x^m * a``."""
    if c is None:
        return {tuple(x + y for x, y in zip(e, m)): v for e, v in a.items()}
    if not c:
        return {}
    return {tuple(x + y for x, y in zip(e, m)): c * v for e, v in a.items()}


def mul(a, b):
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(e)
            v = c1 * c2 if v is None else v + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def power(a, k, n, field):
    result = const(field, 1, n)
    base = a
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result


def is_const(a):
    return not a or (len(a) == 1 and not any(next(iter(a))))


def const_value(a, field):
    return a.get((0,) * len(next(iter(a))), field.zero) if a else field.zero


def total_degree(a):
    return max((sum(e) for e in a), default=-1)


def evaluate(a, point, field):
    acc = field.zero
    for e, c in a.items():
        t = c
        for x, k in zip(point, e):
            if k:
                t = t * (x**k)
        acc = acc + t
    return acc


def derivative(a, i):
    out = {}
    for e, c in a.items():
        if e[i]:
            f = list(e)
            f[i] -= 1
            v = c * e[i]
            if v:
                out[tuple(f)] = v
    return out


def euler_derivative(a, i):
    """``x_i * d/dx_i``; keeps exponents, multiplies by ``e_i``."""
    out = {}
    for e, c in a.items():
        if e[i]:
            v = c * e[i]
            if v:
                out[e] = v
    return out


def min_exponents(a, n):
    if not a:
        return (0,) * n
    return tuple(min(e[i] for e in a) for i in range(n))


def lex_lead(a):
    return max(a)


def divide_exact(a, b):
    """``a / b`` if ``b`` divides ``a`` as polynomials, else ``None``."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return {}
    lb = max(b)
    cb = b[lb]
    inv = 1 / cb
    q = {}
    r = dict(a)
    while r:
        lr = max(r)
        m = tuple(x - y for x, y in zip(lr, lb))
        if any(x < 0 for x in m):
            return None
        c = r[lr] * inv
        q[m] = c
        r = sub(r, shift(b, m, c))
    return q


def monic_lex(a, field):
    if not a:
        return a
    return scale(a, field.one / a[max(a)])


# ---------------------------------------------------------------------------
# gcd by recursion on the last variable (primitive remainder sequences)


def _split_last(a):
    """View ``a`` as a univariate polynomial in its last variable."""
    out = {}
    for e, c in a.items():
        k = e[-1]
        out.setdefault(k, {})[e[:-1]] = c
    return out


def _join_last(u):
    out = {}
    for k, coef in u.items():
        for e, c in coef.items():
            out[e + (k,)] = c
    return out


def _udeg(u):
    return max(u) if u else -1


def gcd(a, b, field):
    """Monic (lex) greatest common divisor of polynomials with exponents >= 0."""
    if not a:
        return monic_lex(b, field)
    if not b:
        return monic_lex(a, field)
    n = len(next(iter(a)))
    if n == 0:
        return {(): field.one}
    if is_const(a) or is_const(b):
        return const(field, 1, n)
    ua, ub = _split_last(a), _split_last(b)
    ca = _content(ua, field)
    cb = _content(ub, field)
    c = gcd(ca, cb, field)
    pa = _udiv_content(ua, ca)
    pb = _udiv_content(ub, cb)
    if _udeg(pa) < _udeg(pb):
        pa, pb = pb, pa
    while pb:
        if _udeg(pb) == 0:
            pa = {0: const(field, 1, n - 1)}
            break
        r = _prem(pa, pb)
        pa, pb = pb, _primitive(r, field)
    g = _primitive(pa, field)
    g = {k: mul(v, c) for k, v in g.items()}
    return monic_lex(_join_last(g), field)


def _content(u, field):
    g = {}
    for coef in u.values():
        g = gcd(g, coef, field)
        if is_const(g):
            break
    return g


def _udiv_content(u, c):
    return {k: divide_exact(v, c) for k, v in u.items()}


def _primitive(u, field):
    if not u:
        return u
    c = _content(u, field)
    return _udiv_content(u, c)


def _prem(a, b):
    """A pseudo-remainder of ``a`` by ``b`` (coefficients are polynomials)."""
    db = _udeg(b)
    lb = b[db]
    r = dict(a)
    while r and _udeg(r) >= db:
        dr = _udeg(r)
        lr = r[dr]
        new = {k: mul(v, lb) for k, v in r.items()}
        for k, v in b.items():
            kk = k + dr - db
            t = sub(new.get(kk, {}), mul(v, lr))
            if t:
                new[kk] = t
            else:
                new.pop(kk, None)
        r = {k: v for k, v in new.items() if v}
    return r


def fmt(a, names, field=None):
    """Readable form such as ``2*x^2*y^-1 - 3``."""
    if not a:
        return "0"
    parts = []
    for e in sorted(a, key=lambda e: (-sum(e), tuple(-x for x in e))):
        c = a[e]
        mono = "*".join(
            (n if k == 1 else f"{n}^{k}") for n, k in zip(names, e) if k
        )
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1 and (field is None or field.characteristic == 0):
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")
