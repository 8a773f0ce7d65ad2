"""Exact linear algebra over a field.

Dense matrices are lists of rows.  Sparse vectors are dicts mapping a column
index to a nonzero field element; :class:`Echelon` does incremental sparse
elimination and is what the larger (truncated-ring) computations use.
"""

from __future__ import annotations

import heapq


class SingularMatrix(ValueError):
    pass


def zeros(field, rows, cols):
    return [[field.zero] * cols for _ in range(rows)]


def identity(field, n):
    m = zeros(field, n, n)
    for i in range(n):
        m[i][i] = field.one
    return m


def transpose(a):
    return [list(col) for col in zip(*a)] if a else []


def matmul(a, b):
    bt = transpose(b)
    return [[sum_products(row, col) for col in bt] for row in a]


def sum_products(u, v):
    total = None
    for x, y in zip(u, v):
        if x and y:
            total = x * y if total is None else total + x * y
    if total is None:
        return u[0] - u[0] if u else 0
    return total


def matvec(a, v):
    return [sum_products(row, v) for row in a]


def mat_add(a, b):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_scale(c, a):
    return [[c * x for x in r] for r in a]


def is_zero_matrix(a):
    return all(not x for row in a for x in row)


def poly_of_matrix(coeffs, a, field):
    """Evaluate the polynomial with ascending ``coeffs`` at the square matrix ``a``."""
    n = len(a)
    result = zeros(field, n, n)
    for c in reversed(coeffs):
        result = matmul(result, a)
        for i in range(n):
            result[i][i] = result[i][i] + c
    return result


def rref(a, field):
    """Reduced row echelon form; returns ``(rows, pivot_columns)``."""
    m = [list(r) for r in a]
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.one / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, field):
    return len(rref(a, field)[1])


def nullspace(a, field, ncols=None):
    """Basis of the right kernel ``{x : a x = 0}``."""
    if not a:
        n = ncols or 0
        return [[field.one if i == j else field.zero for i in range(n)] for j in range(n)]
    r, pivots = rref(a, field)
    ncols = len(a[0])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for i, p in enumerate(pivots):
            v[p] = -r[i][f]
        basis.append(v)
    return basis


def solve(a, b, field):
    """A particular solution of ``a x = b`` or ``None``."""
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    r, pivots = rref(aug, field)
    ncols = len(a[0]) if a else 0
    if ncols in pivots:
        return None
    x = [field.zero] * ncols
    for i, p in enumerate(pivots):
        x[p] = r[i][ncols]
    return x


def inverse(a, field):
    n = len(a)
    aug = [list(row) + e for row, e in zip(a, identity(field, n))]
    r, pivots = rref(aug, field)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is not invertible")
    return [row[n:] for row in r]


def det(a, field):
    m = [list(r) for r in a]
    n = len(m)
    result = field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return field.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        result = result * m[c][c]
        inv = field.one / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def to_sparse(v):
    return {i: x for i, x in enumerate(v) if x}


def to_dense(v, n, field):
    out = [field.zero] * n
    for i, x in v.items():
        out[i] = x
    return out


class Echelon:
    """Incremental sparse row echelon basis.

    Each stored row has as pivot its smallest column, normalised to 1.  With
    ``track=True`` every row also remembers which combination of inserted
    vectors produced it, which gives kernels and solutions for free.
    """

    def __init__(self, field, track=False):
        self.field = field
        self.track = track
        self.rows = {}
        self.combs = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, v, comb=None):
        v = dict(v)
        comb = dict(comb) if comb is not None else ({} if self.track else None)
        heap = list(v)
        heapq.heapify(heap)
        rows = self.rows
        while heap:
            c = heapq.heappop(heap)
            a = v.get(c)
            if not a:
                continue
            row = rows.get(c)
            if row is None:
                continue
            for k, b in row.items():
                nv = v.get(k, 0) - a * b
                if nv:
                    if k not in v:
                        heapq.heappush(heap, k)
                    v[k] = nv
                else:
                    v.pop(k, None)
            if comb is not None:
                for k, b in self.combs[c].items():
                    nv = comb.get(k, 0) - a * b
                    if nv:
                        comb[k] = nv
                    else:
                        comb.pop(k, None)
        return v, comb

    def add(self, v, label=None):
        """Insert ``v``; return the kernel relation (dict) if dependent, else ``None``.

        Without tracking the return value is ``{}`` for a dependent vector.
        """
        start = {label: self.field.one} if self.track else None
        r, comb = self.reduce(v, start)
        if not r:
            return comb if comb is not None else {}
        p = min(r)
        inv = self.field.one / r[p]
        self.rows[p] = {k: x * inv for k, x in r.items()}
        if self.track:
            self.combs[p] = {k: x * inv for k, x in comb.items()}
        return None

    def contains(self, v):
        return not self.reduce(v)[0]

    def express(self, v):
        """Coefficients ``x`` (by label) with ``sum x[l] * vec[l] == v``, or ``None``."""
        r, comb = self.reduce(v, {})
        if r:
            return None
        return {k: -x for k, x in comb.items()}


def sparse_kernel(columns, field):
    """Kernel of the linear map whose ``j``-th column is ``columns[j]`` (sparse dicts)."""
    ech = Echelon(field, track=True)
    kernel = []
    for j, col in enumerate(columns):
        rel = ech.add(col, j)
        if rel is not None:
            kernel.append(rel)
    return kernel, ech


def _rank_mod_p(vectors, p):
    """Rank of sparse vectors over F_p with plain int arithmetic."""
    rows = {}
    for v in vectors:
        v = {k: getattr(x, "v", x) % p for k, x in v.items()}
        v = {k: x for k, x in v.items() if x}
        while v:
            c = min(v)
            row = rows.get(c)
            if row is None:
                inv = pow(v[c], -1, p)
                rows[c] = {k: x * inv % p for k, x in v.items()}
                break
            a = v[c]
            for k, b in row.items():
                x = (v.get(k, 0) - a * b) % p
                if x:
                    v[k] = x
                else:
                    v.pop(k, None)
    return len(rows)


def _rank_rational(vectors):
    """Exact rank over Q with primitive integer rows (fraction-free elimination)."""
    from math import gcd, lcm

    rows = {}
    for v in vectors:
        if not v:
            continue
        den = lcm(*(x.denominator for x in v.values()))
        v = {k: x.numerator * (den // x.denominator) for k, x in v.items() if x}
        while v:
            c = min(v)
            row = rows.get(c)
            if row is None:
                g = 0
                for x in v.values():
                    g = gcd(g, x)
                rows[c] = {k: x // g for k, x in v.items()}
                break
            a, b = row[c], v[c]
            g = gcd(a, b)
            a, b = a // g, b // g
            out = {k: a * x for k, x in v.items()}
            for k, y in row.items():
                x = out.get(k, 0) - b * y
                if x:
                    out[k] = x
                else:
                    out.pop(k, None)
            g = 0
            for x in out.values():
                g = gcd(g, x)
                if g == 1:
                    break
            v = {k: x // g for k, x in out.items()} if g > 1 else out
    return len(rows)


def _restrict_scalars(vectors, field):
    """Write vectors over ``K = k[t]/(q)`` as ``[K:k]`` times as many vectors over ``k``."""
    r = field.degree
    q = field.modulus.coeffs  # monic, length r + 1
    zero = field.base.zero

    def times_t(c):
        # c * t reduced by t^r = -(q_0 + ... + q_(r-1) t^(r-1))
        top = c[-1]
        out = [zero] + c[:-1]
        if top:
            out = [a - top * b for a, b in zip(out, q[:-1])]
        return out

    out = []
    for v in vectors:
        rows = [{} for _ in range(r)]
        for k, x in v.items():
            c = list(x.c) + [zero] * (r - len(x.c))
            for j in range(r):
                for i, y in enumerate(c):
                    if y:
                        rows[j][k * r + i] = y
                if j + 1 < r:
                    c = times_t(c)
        out.extend(rows)
    return out


def sparse_rank(vectors, field):
    base = getattr(field, "base", None)
    if base is not None and hasattr(field, "modulus"):
        # rank over K is the rank over k divided by [K:k]
        total = sparse_rank(_restrict_scalars(vectors, field), base)
        return total // field.degree
    p = getattr(field, "p", None)
    if p is not None and getattr(field, "characteristic", None) == p:
        return _rank_mod_p(vectors, p)
    if getattr(field, "characteristic", None) == 0 and type(field).__name__ == "RationalField":
        return _rank_rational(vectors)
    ech = Echelon(field)
    for v in vectors:
        ech.add(v)
    return len(ech)
