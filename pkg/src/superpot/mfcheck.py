"""Koszul matrix factorisations of ``W - lambda`` at a critical point.

Everything runs over the truncations ``R_N = k[u]/(u)^N`` with ``u = z - p``.
The factorisation lives on the exterior algebra ``Λ(k^n) ⊗ R_N`` with
differential ``d = sum_i (w_i ε_i + u_i ι_i)`` where ``W - λ = sum_i u_i w_i``;
even and odd exterior powers give the two blocks of rank ``2^(n-1)``.

Cohomology of the endomorphism complex over the completion is read off as the
stable image of ``H(End over R_N') -> H(End over R_N)``; the raw cohomology of
a single truncation is polluted by the cut-off and is not used.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import linalg
from .critlocus import ISOLATED, NotIsolated, is_isolated, jacobian, local_jacobian
from .laurent import LaurentPoly
from .scalars import Field
from .truncation import TruncatedLocalRing


class DivisionFailure(RuntimeError):
    pass


class HomotopyObstruction(RuntimeError):
    pass


class NoStabilization(RuntimeError):
    def __init__(self, n_max, last=None):
        self.n_max = n_max
        self.last = last
        super().__init__(f"endomorphism cohomology did not stabilise up to N = {n_max}")


def _subsets(n):
    even = [s for k in range(0, n + 1, 2) for s in combinations(range(n), k)]
    odd = [s for k in range(1, n + 1, 2) for s in combinations(range(n), k)]
    return even, odd


def _sign(s, i):
    return -1 if sum(1 for j in s if j < i) % 2 else 1


@dataclass
class MatrixFactorization:
    """``d`` is a ``2^n x 2^n`` matrix over the truncation (dict entries).

    Rows and columns are indexed by ``basis`` (even subsets first).  ``f0``
    maps the even block to the odd block and ``f1`` the odd block back.
    """

    ring: TruncatedLocalRing
    basis: list
    parity: list
    d: list
    target: dict
    value: object
    w: list
    point: tuple

    @property
    def field(self) -> Field:
        return self.ring.field

    @property
    def n(self):
        return self.ring.n

    @property
    def rank(self):
        return len(self.basis) // 2

    def block(self, src, dst):
        rows = [i for i, p in enumerate(self.parity) if p == dst]
        cols = [j for j, p in enumerate(self.parity) if p == src]
        return [[self.d[i][j] for j in cols] for i in rows]

    @property
    def f0(self):
        return self.block(0, 1)

    @property
    def f1(self):
        return self.block(1, 0)

    def with_order(self, N):
        """The same construction at another truncation order."""
        return _build(self._W, self.point, N, self.value)


def _matmul(ring, a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[{} for _ in range(cols)] for _ in range(rows)]
    for i in range(rows):
        for k in range(inner):
            x = a[i][k]
            if not x:
                continue
            for j in range(cols):
                y = b[k][j]
                if y:
                    out[i][j] = ring.add(out[i][j], ring.mul(x, y))
    return out


def _split_target(ring, f):
    """``f = sum u_i w_i``: each monomial goes to its first variable with positive exponent."""
    n = ring.n
    w = [{} for _ in range(n)]
    for e, c in f.items():
        i = next((k for k, x in enumerate(e) if x), None)
        if i is None:
            raise DivisionFailure("W - λ has a nonzero constant term at the point")
        q = list(e)
        q[i] -= 1
        w[i][tuple(q)] = c
    return w


def _build(W: LaurentPoly, point, N, value=None):
    field = W.field
    n = W.n_vars
    ring = TruncatedLocalRing(field, n, N)
    lam = W.evaluate(point) if value is None else value
    # split one order higher so that every w_i is correct modulo (u)^N;
    # otherwise the projections between truncations are not chain maps
    f = dict(W.taylor(point, N + 1))
    z = (0,) * n
    v = f.get(z, field.zero) - lam
    if v:
        f[z] = v
    else:
        f.pop(z, None)
    w = [ring.truncate(x) for x in _split_target(ring, f)]
    f = ring.truncate(f)
    even, odd = _subsets(n)
    basis = even + odd
    parity = [len(s) % 2 for s in basis]
    pos = {s: i for i, s in enumerate(basis)}
    d = [[{} for _ in basis] for _ in basis]
    for col, s in enumerate(basis):
        for i in range(n):
            if i in s:
                t = tuple(j for j in s if j != i)
                sgn = _sign(s, i)
                u = ring.variable(i)
                entry = u if sgn > 0 else {e: -c for e, c in u.items()}
                d[pos[t]][col] = ring.add(d[pos[t]][col], entry)
            else:
                t = tuple(sorted(s + (i,)))
                sgn = _sign(s, i)
                entry = w[i] if sgn > 0 else {e: -c for e, c in w[i].items()}
                d[pos[t]][col] = ring.add(d[pos[t]][col], entry)
    mf = MatrixFactorization(ring, basis, parity, d, f, lam, w, tuple(point))
    mf._W = W
    return mf


def koszul_mf(W: LaurentPoly, point, N=None, check_isolated=True) -> MatrixFactorization:
    """Koszul factorisation of ``W - W(p)`` over ``R_N``.

    ``N`` defaults to the nilpotency order of the maximal ideal of the local
    Jacobian ring plus two.
    """
    point = tuple(W.field(x) for x in point)
    if not W.is_critical(point):
        raise DivisionFailure("the point is not critical, W - λ is not in m^2")
    if check_isolated or N is None:
        jac = jacobian(W)
        if is_isolated(W, point, jac) != ISOLATED:
            raise NotIsolated(f"{point} is not an isolated critical point")
        if N is None:
            N = local_jacobian(W, point, jac).max_ideal_nilpotency + 2
    mf = _build(W, point, N)
    if not check_factorization(mf):
        raise DivisionFailure("factorisation identity failed")
    return mf


def check_factorization(mf: MatrixFactorization) -> bool:
    """``f0 f1 = f1 f0 = (W - λ) Id`` exactly in the truncation."""
    ring = mf.ring
    r = mf.rank
    for a, b in ((mf.f0, mf.f1), (mf.f1, mf.f0)):
        prod = _matmul(ring, a, b)
        for i in range(r):
            for j in range(r):
                want = mf.target if i == j else {}
                if prod[i][j] != want:
                    return False
    return True


def entries_in_max_ideal(mf: MatrixFactorization) -> bool:
    z = (0,) * mf.n
    return all(not entry.get(z) for row in mf.d for entry in row)


# ---------------------------------------------------------------------------
# endomorphism complex


class _EndComplex:
    """``End(E)`` over ``R_N`` with ``D(φ) = d φ - (-1)^|φ| φ d``."""

    def __init__(self, mf: MatrixFactorization):
        self.mf = mf
        ring = mf.ring
        self.ring = ring
        self.size = len(mf.basis)
        self.rdim = ring.dim
        self.d = mf.d

    # monomial-major indexing: pivots (smallest index) are lowest-degree terms,
    # which keeps elimination close to the associated graded and limits fill-in
    def index(self, a, b, m):
        return (m * self.size + a) * self.size + b

    def decode(self, idx):
        mab, b = divmod(idx, self.size)
        m, a = divmod(mab, self.size)
        return a, b, m

    def parity(self, a, b):
        return (self.mf.parity[a] + self.mf.parity[b]) % 2

    def labels(self, par):
        out = []
        for m in range(self.rdim):
            for a in range(self.size):
                for b in range(self.size):
                    if self.parity(a, b) == par:
                        out.append(self.index(a, b, m))
        return out

    def column(self, idx):
        a, b, m = self.decode(idx)
        mono = self.ring.monomials[m]
        s = -1 if self.parity(a, b) else 1
        col = {}
        for c in range(self.size):
            x = self.d[c][a]
            if x:
                for k, v in self.ring.shift_vector(x, mono).items():
                    key = self.index(c, b, k)
                    t = col.get(key, 0) + v
                    if t:
                        col[key] = t
                    else:
                        col.pop(key, None)
            y = self.d[b][c]
            if y:
                for k, v in self.ring.shift_vector(y, mono).items():
                    key = self.index(a, c, k)
                    t = col.get(key, 0) - s * v
                    if t:
                        col[key] = t
                    else:
                        col.pop(key, None)
        return col

    def apply(self, vec):
        out = {}
        for idx, a in vec.items():
            for k, v in self.column(idx).items():
                t = out.get(k, 0) + a * v
                if t:
                    out[k] = t
                else:
                    out.pop(k, None)
        return out


def self_decode_m(e, i):
    return e.decode(i)[2]


class _RankCache:
    """Ranks of the endomorphism differential, shared across a sweep."""

    def __init__(self, W, point, value=None):
        self.W, self.point, self.value = W, point, value
        self.mfs, self.ends, self.full, self.high = {}, {}, {}, {}

    def end(self, N):
        if N not in self.ends:
            self.mfs[N] = _build(self.W, self.point, N, self.value)
            self.ends[N] = _EndComplex(self.mfs[N])
        return self.ends[N]

    def full_rank(self, N, par):
        key = (N, par)
        if key not in self.full:
            e = self.end(N)
            self.full[key] = linalg.sparse_rank([e.column(i) for i in e.labels(par)], e.mf.field)
        return self.full[key]

    def high_rank(self, N_big, N, par):
        key = (N_big, N, par)
        if key not in self.high:
            e = self.end(N_big)
            high = {i for i, m in enumerate(e.ring.monomials) if sum(m) >= N}
            cols = [e.column(i) for i in e.labels(par) if self_decode_m(e, i) in high]
            self.high[key] = linalg.sparse_rank(cols, e.mf.field)
        return self.high[key]

    def stable_dims(self, N_big, N):
        """Dimensions of the image of ``H(End over R_N') -> H(End over R_N)`` per parity.

        With ``π`` the (surjective) projection, ``K = ker π`` and ``B, Z`` the
        boundaries and cycles upstairs, ``π(B) = B_N`` and the modular law give
        ``dim = |C_N| - rk D'_P + rk D'|K_P - rk D_N(1-P)``: ranks only, no kernels.
        """
        small = self.end(N)
        dims = []
        for par in (0, 1):
            dims.append(
                len(small.labels(par))
                - self.full_rank(N_big, par)
                + self.high_rank(N_big, N, par)
                - self.full_rank(N, 1 - par)
            )
        return tuple(dims)


def _stable_end_dims(big: MatrixFactorization, small: MatrixFactorization):
    cache = _RankCache(big._W, big.point, big.value)
    cache.mfs[big.ring.N], cache.ends[big.ring.N] = big, _EndComplex(big)
    cache.mfs[small.ring.N], cache.ends[small.ring.N] = small, _EndComplex(small)
    return cache.stable_dims(big.ring.N, small.ring.N)


def _stable_end_dims_kernel(big: MatrixFactorization, small: MatrixFactorization):
    """Same quantity through explicit cycles; slower, kept as a cross-check."""
    field = small.field
    eb, es = _EndComplex(big), _EndComplex(small)
    proj = {i: small.ring.index[m] for i, m in enumerate(big.ring.monomials) if m in small.ring.index}
    dims = []
    for par in (0, 1):
        labels = eb.labels(par)
        kernel, _ = linalg.sparse_kernel([eb.column(i) for i in labels], field)
        ech = linalg.Echelon(field)
        for j in es.labels(1 - par):
            ech.add(es.column(j))
        rb = len(ech)
        for rel in kernel:
            pz = {}
            for pos, c in rel.items():
                a, b, m = eb.decode(labels[pos])
                if m in proj:
                    pz[es.index(a, b, proj[m])] = c
            if pz:
                ech.add(pz)
        dims.append(len(ech) - rb)
    return tuple(dims)


def end_cohomology(W: LaurentPoly, point, n_start=None, n_max=16, max_delta=6):
    """Even and odd dimensions of the endomorphism cohomology over the completion.

    For each ``N`` the stable image from ``N' = N + delta`` is taken once two
    consecutive ``delta`` agree; the sweep over ``N`` stops when two
    consecutive ``N`` agree.  ``n_start`` defaults to
    ``max(2, nilpotency + 1)``.  Returns
    ``{"even", "odd", "N", "N_prime", "stabilized"}``.
    """
    point = tuple(W.field(x) for x in point)
    if n_start is None:
        nilp = local_jacobian(W, point, jacobian(W)).max_ideal_nilpotency
        n_start = max(2, nilp + 1)
    cache = _RankCache(W, point)
    prev = None
    last = None
    for N in range(n_start, n_max + 1):
        found = None
        seen = None
        for delta in range(1, max_delta + 1):
            dims = cache.stable_dims(N + delta, N)
            if dims == seen:
                found = (dims, N + delta - 1)
                break
            seen = dims
        if found is None:
            last = seen
            prev = None
            continue
        if prev is not None and prev[0] == found[0]:
            even, odd = found[0]
            return {
                "even": even,
                "odd": odd,
                "N": N - 1,
                "N_prime": prev[1],
                "stabilized": True,
            }
        prev = found
        last = found[0]
    raise NoStabilization(n_max, last)


def naive_end_cohomology(mf: MatrixFactorization):
    """Cohomology of the endomorphism complex of one truncation (cut-off artefacts included)."""
    e = _EndComplex(mf)
    field = mf.field
    ranks = []
    for par in (0, 1):
        ranks.append(linalg.sparse_rank([e.column(i) for i in e.labels(par)], field))
    sizes = [len(e.labels(0)), len(e.labels(1))]
    return (sizes[0] - ranks[0] - ranks[1], sizes[1] - ranks[1] - ranks[0])


# ---------------------------------------------------------------------------
# nullhomotopies and the tensor bookkeeping


def _epsilon_witness(mf: MatrixFactorization, x):
    """``h = sum a_i ε_i`` for ``x = sum u_i a_i`` (same splitting as ``W - λ``)."""
    ring = mf.ring
    a = [ring.truncate(c) for c in _split_target(ring, x)] if x else [{} for _ in range(mf.n)]
    pos = {s: i for i, s in enumerate(mf.basis)}
    h = {}
    e = _EndComplex(mf)
    for col, s in enumerate(mf.basis):
        for i in range(mf.n):
            if i in s or not a[i]:
                continue
            t = tuple(sorted(s + (i,)))
            sg = _sign(s, i)
            for k, v in ring.shift_vector(a[i], (0,) * mf.n).items():
                key = e.index(pos[t], col, k)
                h[key] = h.get(key, 0) + (v if sg > 0 else -v)
    return {k: v for k, v in h.items() if v}


def m_nullhomotopic(mf: MatrixFactorization, x, solve=False):
    """Whether ``d h + h d = x Id`` has an odd solution ``h``; returns ``(ok, h)``.

    ``x`` is an element of the truncation and must lie in the maximal ideal.
    The candidate ``h = sum a_i ε_i`` with ``x = sum u_i a_i`` is tried first
    and checked exactly; if it fails (or ``solve`` is set) the full linear
    system over the odd endomorphisms is solved.
    """
    ring = mf.ring
    x = ring.truncate(x)
    if x.get((0,) * mf.n):
        raise ValueError("x must lie in the maximal ideal")
    if not x:
        return True, {}
    e = _EndComplex(mf)
    target = {}
    for a in range(e.size):
        for k, v in ring.shift_vector(x, (0,) * mf.n).items():
            target[e.index(a, a, k)] = v
    if not solve:
        h = _epsilon_witness(mf, x)
        if e.apply(h) == target:
            return True, h
    labels = e.labels(1)
    ech = linalg.Echelon(mf.field, track=True)
    for pos, idx in enumerate(labels):
        ech.add(e.column(idx), pos)
    sol = ech.express(target)
    if sol is None:
        return False, None
    h = {labels[pos]: c for pos, c in sol.items() if c}
    if e.apply(h) != target:
        raise AssertionError("nullhomotopy does not verify")
    return True, h


def tensor_with_koszul(mf: MatrixFactorization):
    """``T ⊗ K(u)`` with ``K(u)`` the Koszul resolution of the point.

    Returns ``(D, parity)`` for the total differential
    ``d_T ⊗ 1 + σ ⊗ d_K`` (``σ`` the parity sign of ``T``), and the parities
    of the Koszul summands.
    """
    ring = mf.ring
    n = mf.n
    kb = [s for k in range(n + 1) for s in combinations(range(n), k)]
    kpos = {s: i for i, s in enumerate(kb)}
    dk = [[{} for _ in kb] for _ in kb]
    for col, s in enumerate(kb):
        for i in s:
            t = tuple(j for j in s if j != i)
            u = ring.variable(i)
            if _sign(s, i) < 0:
                u = {e: -c for e, c in u.items()}
            dk[kpos[t]][col] = ring.add(dk[kpos[t]][col], u)
    tb = len(mf.basis)
    size = tb * len(kb)
    D = [[{} for _ in range(size)] for _ in range(size)]
    for a in range(tb):
        for b in range(tb):
            x = mf.d[a][b]
            if x:
                for k in range(len(kb)):
                    D[a * len(kb) + k][b * len(kb) + k] = x
    for a in range(tb):
        sg = -1 if mf.parity[a] else 1
        for k in range(len(kb)):
            for l in range(len(kb)):
                y = dk[k][l]
                if y:
                    D[a * len(kb) + k][a * len(kb) + l] = y if sg > 0 else {e: -c for e, c in y.items()}
    parity = [len(s) % 2 for s in kb]
    return D, parity


def koszul_tensor_parity(mf: MatrixFactorization, end_dim_E=None, end_dim_T=None):
    """Multiplicities of ``T`` and ``T[1]`` in ``T ⊗ K(u)``, with the dimension check.

    Every coordinate ``u_i`` must act nullhomotopically on ``T``; the Koszul
    summands then split off, giving ``(2^(n-1), 2^(n-1))``.  With endomorphism
    dimensions supplied, ``2^(2n-2) dim End(E) = k^2 dim End(T)`` is checked and
    ``k`` is solved for.
    """
    n = mf.n
    ring = mf.ring
    for i in range(n):
        ok, _ = m_nullhomotopic(mf, ring.variable(i))
        if not ok:
            raise HomotopyObstruction(f"u_{i + 1} does not act nullhomotopically")
    D, kparity = tensor_with_koszul(mf)
    sq = _matmul(ring, D, D)
    for i in range(len(D)):
        for j in range(len(D)):
            want = mf.target if i == j else {}
            if sq[i][j] != want:
                raise AssertionError("tensor product is not a matrix factorisation")
    even = kparity.count(0)
    odd = kparity.count(1)
    out = {"even": even, "odd": odd, "rank": mf.rank}
    z = (0,) * n
    f0 = [[e.get(z, mf.field.zero) for e in row] for row in mf.f0]
    f1 = [[e.get(z, mf.field.zero) for e in row] for row in mf.f1]
    out["l"] = mf.rank - linalg.rank(f0, mf.field) - linalg.rank(f1, mf.field)
    if end_dim_E is not None:
        end_dim_T = end_dim_T if end_dim_T is not None else end_dim_E
        lhs = 2 ** (2 * n - 2) * end_dim_E
        out["identity_holds"] = lhs == mf.rank**2 * end_dim_T
        k2, rem = divmod(lhs, end_dim_T)
        k = int(round(k2**0.5))
        out["deduced_k"] = k if rem == 0 and k * k == k2 else None
    return out
