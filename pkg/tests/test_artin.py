from __future__ import annotations

import random

from hypothesis import given
from hypothesis import strategies as st

from helpers import P
from superpot import linalg
from superpot.artin import (
    ArtinAlgebra,
    change_basis,
    check_idempotents,
    eigen_split,
    fingerprint,
    is_frobenius,
    is_local_factor,
    local_decomposition,
    pairing_orthogonal,
    product_algebra,
    truncated_polynomial_algebra,
)
from superpot.critlocus import jacobian
from superpot.groebner import buchberger
from superpot.mutate import builtin
from superpot.scalars import GF, QQ, UniPoly
from superpot.verify import cubic_pairing, cubic_qh, random_crt_algebra, random_invertible


def kz(coeffs, field=QQ, name="z"):
    return truncated_polynomial_algebra(field, UniPoly(field, coeffs), name)


def test_from_quotient_examples():
    A = ArtinAlgebra.from_quotient(buchberger([P("x^2", ["x"])], field=QQ, n_vars=1))
    assert A.dim == 2
    x = A.coords(P("x", ["x"]))
    assert not any(A.mul(x, x))
    assert ArtinAlgebra.from_quotient(jacobian(builtin("clifford2")).gb).dim == 3
    Q = ArtinAlgebra.from_quotient(jacobian(builtin("quadric")).gb, ["x", "y", "z"])
    y = Q.coords(P("y", ["x", "y", "z"]))
    assert Q.element_minpoly(y) == UniPoly(QQ, [-4, 0, 0, 1])


def test_decomposition_examples():
    assert sorted(f.dim for f in local_decomposition(kz([-1, 0, 0, 1]))) == [1, 2]
    (f,) = local_decomposition(kz([-1, 0, 0, 1], GF(3)))
    assert f.dim == 3
    A = cubic_qh()
    facs = local_decomposition(A)
    assert sorted(f.dim for f in facs) == [1, 8]
    V = [A.field(x) for x in (48, 21, 1, -7, -7, -7, -7, -7, -7)]
    small = next(f for f in facs if f.dim == 1)
    assert linalg.rank([small.idempotent, V], QQ) == 1


def test_pairing_examples():
    A = kz([0, 0, 1])
    (f,) = local_decomposition(A)
    assert pairing_orthogonal(A, [[0, 1], [1, 0]], [f])
    C = cubic_qh()
    assert pairing_orthogonal(C, cubic_pairing(), local_decomposition(C))
    assert is_frobenius(C, cubic_pairing())
    # k x k on the basis (1, z), z^2 = z: the idempotents are z and 1 - z and
    # the form below pairs them to 1
    B = kz([0, -1, 1])
    assert not pairing_orthogonal(B, [[1, 1], [1, 0]], local_decomposition(B))


def test_fingerprint_examples():
    fp = fingerprint(kz([-4, 0, 0, 1], name="y"))
    assert fp["dim"] == 3 and fp["radical_filtration"] == [3]
    assert fp["factors"] == [{"dim": 3, "residue_degree": 3, "radical_filtration": [3]}]
    fp3 = fingerprint(kz([-1, 3, -3, 1], GF(3), "y"))
    assert fp3["radical_filtration"] == [1, 1, 1]
    kk = product_algebra([kz([0, 1]), kz([0, 1])])
    assert [f["dim"] for f in fingerprint(kk)["factors"]] == [1, 1]


def test_eigen_split_examples():
    N = kz([0, 0, 0, 1])
    (blk,) = eigen_split(N, N.basis_vector(1))
    assert blk.factor == UniPoly.x(QQ) and blk.dim == 3
    A = cubic_qh()
    H = A.basis_vector(1)
    blocks = {b.eigenvalue: b for b in eigen_split(A, H)}
    assert blocks[21].dim == 1 and blocks[-6].dim == 8
    big = blocks[-6]
    # H + 6 is nilpotent on the complement of V
    M = linalg.mat_add(A.mult_matrix(H), linalg.mat_scale(QQ(6), linalg.identity(QQ, 9)))
    for v in big.basis:
        w = v
        for _ in range(8):
            w = linalg.matvec(M, w)
        assert not any(w)
    # so are the E_i + 2
    E1 = A.basis_vector(3)
    M1 = linalg.mat_add(A.mult_matrix(E1), linalg.mat_scale(QQ(2), linalg.identity(QQ, 9)))
    for v in big.basis:
        w = v
        for _ in range(8):
            w = linalg.matvec(M1, w)
        assert not any(w)


def test_c1_eigenvalue_matches_critical_value():
    A = cubic_qh()
    F = A.field
    c1 = A.scale(F(3), A.basis_vector(1))
    for k in range(3, 9):
        c1 = A.add(c1, A.scale(F(-1), A.basis_vector(k)))
    V = [F(x) for x in (48, 21, 1, -7, -7, -7, -7, -7, -7)]
    assert A.mul(c1, V) == A.scale(builtin("cubic").evaluate((1, 1)), V)


# ---------------------------------------------------------------------------
# properties


@given(st.integers(0, 10**6), st.sampled_from(["Q", 5]))
def test_crt_decomposition(s, spec):
    F = QQ if spec == "Q" else GF(spec)
    rng = random.Random(s)
    A, dims = random_crt_algebra(rng, F)
    facs = local_decomposition(A)
    assert sorted(f.dim for f in facs) == sorted(dims)
    assert sum(f.dim for f in facs) == A.dim
    assert check_idempotents(A, facs)
    assert all(is_local_factor(A, f) for f in facs)


@given(st.integers(0, 10**6), st.sampled_from(["Q", 3, 5]))
def test_fingerprint_basis_invariance(s, spec):
    F = QQ if spec == "Q" else GF(spec)
    rng = random.Random(s)
    A, _ = random_crt_algebra(rng, F, max_dim=6)
    T = random_invertible(rng, F, A.dim)
    assert fingerprint(change_basis(A, T)) == fingerprint(A)


def test_factor_elements_are_units_or_nilpotent():
    A = cubic_qh(GF(5))
    for f in local_decomposition(A):
        assert is_local_factor(A, f)
