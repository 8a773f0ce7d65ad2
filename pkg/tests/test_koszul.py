from __future__ import annotations

import pytest

from superpot import koszul
from superpot.artin import ArtinAlgebra, truncated_polynomial_algebra
from superpot.critlocus import ISOLATED, find_critical_points, jacobian
from superpot.koszul import (
    build,
    cohomology_dims,
    d_squared_zero,
    euler_characteristic,
    is_regular_sequence,
    localized_cohomology,
    localized_cohomology_at,
)
from superpot.laurent import LaurentPoly
from superpot.mutate import builtin
from superpot.scalars import GF, QQ, UniPoly
from superpot.verify import catalog_entry


def test_one_variable_truncated():
    A = truncated_polynomial_algebra(QQ, UniPoly(QQ, [0, 0, 0, 1]), "z")
    K = build(A, [A.basis_vector(1)])
    assert K.ranks() == [3, 3]
    from superpot import linalg

    assert linalg.sparse_rank(K.differentials[1], QQ) == 2
    assert cohomology_dims(K) == [1, 1]


def test_clifford_quotient_complex():
    W = builtin("clifford2")
    A = ArtinAlgebra.from_quotient(jacobian(W).gb, list(W.names))
    gens = [A.coords(W.log_derivative(i).clear_denominators()[0]) for i in range(2)]
    K = build(A, gens)
    assert d_squared_zero(K, full=True)


def test_quadric_quotient_ranks():
    W = builtin("quadric")
    A = ArtinAlgebra.from_quotient(jacobian(W).gb, list(W.names))
    K = build(A, [A.basis_vector(i) for i in range(3)])
    assert K.ranks() == [3 * r for r in (1, 3, 3, 1)]
    assert euler_characteristic(cohomology_dims(K)) == 0


def test_quadric_completed_homology():
    W = builtin("quadric")
    (cp,) = find_critical_points(W)
    res = localized_cohomology_at(W, cp)
    assert res["stabilized"]
    assert [cp.residue_degree * d for d in res["dims"]] == [3, 0, 0, 0]


def test_regular_sequence_examples():
    W = builtin("quadric")
    (cp,) = find_critical_points(W)
    assert is_regular_sequence(W, cp=cp)
    assert not is_regular_sequence(builtin("cubic", GF(3)), (1, 1))
    assert is_regular_sequence(LaurentPoly.parse("z + 1/z", ["z"]), (1,))


@pytest.mark.parametrize("name", ["clifford1", "clifford2", "bl4", "cubic", "bl4_uv"])
@pytest.mark.parametrize("char", [0, 3, 5, 7])
def test_regular_iff_isolated(name, char):
    e = catalog_entry(name, char)
    for cp in e.points:
        assert is_regular_sequence(e.W, cp=cp) == (cp.isolated == ISOLATED)


@pytest.mark.parametrize("name,char", [("bl4", 5), ("clifford2", 3), ("cubic", 0), ("clifford1", 0)])
def test_concentration_and_stable_image_routes(name, char):
    e = catalog_entry(name, char)
    for cp in e.points:
        if cp.coords is None or cp.isolated != ISOLATED:
            continue
        res = localized_cohomology(e.W, cp.coords)
        assert res["dims"] == [cp.milnor] + [0] * e.W.n_vars
        N, Np = res["N"], res["N_prime"]
        small = koszul.completed_complex(e.W, cp.coords, N)
        big = koszul.completed_complex(e.W, cp.coords, Np)
        proj = koszul._project_index(big.base, small.base)
        assert koszul.stable_image_dims(big, small, proj) == koszul.stable_image_dims_kernel(big, small, proj)
        assert d_squared_zero(big, full=True)
        assert euler_characteristic(cohomology_dims(small)) == 0
