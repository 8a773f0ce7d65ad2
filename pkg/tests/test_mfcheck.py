from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from superpot.critlocus import NotIsolated, find_critical_points
from superpot.laurent import LaurentPoly
from superpot.mfcheck import (
    _stable_end_dims,
    _stable_end_dims_kernel,
    check_factorization,
    end_cohomology,
    entries_in_max_ideal,
    koszul_mf,
    koszul_tensor_parity,
    m_nullhomotopic,
)
from superpot.mutate import builtin
from superpot.scalars import GF, QQ

Z = ["z"]


def test_rank_one_factorization():
    W = LaurentPoly.parse("z + 1/z", Z)
    mf = koszul_mf(W, (1,), N=6)
    assert mf.rank == 1 and mf.value == 2
    ring = mf.ring
    # (z - 1) w = W - 2 modulo m^6, with W - 2 = u^2 / (1 + u)
    assert ring.mul(ring.variable(0), mf.w[0]) == mf.target
    assert mf.target == {(k,): QQ((-1) ** k) for k in range(2, 6)}
    assert check_factorization(mf) and entries_in_max_ideal(mf)


def test_clifford_and_quadric_ranks():
    mf = koszul_mf(builtin("clifford2"), (1, 1), N=5)
    assert mf.rank == 2 and check_factorization(mf)
    F3 = GF(3)
    W = builtin("quadric", F3)
    (cp,) = find_critical_points(W)
    mf3 = koszul_mf(W, cp.coords, N=cp.local.max_ideal_nilpotency + 2)
    assert mf3.rank == 4 and check_factorization(mf3)


def test_end_cohomology_examples():
    res = end_cohomology(LaurentPoly.parse("z + 1/z", Z), (1,))
    assert (res["even"], res["odd"]) == (1, 1) and res["stabilized"]
    res2 = end_cohomology(builtin("clifford2"), (1, 1))
    assert res2["even"] + res2["odd"] == 4


def test_degenerate_input_is_flagged():
    # in characteristic 2 every point of z^2 + 1/z^2 is critical: not isolated
    W = LaurentPoly.parse("z^2 + 1/z^2", Z, GF(2))
    with pytest.raises(NotIsolated):
        koszul_mf(W, (1,), N=4)


def test_nullhomotopy_examples():
    mf = koszul_mf(builtin("clifford2"), (1, 1), N=5)
    assert m_nullhomotopic(mf, {}) == (True, {})
    ok, h = m_nullhomotopic(mf, mf.ring.variable(0))
    assert ok and h
    with pytest.raises(ValueError):
        m_nullhomotopic(mf, mf.ring.const(1))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tensor_parity(n):
    W = builtin(f"clifford{n}")
    mf = koszul_mf(W, (1,) * n, N=4)
    total = 2**n
    tp = koszul_tensor_parity(mf, total)
    half = 2 ** (n - 1)
    assert (tp["even"], tp["odd"]) == (half, half)
    assert tp["identity_holds"] and tp["deduced_k"] == half


# ---------------------------------------------------------------------------
# properties

CASES = [
    ("clifford1", 0, (1,)),
    ("clifford1", 3, (2,)),
    ("clifford2", 0, (1, 1)),
    ("clifford2", 5, (1, 1)),
    ("bl4", 0, (-1, -1)),
    ("bl4", 5, (3, 3)),
    ("cubic", 0, (1, 1)),
]


@pytest.mark.parametrize("name,char,point", CASES)
def test_factorization_and_parity_symmetry(name, char, point):
    F = QQ if char == 0 else GF(char)
    W = builtin(name, F)
    pt = tuple(F(c) for c in point)
    mf = koszul_mf(W, pt, N=5)
    assert check_factorization(mf)
    for i in range(W.n_vars):
        assert m_nullhomotopic(mf, mf.ring.variable(i))[0]
    tp = koszul_tensor_parity(mf)
    assert tp["even"] == tp["odd"]


@pytest.mark.parametrize("name,char,point", CASES[:5])
def test_stable_end_dims_routes_agree(name, char, point):
    F = QQ if char == 0 else GF(char)
    W = builtin(name, F)
    pt = tuple(F(c) for c in point)
    small = koszul_mf(W, pt, N=3)
    big = small.with_order(5)
    assert _stable_end_dims(big, small) == _stable_end_dims_kernel(big, small)


@given(st.integers(0, 10**6), st.sampled_from(CASES[:4]))
def test_witness_and_solve_agree(s, case):
    name, char, point = case
    F = QQ if char == 0 else GF(char)
    W = builtin(name, F)
    pt = tuple(F(c) for c in point)
    mf = koszul_mf(W, pt, N=4)
    rng = random.Random(s)
    ring = mf.ring
    x = {}
    for m in ring.monomials:
        if any(m) and rng.random() < 0.4:
            x[m] = F(rng.randint(-3, 3))
    x = {m: c for m, c in x.items() if c}
    ok1, _ = m_nullhomotopic(mf, x)
    ok2, _ = m_nullhomotopic(mf, x, solve=True)
    assert ok1 and ok2
