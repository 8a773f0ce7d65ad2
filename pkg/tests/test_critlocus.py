from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from superpot import polys
from superpot.artin import fingerprint
from superpot.critlocus import (
    ISOLATED,
    NON_ISOLATED,
    IsolatedPart,
    NotCritical,
    _isolating_ideal,
    bound_checks,
    eigen_points,
    exhaustive_points,
    find_critical_points,
    is_isolated,
    isolated_part,
    jacobian,
    local_jacobian,
    potential_image,
    truncation_oracle,
)
from superpot.groebner import quotient_basis
from superpot.laurent import LaurentPoly
from superpot.mutate import builtin
from superpot.scalars import GF, QQ, UniPoly


def pts(F, *coords):
    return [tuple(F(c) for c in p) for p in coords]


def test_jacobian_examples():
    J = jacobian(builtin("clifford2"))
    assert (J.krull_dim, J.quotient_dim()) == (0, 3)
    assert jacobian(builtin("quadric", GF(2))).is_unit()
    assert jacobian(builtin("cubic", GF(3))).krull_dim == 1


def test_bl4_points_over_q():
    found = find_critical_points(builtin("bl4"), "eigen")
    rat = [p for p in found if p.residue_degree == 1]
    assert [p.coords for p in rat] == pts(QQ, (-1, -1))
    (xi,) = [p for p in found if p.residue_degree == 2]
    x = UniPoly.x(QQ)
    assert all(q == x**2 - x - 1 for q in xi.coordinate_polys)
    assert xi.milnor == 1


def test_exhaustive_examples():
    F = GF(5)
    assert set(exhaustive_points(builtin("bl4", F))) == set(pts(F, (4, 4), (3, 3)))
    F3 = GF(3)
    W = LaurentPoly.parse("z + 1/z", ["z"], F3)
    assert set(exhaustive_points(W)) == set(pts(F3, (1,), (2,)))


def test_isolation_examples():
    assert is_isolated(builtin("clifford2"), (1, 1)) == ISOLATED
    assert is_isolated(builtin("cubic", GF(3)), (1, 1)) == NON_ISOLATED
    assert is_isolated(builtin("cubic"), (1, 1)) == ISOLATED
    with pytest.raises(NotCritical):
        is_isolated(builtin("clifford2"), (2, 1))


def test_local_jacobian_examples():
    F3 = GF(3)
    W = builtin("quadric", F3)
    (cp,) = find_critical_points(W, "eigen")
    assert cp.coords[1] == F3.one
    loc = local_jacobian(W, cp.coords)
    assert fingerprint(loc.algebra)["radical_filtration"] == [1, 1, 1]
    assert local_jacobian(builtin("bl4"), (-1, -1)).dim == 1
    loc5 = local_jacobian(builtin("bl4", GF(5)), (3, 3))
    assert (loc5.dim, loc5.max_ideal_nilpotency) == (2, 2)


def test_isolated_part_examples():
    assert isolated_part(builtin("quadric")).total_dim == 3
    part = isolated_part(builtin("clifford2", GF(3)))
    assert [p.coords for p in part.points] == pts(GF(3), (1, 1)) and part.total_dim == 3
    W = builtin("cubic", GF(3))
    cands = [p for p in find_critical_points(W, "exhaustive")]
    assert isolated_part(W, cands).total_dim == 0


def test_potential_image_examples():
    W = builtin("clifford2")
    loc = local_jacobian(W, (1, 1))
    assert potential_image(W, loc) == [3]
    F3 = GF(3)
    Wq = builtin("quadric", F3)
    (cp,) = find_critical_points(Wq, "eigen")
    A = cp.local.algebra
    img = potential_image(Wq, cp.local)
    shifted = A.add(img, A.scale(-cp.critical_value, A.unit))
    assert not any(A.power(shifted, 3))


def test_bound_checks_examples():
    assert bound_checks(isolated_part(builtin("quadric")), 4)["ok"]
    for n in (1, 2, 3):
        rep = bound_checks(isolated_part(builtin(f"clifford{n}")), n + 1)
        assert rep["ok"] and rep["total_dim"] == n + 1
    part = isolated_part(builtin("clifford2"))
    bad = bound_checks(IsolatedPart(part.points, part.locals, 4), 3)
    assert not bad["dim_ok"] and not bad["ok"]


# ---------------------------------------------------------------------------
# catalog-wide properties

TWO_VAR = ["clifford2", "bl4", "cubic", "bl4_uv", "bl4_st", "bl4_upvp", "bl4_sptp"]


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("name", TWO_VAR)
def test_exhaustive_matches_eigen(name, p):
    W = builtin(name, GF(p))
    jac = jacobian(W)
    if jac.is_unit() or jac.krull_dim != 0:
        return
    eig = [c.coords for c in eigen_points(W, jac) if c.residue_degree == 1]
    ex = exhaustive_points(W)
    assert set(ex) == set(eig) and len(ex) == len(eig)


@pytest.mark.parametrize("p", [0, 3, 5, 7])
@pytest.mark.parametrize("name", TWO_VAR + ["clifford1", "clifford3", "quadric"])
def test_point_accounting_and_hessian(name, p):
    F = QQ if p == 0 else GF(p)
    W = builtin(name, F)
    jac = jacobian(W)
    if jac.is_unit() or jac.krull_dim != 0:
        return
    found = eigen_points(W, jac)
    assert sum(c.residue_degree * c.milnor for c in found) == len(quotient_basis(jac.gb))
    for c in found:
        if c.coords is not None and W.hessian_det(c.coords):
            assert c.milnor == 1


@pytest.mark.parametrize(
    "name,p,point",
    [("bl4", 5, (3, 3)), ("quadric", 3, None), ("clifford2", 3, (1, 1)), ("cubic", 0, (1, 1))],
)
def test_truncation_oracle_agrees(name, p, point):
    F = QQ if p == 0 else GF(p)
    W = builtin(name, F)
    jac = jacobian(W)
    if point is None:
        point = eigen_points(W, jac)[0].coords
    status, value, _ = truncation_oracle(jac, point, max_n=24)
    assert status == is_isolated(W, point, jac) == ISOLATED
    assert value == local_jacobian(W, point, jac).dim


def test_truncation_oracle_sees_non_isolated_point():
    W = builtin("cubic", GF(3))
    status, _, _ = truncation_oracle(jacobian(W), (1, 1), max_n=16)
    assert status != ISOLATED


@given(st.integers(0, 10**6))
def test_local_ring_independent_of_localizer(s):
    rng = random.Random(s)
    F = GF(5)
    W = builtin("bl4", F)
    jac = jacobian(W)
    point = (F(3), F(3))
    sat = _isolating_ideal(jac, point)
    base = fingerprint(local_jacobian(W, point, jac).algebra)
    # any element of I : m^oo that is a unit at the point is a valid localizer
    while True:
        s_el = {}
        for g in sat.basis:
            c = F(rng.randint(0, 4))
            if c:
                s_el = polys.add(s_el, polys.scale(g, c))
        if rng.random() < 0.5:
            s_el = polys.mul(s_el, s_el)
        if s_el and polys.evaluate(s_el, point, F):
            break
    assert fingerprint(local_jacobian(W, point, jac, s=s_el).algebra) == base
