from __future__ import annotations

import itertools

import sympy
from hypothesis import given
from hypothesis import strategies as st

from helpers import P
from superpot import polys
from superpot.critlocus import jacobian
from superpot.groebner import (
    PolyIdeal,
    buchberger,
    colon,
    ideal_dimension,
    is_reduced,
    normal_form,
    quotient_basis,
    s_polynomials_reduce_to_zero,
    saturate,
)
from superpot.mutate import builtin
from superpot.scalars import GF, QQ

XY = ["x", "y"]
XYZ = ["x", "y", "z"]


def gb(texts, names=XY, field=QQ):
    return buchberger([P(t, names, field) for t in texts], field=field, n_vars=len(names))


def test_single_generator():
    G = gb(["x^2"])
    assert G.basis == [P("x^2", XY)]


def test_inconsistent_system():
    assert gb(["x - 1", "x - 2"]).is_unit()
    assert ideal_dimension(gb(["x - 1", "x - 2"])) == -1


def test_membership_consequences():
    G = gb(["x^2*y - 1", "x*y^2 - 1"])
    assert not normal_form(P("x - y", XY), G)
    assert not normal_form(P("x^3 - 1", XY), G)
    assert normal_form(P("1", XY), G) == P("1", XY)


def test_normal_form_consistent_on_f7_solutions():
    F = GF(7)
    G = gb(["x^2*y - 1", "x*y^2 - 1"], field=F)
    r = normal_form(P("x^3", XY, F), G)
    sols = [
        (F(a), F(b))
        for a, b in itertools.product(range(1, 7), repeat=2)
        if F(a) ** 2 * F(b) == 1 and F(a) * F(b) ** 2 == 1
    ]
    assert sols
    for pt in sols:
        assert polys.evaluate(r, pt, F) == pt[0] ** 3 == F.one


def test_dimension_examples():
    assert jacobian(builtin("clifford2")).krull_dim == 0
    assert jacobian(builtin("cubic", GF(3))).krull_dim == 1


def test_colon_and_saturation_examples():
    I = PolyIdeal(QQ, 2, [P("x*y", XY)])
    assert saturate(I, P("x", XY)).basis == [P("y", XY)]
    J = PolyIdeal(QQ, 2, [P("x^2", XY), P("y", XY)])
    assert saturate(J, P("1", XY)).basis == gb(["x^2", "y"]).basis
    F = GF(2)
    W = builtin("quadric", F)
    assert jacobian(W).gb.is_unit()


def test_quotient_basis_examples():
    assert quotient_basis(gb(["x^2", "y"])) == [(0, 0), (1, 0)]
    assert len(quotient_basis(jacobian(builtin("clifford2")).gb)) == 3
    assert len(quotient_basis(jacobian(builtin("quadric")).gb)) == 3


# ---------------------------------------------------------------------------
# properties and the sympy oracle

small_poly = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(-3, 3).filter(bool), min_size=1, max_size=4
)


def _dict(d, field):
    return {e: field(c) for e, c in d.items() if field(c)}


def _expr(d, x, y):
    return sum(int(c) * x**a * y**b for (a, b), c in d.items())


@given(st.lists(small_poly, min_size=1, max_size=3))
def test_basis_matches_sympy_over_q(gens):
    x, y = sympy.symbols("x y")
    G = buchberger([_dict(g, QQ) for g in gens], field=QQ, n_vars=2)
    theirs = sympy.groebner([_expr(g, x, y) for g in gens], x, y, order="grevlex", domain="QQ")
    ours = sorted(sympy.srepr(sympy.Poly(sum(c * x**a * y**b for (a, b), c in g.items()), x, y).monic().as_expr()) for g in G.basis)
    want = sorted(sympy.srepr(sympy.Poly(e, x, y).monic().as_expr()) for e in theirs.exprs)
    assert ours == want


@given(st.sampled_from([2, 3, 5, 7]), st.lists(small_poly, min_size=1, max_size=3))
def test_basis_audit(p, gens):
    F = GF(p)
    gs = [g for g in (_dict(g, F) for g in gens) if g]
    if not gs:
        return
    G = buchberger(gs, field=F, n_vars=2)
    assert s_polynomials_reduce_to_zero(G)
    assert is_reduced(G)
    assert all(not normal_form(g, G) for g in gs)


@given(st.lists(small_poly, min_size=1, max_size=2), small_poly)
def test_saturation_contains_colon_contains_ideal(gens, f):
    I = PolyIdeal(QQ, 2, [_dict(g, QQ) for g in gens])
    f = _dict(f, QQ)
    C = colon(I, f)
    S = saturate(I, f)
    assert all(not normal_form(g, C) for g in I.generators)
    assert all(not normal_form(g, S) for g in C.basis)


def _count_points(Gd, p, k_field_elems):
    return sum(
        1 for pt in itertools.product(k_field_elems, repeat=2) if all(not polys.evaluate(g, pt, Gd.field) for g in Gd.basis)
    )


@given(st.lists(small_poly, min_size=1, max_size=2))
def test_dimension_zero_iff_point_counts_bounded(gens):
    from superpot.scalars import ExtensionField, UniPoly

    p = 5
    F = GF(p)
    gs = [g for g in (_dict(g, F) for g in gens) if g]
    if not gs:
        return
    G = buchberger(gs, field=F, n_vars=2)
    dim = ideal_dimension(G)
    if dim < 0:
        return
    # a zero-dimensional variety has at most dim(S/I) points over any extension;
    # a curve of degree <= 4 has many points over F_25 (Hasse-Weil minus infinity)
    K = ExtensionField(F, UniPoly(F, [2, 0, 1]), "t")
    elems = [K.from_poly(UniPoly(F, [a, b])) for a in range(p) for b in range(p)]
    GK = buchberger([{e: K(c.v) for e, c in g.items()} for g in G.basis], field=K, n_vars=2)
    n2 = _count_points(GK, p, elems)
    if dim == 0:
        assert n2 <= len(quotient_basis(G))
    else:
        assert n2 >= p
