from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from helpers import to_sympy, upoly
from superpot.scalars import (
    GF,
    QQ,
    ExtensionField,
    FieldError,
    UniPoly,
    factor_univariate,
    field_for_char,
    is_irreducible,
    minimal_polynomial,
)
from superpot import linalg

PRIMES = [2, 3, 5, 7, 11]


def test_factor_cyclotomic_over_q():
    x = UniPoly.x(QQ)
    assert factor_univariate(x**3 - 1) == [(x - 1, 1), (x**2 + x + 1, 1)]


def test_factor_over_f5():
    F = GF(5)
    y = UniPoly.x(F)
    assert factor_univariate(y**3 - 4) == [(y + 1, 1), (y**2 + 4 * y + 1, 1)]
    # the golden-ratio polynomial has the double root 3 mod 5
    assert factor_univariate(y**2 - y - 1) == [(y - 3, 2)]


def test_minimal_polynomial_examples():
    x = UniPoly.x(QQ)
    assert minimal_polynomial(linalg.identity(QQ, 3), QQ) == x - 1
    J = [[Fraction(1 if j == i + 1 else 0) for j in range(3)] for i in range(3)]
    assert minimal_polynomial(J, QQ) == x**3


def test_bad_characteristic():
    with pytest.raises(FieldError):
        field_for_char(4)
    with pytest.raises(FieldError):
        GF(1)


coeff_lists = st.lists(st.integers(-6, 6), min_size=2, max_size=7).filter(lambda c: c[-1] != 0)


def _expand(factors, field):
    out = UniPoly.constant(field, 1)
    for f, m in factors:
        out = out * f**m
    return out


@given(coeff_lists)
def test_factorization_reexpands_over_q(cs):
    f = upoly(cs)
    facs = factor_univariate(f)
    assert _expand(facs, QQ) == f.monic()
    assert all(g.lc() == 1 and g.degree >= 1 for g, _ in facs)


@given(coeff_lists)
def test_factorization_matches_sympy_over_q(cs):
    z = sympy.Symbol("z")
    f = upoly(cs)
    ours = sorted((g.degree, m) for g, m in factor_univariate(f))
    _, theirs = sympy.factor_list(to_sympy(f, z), z)
    assert ours == sorted((sympy.degree(g, z), m) for g, m in theirs)


@given(st.sampled_from(PRIMES), coeff_lists)
def test_factorization_matches_sympy_over_fp(p, cs):
    F = GF(p)
    f = upoly(cs, F)
    if f.degree < 1:
        return
    z = sympy.Symbol("z")
    facs = factor_univariate(f)
    assert _expand(facs, F) == f.monic()
    theirs = sympy.Poly(to_sympy(f, z), z, modulus=p).factor_list()[1]
    assert sorted((g.degree, m) for g, m in facs) == sorted((g.degree(), m) for g, m in theirs)


def _has_root(f, field):
    return any(not f(x) for x in field.elements())


@given(st.sampled_from([2, 3, 5, 7]), st.lists(st.integers(0, 6), min_size=2, max_size=5))
def test_irreducibility_against_root_and_quadratic_search(p, cs):
    F = GF(p)
    f = upoly(cs + [1], F)
    d = f.degree
    if d < 1:
        return
    if d <= 3:
        want = d == 1 or not _has_root(f, F)
    else:
        # degree 4: no roots and no monic quadratic factor
        quads = [UniPoly(F, [a, b, 1]) for a in range(p) for b in range(p)]
        want = not _has_root(f, F) and all(not (f % q).is_zero() for q in quads)
    assert is_irreducible(f) == want


@given(st.sampled_from(["Q"] + PRIMES), st.integers(0, 10**6))
def test_field_axioms(spec, s):
    F = QQ if spec == "Q" else GF(spec)
    rng = random.Random(s)
    a, b, c = (F.random_element(rng) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if a:
        assert a * (F.one / a) == F.one


@given(st.integers(0, 10**6))
def test_extension_field_axioms(s):
    K = ExtensionField(GF(3), UniPoly(GF(3), [1, 0, 1]), "i")
    rng = random.Random(s)
    a, b, c = (K.random_element(rng) for _ in range(3))
    assert a * (b + c) == a * b + a * c
    if a:
        assert a * a.inverse() == K.one


@given(st.integers(0, 10**6), st.sampled_from(["Q", 5]))
def test_minimal_polynomial_annihilates(s, spec):
    F = QQ if spec == "Q" else GF(spec)
    rng = random.Random(s)
    n = rng.randint(1, 4)
    M = [[F.random_element(rng, 3) if spec == "Q" else F.random_element(rng) for _ in range(n)] for _ in range(n)]
    mp = minimal_polynomial(M, F)
    assert linalg.is_zero_matrix(linalg.poly_of_matrix(list(mp.coeffs), M, F))
