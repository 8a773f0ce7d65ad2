from __future__ import annotations

import itertools
import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from superpot.laurent import LaurentPoly, NotLaurent, ParseError, RationalFunc, parse_rational
from superpot.mutate import builtin
from superpot.scalars import GF, QQ

XY = ["x", "y"]


def L(text, names=XY, field=QQ):
    return LaurentPoly.parse(text, names, field)


def test_log_derivative_examples():
    assert L("z", ["z"]).log_derivative(0) == L("z", ["z"])
    assert L("x + y + 1/(x*y)").log_derivative(0) == L("x - 1/(x*y)")
    assert L("7").log_derivative(1).is_zero()


def test_evaluate_examples():
    assert L("x + y + 1/(x*y)").evaluate((1, 1)) == 3
    assert builtin("cubic").evaluate((1, 1)) == 21
    assert builtin("bl4").evaluate((-1, -1)) == -3


def test_periods_examples():
    W = builtin("clifford2")
    assert W.periods(3) == [1, 0, 0, 6]
    assert L("x + 1/x", ["x"]).periods(0) == [1]


def test_as_laurent_examples():
    assert parse_rational("(x^2 + x)/x", XY).as_laurent() == L("x + 1")
    with pytest.raises(NotLaurent):
        parse_rational("1/(1 + y)", XY).as_laurent()
    uv = ["u", "v"]
    images = [parse_rational("u*(1+v)", uv), parse_rational("v", uv)]
    got = builtin("bl4").substitute(images, uv).as_laurent()
    # oracle: symbolic expansion of the composite
    u, v = sympy.symbols("u v")
    x, y = u * (1 + v), v
    want = sympy.expand(sympy.cancel((1 + x + y) * (1 + 1 / x) * (1 + 1 / y) - 3))
    assert sympy.expand(sympy.sympify(repr(got).replace("^", "**")) - want) == 0


def test_hessian_examples():
    assert L("z + 1/z", ["z"]).hessian_det((1,)) == 2
    assert builtin("cubic", GF(3)).hessian_det((1, 1)) == 0
    assert builtin("cubic").hessian_det((1, 1)) != 0


def test_parse_errors():
    with pytest.raises(ParseError):
        L("x + + ")
    with pytest.raises(ParseError):
        L("x ** y")


def test_json_roundtrip():
    W = builtin("quadric", GF(7))
    assert LaurentPoly.from_json(W.to_json(), GF(7)) == W


# ---------------------------------------------------------------------------
# properties

terms = st.dictionaries(
    st.tuples(st.integers(-2, 2), st.integers(-2, 2)), st.integers(-3, 3), min_size=1, max_size=5
)


def lp(d, field=QQ):
    return LaurentPoly(field, tuple(XY), {e: field(c) for e, c in d.items() if c % (field.characteristic or 10**9)})


@given(terms, st.sampled_from([5, 7]))
def test_critical_iff_log_derivatives_vanish(d, p):
    F = GF(p)
    W = lp(d, F)
    x, y = sympy.symbols("x y")
    expr = sum(c * x**a * y**b for (a, b), c in d.items())
    gx, gy = sympy.diff(expr, x), sympy.diff(expr, y)
    for pt in itertools.product(range(1, p), repeat=2):
        vals = [sympy.Rational(g.subs({x: pt[0], y: pt[1]})) for g in (gx, gy)]
        brute = all(v.p * pow(v.q, -1, p) % p == 0 for v in vals)
        assert W.is_critical(tuple(F(c) for c in pt)) == brute


unimodular = st.sampled_from([((1, 0), (0, 1)), ((1, 1), (0, 1)), ((0, 1), (1, 0)), ((2, 1), (1, 1)), ((1, -1), (1, 0))])


def _monomial_images(M):
    names = ("x", "y")
    return [LaurentPoly.monomial(QQ, names, row).to_rational() for row in M]


@given(terms, unimodular)
def test_monomial_change_is_laurent_and_preserves_periods(d, M):
    W = lp(d)
    V = W.substitute(_monomial_images(M), XY).as_laurent()
    assert V.periods(3) == W.periods(3)


@given(terms, terms, st.integers(0, 1))
def test_leibniz(a, b, i):
    W, V = lp(a), lp(b)
    assert (W * V).log_derivative(i) == W.log_derivative(i) * V + W * V.log_derivative(i)


def test_identity_substitution():
    W = builtin("bl4")
    ident = [RationalFunc.variable(QQ, tuple(XY), i) for i in range(2)]
    assert W.substitute(ident, XY).as_laurent() == W


@given(st.integers(0, 10**6))
def test_taylor_matches_evaluation(s):
    rng = random.Random(s)
    F = GF(7)
    W = builtin("bl4", F)
    pt = (F(rng.randint(1, 6)), F(rng.randint(1, 6)))
    T = W.taylor(pt, 3)
    assert T.get((0, 0), F.zero) == W.evaluate(pt)
