"""精确代数：Laurent 多项式环与分式域"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lucas_identities.core.algebra import (
    LaurentPoly, RationalFunction, factor_list, format_rational, poly_arith, poly_gcd, ratfunc_arith, render_poly,
    render_ratfunc, symbols,
)
from lucas_identities.core.exceptions import (
    DivisionByZeroError, EvaluationSingularityError, UnsupportedOperationError,
)

P, Q = symbols("P", "Q")


def laurent(low=-1, high=2, max_terms=3):
    exponents = st.tuples(st.integers(low, high), st.integers(low, high))
    return st.dictionaries(exponents, st.integers(-3, 3), max_size=max_terms).map(
        lambda d: LaurentPoly(("P", "Q"), d))


def polys(max_terms=3):
    return laurent(0, 2, max_terms)


def ratfuncs():
    return st.tuples(polys(), polys().filter(lambda p: not p.is_zero())).map(lambda nd: RationalFunction(*nd))


points = st.tuples(
    st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda x: x != 0),
    st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda x: x != 0),
)


# ===== 环律 =====

@settings(max_examples=60, deadline=None)
@given(laurent(), laurent(), laurent())
def test_laurent_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@settings(max_examples=40, deadline=None)
@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_field_laws(a, b, c):
    assert a + b == b + a
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()
    if not b.is_zero():
        assert (a / b) * b == a
        assert b * b.inverse() == 1


@settings(max_examples=40, deadline=None)
@given(ratfuncs(), ratfuncs(), points)
def test_evaluation_is_a_homomorphism(a, b, point):
    assignment = {"P": point[0], "Q": point[1]}
    try:
        va, vb = a.evaluate(assignment), b.evaluate(assignment)
        product = (a * b).evaluate(assignment)
        total = (a + b).evaluate(assignment)
    except EvaluationSingularityError:
        return
    assert product == va * vb
    assert total == va + vb


# ===== 规范形式 =====

def test_canonical_form_is_structural():
    assert RationalFunction(P.num * Q.num, Q.num) == P
    assert (P * P - Q * Q) / (P - Q) == P + Q
    assert (P / Q) * Q == P
    # 分母首项系数为正
    value = RationalFunction(1) / (-P)
    assert value == -(RationalFunction(1) / P)
    assert value.den.leading_coefficient() > 0
    assert RationalFunction(0) == 0
    assert RationalFunction(0).den == 1


def test_laurent_values_clear_negative_exponents():
    value = RationalFunction(LaurentPoly.variable("Q", -3) * (P * P - Q).num)
    assert value.num == (P * P - Q).num
    assert value.den == LaurentPoly.variable("Q", 3)
    assert render_ratfunc(-value) == "(-P^2 + Q)/Q^3"


def test_render_poly_grlex_order():
    poly = (P ** 5 - 4 * P ** 3 * Q + 3 * P * Q ** 2).num
    assert render_poly(poly) == "P^5 - 4*P^3*Q + 3*P*Q^2"
    assert render_poly(LaurentPoly()) == "0"
    assert render_poly(LaurentPoly.variable("Q", -2)) == "Q^(-2)"


def test_format_rational():
    assert format_rational(Fraction(3)) == "3"
    assert format_rational(Fraction(-2, 4)) == "-1/2"


# ===== gcd 与因式分解 =====

def test_poly_gcd():
    a = ((P - Q) * (P + Q)).num
    b = ((P - Q) ** 2).num
    assert poly_gcd(a, b) == (P - Q).num
    assert poly_gcd(LaurentPoly(), LaurentPoly()).is_zero()
    assert poly_gcd(a, LaurentPoly()) == a


def test_poly_gcd_is_primitive_with_positive_leading_coefficient():
    a = (2 * (Q - P) * P).num
    b = (4 * (Q - P)).num
    g = poly_gcd(a, b)
    assert g == (P - Q).num
    assert g.leading_coefficient() > 0


def test_poly_gcd_rejects_laurent_input():
    with pytest.raises(UnsupportedOperationError):
        poly_gcd(LaurentPoly.variable("P", -1), LaurentPoly.variable("Q"))


def test_factor_list():
    factors = factor_list((P * P - Q * Q).num)
    assert sorted(render_poly(f) for f, _ in factors) == ["P + Q", "P - Q"]
    assert factor_list(LaurentPoly.constant(5)) == []
    squared = factor_list(((P * P - Q) ** 2 * P).num)
    assert {render_poly(f): k for f, k in squared} == {"P": 1, "P^2 - Q": 2}


# ===== 错误 =====

def test_division_by_zero():
    with pytest.raises(DivisionByZeroError):
        P / RationalFunction(0)
    with pytest.raises(DivisionByZeroError):
        RationalFunction(0).inverse()


def test_negative_power_of_non_monomial():
    with pytest.raises(UnsupportedOperationError):
        (P + Q).num ** -1
    assert (P + Q) ** -1 == RationalFunction(1) / (P + Q)


def test_evaluation_singularity_names_factor():
    value = RationalFunction(1) / ((P - 1) * Q)
    with pytest.raises(EvaluationSingularityError) as info:
        value.evaluate({"P": 1, "Q": 2})
    assert info.value.factor == "P - 1"
    with pytest.raises(EvaluationSingularityError):
        LaurentPoly.variable("Q", -1).evaluate({"Q": 0})


# ===== 按名称分派的运算 =====

LP, LQ = LaurentPoly.variable("P"), LaurentPoly.variable("Q")


def test_poly_arith_examples():
    assert poly_arith("mul", LP + LQ, LP - LQ) == LP * LP - LQ * LQ
    assert poly_arith("pow", LP * LP - LQ, exponent=0) == LaurentPoly.constant(1)
    u6 = poly_arith("mul", LP, LP ** 4 - 4 * LP ** 2 * LQ + 3 * LQ ** 2)
    assert render_poly(u6) == "P^5 - 4*P^3*Q + 3*P*Q^2"
    assert poly_arith("add", LP, 2) == LP + LaurentPoly.constant(2)
    assert poly_arith("sub", LP, LP).is_zero()
    assert poly_arith("pow", 2 * LP * LQ, exponent=-2) == LaurentPoly.monomial({"P": -2, "Q": -2}, Fraction(1, 4))


def test_poly_arith_errors():
    with pytest.raises(UnsupportedOperationError):
        poly_arith("pow", LP + LQ, exponent=-1)
    with pytest.raises(UnsupportedOperationError):
        poly_arith("div", LP, LQ)


def test_ratfunc_arith_examples():
    c1 = Q * Q / (P * P)
    other = (P * P - Q) ** 2 / (P * P)
    assert ratfunc_arith("add", c1, ratfunc_arith("sub", other, other)) == c1
    x = (P * P - Q) / Q ** 3
    assert ratfunc_arith("mul", x, 1 / x) == RationalFunction(1)
    reduced = ratfunc_arith("div", P * P * Q - Q * Q, P * Q)
    assert reduced == (P * P - Q) / P
    assert reduced.den == LaurentPoly.variable("P")
    assert ratfunc_arith("div", 3, 6) == RationalFunction(Fraction(1, 2))


def test_ratfunc_arith_errors():
    with pytest.raises(DivisionByZeroError):
        ratfunc_arith("div", P, P - P)
    with pytest.raises(DivisionByZeroError):
        ratfunc_arith("div", Q, 0)
    with pytest.raises(UnsupportedOperationError):
        ratfunc_arith("pow", P, Q)
