from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pcwillmore.algebra import (
    INF,
    GaussianRational,
    MeromorphicOneForm,
    Polynomial,
    RationalFunction,
    antiderivative,
    differentiate,
    evaluate,
    parse_rational,
    residue_at,
)
from pcwillmore.errors import NonzeroResidue, ParseError, PoleProximity

from oracles import sympy_residue

G = GaussianRational
R = RationalFunction.parse


def form(text):
    return MeromorphicOneForm(R(text))


# --- parsing -------------------------------------------------------------------

def test_parse_polynomial_literal():
    f = R("z^2 + 1")
    assert f.den == Polynomial([1])
    assert f.num == Polynomial([1, 0, 1])


def test_parse_reduces_common_factor():
    f = R("(z+1)/(z^2-1)")
    assert f.num == Polynomial([1])
    assert f.den == Polynomial([-1, 1])


def test_parse_error_reports_offset():
    with pytest.raises(ParseError) as err:
        parse_rational("1/(z-")
    assert err.value.position == 5


@pytest.mark.parametrize("text", ["z^", "(z+1", "z $ 2", "", "1/0"])
def test_parse_rejects_malformed(text):
    with pytest.raises((ParseError, ZeroDivisionError)):
        parse_rational(text)


def test_gaussian_coefficients_parse_exactly():
    f = R("(1/2 + 3/4*i)*z")
    assert f.num.coeffs[1] == G(Fraction(1, 2), Fraction(3, 4))


# --- calculus ------------------------------------------------------------------

@pytest.mark.parametrize(
    "f, df",
    [("z^2", "2*z"), ("1/z", "-1/z^2"), ("(z+1)/(z-1)", "-2/(z-1)^2")],
)
def test_differentiate_examples(f, df):
    assert differentiate(R(f)) == R(df)


@pytest.mark.parametrize(
    "coeff, point, expected",
    [("2/z", G(0), G(2)), ("1/z^2", G(0), G(0)), ("1/(z-1)", G(1), G(1))],
)
def test_residue_examples(coeff, point, expected):
    assert residue_at(form(coeff), point) == expected


def test_residue_of_curve_form():
    # f = (1/z, z): f1 df2 - f2 df1 = (1/z) + z/z^2 = 2/z
    f1, f2 = R("1/z"), R("z")
    omega = MeromorphicOneForm(f1 * f2.derivative() - f2 * f1.derivative())
    assert residue_at(omega, G(0)) == G(2)
    assert residue_at(omega, INF) == G(-2)


@pytest.mark.parametrize("coeff, prim", [("z^2", "z^3/3"), ("1/z^2", "-1/z")])
def test_antiderivative_examples(coeff, prim):
    assert antiderivative(form(coeff)) == R(prim)


def test_antiderivative_refuses_log_term():
    with pytest.raises(NonzeroResidue) as err:
        antiderivative(form("2/z"))
    assert err.value.value == G(2)


def test_evaluate_examples():
    assert abs(evaluate(R("z^2+1"), 1j)) < 1e-15
    assert evaluate(R("1/z"), 2.0) == pytest.approx(0.5)
    with pytest.raises(PoleProximity):
        evaluate(R("1/z"), 0.0)


@pytest.mark.parametrize(
    "coeff, point",
    [("(z^2+1)/((z-1)^2*(z+2*i))", 1), ("(z^2+1)/((z-1)^2*(z+2*i))", -2j),
     ("(3*z+i)/(z^2+1)", 1j), ("z^3/((z-1/2)^3)", 0.5)],
)
def test_residues_match_sympy(coeff, point):
    exact = residue_at(form(coeff), G.from_complex(complex(point)))
    assert complex(exact) == pytest.approx(sympy_residue(coeff, point), abs=1e-12)


def test_residue_at_infinity_matches_sympy():
    coeff = "(z^3+2)/(z^2*(z-i))"
    assert complex(residue_at(form(coeff), INF)) == pytest.approx(sympy_residue(coeff, None), abs=1e-12)


# --- randomized properties ------------------------------------------------------------

small = st.integers(-4, 4)
gauss = st.builds(G, small, small)


@st.composite
def polynomials(draw, max_degree=3, nonzero=False):
    coeffs = draw(st.lists(gauss, min_size=1, max_size=max_degree + 1))
    p = Polynomial(coeffs)
    if nonzero and p.is_zero():
        p = Polynomial([G(1)])
    return p


@st.composite
def rationals(draw):
    num = draw(polynomials())
    roots = draw(st.lists(st.builds(G, small, small), max_size=3))
    return RationalFunction(num, Polynomial.from_roots(roots))


def _all_points(f):
    return [loc for loc, _ in f.den_roots()] + [INF]


@given(rationals())
def test_exact_derivative_has_no_residues(f):
    omega = MeromorphicOneForm(f.derivative())
    for p in _all_points(f):
        assert residue_at(omega, p) == 0


@given(rationals(), rationals())
def test_residue_theorem(f, g):
    omega = MeromorphicOneForm(f * g.derivative() + f)
    total = sum((r.residue for r in omega.residues()), G(0))
    assert total == 0 or abs(complex(total)) < 1e-9


@given(rationals())
def test_antiderivative_inverts_differentiate(f):
    back = antiderivative(MeromorphicOneForm(f.derivative()))
    assert (back - f).is_constant()


@given(rationals())
def test_differentiate_inverts_antiderivative(f):
    omega = MeromorphicOneForm(f.derivative())
    assert differentiate(antiderivative(omega)) == omega.coeff


@given(rationals())
def test_print_parse_round_trip(f):
    assert parse_rational(f.to_text()) == f


@given(rationals(), st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_evaluation_matches_coefficients(f, x):
    if any(abs(x - complex(r)) < 1e-3 for r, _ in f.den_roots()):
        return
    num = np.polyval([complex(c) for c in reversed(f.num.coeffs)], x)
    den = np.polyval([complex(c) for c in reversed(f.den.coeffs)], x)
    assert complex(f(x)) == pytest.approx(num / den, rel=1e-10, abs=1e-10)
