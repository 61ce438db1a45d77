from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, strategies as st

from torictool.errors import PreconditionError
from torictool.exact import (
    GaussianRational,
    LinearForm,
    PhaseScalar,
    PhaseVector,
    SymbolBasis,
    as_rational,
    format_linear,
    is_integral_combination,
    phase_from_terms,
    symbol_values,
)

B = SymbolBasis(("sqrt2", "i"))
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def phases(draw):
    return PhaseScalar(B, draw(rationals), (draw(rationals), draw(rationals)))


def test_phase_from_terms_reduces_rational_part():
    p = phase_from_terms(B, [(F(7, 6), None), (2, "sqrt2")])
    assert p.rational_part == F(1, 6)
    assert p.coeffs == (F(2), F(0))


def test_phase_from_terms_undeclared_symbol():
    with pytest.raises(PreconditionError):
        phase_from_terms(B, [(1, "pi")])


def test_negative_rational_wraps_into_unit_interval():
    assert phase_from_terms(B, [(F(-1, 3), None)]).rational_part == F(2, 3)


def test_floats_are_refused():
    with pytest.raises(TypeError):
        as_rational(0.5)


@given(phases(), phases(), phases())
def test_phase_addition_associative_and_reduced(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert 0 <= (a + b).rational_part < 1


@given(phases(), st.integers(-5, 5))
def test_integer_scaling_respects_mod_one(a, k):
    scaled = a * k
    assert isinstance(scaled, PhaseScalar)
    assert scaled == (a.as_form() * k).mod1()


def test_rational_scaling_of_a_class_is_refused():
    with pytest.raises(TypeError):
        phase_from_terms(B, [(F(1, 2), None)]) * F(1, 2)


def test_integral_combination_examples():
    phi = PhaseVector.from_forms([LinearForm(B, 0, (3, 4)), LinearForm(B, 0, (2, 6)),
                                  LinearForm(B, 0, (-1, 2))])
    assert is_integral_combination(phi, (1, 0, 1), 1)
    assert not is_integral_combination(phi, (2, 0, 0), 0)
    zero = PhaseVector.from_forms([LinearForm.zero(B)] * 2)
    assert is_integral_combination(zero, (3, 4), 1)


def test_integral_combination_dimension_mismatch():
    phi = PhaseVector.from_forms([LinearForm.zero(B)] * 2)
    with pytest.raises(PreconditionError):
        is_integral_combination(phi, (1, 1, 1), 0)


def test_format_linear():
    assert format_linear(LinearForm(B, F(1, 6), (1, -6))) == "1/6 + 1*sqrt2 - 6*i"
    assert format_linear(LinearForm(B, 0, (F(-1, 2), 0))) == "-1/2*sqrt2"
    assert format_linear(LinearForm.zero(B)) == "0"


gauss = st.builds(GaussianRational, rationals, rationals)


@given(gauss, gauss, gauss)
def test_gaussian_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a


def test_gaussian_power_and_abs():
    z = GaussianRational(1, 1)
    assert z ** 2 == GaussianRational(0, 2)
    assert z ** -1 == GaussianRational(F(1, 2), F(-1, 2))
    with mpmath.workprec(100):
        assert abs(abs(z) - mpmath.sqrt(2)) < mpmath.mpf(2) ** -90


def test_symbol_defaults_and_overrides():
    with mpmath.workprec(200):
        vals = symbol_values(SymbolBasis(("sqrt5", "i", "pi")))
        assert abs(vals["sqrt5"] ** 2 - 5) < mpmath.mpf(2) ** -190
        assert vals["i"] == mpmath.mpc(0, 1)
        custom = symbol_values(SymbolBasis(("a",)), {"a": "0.25+0.5I"})
        assert custom["a"] == mpmath.mpc("0.25", "0.5")
    with pytest.raises(PreconditionError):
        symbol_values(SymbolBasis(("a",)))


def test_evaluate_linear_form():
    with mpmath.workprec(120):
        v = LinearForm(B, F(1, 2), (2, 1)).evaluate(symbol_values(B))
        assert abs(v - (0.5 + 2 * mpmath.sqrt(2) + 1j)) < mpmath.mpf(2) ** -110
