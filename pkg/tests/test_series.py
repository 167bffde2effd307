from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rpmbounds import (
    PotentialParams,
    StateLabel,
    compute_coefficient_derivatives,
    compute_coefficients,
    exact_case_params,
    exact_series_reference,
)
from rpmbounds.errors import EmptyRequestError, ParameterDomainError
from rpmbounds.precision import working_context
from rpmbounds.series import coefficient_polynomials


def test_exact_case_first_two_coefficients(exact_params):
    s = compute_coefficients(exact_params, Fraction(12, 5), 2, digits=50)
    ctx = working_context(50)
    assert abs(s.values[0] - ctx.mpf("0.8")) < ctx.mpf(10) ** -48
    assert abs(s.values[1] - ctx.mpf("0.02")) < ctx.mpf(10) ** -48


def test_harmonic_ground_state_coefficients_vanish():
    s = compute_coefficients(PotentialParams(0, 0, 0), 3, 3, digits=30)
    assert list(s.values) == [1, 0, 0]


def test_leading_coefficient_is_energy_over_2l3():
    s = compute_coefficients(PotentialParams(1, 1, 1), "5.65", 1, digits=30)
    ctx = working_context(30)
    assert abs(s.values[0] - ctx.mpf("1.13")) < ctx.mpf(10) ** -29


@pytest.mark.parametrize("l", [-1, 0, 1, 3])
def test_first_derivative_coefficient(l):
    s = compute_coefficient_derivatives(PotentialParams(Fraction(7, 3), 2, l), "1.7", 1, digits=40)
    assert s.derivatives[0] == working_context(40).mpf(1) / (2 * l + 3)


def test_harmonic_second_derivative_coefficient():
    s = compute_coefficient_derivatives(PotentialParams(0, 0, 0), 3, 2, digits=40)
    ctx = working_context(40)
    assert abs(s.derivatives[1] - ctx.mpf(2) / 15) < ctx.mpf(10) ** -39


def test_derivatives_match_central_differences():
    params = PotentialParams(1, 1, 0)
    ctx = working_context(60)
    h = ctx.mpf(10) ** -20
    E = ctx.mpf(4)
    g = compute_coefficient_derivatives(params, E, 8, digits=60).derivatives
    up = compute_coefficients(params, E + h, 8, digits=60).values
    dn = compute_coefficients(params, E - h, 8, digits=60).values
    for j in range(8):
        fd = (up[j] - dn[j]) / (2 * h)
        assert abs(fd - g[j]) <= ctx.mpf(10) ** -30 * abs(g[j])


def test_derivatives_match_central_differences_to_forty_terms():
    # with h = 10^-(digits/3) the central difference carries ~2 digits/3 of accuracy
    digits = 90
    params = PotentialParams(Fraction(1, 2), Fraction(3, 2), 1)
    ctx = working_context(digits)
    h = ctx.mpf(10) ** -30
    E = ctx.mpf("6.25")
    g = compute_coefficient_derivatives(params, E, 41, digits=digits).derivatives
    up = compute_coefficients(params, E + h, 41, digits=digits).values
    dn = compute_coefficients(params, E - h, 41, digits=digits).values
    for j in range(41):
        fd = (up[j] - dn[j]) / (2 * h)
        assert abs(fd - g[j]) <= ctx.mpf(10) ** -(digits - 35) * abs(g[j]) + ctx.mpf(10) ** -(digits - 5)


@settings(max_examples=40, deadline=None)
@given(
    c=st.fractions(min_value=0, max_value=2, max_denominator=50),
    l=st.sampled_from([-1, 0, 1, 2]),
)
def test_exact_case_identity_forty_terms(c, l):
    b, E = exact_case_params(c, l)
    digits = 60
    ctx = working_context(digits)
    got = compute_coefficients(PotentialParams(b, c, l), E, 40, digits=digits).values
    want = exact_series_reference(c, 40)
    for j, (x, y) in enumerate(zip(got, want)):
        y = ctx.mpf(y.numerator) / y.denominator
        assert abs(x - y) <= ctx.mpf(10) ** (12 - digits) * max(1, abs(y)), j


def test_exact_case_identity_is_exact_over_rationals():
    for c, l in [(Fraction(1, 10), 0), (Fraction(0), -1), (Fraction(1, 2), 1), (Fraction(2), 2)]:
        b, E = exact_case_params(c, l)
        polys = coefficient_polynomials(PotentialParams(b, c, l), 20)
        assert [p(E) for p in polys] == exact_series_reference(c, 20)


def test_polynomial_degrees():
    polys = coefficient_polynomials(PotentialParams(1, 1, 1), 10)
    assert [p.degree for p in polys] == list(range(1, 11))


def test_polynomials_agree_with_numeric_recurrence():
    params = PotentialParams(Fraction(3, 7), Fraction(5, 4), 2)
    E = Fraction(19, 3)
    polys = coefficient_polynomials(params, 15)
    ctx = working_context(50)
    num = compute_coefficients(params, E, 15, digits=50).values
    for p, x in zip(polys, num):
        v = p(E)
        assert abs(x - ctx.mpf(v.numerator) / v.denominator) <= ctx.mpf(10) ** -45 * max(1, abs(x))


def test_determinism():
    params = PotentialParams(1, 1, 1)
    a = compute_coefficient_derivatives(params, "5.6513933", 30, digits=80)
    b = compute_coefficient_derivatives(params, "5.6513933", 30, digits=80)
    assert [x._mpf_ for x in a.values] == [x._mpf_ for x in b.values]
    assert [x._mpf_ for x in a.derivatives] == [x._mpf_ for x in b.derivatives]


@pytest.mark.parametrize("l", [-1, 0, 1, 2])
def test_harmonic_closed_form(l):
    E = StateLabel(0, l).unperturbed_energy
    s = compute_coefficients(PotentialParams(0, 0, l), E, 25, digits=40)
    assert all(v == 0 for v in s.values[1:])


def test_exact_case_params_examples():
    assert exact_case_params(Fraction(1, 10), 0) == (Fraction(-23, 50), Fraction(12, 5))
    assert exact_case_params(0, 0) == (0, 3)
    assert exact_case_params(Fraction(1, 2), 1) == (Fraction(-9, 2), 0)


def test_exact_series_reference_examples():
    assert exact_series_reference(Fraction(1, 10), 3) == [Fraction(4, 5), Fraction(1, 50), Fraction(-1, 500)]
    assert exact_series_reference(0, 2) == [1, 0]
    assert exact_series_reference(1, 4) == [-1, 2, -2, 2]


def test_parameter_validation():
    with pytest.raises(ParameterDomainError):
        PotentialParams(1, -1, 0)
    with pytest.raises(ParameterDomainError):
        PotentialParams(1, 1, -2)
    with pytest.raises(ParameterDomainError):
        StateLabel(-1, 0)
    with pytest.raises(EmptyRequestError):
        compute_coefficients(PotentialParams(1, 1, 0), 3, 0, digits=30)
    with pytest.raises(ParameterDomainError):
        exact_case_params(-1, 0)


def test_params_accept_decimal_and_rational_text():
    p = PotentialParams("-0.46", "1/10", 0)
    assert p.b == Fraction(-23, 50) and p.c == Fraction(1, 10)
    assert PotentialParams(0.1, 1, 0).b == Fraction(1, 10)


def test_state_label_syntax():
    s = StateLabel.parse("1:-1")
    assert (s.n, s.l) == (1, -1)
    assert str(StateLabel(0, 1)) == "0:1"
    with pytest.raises(ParameterDomainError):
        StateLabel.parse("1,1")
