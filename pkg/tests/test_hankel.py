from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rpmbounds import (
    EnergyPolynomial,
    HankelSpec,
    PotentialParams,
    build_matrix,
    compute_coefficients,
    determinant,
    determinant_with_derivative,
    exact_case_params,
    hankel_determinant,
    symbolic_hankel,
)
from rpmbounds.errors import CoefficientLengthError, ParameterDomainError, SizeError
from rpmbounds.hankel import evaluate, hadamard_bound, zero_floor
from rpmbounds.polynomial import linear_factor
from rpmbounds.precision import default_digits, guard_digits, working_context


def cofactor(matrix):
    """Laplace expansion along the first row."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        term = matrix[0][j] * cofactor(minor)
        total += -term if j % 2 else term
    return total


def as_fraction(x):
    sign, man, exp, _ = x._mpf_
    return Fraction(-man if sign else man) * Fraction(2) ** exp


def test_spec_validation():
    with pytest.raises(ParameterDomainError):
        HankelSpec(1, 0)
    with pytest.raises(ParameterDomainError):
        HankelSpec(2, -1)
    assert HankelSpec(3, 1).required_coefficients == 7
    assert HankelSpec(20, 0).highest_index == 39


def test_build_matrix_index_formula():
    f = list(range(10))
    assert build_matrix(f, HankelSpec(2, 0)) == [[1, 2], [2, 3]]
    assert build_matrix(f, HankelSpec(2, 1)) == [[2, 3], [3, 4]]
    assert build_matrix(f, HankelSpec(3, 2)) == [[3, 4, 5], [4, 5, 6], [5, 6, 7]]


def test_build_matrix_length_error():
    with pytest.raises(CoefficientLengthError):
        build_matrix([0, 1, 2], HankelSpec(2, 0))
    build_matrix([0, 1, 2, 3], HankelSpec(2, 0))


def test_harmonic_matrix_is_zero():
    coeffs = compute_coefficients(PotentialParams(0, 0, 0), 3, 6, digits=30)
    M = build_matrix(coeffs, HankelSpec(3, 0))
    assert all(x == 0 for row in M for x in row)
    assert determinant(M) == 0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=9), min_size=12, max_size=12))
def test_build_matrix_is_symmetric(values):
    M = build_matrix(values, HankelSpec(4, 3))
    assert all(M[i][j] == M[j][i] for i in range(4) for j in range(4))


def test_determinant_small_cases():
    ctx = working_context(40)
    assert determinant([[ctx.one, ctx.zero], [ctx.zero, ctx.one]]) == 1
    f1, f2, f3 = ctx.mpf("0.3"), ctx.mpf("-1.7"), ctx.mpf("2.25")
    assert abs(determinant([[f1, f2], [f2, f3]]) - (f1 * f3 - f2 * f2)) < ctx.mpf(10) ** -38


def test_determinant_exact_on_fractions():
    M = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 3), Fraction(1, 4)]]
    assert determinant(M) == Fraction(1, 72)


def test_lu_matches_cofactor_expansion():
    # 50 random symmetric matrices, D <= 4, rational entries rounded to 200 bits
    rng = random.Random(20240611)
    ctx = working_context(61)
    assert ctx.prec >= 200
    ctx = ctx.clone()
    ctx.prec = 200
    for _ in range(50):
        n = rng.randint(2, 4)
        entries = {}
        for i in range(n):
            for j in range(i, n):
                entries[i, j] = entries[j, i] = Fraction(rng.randint(-99, 99), rng.randint(1, 40))
        M = [[ctx.mpf(entries[i, j].numerator) / entries[i, j].denominator for j in range(n)] for i in range(n)]
        exact = cofactor([[as_fraction(x) for x in row] for row in M])
        lu = determinant(M)
        # one ulp at the natural scale of det(M), its Hadamard bound
        ulp = ctx.mpf(2) ** (ctx.mag(hadamard_bound(M)) - ctx.prec)
        assert abs(as_fraction(lu) - exact) <= 10 * as_fraction(ulp)


def test_determinant_sign_matches_closed_form():
    params = PotentialParams(1, 1, 1)
    ctx = working_context(60)
    f = compute_coefficients(params, "5.65", 4, digits=60).values
    H, _ = determinant_with_derivative(params, "5.65", HankelSpec(2, 0), digits=60)
    closed = f[1] * f[3] - f[2] ** 2
    assert ctx.sign(H) == ctx.sign(closed)
    assert abs(H - closed) <= ctx.mpf(10) ** -55 * abs(closed)


def test_harmonic_determinant_vanishes_exactly():
    assert hankel_determinant(PotentialParams(0, 0, 0), 3, HankelSpec(2, 0)) == 0
    H, dH = determinant_with_derivative(PotentialParams(0, 0, 0), "2.5", HankelSpec(2, 0))
    assert H != 0 and dH != 0


@pytest.mark.parametrize(
    "params, energy, spec",
    [
        (PotentialParams(1, 1, 1), "5.65", HankelSpec(2, 0)),
        (PotentialParams(1, 1, 1), "5.6513", HankelSpec(8, 1)),
        (PotentialParams(Fraction(1, 2), 2, -1), "1.9", HankelSpec(5, 0)),
        (PotentialParams(3, Fraction(1, 4), 0), "7.25", HankelSpec(12, 0)),
    ],
)
def test_derivative_matches_finite_difference(params, energy, spec):
    digits = 90
    ctx = working_context(digits)
    E = ctx.mpf(energy)
    h = ctx.mpf(10) ** -(digits // 3)
    _, dH = determinant_with_derivative(params, E, spec, digits=digits)
    up = hankel_determinant(params, E + h, spec, digits=digits)
    dn = hankel_determinant(params, E - h, spec, digits=digits)
    fd = (up - dn) / (2 * h)
    assert abs(fd - dH) <= ctx.mpf(10) ** -(digits // 3) * abs(dH)


def test_singular_matrix_uses_column_replacement():
    # at the harmonic root the matrix is zero, so H and dH both vanish
    from rpmbounds.errors import DerivativeUnavailableError

    for D in (2, 3):
        with pytest.raises(DerivativeUnavailableError):
            determinant_with_derivative(PotentialParams(0, 0, 0), 3, HankelSpec(D, 0))
    # rank D - 1: the column-replacement expansion still gives a nonzero slope
    ctx = working_context(40)
    M = [[ctx.mpf(1), ctx.mpf(2)], [ctx.mpf(2), ctx.mpf(4)]]
    Mp = [[ctx.mpf(0), ctx.mpf(0)], [ctx.mpf(0), ctx.mpf(1)]]
    from rpmbounds.hankel import column_replacement_derivative

    assert determinant(M) == 0
    assert column_replacement_derivative(M, Mp) == 1


def test_symbolic_exact_case_factorization(exact_params):
    factor = linear_factor(Fraction(12, 5))
    assert str(factor) == "5E - 12"
    for D in (2, 3, 4):
        poly = symbolic_hankel(exact_params, HankelSpec(D, 0))
        assert poly.multiplicity(Fraction(12, 5)) == D - 1
        q = poly
        for _ in range(D - 1):
            q = q.exact_div(factor)
        assert q(Fraction(12, 5)) != 0


def test_symbolic_harmonic_has_root_three():
    poly = symbolic_hankel(PotentialParams(0, 0, 0), HankelSpec(2, 0))
    assert poly(3) == 0


@pytest.mark.parametrize("params", [PotentialParams(1, 1, 1), PotentialParams(Fraction(2, 3), Fraction(1, 7), -1)])
def test_symbolic_degree_bookkeeping(params):
    assert symbolic_hankel(params, HankelSpec(2, 0)).degree <= 6


@pytest.mark.parametrize("D, d", [(2, 0), (3, 1), (4, 0)])
def test_symbolic_agrees_with_numeric(D, d):
    params = PotentialParams(Fraction(3, 4), Fraction(2, 5), 1)
    spec = HankelSpec(D, d)
    poly = symbolic_hankel(params, spec)
    rng = random.Random(D * 10 + d)
    digits = 60
    ctx = working_context(digits)
    for _ in range(20):
        E = Fraction(rng.randint(-400, 1600), rng.randint(1, 97))
        exact = poly(E)
        num = hankel_determinant(params, E, spec, digits=digits)
        want = ctx.mpf(exact.numerator) / exact.denominator
        # compare on the natural scale of H (its Hadamard bound)
        inner = working_context(digits + guard_digits(D))
        scale = evaluate(params, E, spec, inner).scale
        assert abs(num - want) <= ctx.mpf(10) ** (10 - digits) * scale


def test_symbolic_limits():
    with pytest.raises(SizeError):
        symbolic_hankel(PotentialParams(1, 1, 0), HankelSpec(7, 0))
    with pytest.raises(SizeError):
        symbolic_hankel(PotentialParams(1, 1, 0), HankelSpec(9, 1))


@pytest.mark.parametrize("c, l", [(Fraction(1, 10), 0), (Fraction(1, 2), 1), (Fraction(2), -1), (Fraction(3, 4), 2)])
def test_exact_case_root_to_zero_floor(c, l):
    b, E = exact_case_params(c, l)
    params = PotentialParams(b, c, l)
    for D in range(2, 11):
        digits = default_digits(D)
        inner = working_context(digits + guard_digits(D))
        for d in (0, 1):
            value = evaluate(params, E, HankelSpec(D, d), inner)
            assert abs(value.det) < zero_floor(digits, value.scale)


@pytest.mark.parametrize("c, l", [(Fraction(1, 10), 0), (Fraction(1, 2), 1), (Fraction(2), -1), (Fraction(1, 3), 2)])
def test_exact_case_symbolic_multiplicity(c, l):
    b, E = exact_case_params(c, l)
    params = PotentialParams(b, c, l)
    k = 2 * l + 3
    factor = EnergyPolynomial.linear(k, -k * k * (1 - 2 * c))
    for D in (2, 3, 4):
        for d in (0, 1):
            poly = symbolic_hankel(params, HankelSpec(D, d))
            q = poly
            for _ in range(D - 1):
                q = q.exact_div(factor)
            assert divmod(q, factor)[1] != EnergyPolynomial(), (D, d)


def test_hadamard_bound_dominates():
    ctx = working_context(30)
    M = [[ctx.mpf(3), ctx.mpf(1)], [ctx.mpf(1), ctx.mpf(-2)]]
    assert abs(determinant(M)) <= hadamard_bound(M)
