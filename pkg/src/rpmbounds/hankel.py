"""Hankel matrices of series coefficients and their determinants."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import (
    CoefficientLengthError,
    DerivativeUnavailableError,
    ParameterDomainError,
    SizeError,
)
from .polynomial import EnergyPolynomial
from .precision import default_digits, guard_digits, to_real, working_context
from .series import (
    PotentialParams,
    SeriesCoefficients,
    coefficient_polynomials,
    compute_coefficient_derivatives,
)

SYMBOLIC_MAX_DIMENSION = 6


@dataclass(frozen=True)
class HankelSpec:
    """Dimension ``D = N + 1`` and offset ``d`` of H_D^d."""

    dimension: int
    offset: int = 0

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 2:
            raise ParameterDomainError(f"dimension must be an integer >= 2, got {self.dimension!r}")
        if int(self.offset) != self.offset or self.offset < 0:
            raise ParameterDomainError(f"offset must be an integer >= 0, got {self.offset!r}")

    @property
    def highest_index(self) -> int:
        return self.offset + 2 * self.dimension - 1

    @property
    def required_coefficients(self) -> int:
        """Number of coefficients f_0 .. f_{highest_index}."""
        return self.highest_index + 1


def build_matrix(coeffs, spec: HankelSpec) -> list[list]:
    """D x D matrix with entries f_{d+i+j+1}.

    ``coeffs`` is a :class:`SeriesCoefficients` or any plain sequence.
    """
    values = coeffs.values if isinstance(coeffs, SeriesCoefficients) else coeffs
    if len(values) < spec.required_coefficients:
        raise CoefficientLengthError(
            f"H_{spec.dimension}^{spec.offset} needs {spec.required_coefficients} coefficients, got {len(values)}"
        )
    D, d = spec.dimension, spec.offset
    return [[values[d + i + j + 1] for j in range(D)] for i in range(D)]


def _lu(matrix):
    """In-place-style LU with partial pivoting on a copy.

    Returns (lu, perm, sign) or None when a pivot column is identically zero.
    """
    a = [list(row) for row in matrix]
    n = len(a)
    perm = list(range(n))
    sign = 1
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(a[i][k]))
        if a[p][k] == 0:
            return None
        if p != k:
            a[k], a[p] = a[p], a[k]
            perm[k], perm[p] = perm[p], perm[k]
            sign = -sign
        pivot_row = a[k]
        pivot = pivot_row[k]
        for i in range(k + 1, n):
            row = a[i]
            factor = row[k] / pivot
            row[k] = factor
            if factor:
                for j in range(k + 1, n):
                    row[j] -= factor * pivot_row[j]
    return a, perm, sign


def _zero_like(matrix):
    return matrix[0][0] * 0


def determinant(matrix):
    """Determinant by LU factorization with partial pivoting.

    Works for mpf entries (at their own precision) and for exact Fractions.
    Returns an exact zero when a pivot column vanishes.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
    fact = _lu(matrix)
    if fact is None:
        return _zero_like(matrix)
    lu, _, sign = fact
    det = lu[0][0] * sign
    for k in range(1, n):
        det *= lu[k][k]
    return det


def _lu_solve_trace(lu, perm, rhs) -> object:
    """trace(A^-1 B) from the LU factors of A."""
    n = len(lu)
    total = 0
    for col in range(n):
        y = [rhs[perm[i]][col] for i in range(n)]
        for i in range(n):
            row = lu[i]
            for j in range(i):
                y[i] -= row[j] * y[j]
        for i in range(n - 1, col - 1, -1):
            row = lu[i]
            for j in range(i + 1, n):
                y[i] -= row[j] * y[j]
            y[i] /= row[i]
        total += y[col]
    return total


def hadamard_bound(matrix):
    """Product of the Euclidean row norms, an upper bound on |det|."""
    bound = 1
    for row in matrix:
        norm = sum(x * x for x in row)
        bound *= norm.sqrt() if hasattr(norm, "sqrt") else math.sqrt(norm)
    return bound


def zero_floor(digits: int, scale=1):
    """Magnitude below which a determinant counts as zero.

    The floor is relative: 10**(10 - digits) times ``scale``, which callers
    set to the Hadamard bound of the matrix so it tracks the natural size of H.
    """
    ctx = working_context(digits)
    return ctx.mpf(10) ** (10 - digits) * scale


class HankelValue(NamedTuple):
    """One evaluation of H_D^d at a trial energy."""

    energy: object
    det: object
    #: dH/dE divided by H, i.e. trace(M^-1 M'); None when M is singular
    log_derivative: object
    scale: object
    matrix: list
    derivative_matrix: list


def evaluate(params: PotentialParams, energy, spec: HankelSpec, ctx) -> HankelValue:
    """Evaluate H and its logarithmic derivative inside mpmath context ``ctx``."""
    coeffs = compute_coefficient_derivatives(params, energy, spec.required_coefficients, digits=ctx.dps)
    M = build_matrix(coeffs.values, spec)
    Mp = build_matrix(coeffs.derivatives, spec)
    scale = hadamard_bound(M)
    fact = _lu(M)
    if fact is None:
        return HankelValue(coeffs.energy, ctx.zero, None, scale, M, Mp)
    lu, perm, sign = fact
    det = lu[0][0] * sign
    for k in range(1, len(lu)):
        det *= lu[k][k]
    return HankelValue(coeffs.energy, det, _lu_solve_trace(lu, perm, Mp), scale, M, Mp)


def column_replacement_derivative(matrix, derivative_matrix):
    """dH/dE = sum_k det(M with column k replaced by column k of M')."""
    n = len(matrix)
    total = 0
    for k in range(n):
        replaced = [[derivative_matrix[i][j] if j == k else matrix[i][j] for j in range(n)] for i in range(n)]
        total += determinant(replaced)
    return total


def determinant_with_derivative(params: PotentialParams, energy, spec: HankelSpec, digits: int | None = None):
    """Return (H, dH/dE) at ``energy`` rounded to ``digits`` decimal digits.

    Uses dH/dE = H trace(M^-1 M') for nonsingular M and the column-replacement
    expansion when M is singular; raises DerivativeUnavailableError when that
    expansion vanishes too.
    """
    digits = digits or default_digits(spec.dimension)
    inner = working_context(digits + guard_digits(spec.dimension))
    out = working_context(digits)
    value = evaluate(params, energy, spec, inner)
    if value.log_derivative is not None:
        dH = value.det * value.log_derivative
    else:
        dH = column_replacement_derivative(value.matrix, value.derivative_matrix)
        if dH == 0:
            raise DerivativeUnavailableError(
                f"H_{spec.dimension}^{spec.offset} and its derivative both vanish at E = {energy}"
            )
    return to_real(out, value.det), to_real(out, dH)


def hankel_determinant(params: PotentialParams, energy, spec: HankelSpec, digits: int | None = None):
    """H_D^d(E) rounded to ``digits`` decimal digits."""
    digits = digits or default_digits(spec.dimension)
    inner = working_context(digits + guard_digits(spec.dimension))
    coeffs = compute_coefficient_derivatives(params, energy, spec.required_coefficients, digits=inner.dps)
    return to_real(working_context(digits), determinant(build_matrix(coeffs.values, spec)))


def bareiss_determinant(matrix: list[list[EnergyPolynomial]]) -> EnergyPolynomial:
    """Fraction-free elimination over the polynomial ring Q[E]."""
    a = [list(row) for row in matrix]
    n = len(a)
    sign = 1
    previous = EnergyPolynomial.constant(1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return EnergyPolynomial()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (pivot * a[i][j] - a[i][k] * a[k][j]).exact_div(previous)
        previous = pivot
    return a[n - 1][n - 1] * sign


def symbolic_hankel(params: PotentialParams, spec: HankelSpec) -> EnergyPolynomial:
    """H_D^d as an exact polynomial in E (D <= 6)."""
    if spec.dimension > SYMBOLIC_MAX_DIMENSION:
        raise SizeError(f"symbolic path is capped at D = {SYMBOLIC_MAX_DIMENSION}, got {spec.dimension}")
    if not (isinstance(params.b, Fraction) and isinstance(params.c, Fraction)):
        raise ParameterDomainError("symbolic path needs rational b and c")
    f = coefficient_polynomials(params, spec.required_coefficients)
    return bareiss_determinant(build_matrix(f, spec))
