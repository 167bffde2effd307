"""Taylor coefficients of the regularized logarithmic derivative.

For the radial/parity equation

    -chi'' + [x^2 + b x^2/(1 + c x^2) + l(l+1)/x^2] chi = E chi

the function f(x) = (l+1)/x - chi'/chi is odd and regular at the origin,
f(x) = x * sum_j f_j x^(2j), and obeys the Riccati equation

    f' + 2(l+1) f/x - f^2 = E - x^2 - b x^2/(1 + c x^2).

Matching powers of x gives f_0 = E/(2l+3) and, for m >= 1,

    f_m = [sum_{i<m} f_i f_{m-1-i} - delta_{m,1} - b (-c)^(m-1)] / (2m + 2l + 3).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyRequestError, ParameterDomainError
from .polynomial import EnergyPolynomial
from .precision import parse_rational, to_real, working_context


@dataclass(frozen=True)
class PotentialParams:
    """Couplings ``b``, ``c`` and the angular/parity index ``l``.

    ``l = -1`` and ``l = 0`` select even and odd states of the one-dimensional
    problem; ``l >= 0`` is the angular momentum of the central-field problem.
    ``b`` and ``c`` are stored as exact rationals.
    """

    b: Fraction
    c: Fraction
    l: int

    def __post_init__(self):
        object.__setattr__(self, "b", parse_rational(self.b))
        object.__setattr__(self, "c", parse_rational(self.c))
        if isinstance(self.l, bool) or int(self.l) != self.l:
            raise ParameterDomainError(f"l must be an integer, got {self.l!r}")
        object.__setattr__(self, "l", int(self.l))
        if self.c < 0:
            raise ParameterDomainError(f"c must be non-negative, got {self.c}")
        if self.l < -1:
            raise ParameterDomainError(f"l must be >= -1, got {self.l}")

    def with_l(self, l: int) -> PotentialParams:
        return PotentialParams(self.b, self.c, l)


@dataclass(frozen=True)
class StateLabel:
    """Radial quantum number ``n`` (interior nodes) and index ``l``."""

    n: int
    l: int

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 0:
            raise ParameterDomainError(f"n must be a non-negative integer, got {self.n!r}")
        if isinstance(self.l, bool) or int(self.l) != self.l or self.l < -1:
            raise ParameterDomainError(f"l must be an integer >= -1, got {self.l!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "l", int(self.l))

    @property
    def unperturbed_energy(self) -> int:
        """Harmonic-oscillator level 4n + 2l + 3."""
        return 4 * self.n + 2 * self.l + 3

    def __str__(self):
        return f"{self.n}:{self.l}"

    @classmethod
    def parse(cls, text: str) -> StateLabel:
        """Read the ``n:l`` syntax."""
        try:
            n, l = text.split(":")
            return cls(int(n), int(l))
        except ValueError as exc:
            raise ParameterDomainError(f"state must look like 'n:l', got {text!r}") from exc


@dataclass(frozen=True)
class SeriesCoefficients:
    energy: object
    values: tuple
    derivatives: tuple | None
    precision_bits: int

    def __post_init__(self):
        if self.derivatives is not None and len(self.derivatives) != len(self.values):
            raise ValueError("values and derivatives differ in length")

    def __len__(self):
        return len(self.values)


def _inhomogeneous_terms(params: PotentialParams, count: int) -> list[Fraction]:
    # delta_{m,1} + b(-c)^(m-1), kept exact until the caller rounds it
    terms = [Fraction(0)]
    power = Fraction(1)
    for m in range(1, count):
        terms.append((1 if m == 1 else 0) + params.b * power)
        power *= -params.c
    return terms


def _check(params: PotentialParams, count: int):
    if not isinstance(params, PotentialParams):
        raise ParameterDomainError("params must be a PotentialParams")
    if count < 1:
        raise EmptyRequestError("count must be at least 1")


def _recurrence(ctx, params: PotentialParams, energy, count: int, with_derivatives: bool):
    denom0 = 2 * params.l + 3
    E = to_real(ctx, energy)
    f = [E / denom0]
    g = [ctx.mpf(1) / denom0] if with_derivatives else None
    for m, t in enumerate(_inhomogeneous_terms(params, count)[1:], start=1):
        denom = 2 * m + 2 * params.l + 3
        conv = ctx.fdot(f[:m], f[m - 1 :: -1])
        f.append((conv - to_real(ctx, t)) / denom)
        if with_derivatives:
            g.append(2 * ctx.fdot(f[:m], g[m - 1 :: -1]) / denom)
    return E, f, g


def compute_coefficients(params: PotentialParams, energy, count: int, *, digits: int) -> SeriesCoefficients:
    """Return f_0 .. f_{count-1} at trial ``energy`` with ``digits`` decimal digits."""
    _check(params, count)
    ctx = working_context(digits)
    E, f, _ = _recurrence(ctx, params, energy, count, False)
    return SeriesCoefficients(E, tuple(f), None, ctx.prec)


def compute_coefficient_derivatives(params: PotentialParams, energy, count: int, *, digits: int) -> SeriesCoefficients:
    """Like :func:`compute_coefficients` but also fills g_j = df_j/dE.

    Differentiating the recurrence gives g_0 = 1/(2l+3) and
    g_m = 2 sum_{i<m} f_i g_{m-1-i} / (2m + 2l + 3).
    """
    _check(params, count)
    ctx = working_context(digits)
    E, f, g = _recurrence(ctx, params, energy, count, True)
    return SeriesCoefficients(E, tuple(f), tuple(g), ctx.prec)


def coefficient_polynomials(params: PotentialParams, count: int) -> list[EnergyPolynomial]:
    """The same recurrence carried out exactly, with f_j as polynomials in E.

    deg f_j = j + 1.
    """
    _check(params, count)
    denom0 = 2 * params.l + 3
    f = [EnergyPolynomial.linear(Fraction(1, denom0))]
    for m, t in enumerate(_inhomogeneous_terms(params, count)[1:], start=1):
        conv = EnergyPolynomial()
        for i in range(m // 2):
            conv = conv + 2 * (f[i] * f[m - 1 - i])
        if m % 2 == 1:
            mid = f[(m - 1) // 2]
            conv = conv + mid * mid
        f.append((conv - t) / (2 * m + 2 * params.l + 3))
    return f


def exact_case_params(c, l: int) -> tuple[Fraction, Fraction]:
    """(b, E) for which chi = x^(l+1) (1 + c x^2) exp(-x^2/2) solves the equation.

    b = -2c[c(2l+3) + 2] and E = (2l+3)(1 - 2c).
    """
    c = parse_rational(c)
    if c < 0:
        raise ParameterDomainError(f"c must be non-negative, got {c}")
    if isinstance(l, bool) or int(l) != l or l < -1:
        raise ParameterDomainError(f"l must be an integer >= -1, got {l!r}")
    k = 2 * int(l) + 3
    return -2 * c * (c * k + 2), k * (1 - 2 * c)


def exact_series_reference(c, count: int) -> list[Fraction]:
    """Taylor coefficients of f(x)/x = 1 - 2c/(1 + c x^2) in powers of x^2."""
    if count < 1:
        raise EmptyRequestError("count must be at least 1")
    c = parse_rational(c)
    out = [1 - 2 * c]
    term = -2 * c
    for _ in range(1, count):
        term *= -c
        out.append(term)
    return out
