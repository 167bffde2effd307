"""Working-precision policy and number conversion helpers.

Every high-precision routine takes an explicit number of decimal digits and
works inside its own :class:`mpmath.MPContext`; nothing here touches the
global ``mpmath.mp`` context.
"""

from __future__ import annotations

import functools
from decimal import Decimal
from fractions import Fraction
from numbers import Rational

import mpmath
from mpmath import libmp

from .errors import ParameterDomainError


@functools.lru_cache(maxsize=None)
def working_context(digits: int) -> mpmath.MPContext:
    """Return a private mpmath context fixed at ``digits`` decimal digits.

    Contexts are cached per digit count and must not be mutated by callers.
    """
    if digits < 1:
        raise ValueError(f"digits must be positive, got {digits}")
    ctx = mpmath.MPContext()
    ctx.dps = digits
    return ctx


def default_digits(dimension: int) -> int:
    """Default working precision (decimal digits) for a Hankel dimension."""
    return max(64, 16 * dimension + 40)


def guard_digits(dimension: int) -> int:
    """Extra internal digits carried while evaluating a Hankel determinant.

    Hankel matrices lose roughly D**2/35 digits to cancellation (measured on
    the b = c = 1 benchmark up to D = 30), so the guard grows quadratically.
    """
    return 10 + dimension * dimension // 20


def parse_rational(value) -> Fraction:
    """Convert ints, fractions, decimal strings, ``'p/q'`` strings and floats.

    Floats are read through their shortest repr, so ``0.1`` becomes ``1/10``.
    """
    if isinstance(value, bool):
        raise ParameterDomainError("booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ParameterDomainError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise ParameterDomainError(f"non-finite value {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterDomainError(f"cannot parse {value!r} as a rational") from exc
    raise ParameterDomainError(f"cannot convert {type(value).__name__} to a rational")


def to_real(ctx: mpmath.MPContext, value):
    """Convert ``value`` to an mpf of ``ctx``, rounding once."""
    if isinstance(value, Fraction):
        return ctx.mpf(value.numerator) / value.denominator
    if isinstance(value, float):
        return ctx.mpf(repr(value))
    if isinstance(value, (int, str)):
        if isinstance(value, str) and "/" in value:
            return to_real(ctx, parse_rational(value))
        return ctx.mpf(value)
    if isinstance(value, Decimal):
        return ctx.mpf(str(value))
    if hasattr(value, "_mpf_"):
        return ctx.make_mpf(libmp.mpf_pos(value._mpf_, ctx.prec, "n"))
    return ctx.mpf(value)


def decimal_string(x, digits: int | None = None) -> str:
    """Decimal string that reads back into the same binary value.

    With ``digits`` given the value is printed for a context of that many
    digits; otherwise the precision of ``x``'s own context is used.
    """
    if digits is None:
        prec = x.context.prec
    else:
        prec = working_context(digits).prec
    return libmp.to_str(x._mpf_, libmp.repr_dps(prec))
