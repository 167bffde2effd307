"""Dense univariate polynomials in the energy with exact rational coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational


def _trim(coefficients) -> tuple[Fraction, ...]:
    coeffs = [Fraction(c) for c in coefficients]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class EnergyPolynomial:
    """Polynomial sum_k coefficients[k] * E**k.

    The coefficient tuple is normalized so that its last entry is nonzero;
    the zero polynomial has an empty tuple and degree -1.
    """

    coefficients: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _trim(self.coefficients))

    @classmethod
    def constant(cls, value) -> EnergyPolynomial:
        return cls((Fraction(value),))

    @classmethod
    def linear(cls, slope, intercept=0) -> EnergyPolynomial:
        """The polynomial slope*E + intercept."""
        return cls((Fraction(intercept), Fraction(slope)))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def __bool__(self):
        return not self.is_zero()

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, EnergyPolynomial):
            return other
        if isinstance(other, Rational):
            return EnergyPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coefficients, other.coefficients
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, v in enumerate(b):
            out[k] += v
        return EnergyPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return EnergyPolynomial(-c for c in self.coefficients)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            other = Fraction(other)
            return EnergyPolynomial(c * other for c in self.coefficients)
        if not isinstance(other, EnergyPolynomial):
            return NotImplemented
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return EnergyPolynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return EnergyPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero rational scalar only; see :meth:`exact_div`."""
        if isinstance(other, Rational):
            other = Fraction(other)
            return EnergyPolynomial(c / other for c in self.coefficients)
        return NotImplemented

    def __divmod__(self, other: EnergyPolynomial):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coefficients)
        dv = other.coefficients
        if len(rem) < len(dv):
            return EnergyPolynomial(), self
        quot = [Fraction(0)] * (len(rem) - len(dv) + 1)
        lead = dv[-1]
        for k in range(len(quot) - 1, -1, -1):
            q = rem[k + len(dv) - 1] / lead
            quot[k] = q
            if q:
                for j, v in enumerate(dv):
                    rem[k + j] -= q * v
        return EnergyPolynomial(quot), EnergyPolynomial(rem[: len(dv) - 1])

    def exact_div(self, other: EnergyPolynomial) -> EnergyPolynomial:
        quot, rem = divmod(self, other)
        if not rem.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return quot

    # evaluation and factors --------------------------------------------

    def __call__(self, energy):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * energy + (c if isinstance(energy, (int, Fraction)) else _as_number(c, energy))
        return acc

    def derivative(self) -> EnergyPolynomial:
        return EnergyPolynomial(k * c for k, c in enumerate(self.coefficients) if k)

    def multiplicity(self, root) -> int:
        """Multiplicity of ``root`` as a zero of this (nonzero) polynomial."""
        if self.is_zero():
            raise ValueError("the zero polynomial has every root")
        root = Fraction(root)
        count, poly = 0, self
        while poly.degree >= 1 and poly(root) == 0:
            poly = poly.deflate(root)
            count += 1
        return count

    def deflate(self, root, times: int = 1) -> EnergyPolynomial:
        """Divide by (E - root)**times; raises if not exact."""
        root = Fraction(root)
        poly = self
        for _ in range(times):
            coeffs = poly.coefficients
            n = len(coeffs) - 1
            if n < 1:
                raise ArithmeticError("cannot deflate a constant")
            out = [Fraction(0)] * n
            carry = coeffs[-1]
            for k in range(n - 1, -1, -1):
                out[k] = carry
                carry = coeffs[k] + carry * root
            if carry != 0:
                raise ArithmeticError(f"{root} is not a root")
            poly = EnergyPolynomial(out)
        return poly

    def primitive(self) -> tuple[Fraction, EnergyPolynomial]:
        """Split into content * primitive part with coprime integer coefficients
        and positive leading coefficient."""
        if self.is_zero():
            return Fraction(0), self
        denom = math.lcm(*(c.denominator for c in self.coefficients))
        ints = [int(c * denom) for c in self.coefficients]
        g = math.gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, denom), EnergyPolynomial(Fraction(i, g) for i in ints)

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            mag = abs(c)
            sign = "-" if c < 0 else "+"
            if k == 0:
                body = str(mag)
            else:
                power = "E" if k == 1 else f"E^{k}"
                body = power if mag == 1 else f"{mag}{power}" if mag.denominator == 1 else f"({mag}){power}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


def _as_number(c: Fraction, like):
    ctx = getattr(like, "context", None)
    if ctx is not None:
        return ctx.mpf(c.numerator) / c.denominator
    return float(c) if isinstance(like, float) else c


def linear_factor(root) -> EnergyPolynomial:
    """Primitive integer linear polynomial vanishing at ``root`` (e.g. 5E - 12)."""
    root = Fraction(root)
    return EnergyPolynomial((Fraction(-root.numerator), Fraction(root.denominator)))
