"""Locate and refine roots E_D^d of the Hankel determinant."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .errors import BranchLossError, ConvergenceError
from .hankel import HankelSpec, column_replacement_derivative, evaluate
from .precision import default_digits, guard_digits, to_real, working_context
from .series import PotentialParams

log = logging.getLogger(__name__)

DEFAULT_WINDOW = 2.0
MAX_ITERATIONS = 200
MAX_HALVINGS = 30


@dataclass(frozen=True)
class RootResult:
    """A refined root.

    ``residual`` is |H| at the root divided by the Hadamard bound of the
    Hankel matrix, so it is comparable with the relative zero floor.
    """

    spec: HankelSpec
    energy: object
    residual: object
    iterations: int
    method: str  # "newton", "secant" or "bisection"
    multiplicity: int = 1


def _tolerance(ctx, digits, energy):
    return ctx.mpf(10) ** (10 - digits) * max(1, abs(energy))


def _relative(value):
    if value.scale == 0:
        return abs(value.det)
    return abs(value.det) / value.scale


class _Newton:
    """Damped Newton iteration with a running multiplicity estimate.

    Near a root of multiplicity k the plain step H/H' equals (E - root)/k.
    After a step scaled by m, the ratio r of consecutive plain steps is
    1 - m/k, so k = m/(1 - r); the next step is scaled by that k.
    """

    def __init__(self, params, spec, ctx, digits):
        self.params, self.spec, self.ctx, self.digits = params, spec, ctx, digits
        self.evaluations = 0

    def value(self, energy):
        self.evaluations += 1
        return evaluate(self.params, energy, self.spec, self.ctx)

    def plain_step(self, value, previous):
        if value.log_derivative is not None and value.log_derivative != 0:
            return 1 / value.log_derivative, "newton"
        dH = column_replacement_derivative(value.matrix, value.derivative_matrix)
        if dH != 0:
            return value.det / dH, "newton"
        if previous is not None and previous.det != value.det:
            slope = (value.det - previous.det) / (value.energy - previous.energy)
            return value.det / slope, "secant"
        return None, "secant"

    def run(self, seed, max_iter=MAX_ITERATIONS):
        ctx = self.ctx
        value = self.value(to_real(ctx, seed))
        previous = None
        multiplier, last_plain, last_multiplier = 1, None, 1
        method = "newton"
        for it in range(1, max_iter + 1):
            E = value.energy
            if value.det == 0:
                return value, it - 1, method, multiplier
            tol = _tolerance(ctx, self.digits, E)
            step, kind = self.plain_step(value, previous)
            if step is None:
                # derivative unavailable and no secant partner: probe a nearby point
                previous = value
                value = self.value(E + tol * 1000)
                method = "secant"
                continue
            if kind == "secant":
                method = "secant"
            if last_plain is not None and abs(step) > tol * 10:
                r = step / last_plain
                if 0 < r < 1:
                    estimate = int(ctx.nint(last_multiplier / (1 - r)))
                    multiplier = max(1, min(estimate, 4 * self.spec.dimension))
                elif r < 0:
                    multiplier = 1
            trial = multiplier * step
            candidate = self.value(E - trial)
            halvings = 0
            while abs(candidate.det) >= abs(value.det) and abs(trial) > tol and halvings < MAX_HALVINGS:
                trial /= 2
                halvings += 1
                candidate = self.value(E - trial)
            if halvings:
                multiplier = 1
            # scale actually applied, needed by the next multiplicity estimate
            last_plain, last_multiplier = step, trial / step
            previous, value = value, candidate
            if abs(trial) < tol:
                k = max(1, int(ctx.nint(last_multiplier)))
                return self._polish(value, previous, k), it, method, k
        raise ConvergenceError(
            f"no convergence for H_{self.spec.dimension}^{self.spec.offset} after {max_iter} iterations",
            last=value.energy,
        )

    def _polish(self, value, previous, k):
        # the stopping test bounds the last step, not the error; one more
        # step taken in guard-digit arithmetic removes the remainder
        if value.det == 0:
            return value
        step, _ = self.plain_step(value, previous)
        if step is None:
            return value
        if abs(k * step) >= _tolerance(self.ctx, self.digits, value.energy):
            return value
        return self.value(value.energy - k * step)

    def secant(self, seed, max_iter=MAX_ITERATIONS):
        ctx = self.ctx
        x1 = to_real(ctx, seed)
        x0 = x1 * (1 + ctx.mpf(10) ** -8) + ctx.mpf(10) ** -8
        v0, v1 = self.value(x0), self.value(x1)
        for it in range(1, max_iter + 1):
            if v1.det == 0:
                return v1, it - 1
            if v1.det == v0.det:
                break
            step = v1.det * (v1.energy - v0.energy) / (v1.det - v0.det)
            v0, v1 = v1, self.value(v1.energy - step)
            if abs(step) < _tolerance(ctx, self.digits, v1.energy):
                return v1, it
        raise ConvergenceError(
            f"secant iteration stalled for H_{self.spec.dimension}^{self.spec.offset}", last=v1.energy
        )

    def bisect(self, lo, hi, width=None, max_iter=20000):
        """Bisect a sign-change bracket until it is narrower than ``width``
        (default: the convergence tolerance). Returns (value, lo, hi, iterations)."""
        ctx = self.ctx
        lo, hi = to_real(ctx, lo), to_real(ctx, hi)
        f_lo = self.value(lo).det
        for it in range(1, max_iter + 1):
            mid = (lo + hi) / 2
            val = self.value(mid)
            limit = width if width is not None else _tolerance(ctx, self.digits, mid)
            if val.det == 0 or abs(hi - lo) < limit:
                return val, lo, hi, it
            if (val.det > 0) == (f_lo > 0):
                lo, f_lo = mid, val.det
            else:
                hi = mid
        raise ConvergenceError("bisection did not converge", last=(lo + hi) / 2)


def _finish(spec, value, iterations, method, digits, multiplicity=1):
    out = working_context(digits)
    return RootResult(spec, to_real(out, value.energy), to_real(out, _relative(value)), iterations, method, multiplicity)


def refine_root(
    params: PotentialParams,
    spec: HankelSpec,
    seed,
    digits: int | None = None,
    window: float = DEFAULT_WINDOW,
    method: str = "newton",
) -> RootResult:
    """Refine the root of H_D^d nearest ``seed``.

    Damped Newton (or, with ``method="secant"``, a plain secant iteration)
    is tried first; if it fails or lands outside ``|E - seed| <= window``
    a sign-change bracket inside the window is bisected and then polished
    by Newton.
    """
    if method not in ("newton", "secant"):
        raise ValueError(f"unknown method {method!r}")
    digits = digits or default_digits(spec.dimension)
    ctx = working_context(digits + guard_digits(spec.dimension))
    solver = _Newton(params, spec, ctx, digits)
    seed_val = to_real(ctx, seed)
    try:
        if method == "secant":
            value, iterations = solver.secant(seed_val)
            mult = 1
        else:
            value, iterations, method, mult = solver.run(seed_val)
        if abs(value.energy - seed_val) <= window:
            return _finish(spec, value, iterations, method, digits, mult)
        failure = BranchLossError(
            f"H_{spec.dimension}^{spec.offset} root {float(value.energy):.6g} is farther than {window} from seed {float(seed_val):.6g}",
            root=value.energy,
        )
    except ConvergenceError as exc:
        failure = exc

    brackets = scan_brackets(params, spec, (seed_val - window, seed_val + window), window / 40, digits=digits)
    if not brackets:
        raise failure
    lo, hi = min(brackets, key=lambda br: abs((br[0] + br[1]) / 2 - seed_val))
    log.debug("falling back to bisection on [%s, %s]", lo, hi)
    if lo == hi:
        return _finish(spec, solver.value(lo), 0, "bisection", digits)
    value, lo, hi, iterations = solver.bisect(lo, hi, width=ctx.mpf(10) ** -12 * max(1, abs(seed_val)))
    if value.det != 0:
        try:
            polished, extra, _, mult = solver.run(value.energy)
            if lo <= polished.energy <= hi:
                return _finish(spec, polished, iterations + extra, "bisection", digits, mult)
        except ConvergenceError:
            pass
        value, _, _, extra = solver.bisect(lo, hi)
        iterations += extra
    return _finish(spec, value, iterations, "bisection", digits)


def scan_brackets(
    params: PotentialParams,
    spec: HankelSpec,
    interval,
    step,
    digits: int | None = None,
) -> list[tuple]:
    """Consecutive grid points on ``interval`` where H_D^d changes sign.

    A grid point where H vanishes exactly is returned as a degenerate
    bracket ``(x, x)``.
    """
    digits = digits or default_digits(spec.dimension)
    ctx = working_context(digits + guard_digits(spec.dimension))
    lo, hi = to_real(ctx, interval[0]), to_real(ctx, interval[1])
    step = to_real(ctx, step)
    if not lo < hi:
        raise ValueError("interval must satisfy lo < hi")
    if step <= 0:
        raise ValueError("step must be positive")
    grid = []
    k = 0
    while True:
        x = lo + k * step
        if x >= hi:
            break
        grid.append(x)
        k += 1
    grid.append(hi)
    out = working_context(digits)
    brackets = []
    prev_x, prev_h = None, None
    for x in grid:
        h = evaluate(params, x, spec, ctx).det
        if h == 0:
            brackets.append((to_real(out, x), to_real(out, x)))
        elif prev_h is not None and prev_h != 0 and (prev_h > 0) != (h > 0):
            brackets.append((to_real(out, prev_x), to_real(out, x)))
        prev_x, prev_h = x, h
    return brackets
