"""Double-precision Numerov shooting solver used to seed and cross-check.

Nothing here depends on the series/Hankel code path: the eigenvalue is
found by integrating the differential equation on a uniform grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import BracketingError, ParameterDomainError, RangeError


@dataclass(frozen=True)
class ShootingConfig:
    x_max: float = 12.0
    grid_points: int = 24000
    match_fraction: float = 0.6
    tolerance: float = 1e-10

    def __post_init__(self):
        if self.grid_points < 1000:
            raise ParameterDomainError("grid_points must be at least 1000")
        if not 0 < self.match_fraction < 1:
            raise ParameterDomainError("match_fraction must lie in (0, 1)")
        if self.x_max <= 0 or self.tolerance <= 0:
            raise ParameterDomainError("x_max and tolerance must be positive")


@dataclass(frozen=True)
class ShootingResult:
    energy: float
    nodes: int
    match_point: float


class _Grid:
    def __init__(self, b, c, l, config):
        self.l = l
        self.h = config.x_max / config.grid_points
        self.x = np.linspace(0.0, config.x_max, config.grid_points + 1)
        x = self.x
        self.potential = x**2 + b * x**2 / (1.0 + c * x**2)
        with np.errstate(divide="ignore"):
            centrifugal = np.where(x > 0, l * (l + 1) / np.where(x > 0, x, 1.0) ** 2, 0.0)
        self.effective = self.potential + centrifugal
        self.config = config

    def k2(self, energy):
        return energy - self.effective

    def start(self, energy, x):
        # chi ~ x^(l+1) exp(-E x^2 / (2(2l+3))) near the origin
        return x ** (self.l + 1) * math.exp(-energy * x * x / (2 * (2 * self.l + 3)))

    def outward(self, energy, stop):
        """Numerov from the origin up to index ``stop`` (inclusive)."""
        h2 = self.h**2 / 12.0
        w = 1.0 + h2 * self.k2(energy)
        ww = w.tolist()
        yl = [0.0] * (stop + 1)
        if self.l == -1:
            # even solution: y(-h) = y(h) closes the first Numerov step exactly
            yl[0] = 1.0
            yl[1] = (6.0 - 5.0 * ww[0]) / ww[1]
            first = 1
        elif self.l == 0:
            yl[1] = self.h
            first = 1
        else:
            # w diverges at the origin; seed two points from the small-x form
            yl[1] = self.start(energy, self.x[1])
            yl[2] = self.start(energy, self.x[2])
            first = 2
        for i in range(first, stop):
            yl[i + 1] = ((12.0 - 10.0 * ww[i]) * yl[i] - ww[i - 1] * yl[i - 1]) / ww[i + 1]
            if abs(yl[i + 1]) > 1e200:
                yl = [v * 1e-200 for v in yl]
        return np.array(yl), w

    def inward(self, energy, stop):
        """Numerov from x_max down to index ``stop`` (inclusive)."""
        h2 = self.h**2 / 12.0
        w = (1.0 + h2 * self.k2(energy)).tolist()
        n = len(self.x) - 1
        # the unwanted solution decays inward, so the starting values barely matter
        y = [0.0] * (n + 1)
        y[n - 1] = 1.0
        for i in range(n - 1, stop, -1):
            y[i - 1] = ((12.0 - 10.0 * w[i]) * y[i] - w[i + 1] * y[i + 1]) / w[i - 1]
            if abs(y[i - 1]) > 1e200:
                y = [v * 1e-200 for v in y]
        return np.array(y), w


def _sign_changes(y) -> int:
    s = np.sign(y[np.abs(y) > 0])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _outward_nodes(grid, energy):
    y, _ = grid.outward(energy, len(grid.x) - 1)
    return _sign_changes(y[1:])


def _match_index(grid, energy):
    """Outer classical turning point, capped at match_fraction * x_max."""
    allowed = np.nonzero(grid.k2(energy)[1:] >= 0)[0]
    cap = int(grid.config.match_fraction * (len(grid.x) - 1))
    idx = allowed[-1] + 1 if allowed.size else cap
    return max(10, min(idx, cap))


def _mismatch(grid, energy, m):
    """Numerov residual at the match point with both pieces scaled to 1 there."""
    yo, w = grid.outward(energy, m + 1)
    yi, _ = grid.inward(energy, m - 1)
    if yo[m] == 0 or yi[m] == 0:
        return math.nan
    return (w[m - 1] * yo[m - 1] / yo[m] + w[m + 1] * yi[m + 1] / yi[m] - (12.0 - 10.0 * w[m])) / grid.h


def shoot_eigenvalue(params, state, config: ShootingConfig | None = None) -> float:
    """Eigenvalue with ``state.n`` interior nodes, to ``config.tolerance``."""
    return shoot(params, state, config).energy


def shoot(params, state, config: ShootingConfig | None = None) -> ShootingResult:
    config = config or ShootingConfig()
    if state.l != params.l:
        raise ParameterDomainError(f"state l = {state.l} differs from params l = {params.l}")
    b, c, l, n = float(params.b), float(params.c), params.l, state.n
    grid = _Grid(b, c, l, config)

    # node-count bracket: below E_n the outward solution has n nodes, above it n + 1
    v = grid.effective[1:]
    lo = float(np.min(v))
    ceiling = grid.potential[-1] / 4.0
    step = 0.5
    hi = lo + step
    while _outward_nodes(grid, hi) <= n:
        lo = hi
        hi += step
        if hi > ceiling:
            raise RangeError(f"no level with {n} nodes below {ceiling:.3g}; increase x_max")
    while hi - lo > 1e-3:
        mid = 0.5 * (lo + hi)
        if _outward_nodes(grid, mid) <= n:
            lo = mid
        else:
            hi = mid

    m = _match_index(grid, 0.5 * (lo + hi))
    f_lo, f_hi = _mismatch(grid, lo, m), _mismatch(grid, hi, m)
    if not (np.isfinite(f_lo) and np.isfinite(f_hi)) or f_lo * f_hi > 0:
        raise BracketingError(f"mismatch has no sign change on [{lo}, {hi}]")
    energy = brentq(lambda e: _mismatch(grid, e, m), lo, hi, xtol=config.tolerance, rtol=4 * np.finfo(float).eps)

    yo, _ = grid.outward(energy, m)
    yi, _ = grid.inward(energy, m)
    nodes = _sign_changes(yo[1 : m + 1]) + _sign_changes(yi[m:])
    if nodes != n:
        raise RangeError(f"converged solution has {nodes} nodes, expected {n}")
    return ShootingResult(float(energy), nodes, float(grid.x[m]))


def harmonic_reference(state, b) -> float:
    """Closed form for c = 0: E = sqrt(1 + b) (4n + 2l + 3)."""
    b = float(b)
    if b <= -1:
        raise ParameterDomainError(f"b must exceed -1, got {b}")
    return math.sqrt(1.0 + b) * (4 * state.n + 2 * state.l + 3)
