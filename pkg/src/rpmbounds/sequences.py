"""Root sequences over the Hankel dimension, bound classification and
the two-sequence interpolation accelerator."""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

from .errors import (
    AccelerationUnavailableError,
    BranchLossError,
    ConvergenceError,
    EmptyDataError,
    InsufficientDataError,
    ParameterDomainError,
    SequenceError,
)
from .hankel import HankelSpec
from .precision import default_digits, to_real, working_context
from .roots import DEFAULT_WINDOW, refine_root
from .series import PotentialParams, StateLabel

log = logging.getLogger(__name__)

CLASSIFY_WINDOW = 5


class Classification(str, enum.Enum):
    LOWER = "lower_bounds"
    UPPER = "upper_bounds"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class SequenceEntry:
    D: int
    energy: object = None
    iterations: int = 0
    method: str | None = None
    failure: str | None = None

    @property
    def ok(self) -> bool:
        return self.energy is not None


@dataclass
class RootSequence:
    """E_D^d for D = 2 .. Dmax; failed dimensions are kept as holes."""

    state: StateLabel
    d: int
    entries: list[SequenceEntry]
    classification: Classification = Classification.UNCLASSIFIED
    notes: list[str] = field(default_factory=list)

    def present(self) -> list[SequenceEntry]:
        return [e for e in self.entries if e.ok]

    def energy(self, D: int):
        for e in self.entries:
            if e.D == D:
                return e.energy
        return None

    @property
    def last(self) -> SequenceEntry:
        present = self.present()
        if not present:
            raise InsufficientDataError("sequence has no computed entries")
        return present[-1]

    @property
    def dmax(self) -> int:
        return self.entries[-1].D


@dataclass(frozen=True)
class BoundsResult:
    """Bracketing pair and the interpolated estimate.

    ``lower`` and ``upper`` are (D, energy) pairs; ``p`` and ``accelerated``
    are None when acceleration is unavailable.
    """

    state: StateLabel
    lower: tuple
    upper: tuple
    p: object
    accelerated: object
    digits_agreed: int
    notes: tuple = ()


@dataclass(frozen=True)
class SeriesPoint:
    D: int
    value: float


@dataclass
class FigureSeries:
    label: str
    points: list[SeriesPoint]
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict[int, float]:
        return {pt.D: pt.value for pt in self.points}


def _negligible(diff, a, b) -> bool:
    # differences at the rounding level of the coarser entry count as zero
    ctx = a.context if a.context.dps <= b.context.dps else b.context
    return abs(diff) <= ctx.mpf(10) ** (10 - ctx.dps) * max(1, abs(b))


def generate_sequence(
    params: PotentialParams,
    state: StateLabel,
    d: int,
    dmax: int,
    seed,
    digits: int | None = None,
    window: float = DEFAULT_WINDOW,
) -> RootSequence:
    """Follow one eigenvalue branch through D = 2 .. dmax.

    Each dimension is seeded with the latest accepted root (the initial
    ``seed`` until one exists) and its root must stay within ``window`` of
    the initial seed. Dimensions that fail become holes; the call raises
    only when no dimension succeeds.
    """
    if dmax < 3:
        raise ParameterDomainError(f"dmax must be at least 3, got {dmax}")
    if state.l != params.l:
        raise ParameterDomainError(f"state l = {state.l} differs from params l = {params.l}")
    anchor = float(seed)
    current = seed
    entries = []
    for D in range(2, dmax + 1):
        spec = HankelSpec(D, d)
        try:
            root = refine_root(params, spec, current, digits=digits or default_digits(D), window=window)
        except (BranchLossError, ConvergenceError) as exc:
            log.info("H_%d^%d: %s", D, d, exc)
            entries.append(SequenceEntry(D, failure=str(exc)))
            continue
        if abs(float(root.energy) - anchor) > window:
            entries.append(SequenceEntry(D, failure=f"root {float(root.energy):.8g} left the branch window around {anchor:.8g}"))
            continue
        entries.append(SequenceEntry(D, root.energy, root.iterations, root.method))
        current = root.energy
    seq = RootSequence(state, d, entries)
    if not seq.present():
        raise SequenceError(f"no root found for state {state}, d = {d}, D = 2..{dmax}")
    holes = [e.D for e in entries if not e.ok]
    if holes:
        seq.notes.append(f"holes at D = {holes}")
    if len(seq.present()) >= 3:
        seq.classification = classify_bounds(seq)
        if seq.classification is Classification.UNCLASSIFIED and _is_constant(seq):
            seq.notes.append("exact root")
        elif _early_disagreement(seq):
            seq.notes.append("early entries disagree with the final classification")
    return seq


def _differences(entries):
    """(diff, negligible) for each pair of adjacent dimensions."""
    out = []
    for a, b in zip(entries, entries[1:]):
        if b.D == a.D + 1:
            diff = b.energy - a.energy
            out.append((diff, _negligible(diff, a.energy, b.energy)))
    return out


def _is_constant(seq: RootSequence) -> bool:
    return all(tiny for _, tiny in _differences(seq.present()))


def _early_disagreement(seq: RootSequence) -> bool:
    if seq.classification is Classification.UNCLASSIFIED:
        return False
    want = 1 if seq.classification is Classification.LOWER else -1
    return any(diff * want < 0 and not tiny for diff, tiny in _differences(seq.present()))


def classify_bounds(seq: RootSequence) -> Classification:
    """Lower bounds if the last few entries increase strictly, upper bounds
    if they decrease strictly, otherwise unclassified."""
    present = seq.present()
    if len(present) < 3:
        raise InsufficientDataError(f"classification needs 3 entries, got {len(present)}")
    tail = present[-min(CLASSIFY_WINDOW, len(present)) :]
    diffs = _differences(tail)
    if not diffs:
        raise InsufficientDataError("no consecutive dimensions to compare")
    signs = {0 if tiny else (1 if diff > 0 else -1) for diff, tiny in diffs}
    if signs == {1}:
        return Classification.LOWER
    if signs == {-1}:
        return Classification.UPPER
    return Classification.UNCLASSIFIED


def _digits_agreed(lower, upper, centre, digits) -> int:
    gap = abs(upper - lower)
    if gap == 0 or centre == 0:
        return digits
    return max(0, min(digits, int(math.floor(-float(working_context(30).log10(gap / abs(centre)))))))


def interpolate(upper_seq: RootSequence, lower_seq: RootSequence) -> BoundsResult:
    """Combine the final bounds as i_D(p) = (E_up + p E_low)/(1 + p) with p
    fixed by i_K(p) = i_{K-1}(p) at the largest common dimension K."""
    if upper_seq.state != lower_seq.state:
        raise ParameterDomainError("sequences belong to different states")
    K = min(upper_seq.dmax, lower_seq.dmax)
    u_K, u_prev = upper_seq.energy(K), upper_seq.energy(K - 1)
    l_K, l_prev = lower_seq.energy(K), lower_seq.energy(K - 1)
    if None in (u_K, u_prev, l_K, l_prev):
        raise InsufficientDataError(f"both sequences need entries at D = {K - 1} and {K}")
    digits = min(u_K.context.dps, l_K.context.dps)
    ctx = working_context(digits)
    u_K, u_prev, l_K, l_prev = (to_real(ctx, x) for x in (u_K, u_prev, l_K, l_prev))
    notes = []
    if l_K > u_K:
        notes.append("final lower entry exceeds final upper entry")
    numer = u_K - u_prev
    denom = l_prev - l_K
    centre = (u_K + l_K) / 2
    if abs(denom) <= ctx.mpf(10) ** (10 - digits) * max(1, abs(l_K)) or numer / denom <= 0:
        notes.append("acceleration unavailable")
        partial = BoundsResult(
            upper_seq.state, (K, l_K), (K, u_K), None, None, _digits_agreed(l_K, u_K, centre, digits), tuple(notes)
        )
        raise AccelerationUnavailableError("interpolation parameter undefined or non-positive", bounds=partial)
    p = numer / denom
    accelerated = (u_K + p * l_K) / (1 + p)
    if not l_K <= accelerated <= u_K:
        notes.append("accelerated value outside the bounds")
    return BoundsResult(
        upper_seq.state, (K, l_K), (K, u_K), p, accelerated, _digits_agreed(l_K, u_K, accelerated, digits), tuple(notes)
    )


def interpolated_sequence(upper_seq: RootSequence, lower_seq: RootSequence, p) -> RootSequence:
    """i_D(p) at fixed p for every D where both sequences have entries."""
    entries = []
    for eu in upper_seq.entries:
        el = lower_seq.energy(eu.D)
        if eu.ok and el is not None:
            ctx = eu.energy.context
            pp, low = to_real(ctx, p), to_real(ctx, el)
            entries.append(SequenceEntry(eu.D, (eu.energy + pp * low) / (1 + pp)))
        else:
            entries.append(SequenceEntry(eu.D, failure="missing in one of the bound sequences"))
    return RootSequence(upper_seq.state, -1, entries, Classification.UNCLASSIFIED, ["interpolated"])


def _log10(x) -> float:
    return float(working_context(30).log10(abs(x)))


def log_gap_series(upper_seq: RootSequence, lower_seq: RootSequence, label: str | None = None) -> FigureSeries:
    """(D, log10|E_D^upper - E_D^lower|) at every common D."""
    label = label or f"gap {upper_seq.state}"
    out = FigureSeries(label, [])
    common = 0
    for eu in upper_seq.entries:
        el = lower_seq.energy(eu.D)
        if not eu.ok or el is None:
            continue
        common += 1
        gap = eu.energy - el
        if gap == 0:
            out.notes.append(f"D = {eu.D}: zero gap omitted")
            continue
        out.points.append(SeriesPoint(eu.D, _log10(gap)))
    if not common:
        raise EmptyDataError("the sequences share no dimension")
    return out


def log_error_series(seq, label: str | None = None) -> FigureSeries:
    """(D, log10|s_{D+1} - s_D|) over consecutive present entries.

    ``seq`` is a RootSequence or an iterable of (D, value) pairs.
    """
    if isinstance(seq, RootSequence):
        pairs = [(e.D, e.energy) for e in seq.present()]
        label = label or f"error d={seq.d} {seq.state}"
    else:
        pairs = list(seq)
        label = label or "error"
    if len(pairs) < 2:
        raise InsufficientDataError("need at least two entries")
    out = FigureSeries(label, [])
    for (D, a), (D1, b) in zip(pairs, pairs[1:]):
        if D1 != D + 1:
            continue
        if b == a or (hasattr(a, "context") and _negligible(b - a, a, b)):
            out.notes.append(f"D = {D}: consecutive entries agree to working precision, omitted")
            continue
        out.points.append(SeriesPoint(D, _log10(b - a)))
    return out


@dataclass
class BoundReport:
    """Everything one bound computation produces for a single state."""

    params: PotentialParams
    state: StateLabel
    sequences: list[RootSequence]
    bounds: BoundsResult | None
    oracle_energy: float | None
    acceleration_available: bool
    notes: list[str] = field(default_factory=list)

    @property
    def inside_bounds(self) -> bool | None:
        if self.bounds is None or self.oracle_energy is None:
            return None
        return oracle_inside(self.oracle_energy, self.bounds)


def oracle_inside(energy: float, bounds: BoundsResult, tolerance: float = 1e-9) -> bool:
    """Strictly inside when the gap exceeds ``tolerance``, else within it."""
    lo, hi = float(bounds.lower[1]), float(bounds.upper[1])
    if hi - lo > tolerance:
        return lo < energy < hi
    return min(abs(energy - lo), abs(energy - hi)) <= tolerance


def pick_bound_pair(sequences: list[RootSequence]) -> tuple[RootSequence, RootSequence, list[str]]:
    """Choose the tightest upper- and lower-bound sequences.

    Falls back to ordering by the final entry when classification is missing.
    """
    notes = []
    usable = [s for s in sequences if s.present()]
    if len(usable) < 2:
        raise InsufficientDataError("need two sequences with entries to form bounds")
    uppers = [s for s in usable if s.classification is Classification.UPPER]
    lowers = [s for s in usable if s.classification is Classification.LOWER]
    if uppers and lowers:
        upper = min(uppers, key=lambda s: s.last.energy)
        lower = max(lowers, key=lambda s: s.last.energy)
    else:
        notes.append("bound direction taken from the final entries (sequences not both classified)")
        ordered = sorted(usable, key=lambda s: s.last.energy)
        lower, upper = ordered[0], ordered[-1]
    return upper, lower, notes


def _final_bounds(upper: RootSequence, lower: RootSequence) -> BoundsResult:
    u, lo = upper.last, lower.last
    digits = min(u.energy.context.dps, lo.energy.context.dps)
    ctx = working_context(digits)
    up_e, lo_e = to_real(ctx, u.energy), to_real(ctx, lo.energy)
    agreed = _digits_agreed(lo_e, up_e, (up_e + lo_e) / 2, digits)
    return BoundsResult(upper.state, (lo.D, lo_e), (u.D, up_e), None, None, agreed, ("acceleration unavailable",))


def bound_state(
    params: PotentialParams,
    state: StateLabel,
    d_values=(0, 1),
    dmax: int = 20,
    digits: int | None = None,
    seed=None,
    oracle_config=None,
) -> BoundReport:
    """Seed from the shooting oracle, build one sequence per d, classify and
    interpolate. Acceleration failures are recorded, not raised."""
    from .oracle import shoot_eigenvalue

    oracle_energy = None
    try:
        oracle_energy = shoot_eigenvalue(params, state, oracle_config)
    except Exception as exc:  # oracle trouble only costs the cross-check
        log.warning("oracle failed for %s: %s", state, exc)
    if seed is None:
        seed = oracle_energy if oracle_energy is not None else state.unperturbed_energy
    sequences = [generate_sequence(params, state, d, dmax, seed, digits=digits) for d in d_values]
    notes = []
    bounds = None
    available = False
    try:
        upper, lower, pick_notes = pick_bound_pair(sequences)
        notes.extend(pick_notes)
        if pick_notes:
            # no genuine upper/lower pair, so i_D(p) would only fit rounding noise
            bounds = _final_bounds(upper, lower)
            notes.append("acceleration unavailable: no upper/lower bound pair")
        else:
            try:
                bounds = interpolate(upper, lower)
                available = True
            except AccelerationUnavailableError as exc:
                bounds = exc.bounds
                notes.append(str(exc))
    except InsufficientDataError as exc:
        notes.append(str(exc))
    for s in sequences:
        notes.extend(f"d={s.d}: {n}" for n in s.notes)
    return BoundReport(params, state, sequences, bounds, oracle_energy, available, notes)
