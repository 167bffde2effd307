"""Command-line interface: ``rpm-bounds {bound,exact-check,figure-data,sweep}``.

This is the only module that reads arguments or writes files. Energies are
written as decimal strings that read back into the same binary value.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import __version__
from .errors import RPMError
from .hankel import HankelSpec, evaluate, symbolic_hankel, zero_floor
from .polynomial import linear_factor
from .precision import decimal_string, default_digits, guard_digits, parse_rational, to_real, working_context
from .roots import refine_root
from .sequences import (
    BoundReport,
    BoundsResult,
    interpolated_sequence,
    log_error_series,
    log_gap_series,
    pick_bound_pair,
    bound_state,
)
from .series import PotentialParams, StateLabel, exact_case_params

log = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILURE, EXIT_NO_ACCELERATION = 0, 1, 2

SEQUENCE_COLUMNS = ["record", "d", "D", "value"]
FIGURE_COLUMNS = ["series_label", "D", "value"]
SWEEP_COLUMNS = ["b", "c", "n", "l", "dmax", "lower", "upper", "p", "accelerated", "digits_agreed", "oracle", "inside_bounds", "error"]


# -- serialization -----------------------------------------------------------

def _num(x):
    return None if x is None else decimal_string(x)


def _params_dict(params: PotentialParams) -> dict:
    return {"b": str(params.b), "c": str(params.c), "l": params.l}


def bounds_to_dict(bounds: BoundsResult) -> dict:
    return {
        "lower": {"D": bounds.lower[0], "energy": _num(bounds.lower[1])},
        "upper": {"D": bounds.upper[0], "energy": _num(bounds.upper[1])},
        "p": _num(bounds.p),
        "accelerated": _num(bounds.accelerated),
        "digits_agreed": bounds.digits_agreed,
        "precision_digits": bounds.upper[1].context.dps,
        "notes": list(bounds.notes),
    }


def bounds_from_dict(data: dict, state: StateLabel) -> BoundsResult:
    """Inverse of :func:`bounds_to_dict`."""
    ctx = working_context(data["precision_digits"])

    def read(s):
        return None if s is None else to_real(ctx, s)

    return BoundsResult(
        state,
        (data["lower"]["D"], read(data["lower"]["energy"])),
        (data["upper"]["D"], read(data["upper"]["energy"])),
        read(data["p"]),
        read(data["accelerated"]),
        data["digits_agreed"],
        tuple(data.get("notes", ())),
    )


def report_to_dict(report: BoundReport) -> dict:
    return {
        "params": _params_dict(report.params),
        "state": {"n": report.state.n, "l": report.state.l},
        "sequences": [
            {
                "d": s.d,
                "classification": s.classification.value,
                "notes": list(s.notes),
                "entries": [
                    {"D": e.D, "energy": _num(e.energy)} if e.ok else {"D": e.D, "energy": None, "failure": e.failure}
                    for e in s.entries
                ],
            }
            for s in report.sequences
        ],
        "bounds": bounds_to_dict(report.bounds) if report.bounds else None,
        "oracle": {"energy": report.oracle_energy, "inside_bounds": report.inside_bounds},
        "notes": list(report.notes),
    }


def report_to_rows(report: BoundReport) -> list[dict]:
    rows = []
    for s in report.sequences:
        for e in s.entries:
            rows.append({"record": "sequence", "d": s.d, "D": e.D, "value": _num(e.energy) or ""})
    if report.bounds:
        b = report.bounds
        rows.append({"record": "lower", "d": "", "D": b.lower[0], "value": _num(b.lower[1])})
        rows.append({"record": "upper", "d": "", "D": b.upper[0], "value": _num(b.upper[1])})
        rows.append({"record": "p", "d": "", "D": "", "value": _num(b.p) or ""})
        rows.append({"record": "accelerated", "d": "", "D": "", "value": _num(b.accelerated) or ""})
        rows.append({"record": "digits_agreed", "d": "", "D": "", "value": b.digits_agreed})
    if report.oracle_energy is not None:
        rows.append({"record": "oracle", "d": "", "D": "", "value": repr(report.oracle_energy)})
    return rows


def _write(payload, fmt: str, columns, output):
    if fmt == "json":
        text = json.dumps(payload["json"], indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(payload["rows"])
        text = buf.getvalue()
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands ----------------------------------------------------------------

def _params_from(args, l=None) -> PotentialParams:
    return PotentialParams(parse_rational(args.b), parse_rational(args.c), args.l if l is None else l)


def cmd_bound(args) -> int:
    params = _params_from(args)
    state = StateLabel(args.n, args.l)
    d_values = args.d or [0, 1]
    try:
        report = bound_state(params, state, d_values=d_values, dmax=args.dmax, digits=args.precision, seed=args.seed)
    except RPMError as exc:
        log.error("bound failed: %s", exc)
        return EXIT_FAILURE
    _write({"json": report_to_dict(report), "rows": report_to_rows(report)}, args.format, SEQUENCE_COLUMNS, args.output)
    if report.bounds is None:
        return EXIT_FAILURE
    return EXIT_OK if report.acceleration_available else EXIT_NO_ACCELERATION


def exact_check(c, l: int, dmax: int = 8, symbolic_max: int = 4) -> dict:
    """Numeric and symbolic checks of the exactly solvable case."""
    c = parse_rational(c)
    b, energy = exact_case_params(c, l)
    params = PotentialParams(b, c, l)
    factor = linear_factor(energy)
    degenerate = c == 0
    ok = True
    numeric = []
    for D in range(2, dmax + 1):
        digits = default_digits(D)
        ctx = working_context(digits)
        exact = to_real(ctx, energy)
        for d in (0, 1):
            spec = HankelSpec(D, d)
            inner = working_context(digits + guard_digits(D))
            value = evaluate(params, energy, spec, inner)
            residual = abs(value.det) / value.scale if value.scale else abs(value.det)
            # a tiny offset: other roots of H can sit within 1e-3 of the exact one
            root = refine_root(params, spec, exact + ctx.mpf(10) ** -20, digits=digits)
            deviation = abs(root.energy - exact)
            passed = bool(
                residual <= zero_floor(digits) and deviation <= ctx.mpf(10) ** (10 - digits) * max(1, abs(exact))
            )
            ok &= passed
            numeric.append(
                {
                    "D": D,
                    "d": d,
                    "root": decimal_string(root.energy),
                    "residual": float(residual),
                    "deviation": float(deviation),
                    "pass": passed,
                }
            )
    symbolic = []
    other_roots = []
    top = min(symbolic_max, dmax)
    for D in range(2, top + 1):
        for d in (0, 1):
            poly = symbolic_hankel(params, HankelSpec(D, d))
            mult = poly.multiplicity(energy)
            # c = 0 makes every f_j (j >= 1) vanish at E, so H carries the factor at least D times
            passed = mult >= D - 1 if degenerate else mult == D - 1
            ok &= passed
            symbolic.append({"D": D, "d": d, "degree": poly.degree, "multiplicity": mult, "expected": D - 1, "pass": passed})
            if D == top and d == 0:
                other_roots = _real_roots(poly.deflate(energy, mult))
    return {
        "c": str(c),
        "l": l,
        "b": str(b),
        "energy": str(energy),
        "factor": str(factor),
        "degenerate": degenerate,
        "numeric": numeric,
        "symbolic": symbolic,
        "other_roots": other_roots,
        "status": "PASS" if ok else "FAIL",
    }


def _real_roots(poly) -> list[str]:
    """Real roots of the cofactor polynomial P(E), as decimal strings."""
    if poly.degree < 1:
        return []
    ctx = working_context(60)
    _, prim = poly.primitive()
    coeffs = [ctx.mpf(int(q)) for q in reversed(prim.coefficients)]
    try:
        roots = ctx.polyroots(coeffs, maxsteps=500, extraprec=400)
        real = sorted(ctx.re(r) for r in roots if abs(ctx.im(r)) < ctx.mpf(10) ** -30)
        return [ctx.nstr(r, 20) for r in real]
    except ctx.NoConvergence:
        # clustered roots; double precision is enough for a listing
        roots = np.roots([float(q) for q in reversed(prim.coefficients)])
        return [repr(float(r.real)) for r in sorted(roots, key=lambda z: z.real) if abs(r.imag) < 1e-8]


def cmd_exact_check(args) -> int:
    try:
        report = exact_check(args.c, args.l, args.dmax)
    except RPMError as exc:
        log.error("exact-check failed: %s", exc)
        return EXIT_FAILURE
    rows = [
        {"record": "numeric", "d": r["d"], "D": r["D"], "value": r["root"], "pass": r["pass"]} for r in report["numeric"]
    ] + [
        {"record": "multiplicity", "d": r["d"], "D": r["D"], "value": r["multiplicity"], "pass": r["pass"]}
        for r in report["symbolic"]
    ]
    _write({"json": report, "rows": rows}, args.format, ["record", "d", "D", "value", "pass"], args.output)
    return EXIT_OK if report["status"] == "PASS" else EXIT_FAILURE


def figure_series(params: PotentialParams, states, dmax: int, digits=None) -> list:
    """Gap and successive-error series for every state, plus the interpolated sequence."""
    out = []
    for state in states:
        report = bound_state(params.with_l(state.l), state, dmax=dmax, digits=digits)
        upper, lower, _ = pick_bound_pair(report.sequences)
        out.append(log_gap_series(upper, lower, label=f"gap n={state.n} l={state.l}"))
        for s in report.sequences:
            out.append(log_error_series(s, label=f"error d={s.d} n={state.n} l={state.l}"))
        if report.acceleration_available:
            interp = interpolated_sequence(upper, lower, report.bounds.p)
            out.append(log_error_series(interp, label=f"error interpolated n={state.n} l={state.l}"))
    return out


def cmd_figure_data(args) -> int:
    states = [StateLabel.parse(s) for s in args.states.split(",")] if args.states else [StateLabel(args.n, args.l)]
    params = _params_from(args, l=states[0].l)
    try:
        series = figure_series(params, states, args.dmax, args.precision)
    except RPMError as exc:
        log.error("figure-data failed: %s", exc)
        return EXIT_FAILURE
    payload = {
        "json": {
            "params": {"b": str(params.b), "c": str(params.c)},
            "dmax": args.dmax,
            "series": [
                {"label": s.label, "points": [{"D": p.D, "value": p.value} for p in s.points], "notes": s.notes}
                for s in series
            ],
        },
        "rows": [{"series_label": s.label, "D": p.D, "value": repr(p.value)} for s in series for p in s.points],
    }
    _write(payload, args.format, FIGURE_COLUMNS, args.output)
    return EXIT_OK


def sweep_row(b, c, n: int, l: int, dmax: int, digits=None) -> dict:
    """One sweep grid point, as plain strings (safe to ship between processes)."""
    row = dict.fromkeys(SWEEP_COLUMNS, "")
    row.update(b=str(b), c=str(c), n=n, l=l, dmax=dmax)
    try:
        report = bound_state(PotentialParams(b, c, l), StateLabel(n, l), dmax=dmax, digits=digits)
    except RPMError as exc:
        row["error"] = str(exc)
        return row
    if report.oracle_energy is not None:
        row["oracle"] = repr(report.oracle_energy)
        row["inside_bounds"] = report.inside_bounds
    if report.bounds is None:
        row["error"] = "; ".join(report.notes)
        return row
    bd = report.bounds
    row.update(
        lower=_num(bd.lower[1]),
        upper=_num(bd.upper[1]),
        p=_num(bd.p) or "",
        accelerated=_num(bd.accelerated) or "",
        digits_agreed=bd.digits_agreed,
    )
    if not report.acceleration_available:
        row["error"] = "acceleration unavailable"
    return row


def _split(text: str) -> list[Fraction]:
    return [parse_rational(t) for t in text.split(",") if t.strip()]


def cmd_sweep(args) -> int:
    grid = [(b, c) for b in _split(args.b) for c in _split(args.c)]
    jobs = [(b, c, args.n, args.l, args.dmax, args.precision) for b, c in grid]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(sweep_row, *zip(*jobs)))
    else:
        rows = [sweep_row(*job) for job in jobs]
    _write({"json": {"rows": rows}, "rows": rows}, args.format, SWEEP_COLUMNS, args.output)
    return EXIT_OK


# -- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rpm-bounds", description="Hankel-determinant eigenvalue bounds")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, sweep=False):
        p.add_argument("--b", default="1", help="coupling b (decimal or p/q)" + (", comma-separated" if sweep else ""))
        p.add_argument("--c", default="1", help="coupling c (decimal or p/q)" + (", comma-separated" if sweep else ""))
        p.add_argument("--l", type=int, default=0)
        p.add_argument("--n", type=int, default=0)
        p.add_argument("--dmax", type=int, default=20)
        p.add_argument("--precision", type=int, default=None, help="decimal digits (default: per-dimension policy)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", default=None, metavar="PATH")

    p = sub.add_parser("bound", help="upper/lower bounds and interpolated estimate for one state")
    common(p)
    p.add_argument("--d", type=int, action="append", help="Hankel offset (repeatable, default 0 and 1)")
    p.add_argument("--seed", default=None, help="manual seed energy")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("exact-check", help="verify the exactly solvable case")
    p.add_argument("--c", required=True)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--dmax", type=int, default=8)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", default=None, metavar="PATH")
    p.set_defaults(func=cmd_exact_check)

    p = sub.add_parser("figure-data", help="log gap and log successive-error series")
    common(p)
    p.add_argument("--states", default=None, help="comma-separated n:l labels, e.g. 0:1,1:1")
    p.set_defaults(func=cmd_figure_data)

    p = sub.add_parser("sweep", help="bounds over a grid of (b, c)")
    common(p, sweep=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "dmax", 3) < 3 and args.command != "exact-check":
        log.error("--dmax must be at least 3")
        return EXIT_FAILURE
    try:
        return args.func(args)
    except RPMError as exc:
        log.error("%s", exc)
        return EXIT_FAILURE
