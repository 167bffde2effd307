"""Logarithmic gap between the bounds and logarithmic successive errors.

Writes convergence.csv next to this script and, if matplotlib is around,
convergence.png.
"""

from __future__ import annotations

import csv
from pathlib import Path

from rpmbounds import PotentialParams, StateLabel
from rpmbounds.cli import figure_series

here = Path(__file__).parent
series = figure_series(PotentialParams(1, 1, 1), [StateLabel(0, 1), StateLabel(1, 1)], dmax=20)

with open(here / "convergence.csv", "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["series_label", "D", "value"])
    for s in series:
        for p in s.points:
            w.writerow([s.label, p.D, f"{p.value:.6f}"])

for s in series:
    tail = ", ".join(f"{p.D}:{p.value:.2f}" for p in s.points[-3:])
    print(f"{s.label:32s} ... {tail}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    for s in series:
        xs, ys = [p.D for p in s.points], [p.value for p in s.points]
        if s.label.startswith("gap"):
            ax1.plot(xs, ys, "o-", label=s.label)
        elif "n=0" in s.label:
            ax2.plot(xs, ys, "o-", label=s.label)
    ax1.set_xlabel("D"), ax1.set_ylabel("log10 |upper - lower|"), ax1.legend()
    ax2.set_xlabel("D"), ax2.set_ylabel("log10 |s(D+1) - s(D)|"), ax2.legend()
    fig.tight_layout()
    fig.savefig(here / "convergence.png", dpi=120)
    print("wrote convergence.png")
