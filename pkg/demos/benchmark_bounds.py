"""Bounds for the two lowest l = 1 levels at b = c = 1.

E_D^0 decreases and E_D^1 increases with D; the interpolation
i_D(p) = (E_D^0 + p E_D^1)/(1 + p), with p chosen so that the last two
values agree, recovers a few more digits than either sequence.
"""

from __future__ import annotations

import time

from rpmbounds import PotentialParams, StateLabel, bound_state

params = PotentialParams(1, 1, 1)

for n in (0, 1):
    t = time.perf_counter()
    report = bound_state(params, StateLabel(n, 1), dmax=20)
    b = report.bounds
    ctx = b.upper[1].context
    print(f"state n={n}, l=1   ({time.perf_counter() - t:.1f} s)")
    for seq in report.sequences:
        print(f"  d={seq.d}: {seq.classification.value}")
    print(f"  upper   E_{b.upper[0]} = {ctx.nstr(b.upper[1], 22)}")
    print(f"  lower   E_{b.lower[0]} = {ctx.nstr(b.lower[1], 22)}")
    if report.acceleration_available:
        print(f"  p = {ctx.nstr(b.p, 8)},  i_20(p) = {ctx.nstr(b.accelerated, 22)}")
    print(f"  digits agreed: {b.digits_agreed}; Numerov oracle {report.oracle_energy!r}, inside: {report.inside_bounds}")
