"""Shooting vs Hankel roots over a few couplings.

The Numerov oracle is only good to ~1e-10, which is plenty to see that it
sits between the bounds, and to reproduce sqrt(1 + b)(4n + 2l + 3) at c = 0.
"""

from __future__ import annotations

from fractions import Fraction

from rpmbounds import PotentialParams, StateLabel, bound_state, harmonic_reference, shoot_eigenvalue

for b, c in [(Fraction(1, 2), 1), (2, 1), (1, Fraction(1, 4)), (5, 3)]:
    state = StateLabel(0, 0)
    report = bound_state(PotentialParams(b, c, 0), state, dmax=12)
    bd = report.bounds
    print(
        f"b={str(b):>4} c={str(c):>4}: oracle {report.oracle_energy:.12f}  "
        f"bounds [{float(bd.lower[1]):.14f}, {float(bd.upper[1]):.14f}]  inside={report.inside_bounds}"
    )

print()
for n in range(3):
    state = StateLabel(n, -1)
    e = shoot_eigenvalue(PotentialParams(3, 0, -1), state)
    print(f"c=0, b=3, even state n={n}: shooting {e:.11f}, closed form {harmonic_reference(state, 3):.11f}")
