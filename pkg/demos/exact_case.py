"""The quasi-exactly solvable member of the family.

For b = -2c[c(2l+3) + 2] the state x^(l+1)(1 + c x^2) exp(-x^2/2) is an
eigenfunction with E = (2l+3)(1 - 2c). Every Hankel determinant then has
that energy as a root of multiplicity D - 1, and the remaining factor P(E)
carries approximations to the other levels.
"""

from __future__ import annotations

from fractions import Fraction

from rpmbounds import HankelSpec, PotentialParams, exact_case_params, refine_root, symbolic_hankel
from rpmbounds.polynomial import linear_factor

c, l = Fraction(1, 10), 0
b, E = exact_case_params(c, l)
print(f"c = {c}, l = {l}  ->  b = {b} = {float(b)}, E = {E} = {float(E)}")

params = PotentialParams(b, c, l)
factor = linear_factor(E)
for D in (2, 3, 4):
    poly = symbolic_hankel(params, HankelSpec(D, 0))
    k = poly.multiplicity(E)
    print(f"H_{D}^0: degree {poly.degree}, ({factor})^{k} divides it")

# Newton with the multiplicity estimate lands on the exact value from a rough seed
for D in (5, 10, 15):
    r = refine_root(params, HankelSpec(D, 0), "2.3")
    print(f"D = {D:2d}: E = {r.energy.context.nstr(r.energy, 30)}  ({r.iterations} iterations, multiplicity {r.multiplicity})")
