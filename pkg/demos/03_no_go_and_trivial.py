"""
The obstruction, and the quantization that survives
===================================================

Quantizing two cubic identities gives polynomial conditions on alpha, C
and c.  Off the nilpotent cone they have no solution at all; on the cone
they force alpha = gamma = 0, leaving the map that is the representation
on constants and sl(2), and zero above.
"""

from fractions import Fraction

from sl2quant import poisson, quantize
from sl2quant.repmod import build_module

cs = quantize.derive_constraints()
for label, eq in zip(cs.labels, cs.equations):
    print(f"{label}:  {eq} = 0")
print("side conditions:", cs.side_conditions)

for zero in (True, False):
    v = quantize.case_analysis(cs, zero)
    print()
    print("verdict:", v.verdict)
    for b in v.branches:
        print("  branch", b.status)
        for step in b.log:
            print("     ", step)

# the survivor, checked on a truncated weight module (s = 7/3, 24 levels)
m = build_module(Fraction(7, 3), 24)
res = quantize.trivial_quantization_checks(m, pairs=200, seed=1)
print()
print("Q(1) = I:", res["Q2"], "  bracket rule failures:", len(res["Q1_failures"]), "of", res["pairs"])

f = poisson.h + poisson.h ** 3
print("Q(h + h^3) equals the matrix of H:", quantize.trivial_quantization(f, m) == m.H)
