"""
Eigenvalues of Q(h^2) on a weight module
========================================

On the module with H psi_n = -i n psi_n, Q(h^2) acts diagonally with
eigenvalues xi_n.  The bracket rule turns into a three-term recursion.
Besides the polynomial family gamma - alpha n^2 it has a digamma family,
which for even s is an exact rational sequence (digamma differences at
integers are harmonic-number differences).
"""

from fractions import Fraction

from sl2quant import repmod

print("polynomial family, symbolic n and s:", repmod.formal_polynomial_residual())

for s in (2, 4, 6):
    m = repmod.build_module(s, 10)
    print(f"s = {s}: Casimir {repmod.casimir_value(m)} (expected {1 - s * s})")
    rep = repmod.recursion_suite(s, Fraction(1, 2), Fraction(3), Fraction(-2), s + 99)
    print(f"   digamma family, n = {s + 3}..{s + 99}: all {len(rep.residuals)} residuals zero = {rep.passed}")
    print(f"   first equation (n = s + 1): residual {rep.boundary}")
    print(f"   rank of the two families on 6 levels: {repmod.solution_family_rank(s, range(s + 1, s + 12, 2))}")

# a few exact eigenvalues for s = 4
s = 4
g = repmod.gamma_from_relation(0, s, 0)
for n in range(s + 1, s + 10, 2):
    print(f"xi_{n} =", repmod.digamma_solution(s, 0, 1, g, n))
