"""
What the bracket rule forces on Q(h^2)
======================================

Q(h^2) has to commute with H, so in the normal-form basis it can only be
a polynomial in H.  Feeding a general such polynomial through the rule
Q({f, g}) = i[Q(f), Q(g)] leaves exactly two free numbers.
"""

from sl2quant import quantize
from sl2quant.enveloping import Ep, Em, H, nc_commutator, nc_sym

# the quantized algebra: normal forms H^j Ep^l and H^k Em^m
print("[H, Ep] =", nc_commutator(H, Ep))
print("Ep Em   =", Ep * Em)
print("(Ep, Em) =", nc_sym(Ep, Em))

# step 1: the commutant of H inside the degree-3 span
free, _ = quantize.commutant_of_H(3)
print("commutant of H:", free)

# step 2: the ansatz sum_k a_k H^k; higher coefficients die
for r in (2, 4, 6):
    res = quantize.derive_qh2(r)
    print(f"r = {r}: Q(h^2) = {res.forced},  leading factors {[str(v) for v in res.leading_factors.values()]}")
print("relation:", res.gamma_relation, "= 0")
print("with C = 1 - s^2:", res.eq_gamma_in_s(), "= 0")

# the degree-2 part of Q then follows from bracket identities
qmap = quantize.extend_to_degree2(res)
for mono, value in qmap.describe().items():
    print(f"Q({mono}) = {value}")
