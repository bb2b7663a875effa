"""
Identities on a coadjoint orbit of sl(2,R)
==========================================

The orbit ring is the polynomial ring in h, ep, em modulo the Casimir
relation h^2 + 4 ep em = c.  Below we check the cubic identities that the
quantization argument relies on, with c kept as a formal parameter.
"""

from sl2quant import poisson
from sl2quant.quantize import load_identities

# the structure constants of the standard triple
print("{h, ep} =", poisson.pbracket(poisson.h, poisson.ep))
print("{h, em} =", poisson.pbracket(poisson.h, poisson.em))
print("{ep, em} =", poisson.pbracket(poisson.ep, poisson.em))

# every identity is stored as grammar text and reduced exactly
ids = load_identities()
for name in ("h2_level", "cubic_h", "cubic_ladder"):
    entry = ids[name]
    rep = poisson.verify_identity(entry["lhs"], entry["rhs"], "c", name)
    print(f"{name:13s} {entry['lhs']}  =  {entry['rhs']}   residual: {rep.residual}")

# a deliberately wrong right-hand side leaves a visible residual
bad = poisson.verify_identity(ids["cubic_h"]["lhs"], "2*c*h")
print("wrong rhs residual:", bad.residual)

# on the nilpotent cone (c = 0) the ring is graded, and each h^l is
# ad-cyclic in its degree, which is what lets Q(h^2) = 0 spread upward
for l in range(2, 7):
    rhs = f"1/{2 * l + 2}*{{{{h^2, h^{l - 2}*ep}}, em}}"
    rep = poisson.verify_identity(f"h^{l}", rhs, 0)
    cyc = poisson.adjoint_cyclicity_check(l)
    print(f"h^{l} = {rhs}: {rep.holds}   cyclic span {cyc.details['span_dimension']}/{2 * l + 1}")
