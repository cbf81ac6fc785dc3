"""
The superparticle tower and its regularized Berezinian
======================================================

The field redefinition that makes the light-cone action independent of the
gauge parameter rescales the tower of spinors by powers of p(tau).  Its
Berezinian is an infinite product whose exponent, after zeta
regularization, is proportional to L(-1) = 0.
"""

from fractions import Fraction

from bvglue.superparticle import (FieldRegistry, MomentumPoint, berezinian_weights,
                                  cover_membership, dirichlet_L, hurwitz_neg,
                                  lemma_fixed_residuals, partition_phi,
                                  tau_independence_residuals)

# a tower truncated at level 3: spinors th0..th3 with alternating chirality
reg = FieldRegistry(N=3, name="demo")
for row in reg.table()[:6]:
    print(row)

# on the light-cone gauges the action reduces to the gauge-fixed integrand
for gauge in ("L(m+)", "L(m-)", "L(tau)"):
    res = lemma_fixed_residuals(reg, gauge)
    print(gauge, "all residuals zero:", all(r.is_zero() for r in res.values()))

# after the redefinition nothing depends on tau
print("tau-independent:", all(r.is_zero() for r in tau_independence_residuals(reg).values()))

# doubled exponents of p(tau) per level: 16 (-1)^(n+1) (2n+1)
weights = berezinian_weights(reg)
print("weights:", weights)

# summing (-1)^n (2n+1) over all levels is divergent; its regularized value
# is L(-1) = 4 (zeta(-1, 1/4) - zeta(-1, 3/4))
print("zeta(-1, 1/4) =", hurwitz_neg(2, Fraction(1, 4)), " zeta(-1, 3/4) =", hurwitz_neg(2, Fraction(3, 4)))
print("L(-1) =", dirichlet_L(-1))

# no single gauge covers the forward cone, but the two rotated ones do
pt = MomentumPoint([5, 3, 0, 0, 0, 0, 0, 0, 0, 4])
rec = cover_membership(pt)
print("covered:", rec["covered"], " in U+:", rec["U+"], " in U-:", rec["U-"])
print("partition of unity at that point:", [str(v) for v in partition_phi(pt)])
