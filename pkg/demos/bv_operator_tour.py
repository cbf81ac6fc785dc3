"""
A tour of the BV operator
=========================

Half-form coefficients on a Darboux chart, the second-order operator
Delta, the antibracket it generates and the quantum master equation.
"""

from fractions import Fraction

import numpy as np

from bvglue.bvcalc import (DarbouxChart, antibracket, antibracket_formula, delta_op, hamlift,
                           qme_residual, qme_tower)
from bvglue.superpoly import Universe, random_poly

U = Universe("tour")
hbar = U.declare_hbar()

# one even coordinate x1 and one odd ghost x2, with antifields xi1 (odd) and xi2 (even)
chart = DarbouxChart.create(U, [0, 1], ghosts=[0, 1])
(x1, x2), (xi1, xi2) = chart.x, chart.xi
D = delta_op(chart)

# Delta pairs each coordinate with its antifield
print("Delta(x1 xi1) =", D(x1 * xi1).to_text())
print("Delta(x1^2 xi1 x2 xi2) =", D(x1 ** 2 * xi1 * x2 * xi2).to_text())

# on random polynomials Delta squares to zero
rng = np.random.default_rng(1)
s = random_poly(rng, chart.x + chart.xi + [hbar], 4, 8)
print("Delta(Delta s) =", D(D(s)).to_text())

# the antibracket measures how far Delta is from a derivation
f = x1 ** 2 * xi2
g = x2 * xi1 + x1
print("(f, g) =", antibracket(f, g, chart).to_text())
print("matches the coordinate formula:", antibracket(f, g, chart) == antibracket_formula(f, g, chart))

# the Hamiltonian lift of f acts on half-forms
print("H_f(x1 x2) =", hamlift(f, x1 * x2, chart).to_text())

# the shift symmetry x1 -> x1 + c of the zero action gives S = xi1 x2,
# which solves the master equation exactly
S = xi1 * x2
print("hbar Delta S + (S,S)/2 =", qme_residual(S, chart).to_text())

# adding a potential for x1 breaks the symmetry and the equation fails
T = S + x1 ** 2 * Fraction(-1, 2)
print("with -x1^2/2 added:", qme_residual(T, chart).to_text())

# with S = S0 + hbar S1 there is one equation per power of hbar; the
# correction S1 = x1 xi1 fails at orders one and two
print("tower:", [t.to_text() for t in qme_tower([S, x1 * xi1], 2, chart)])
