"""
Rotating one light-cone gauge into the other
============================================

Ten-dimensional gamma matrices with exact integer entries, the light-cone
projectors cut out by a null vector, and the spinor rotation g(tau) that
carries the gauge of m+ to the gauge of m- inside exact polynomial rings
with cos^2 + sin^2 = 1 imposed.
"""

import numpy as np

from bvglue.clifford import (DIM, ETA, LightconeRing, build_rep, conjugation_residual, g_tau,
                             group_law_residual, inner, lightcone_projector, m_minus, m_plus,
                             m_tau, n_tau, projector_rank)
from bvglue.superpoly import Universe

rep = build_rep()

# the gamma matrices are 32x32 integer arrays satisfying the Clifford relation
g = rep.gamma
worst = max(np.abs(g[mu] @ g[nu] + g[nu] @ g[mu] - 2 * ETA[mu, nu] * np.eye(32, dtype=int)).max()
            for mu in range(DIM) for nu in range(DIM))
print("largest Clifford defect:", worst)

# the projector cl(m+) cl(m-) keeps half of each chiral spinor
U = Universe("demo-lightcone")
P = lightcone_projector(m_plus(U), m_minus(U))
print("rank on + spinors:", projector_rank(P, "+"), " rank on - spinors:", projector_rank(P, "-"))

# the rotation lives over Q[c, s, n_a, p*^(+-1)] with c^2 + s^2 = 1 and |n| = 1
ring = LightconeRing(name="demo-ring")
m, n = m_tau(ring), n_tau(ring)
print("(m, m) =", inner(m, m).to_text(), " (m, n) =", inner(m, n).to_text())

# at tau = 0 the frame is (m+, m-); at tau = 1 the two have swapped
Ur = ring.universe
print("m(0) = m+:", m_tau(ring, 1, 0) == m_plus(Ur), " m(1) = m-:", m_tau(ring, 0, 1) == m_minus(Ur))

# g(tau) conjugates cl(m+) into cl(m(tau)) exactly
for name, res in conjugation_residual(ring).items():
    print(f"{name}: residual zero = {res.is_zero()}")

# and the rotations compose by adding angles
two = LightconeRing(2, name="demo-ring2")
print("g(t1) g(t2) - g(t1 + t2) is zero:", group_law_residual(two).is_zero())
print("g(1) =", g_tau(ring, 0, 1).to_text()[:80], "...")
