"""Exact supercommutative algebra and machine-checked BV gauge-fixing identities.

Modules:

``superpoly``      exact Z x Z/2-graded polynomials with Laurent and algebraic generators
``superlinalg``    supermatrices, Berezinian, odd symplectic quadric
``bvcalc``         Darboux charts, the BV operator, antibracket, Hamiltonian lifts
``simplexforms``   polynomial forms on standard simplices
``descent``        Cech models, flexible Lagrangians, the glued trace, equivariance
``clifford``       Spin(1,9) gamma matrices, light-cone projectors, the rotated gauge
``superparticle``  the superparticle tower, its gauges, redefinition and zeta checks
``suites``, ``cli`` the verification runner
"""

__version__ = "0.1.0"
