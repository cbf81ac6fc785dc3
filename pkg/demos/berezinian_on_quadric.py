"""
The Berezinian on the odd symplectic quadric
============================================

Supermatrices with entries in a Grassmann algebra, their Berezinian, and
the square root Ber(P) that exists on matrices preserving an odd
symplectic form.
"""

import numpy as np

from bvglue.superlinalg import (OddSymplecticForm, SuperDimension, berezinian, ber_half,
                                grassmann, on_quadric, random_matrix, random_quadric)

rng = np.random.default_rng(7)

# a Grassmann algebra with six odd generators supplies the entries
L = grassmann(6)

# an even invertible supermatrix on dimension 2|2
dim = SuperDimension.of(2, 2)
A = random_matrix(rng, L, dim, invertible=True)
B = random_matrix(rng, L, dim, invertible=True)
print("Ber(A) =", berezinian(A).to_text())

# the Berezinian is multiplicative; the difference is exactly zero
print("Ber(AB) - Ber(A)Ber(B) =", (berezinian(A @ B) - berezinian(A) * berezinian(B)).to_text())

# an odd symplectic form on V = L + L° with L of dimension 1|1
w = OddSymplecticForm([0, 1])
Q = random_quadric(rng, w, L)
print("Q preserves the form:", on_quadric(Q, w))

# on the quadric, Ber(Q) is the square of Ber(P) for the upper-left block P
root = ber_half(Q, w)
print("Ber(P) =", root.to_text())
print("Ber(Q) - Ber(P)^2 =", (berezinian(Q) - root ** 2).to_text())

# and the square root is itself multiplicative on the quadric
R = random_quadric(rng, w, L)
print("Ber^(1/2)(QR) - Ber^(1/2)(Q) Ber^(1/2)(R) =",
      (ber_half(Q @ R, w) - root * ber_half(R, w)).to_text())
