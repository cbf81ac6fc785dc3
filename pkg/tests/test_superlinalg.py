from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bvglue.superlinalg import (OddSymplecticForm, SuperDimension, SuperMatrix,
                                ber_half, berezinian, berezinian_alt, grassmann,
                                inverse, pidual, quadric_residuals, random_matrix,
                                random_quadric, supertranspose)

L = grassmann(6)
DIMS = [SuperDimension.of(1, 1), SuperDimension.of(2, 2), SuperDimension([0, 1, 1]),
        SuperDimension([1, 0, 0, 1])]
seeds = st.integers(0, 2**31)


def pick(rng, seq):
    return seq[int(rng.integers(len(seq)))]


def scalar_matrix(rng, src, tgt, parity):
    """Random matrix with rational entries (zero where parity forbids)."""
    rows = [[Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) if (parity + p + q) % 2 == 0 else 0
             for q in src.parities] for p in tgt.parities]
    return SuperMatrix(L, src, tgt, rows, parity)


def test_identity_fixed():
    for d in DIMS:
        I = SuperMatrix.identity(L, d)
        assert supertranspose(I) == I
        assert pidual(I) == SuperMatrix.identity(L, d.flipped())
        assert berezinian(I) == 1


def test_diagonal_berezinian():
    A = SuperMatrix(L, SuperDimension.of(1, 1), SuperDimension.of(1, 1), [[2, 0], [0, 3]])
    assert berezinian(A) == Fraction(2, 3)


def test_singular_block_is_named():
    A = SuperMatrix(L, SuperDimension.of(1, 1), SuperDimension.of(1, 1), [[2, 0], [0, 0]])
    with pytest.raises(ZeroDivisionError, match="A11"):
        berezinian(A)


@given(seeds)
def test_double_supertranspose_on_scalar_matrices(seed):
    rng = np.random.default_rng(seed)
    src, tgt = pick(rng, DIMS), pick(rng, DIMS)
    A = scalar_matrix(rng, src, tgt, int(rng.integers(0, 2)))
    assert supertranspose(supertranspose(A)) == A.scale((-1) ** A.parity)


@given(seeds)
def test_double_supertranspose_grassmann_entries(seed):
    # with Grassmann coefficients the odd entries also pick up the grading involution
    rng = np.random.default_rng(seed)
    src, tgt = pick(rng, DIMS), pick(rng, DIMS)
    A = random_matrix(rng, L, src, tgt, int(rng.integers(0, 2)))
    AA = supertranspose(supertranspose(A))
    for i, row in enumerate(A.rows):
        for j, e in enumerate(row):
            sign = (-1) ** (tgt.parities[i] + src.parities[j])
            assert AA.rows[i][j] == e * sign


@given(seeds)
def test_transpose_rules(seed):
    rng = np.random.default_rng(seed)
    V, W, X = (pick(rng, DIMS) for _ in range(3))
    pa, pb = (int(v) for v in rng.integers(0, 2, 2))
    A = random_matrix(rng, L, V, W, pa)
    B = random_matrix(rng, L, X, V, pb)
    C = random_matrix(rng, L, V, W, pa)
    s = (-1) ** (pa * pb)
    assert supertranspose(A @ B) == (supertranspose(B) @ supertranspose(A)).scale(s)
    assert pidual(A @ B) == (pidual(B) @ pidual(A)).scale(s)
    assert supertranspose(A + C) == supertranspose(A) + supertranspose(C)
    assert pidual(A + C) == pidual(A) + pidual(C)
    assert pidual(pidual(A)) == A


@given(seeds)
def test_berezinian_properties(seed):
    rng = np.random.default_rng(seed)
    d = pick(rng, DIMS)
    A = random_matrix(rng, L, d, invertible=True)
    B = random_matrix(rng, L, d, invertible=True)
    assert berezinian(A @ B) == berezinian(A) * berezinian(B)
    assert berezinian(A) == berezinian_alt(A)
    assert berezinian(supertranspose(A)) == berezinian(A)
    assert berezinian(pidual(A)) * berezinian(A) == 1
    assert inverse(A) @ A == SuperMatrix.identity(L, d)


def test_purely_even_and_purely_odd():
    A = SuperMatrix(L, SuperDimension.of(2, 0), SuperDimension.of(2, 0), [[1, 2], [3, 4]])
    B = SuperMatrix(L, SuperDimension.of(0, 2), SuperDimension.of(0, 2), [[1, 2], [3, 4]])
    assert berezinian(A) == -2
    assert berezinian(B) == Fraction(-1, 2)


def test_quadric_examples():
    w = OddSymplecticForm([0])
    I = SuperMatrix.identity(L, w.V)
    assert all(r.is_zero() for r in quadric_residuals(I, w))
    D = SuperMatrix(L, w.V, w.V, [[2, 0], [0, Fraction(1, 2)]])
    assert all(r.is_zero() for r in quadric_residuals(D, w))
    assert ber_half(D, w) == 2
    assert berezinian(D) == 4
    lam = L.gens
    w2 = OddSymplecticForm([0, 0])
    R = SuperMatrix(L, w2.L, w2.Lo, [[lam[0], lam[1]], [lam[1], lam[2]]], 0)
    R = (R + pidual(R)).scale(Fraction(1, 2))
    Z = SuperMatrix.zero(L, w2.Lo, w2.L)
    lower = SuperMatrix.blocks(L, SuperMatrix.identity(L, w2.L), Z, R, SuperMatrix.identity(L, w2.Lo))
    assert all(r.is_zero() for r in quadric_residuals(lower, w2))


def test_ber_half_rejects_off_quadric():
    w = OddSymplecticForm([0])
    A = SuperMatrix(L, w.V, w.V, [[2, 0], [0, 1]])
    with pytest.raises(ValueError, match="S°P"):
        ber_half(A, w)


def test_random_quadric_zero_factors_is_identity(rng):
    w = OddSymplecticForm([0, 0])
    assert random_quadric(rng, w, L, factors=0) == SuperMatrix.identity(L, w.V)


@given(seeds, st.sampled_from([[0], [0, 0], [0, 1], [0, 0, 1]]))
def test_quadric_berezinian_square(seed, lag):
    rng = np.random.default_rng(seed)
    w = OddSymplecticForm(lag)
    A = random_quadric(rng, w, L)
    B = random_quadric(rng, w, L)
    assert berezinian(A) == ber_half(A, w) ** 2
    AB = A @ B
    assert all(r.is_zero() for r in quadric_residuals(AB, w))
    assert ber_half(AB, w) == ber_half(A, w) * ber_half(B, w)


def test_even_lagrangian_gives_det_squared(rng):
    w = OddSymplecticForm([0, 0])
    A = random_quadric(rng, w, L, factors=4)
    P = A.submatrix([0, 1], [0, 1])
    det = P.rows[0][0] * P.rows[1][1] - P.rows[0][1] * P.rows[1][0]
    assert berezinian(A) == det * det
