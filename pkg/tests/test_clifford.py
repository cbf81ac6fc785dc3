import itertools
import json
from pathlib import Path

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from bvglue.clifford import (DIM, ETA, TRANSVERSE, ClMatrix, LightconeRing, MinkowskiVector,
                             build_rep, chirality_of, cl, commutation_with_lightcone,
                             conjugation_residual, g_tau, group_law_residual, inner,
                             lagrangian_tau_at_one, lemma_lightcone_residual,
                             lightcone_projector, m_minus, m_plus, m_tau, n_tau,
                             p_plus_correction, p_plus_flow_residual, pair, pair_bivec,
                             pair_vec, projector_rank, rotation_square_residual, spinor,
                             tower_spinors)
from bvglue.superpoly import Kind, Universe, substitute

GOLDEN = Path(__file__).parent / "golden" / "gamma16.json"
rep = build_rep()
RING = LightconeRing()


def pythagorean(k):
    """A rational point on the circle, away from the axes for k > 0."""
    return mpq(1 - k * k, 1 + k * k), mpq(2 * k, 1 + k * k)


# representation ------------------------------------------------------------

def test_all_ordered_clifford_pairs():
    for mu, nu in itertools.product(range(DIM), repeat=2):
        lhs = rep.sigma[mu] @ rep.sigmabar[nu] + rep.sigma[nu] @ rep.sigmabar[mu]
        assert (lhs == 2 * ETA[mu, nu] * np.eye(16)).all()
        lhs = rep.sigmabar[mu] @ rep.sigma[nu] + rep.sigmabar[nu] @ rep.sigma[mu]
        assert (lhs == 2 * ETA[mu, nu] * np.eye(16)).all()


def test_rep_examples():
    assert (rep.sigma[0] @ rep.sigmabar[0] == np.eye(16)).all()
    assert not (rep.sigma[1] @ rep.sigmabar[2] + rep.sigma[2] @ rep.sigmabar[1]).any()
    assert rep.clifford_residuals() == [] and rep.pairing_residuals() == []


def test_gamma_entries_are_integers():
    for g in rep.gamma:
        assert g.dtype.kind == "i" and set(np.unique(g)) <= {-1, 0, 1}


def test_golden_file_matches():
    assert json.loads(GOLDEN.read_text()) == rep.to_json()


def test_pairing_symmetry_on_spinors():
    U = Universe("pairing")
    a = spinor(U, "a", "+", 0)
    b = spinor(U, "b", "+", 0)
    for mu in range(DIM):
        g = ClMatrix.gamma(U, mu)
        assert pair(g.apply(a), b) == pair(a, g.apply(b))
    for mu, nu in [(0, 9), (1, 2), (3, 9), (0, 4)]:
        g = ClMatrix.gamma2(U, mu, nu)
        assert pair(g.apply(a), b) == -pair(a, g.apply(b))


def test_commutation_with_lightcone_directions():
    assert all(commutation_with_lightcone().values())


# light-cone operators --------------------------------------------------------

def test_cl_squares_and_anticommutator():
    U = Universe("cl")
    m, n = m_plus(U), m_minus(U)
    one = ClMatrix.identity(U)
    assert (cl(m) @ cl(m)).is_zero() and (cl(n) @ cl(n)).is_zero()
    assert cl(m) @ cl(n) + cl(n) @ cl(m) == one
    light = MinkowskiVector.basis(U, 0) + MinkowskiVector.basis(U, 9)
    assert (cl(light) @ cl(light)).is_zero()


@settings(max_examples=30)
@given(st.lists(st.integers(-5, 5), min_size=DIM, max_size=DIM))
def test_cl_square_is_norm(comps):
    U = Universe("norm")
    v = MinkowskiVector(U, comps)
    assert cl(v) @ cl(v) == ClMatrix.identity(U).scale(inner(v, v))


def test_cl_on_spinor_flips_chirality():
    U = Universe("flip")
    psi = spinor(U, "q", "+", 1)
    out = cl(MinkowskiVector.basis(U, 3), psi)
    assert chirality_of(psi) == "+" and chirality_of(out) == "-"


def test_projector():
    U = Universe("proj")
    m, n = m_plus(U), m_minus(U)
    P = lightcone_projector(m, n)
    assert P @ P == P
    assert (cl(m) @ P).is_zero()
    assert projector_rank(P, "+") == 8 and projector_rank(P, "-") == 8


def test_projector_rejects_bad_pair():
    U = Universe("bad")
    with pytest.raises(ValueError, match=r"\(m,n\)"):
        lightcone_projector(m_plus(U), m_plus(U))
    with pytest.raises(ValueError, match=r"\(m,m\)"):
        lightcone_projector(MinkowskiVector.basis(U, 0), m_minus(U))


@pytest.mark.parametrize("chirality", "+-")
def test_lemma_lightcone_symbolic(chirality):
    assert lemma_lightcone_residual(chirality).is_zero()


@pytest.mark.parametrize("chirality", "+-")
def test_lemma_lightcone_at_m(chirality):
    half = mpq(1, 2)
    assert lemma_lightcone_residual(chirality, [half] + [0] * 8 + [half]).is_zero()


@settings(max_examples=10)
@given(st.lists(st.fractions(-3, 3, max_denominator=5), min_size=DIM, max_size=DIM))
def test_lemma_lightcone_numeric(p):
    assert lemma_lightcone_residual("+", [mpq(x.numerator, x.denominator) for x in p]).is_zero()


def test_lemma_lightcone_needs_the_constraint():
    # the collapse p.T = 2(p,m) n.T fails for unconstrained spinors
    U = Universe("free")
    a, b = spinor(U, "a", "+", 1), spinor(U, "b", "+", 1)
    lhs = pair_vec(1, a, b)
    assert not lhs.is_zero()


# the rotation g(tau) ---------------------------------------------------------

def test_g_special_values():
    U = RING.universe
    one = ClMatrix.identity(U)
    assert g_tau(RING, 1, 0) == one
    half_turn = g_tau(RING, 0, 1)
    assert half_turn @ half_turn == -one


def test_rotation_square():
    assert rotation_square_residual(RING).is_zero()


@pytest.mark.parametrize("orientation", [1, -1])
def test_group_law(orientation):
    ring = LightconeRing(2, name=f"two{orientation}")
    assert group_law_residual(ring, orientation).is_zero()


@pytest.mark.parametrize("orientation", [1, -1])
def test_conjugation(orientation):
    res = conjugation_residual(RING, orientation)
    assert all(r.is_zero() for r in res.values())


def test_conjugation_uses_matching_orientation():
    U = RING.universe
    g = g_tau(RING, orientation=-1)
    ginv = g_tau(RING, RING.c, -RING.s, -1)
    assert not (g @ cl(m_plus(U)) @ ginv - cl(m_tau(RING, orientation=1))).is_zero()


def test_m_tau_is_null_and_normalized():
    m, n = m_tau(RING), n_tau(RING)
    assert inner(m, m).is_zero() and inner(n, n).is_zero()
    assert (inner(m, n) - mpq(1, 2)).is_zero()


def test_endpoints():
    assert all(lagrangian_tau_at_one(RING).values())


@pytest.mark.parametrize("level", [0, 1, 2])
def test_p_plus_flow(level):
    assert all(r.is_zero() for r in p_plus_flow_residual(RING, level))


def test_p_plus_flow_displayed_orientation():
    assert all(r.is_zero() for r in p_plus_flow_residual(RING, 0, orientation=-1))


def test_p_plus_correction_is_nontrivial_and_vanishes_at_zero():
    U = RING.universe
    for a in TRANSVERSE:
        corr = p_plus_correction(RING, a)
        assert not corr.is_zero()
        assert substitute(corr, {U["c"]: 1, U["s"]: 0}).is_zero()


def test_p_plus_flow_wrong_sign_fails():
    res = p_plus_flow_residual(RING, 0)
    flipped = [r + 2 * p_plus_correction(RING, a) for r, a in zip(res, TRANSVERSE)]
    assert not any(f.is_zero() for f in flipped)


@pytest.mark.parametrize("k", [mpq(1, 2), mpq(1, 3), mpq(2, 7)])
def test_p_plus_flow_numeric(k):
    U = RING.universe
    c, s = pythagorean(k)
    n7, n8 = pythagorean(mpq(1, 5))
    point = {U["c"]: c, U["s"]: s, U["n7"]: n7, U["n8"]: n8, U["pstar"]: 3}
    point.update({U[f"n{a}"]: 0 for a in range(1, 7)})
    for r in p_plus_flow_residual(RING, 0):
        assert substitute(r, point).is_zero()


def test_tower_spinor_chirality_and_parity():
    for level in range(3):
        th, ta = tower_spinors(RING, level)
        assert chirality_of(th) != chirality_of(ta)
        gens = {g for comp in th for g in comp.generators()
                if g.kind is Kind.FIELD}
        assert {g.parity for g in gens} == {(level + 1) % 2}
        assert {g.ghost for g in gens} == {level}


def test_bivector_pairing_on_gauge_is_antisymmetric():
    th, ta = tower_spinors(RING, 0)
    assert pair_bivec(1, 9, ta, th) == -pair(ta, ClMatrix.gamma2(RING.universe, 1, 9).apply(th))
