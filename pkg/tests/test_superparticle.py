from fractions import Fraction

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from bvglue.clifford import TRANSVERSE
from bvglue.superparticle import (FieldRegistry, MomentumPoint, action_S0, berezinian_weights,
                                  bernoulli, cover_membership, dirichlet_L, eta_plus_minus,
                                  free_action, ghost_and_parity, hurwitz_neg, lemma_fixed_residuals,
                                  lorentz_p_plus_on_family, make_gauge, moment_restrictions,
                                  p_tau_lower_bound, partition_phi, poly_eval, psi_divergence,
                                  ramp, restrict_to_gauge, salient_term, sample_U_both,
                                  tau_independence_residuals)
from bvglue.superpoly import partial, substitute

REG = FieldRegistry(N=3)
SMALL = FieldRegistry(N=1, name="small")


def point(*head, p9=0, rest=()):
    comps = list(head) + list(rest)
    comps += [0] * (9 - len(comps))
    return MomentumPoint(comps + [p9])


# registry -------------------------------------------------------------------

def test_pairing_is_a_bijection():
    assert REG.pairing_problems() == []


def test_registry_table():
    rows = {r["field"]: r for r in REG.table()}
    assert (rows["c"]["ghost"], rows["c"]["parity"]) == (1, 1)
    assert (rows["c+"]["ghost"], rows["c+"]["parity"]) == (-2, 0)
    for n in range(4):
        assert rows[f"th{n}"]["ghost"] == n and rows[f"th{n}"]["parity"] == (n + 1) % 2
        assert rows[f"th{n}+"]["ghost"] == -1 - n
        assert rows[f"th{n}"]["chirality"] == ("+" if n % 2 == 0 else "-")
    assert {rows[f]["form_degree"] for f in ("e", "x+", "p+", "c+", "th0+")} == {1}


def test_registry_rejects_bad_cutoff():
    with pytest.raises(ValueError):
        FieldRegistry(N=-2)


# integrands and the normalizer -----------------------------------------------

def test_S0_bookkeeping():
    S0 = action_S0(REG)
    assert ghost_and_parity(S0) == ({0}, 0)
    U = REG.universe
    # A c with A odd: the left derivative by c is -A
    coeff = -partial(U["c[0]"], S0)
    p = REG.momentum()
    xp = REG.comp("x+", 0) * p.comps[0]
    for i in range(1, 10):
        xp = xp - REG.comp("x+", i) * p.comps[i]
    assert coeff == REG.comp("e+", 0, 1) - xp


def test_salient_bookkeeping():
    sal = salient_term(REG)
    assert ghost_and_parity(sal) == ({0}, 0)
    assert not REG.is_total_derivative(sal)


def test_salient_transposed_form():
    from bvglue.superparticle import contract

    p = REG.momentum()
    transposed = contract(p, REG.spinor("th0", 1), REG.spinor("th0")) * mpq(1, 2)
    assert REG.normalize(salient_term(REG) - transposed).is_zero()


def test_kinetic_term_by_parts():
    # x dp = -p dx modulo total derivatives
    x, p = REG.comp("x", 3), REG.comp("p", 3)
    dx, dp = REG.comp("x", 3, 1), REG.comp("p", 3, 1)
    assert REG.normalize(x * dp + p * dx).is_zero()
    assert REG.normalize(x * dp) == REG.normalize(-(p * dx))


def _random_diff_poly(reg, data):
    names = [("p", 0), ("x", 1), ("th0", 0), ("th0", 5), ("th1", 2), ("c", 0)]
    out = reg.universe.zero()
    for _ in range(data.draw(st.integers(1, 4))):
        term = reg.universe.coerce(data.draw(st.integers(-3, 3)))
        for _ in range(data.draw(st.integers(1, 3))):
            name, i = data.draw(st.sampled_from(names))
            term = term * reg.comp(name, i, data.draw(st.integers(0, 1)))
        out = out + term
    return out


@settings(max_examples=40)
@given(st.data())
def test_normalizer_kills_total_derivatives(data):
    g = _random_diff_poly(SMALL, data)
    assert SMALL.normalize(SMALL.d(g)).is_zero()


@settings(max_examples=40)
@given(st.data())
def test_normalizer_is_idempotent_and_linear(data):
    f, g = _random_diff_poly(SMALL, data), _random_diff_poly(SMALL, data)
    nf = SMALL.normalize(f)
    assert SMALL.normalize(nf) == nf
    assert SMALL.normalize(f + SMALL.d(g)) == nf


def test_derivative_beyond_jet_order():
    with pytest.raises(ValueError, match="jet order"):
        SMALL.d(SMALL.comp("x", 0, 2))


# gauges ----------------------------------------------------------------------

@pytest.mark.parametrize("gauge", ["L(m+)", "L(m-)", "L(tau)"])
def test_lemma_fixed(gauge):
    res = lemma_fixed_residuals(REG, gauge)
    assert set(res) == {"S0", "salient", "tower 0", "tower 1", "tower 2"}
    assert all(r.is_zero() for r in res.values())


def test_restrict_S0():
    got = restrict_to_gauge(REG, action_S0(REG), "L(m+)")
    p = REG.momentum()
    expected = sum((p.comps[i] * REG.comp("x", i, 1) for i in range(10)), REG.universe.zero())
    pp = p.comps[0] * p.comps[0] - sum((p.comps[i] * p.comps[i] for i in range(1, 10)),
                                       REG.universe.zero())
    expected = expected - pp * mpq(1, 2) + REG.comp("e+", 0, 1) * REG.comp("c")
    assert got == expected


def test_restrict_x_plus_term():
    term = REG.comp("x+", 4) * REG.comp("p", 4) * REG.comp("c")
    assert restrict_to_gauge(REG, term, "L(m-)").is_zero()


def test_salient_restriction_is_not_trivial():
    assert not restrict_to_gauge(REG, salient_term(REG), "L(m+)").is_zero()


def test_unknown_gauge():
    with pytest.raises(ValueError, match="unknown gauge"):
        make_gauge(REG, "L(m)")


# redefinition ----------------------------------------------------------------

def test_tau_independence():
    res = tau_independence_residuals(SMALL)
    assert all(r.is_zero() for r in res.values())
    assert not free_action(SMALL).is_zero()


def test_eta_plus_minus():
    reg = FieldRegistry(N=-1, name="empty")
    assert eta_plus_minus(reg).is_zero()
    assert eta_plus_minus(SMALL) == eta_plus_minus(SMALL, redefined=False)
    assert not eta_plus_minus(SMALL).is_zero()


def test_eta_matches_display_at_level_zero():
    from bvglue.clifford import pair_bivec

    reg = FieldRegistry(N=0, name="level0")
    got = eta_plus_minus(reg)
    U, ring = reg.universe, reg.ring
    expected = U.zero()
    for a in TRANSVERSE:
        expected = expected + ring.p(a) * pair_bivec(a, 9, reg.spinor("th0+"), reg.spinor("th0"))
    assert got == expected * ring.P ** -1 * U["pi"].poly * -1


def test_flow_hamiltonian_is_divergence_free():
    assert psi_divergence(SMALL).is_zero()


def test_berezinian_weights_alternate():
    assert berezinian_weights(REG) == [-16, 48, -80, 112]
    assert [w // -16 for w in berezinian_weights(REG)] == [1, -3, 5, -7]


# moment maps -----------------------------------------------------------------

@pytest.mark.parametrize("gauge", ["L(m+)", "L(m-)"])
def test_moment_restrictions(gauge):
    m = moment_restrictions(SMALL, gauge)
    assert all(x.is_zero() for x in m["translation"])
    assert m["susy second"].is_zero() and not m["susy first"].is_zero()
    expected = {(0, a) for a in TRANSVERSE} | {(a, 9) for a in TRANSVERSE}
    assert m["lorentz surviving"] == expected
    assert all(x.is_zero() for x in m["lorentz x+ p+"])


def test_lorentz_p_plus_on_family_vanishes_at_zero():
    U = SMALL.universe
    terms = lorentz_p_plus_on_family(SMALL)
    assert any(not t.is_zero() for t in terms)
    assert all(substitute(t, {U["c"]: 1, U["s"]: 0}).is_zero() for t in terms)


# momentum space --------------------------------------------------------------

def test_cover_examples():
    omitted = cover_membership(point(1, p9=1))
    assert not omitted["U(m+)"]
    rec = cover_membership(point(2, 1))
    assert not rec["U"]
    rec = cover_membership(point(2, 2))
    assert rec["U"] and rec["U+"] and rec["U-"]


def test_positivity_on_sampled_points(rng):
    pts = sample_U_both(rng, 1000)
    quarter = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)),
               (Fraction(3, 5), Fraction(4, 5)), (Fraction(12, 13), Fraction(5, 13))]
    for pt in pts:
        rec = cover_membership(pt)
        assert rec["U+-"] and rec["p(tau) bound positive"] and rec["p* > p0/2"]
        assert all(p_tau_lower_bound(pt, c, s) for c, s in quarter)


@settings(max_examples=200)
@given(st.lists(st.fractions(-10, 10, max_denominator=9), min_size=10, max_size=10))
def test_cover_property(comps):
    rec = cover_membership(MomentumPoint(comps))
    assert rec["covered"] and rec["U+ in U(m+)"] and rec["U- in U(m-)"]


def test_lower_bound_rejects_off_circle():
    with pytest.raises(ValueError):
        p_tau_lower_bound(point(4, 3), Fraction(1), Fraction(1))


def test_ramp():
    assert ramp(Fraction(1, 4)) == 0 and ramp(Fraction(3, 4)) == 1
    assert ramp(Fraction(1, 2)) == Fraction(1, 2)
    for k in range(21):
        t = Fraction(k, 20)
        assert ramp(t) + ramp(1 - t) == 1


def test_partition_examples():
    assert partition_phi(point(2, 2)) == (Fraction(1, 2), Fraction(1, 2))
    assert partition_phi(point(4, 3, p9=-4)) == (1, 0)
    with pytest.raises(ValueError, match="not in U"):
        partition_phi(point(2, 1))


def test_partition_sums_and_supports(rng):
    pts = []
    while len(pts) < 100:
        raw = rng.integers(-40, 41, size=10)
        pt = MomentumPoint([Fraction(int(v), 3) for v in raw])
        if pt.in_U():
            pts.append(pt)
    for pt in pts:
        plus, minus = partition_phi(pt)
        assert plus + minus == 1
        if plus > 0:
            assert pt.in_U_pm(1)
        if minus > 0:
            assert pt.in_U_pm(-1)


# Bernoulli / Hurwitz -----------------------------------------------------------

def test_bernoulli_two():
    assert bernoulli(2) == [Fraction(1, 6), -1, 1]


@pytest.mark.parametrize("n", range(0, 13))
def test_bernoulli_against_sympy(n):
    a = sympy.Symbol("a")
    ref = sympy.Poly(sympy.bernoulli(n, a), a).all_coeffs()[::-1]
    assert [Fraction(int(c.p), int(c.q)) for c in ref] == bernoulli(n)


@pytest.mark.parametrize("n", range(1, 13))
def test_bernoulli_reflection(n):
    for a in (Fraction(0), Fraction(1, 3), Fraction(2, 7), Fraction(5, 4)):
        assert poly_eval(bernoulli(n), 1 - a) == (-1) ** n * poly_eval(bernoulli(n), a)


def test_zeta_values():
    assert hurwitz_neg(2, 1) == Fraction(-1, 12)
    with pytest.raises(ValueError):
        hurwitz_neg(0, 1)


def test_L_values():
    assert dirichlet_L(-1) == 0
    # L at non-positive integers: Euler numbers E_{2k}/2 at -2k, zero at odd negatives
    euler = [1, -1, 5, -61, 1385]
    for k, e in enumerate(euler):
        assert dirichlet_L(-2 * k) == Fraction(e, 2)
        assert dirichlet_L(-2 * k - 1) == 0
