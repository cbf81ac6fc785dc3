import numpy as np
from hypothesis import given, strategies as st

from bvglue.bvcalc import (DarbouxChart, HalfForm, antibracket, antibracket_formula,
                           bracket, delta0, delta_op, flow_coordinates_formula,
                           flow_first_order, hamlift, hamlift_op, m, qme_residual,
                           qme_tower, tower_vs_laurent)
from bvglue.superpoly import Universe, random_poly

U = Universe("bv")
chart = DarbouxChart.create(U, [0, 0, 1], ghosts=[0, 1, 0])
eps = U.nilpotent("eps")
hbar = U.declare_hbar()
GENS = chart.x + chart.xi
seeds = st.integers(0, 2**31)

V = Universe("one")
c1 = DarbouxChart.create(V, [0])
eps1 = V.nilpotent("eps")
(x, xi), = c1.pairs


def rand(rng, parity=None, deg=4, terms=4):
    return random_poly(rng, GENS, deg, terms, parity=parity)


def test_delta_examples():
    assert delta0(c1, V.one()).is_zero()
    assert delta0(c1, x * xi) == 1
    assert HalfForm(x * xi, c1).delta().coef == 1


def test_bracket_examples():
    assert antibracket(x, xi, c1) == 1
    assert antibracket(x, x, c1).is_zero()


def test_hamlift_of_one_vanishes():
    assert hamlift(V.one(), x * xi + x ** 3, c1).is_zero()


def test_flow_of_volume():
    f = x * xi
    assert flow_first_order(f, V.one(), c1, eps1) == 1 - eps1 * delta0(c1, f)
    assert flow_first_order(V.zero(), x ** 2, c1, eps1) == x ** 2


def test_flow_rejects_even_hamiltonian():
    import pytest

    with pytest.raises(ValueError):
        flow_first_order(x.poly, V.one(), c1, eps1)


def test_displayed_flow_coordinates_on_even_chart():
    rng = np.random.default_rng(3)
    W = Universe()
    ch = DarbouxChart.create(W, [0, 0])
    e = W.nilpotent("e")
    for _ in range(20):
        f = random_poly(rng, ch.x + ch.xi, 4, 4, parity=1)
        shown = flow_coordinates_formula(f, ch, e)
        for v in ch.x + ch.xi:
            assert shown[v] == v + e * antibracket(f, v, ch)


def test_qme_examples():
    W = Universe()
    ch = DarbouxChart.create(W, [0, 0])
    W.declare_hbar()
    assert qme_residual(W.zero(), ch).is_zero()
    assert qme_residual(ch.xi[0].poly, ch).is_zero()
    x1, x2 = ch.x
    xi1, xi2 = ch.xi
    # x1 xi2 only differentiates along x1 and xi2, which are not paired
    assert qme_residual(x1 * xi2, ch).is_zero()
    # odd S: (S, S) vanishes by antisymmetry, only hbar * Delta S = hbar remains
    assert qme_residual(x1 * xi1, ch) == W.hbar
    # even S: each product of first derivatives repeats an odd coordinate
    S = x1 * x2 * xi1 * xi2
    assert antibracket(S, S, ch).is_zero()
    assert qme_residual(S, ch) == W.hbar * (x2 * xi2 - x1 * xi1)


def test_tower_examples():
    assert all(r.is_zero() for r in qme_tower([U.zero()] * 4, 3, chart))
    assert qme_tower([chart.xi[0].poly], 0, chart)[0].is_zero()


@given(seeds)
def test_delta_squares_to_zero(seed):
    rng = np.random.default_rng(seed)
    s = rand(rng)
    D = delta_op(chart)
    assert D(D(s)).is_zero()
    G = delta_op(chart, gaussian=True)
    assert G(G(s)).is_zero()


@given(seeds)
def test_second_order(seed):
    rng = np.random.default_rng(seed)
    f, g, h = (rand(rng, int(p)) for p in rng.integers(0, 2, 3))
    s = rand(rng)
    op = bracket(bracket(bracket(delta_op(chart), m(f)), m(g)), m(h))
    assert op(s).is_zero()


@given(seeds)
def test_bracket_properties(seed):
    rng = np.random.default_rng(seed)
    pf, pg, ph = (int(p) for p in rng.integers(0, 2, 3))
    f, g, h = rand(rng, pf), rand(rng, pg), rand(rng, ph)
    fg = antibracket(f, g, chart)
    assert fg == antibracket_formula(f, g, chart)
    assert (antibracket(g, f, chart) + fg * (-1) ** ((pf + 1) * (pg + 1))).is_zero()
    jac = (antibracket(f, antibracket(g, h, chart), chart) - antibracket(fg, h, chart)
           - antibracket(g, antibracket(f, h, chart), chart) * (-1) ** ((pf + 1) * (pg + 1)))
    assert jac.is_zero()
    # the bracket is a multiplication operator
    test = rand(rng)
    op = bracket(bracket(delta_op(chart), m(f)), m(g))
    assert op(test) * (-1) ** pf == fg * test


@given(seeds)
def test_hamlift_properties(seed):
    rng = np.random.default_rng(seed)
    pf, pg = (int(p) for p in rng.integers(0, 2, 2))
    f, g, s = rand(rng, pf), rand(rng, pg), rand(rng)
    fg = antibracket(f, g, chart)
    Hf, Hg = hamlift_op(f, chart), hamlift_op(g, chart)
    assert bracket(Hf, m(g))(s) == fg * s
    rhs = f * Hg(s) + g * Hf(s) * (-1) ** (pf * pg) + fg * s * (-1) ** pg
    assert hamlift(f * g, s, chart) == rhs
    assert hamlift(fg, s, chart) == bracket(Hf, Hg)(s)
    assert bracket(Hf, delta_op(chart))(s).is_zero()


@given(seeds)
def test_flow_law(seed):
    rng = np.random.default_rng(seed)
    f, s = rand(rng, 1), rand(rng)
    assert flow_first_order(f, s, chart, eps) == s + eps * hamlift(f, s, chart)


@given(seeds)
def test_ghost_bookkeeping(seed):
    rng = np.random.default_rng(seed)
    gens = GENS
    f = U.one()
    g = U.one()
    for _ in range(int(rng.integers(1, 4))):
        f = f * gens[int(rng.integers(len(gens)))]
    for _ in range(int(rng.integers(1, 4))):
        g = g * gens[int(rng.integers(len(gens)))]
    if f.is_zero() or g.is_zero():
        return
    (gf,), (gg,) = f.ghosts(), g.ghosts()
    fg = antibracket(f, g, chart)
    assert fg.is_zero() or fg.ghosts() == {gf + gg + 1}
    d = delta0(chart, f)
    assert d.is_zero() or d.ghosts() == {gf + 1}


def test_delta_independent_of_pair_order():
    rng = np.random.default_rng(11)
    perm_chart, sign = chart.permuted([2, 0, 1])
    assert sign in (1, -1)
    for _ in range(10):
        s = rand(rng)
        assert delta0(perm_chart, s * sign) == delta0(chart, s) * sign


@given(seeds)
def test_tower_matches_laurent(seed):
    rng = np.random.default_rng(seed)
    Sn = [rand(rng, 0, 3, 3) for _ in range(4)]
    assert all(r.is_zero() for r in tower_vs_laurent(Sn, 3, chart))
