import json
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from bvglue.superpoly import (Kind, SuperPoly, Universe, berezin, exp_nilpotent,
                              gaussian_moment, laurent_coeff, mul, partial,
                              random_poly, substitute)


def make_universe():
    U = Universe("T")
    x, y = U.even("x"), U.even("y")
    a, b, c = U.odd("xi1"), U.odd("xi2"), U.odd("xi3")
    lam = [U.gen(f"lam{i}", 1, 0, Kind.ODD_CONST) for i in (1, 2)]
    h = U.declare_hbar()
    return U, x, y, a, b, c, lam, h


U, x, y, xi1, xi2, xi3, lam, hbar = make_universe()
GENS = [x, y, xi1, xi2, xi3]


def poly_strategy(parity=None, max_degree=4):
    import numpy as np

    return st.integers(0, 2**32 - 1).map(
        lambda s: random_poly(np.random.default_rng(s), GENS, max_degree, 4, parity=parity))


# -- worked examples ---------------------------------------------------------

def test_odd_square_vanishes():
    assert (xi1 * xi1).is_zero()


def test_koszul_antisymmetry():
    assert (xi1 * xi2 + xi2 * xi1).is_zero()


def test_difference_of_squares_with_nilpotents():
    assert (x + xi1 * xi2) * (x - xi1 * xi2) == x * x


def test_mismatched_universes_name_the_generator():
    V = Universe("V")
    z = V.even("z")
    with pytest.raises(ValueError, match="z"):
        mul(x.poly, z.poly)


def test_partial_examples():
    assert partial(xi1, xi1 * x) == x
    assert partial(xi1, xi2 * xi1) == -xi2.poly
    assert partial(x, x ** 3) == 3 * x ** 2


def test_partial_rejects_constants_and_forms():
    with pytest.raises(ValueError):
        partial(lam[0], lam[0] * x)
    W = Universe()
    dt = W.gen("dt1", 1, 1, Kind.SIMPLEX_FORM)
    with pytest.raises(ValueError):
        partial(dt, dt.poly)


def test_substitute_examples():
    W = Universe()
    t = W.even("t", kind=Kind.SIMPLEX)
    l1, l2 = W.gen("l1", 1, 0, Kind.ODD_CONST), W.gen("l2", 1, 0, Kind.ODD_CONST)
    z = W.even("z")
    a, b = W.odd("a"), W.odd("b")
    assert substitute(a.poly, {a: l1 * t}) == l1 * t
    assert substitute(a * b, {a: l1 * z, b: l2.poly}) == l1 * l2 * z
    assert substitute(z * z, {a: 0}) == z * z


def test_substitute_parity_mismatch():
    with pytest.raises(ValueError, match="xi1"):
        substitute(xi1.poly, {xi1: x.poly})


def test_berezin_examples():
    assert berezin(xi1 * xi2, [xi1, xi2]) == 1
    assert berezin(xi1 * xi2, [xi2, xi1]) == -1
    assert berezin(x * xi1, [xi1, xi2]).is_zero()
    assert berezin(U.one(), [xi1]).is_zero()
    with pytest.raises(ValueError):
        berezin(xi1.poly, [xi1, xi1])


def test_gaussian_examples():
    assert gaussian_moment(U.one(), [x]) == 1
    assert gaussian_moment(x ** 2, [x]) == 1
    assert gaussian_moment(x ** 4, [x]) == 3
    assert gaussian_moment(x ** 4 * y ** 2 + x, [x, y]) == 3
    with pytest.raises(ValueError):
        gaussian_moment(x * xi1, [x])


def test_gaussian_against_sympy_integral():
    s = sympy.Symbol("s", real=True)
    w = sympy.exp(-s ** 2 / 2) / sympy.sqrt(2 * sympy.pi)
    for k in range(0, 9):
        exact = sympy.integrate(s ** k * w, (s, -sympy.oo, sympy.oo))
        assert gaussian_moment(x ** k, [x]) == Fraction(int(exact), 1)


def test_laurent_examples():
    assert laurent_coeff(x * hbar ** -1 + 3, -1) == x
    assert laurent_coeff((1 + hbar * xi1 * xi2) ** 2, 1) == 2 * xi1 * xi2
    assert laurent_coeff(U.zero(), 5).is_zero()


def test_relations_and_units():
    W = Universe()
    c, s = W.even("c"), W.even("s")
    W.relation(s, 2, 1 - c * c)
    assert c * c + s * s == 1
    u = W.unit("u")
    assert u * u ** -1 == 1
    with pytest.raises(ValueError):
        W.relation(u, 2, 1)


def test_nilpotent_inverse_and_exp():
    f = 2 + xi1 * xi2
    assert f * f.inverse() == 1
    e = exp_nilpotent(xi1 * xi2 + xi1 * xi3)
    assert e == 1 + xi1 * xi2 + xi1 * xi3


def test_serialization_round_trip():
    f = Fraction(3, 4) * x ** 2 * xi1 - hbar ** -2 * xi2 + 5
    text = f.to_text()
    assert "3/4" in text and "hbar^-2" in text
    data = json.loads(json.dumps(f.to_json()))
    assert SuperPoly.from_json(U, data) == f


# -- properties -----------------------------------------------------------------

@given(poly_strategy(0), poly_strategy(1), poly_strategy(1))
def test_supercommutativity(f, g, h):
    for a in (f, g, h):
        for b in (f, g, h):
            sign = -1 if (a.parity and b.parity) else 1
            assert (a * b - b * a * sign).is_zero()


@given(poly_strategy(), poly_strategy(), st.sampled_from(GENS))
def test_graded_leibniz(f, g, v):
    f0, f1 = f.parity_parts()
    for fp in (f0, f1):
        p = fp.parity
        lhs = partial(v, fp * g)
        rhs = partial(v, fp) * g + fp * partial(v, g) * (-1) ** (v.parity * p)
        assert lhs == rhs


@given(poly_strategy(), st.sampled_from([xi1, xi2, xi3]))
def test_odd_derivative_squares_to_zero(f, v):
    assert partial(v, partial(v, f)).is_zero()


@given(poly_strategy(max_degree=5))
def test_stein_identity(g):
    # odd coordinates are integrated out first so only even ones remain
    g = berezin(g * xi1 * xi2 * xi3, [xi3, xi2, xi1])
    assert gaussian_moment(partial(x, g), [x, y]) == gaussian_moment(x * g, [x, y])


@given(st.lists(st.sampled_from(GENS + [lam[0]]), min_size=1, max_size=6), st.randoms())
def test_canonical_form_confluent(factors, r):
    def prod(seq):
        out = U.one()
        for g in seq:
            out = out * g
        return out

    shuffled = list(range(len(factors)))
    r.shuffle(shuffled)
    perm = [factors[i] for i in shuffled]
    # sign of the permutation restricted to odd factors
    odd_pos = [i for i in shuffled if factors[i].parity]
    inv = sum(1 for a in range(len(odd_pos)) for b in range(a + 1, len(odd_pos)) if odd_pos[a] > odd_pos[b])
    assert prod(perm) == prod(factors) * (-1) ** inv
