"""Named verification checks grouped into suites.

A check is a small function that builds its own exact objects, draws any
random inputs from a private generator, and returns the residuals it
computed.  Residuals are exact (polynomials, rationals, integer matrices or
boolean verdicts); the runner turns them into canonical text and a pass
flag.  Every check owns its random stream, derived from the run seed and
the check name, so adding or reordering checks never changes the inputs
of the others.
"""

from __future__ import annotations

import itertools
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from gmpy2 import mpq

from .superpoly import SuperPoly

SUITES = ("superlinalg", "bv", "simplex", "descent", "clifford", "superparticle", "zeta")


@dataclass
class Context:
    """What a check may read: its random stream and the size knobs of the run."""

    rng: np.random.Generator
    trials: int | None = None
    max_degree: int = 4
    truncation: int = 2

    def count(self, default: int) -> int:
        return default if self.trials is None else self.trials


@dataclass
class Check:
    name: str
    suite: str
    anchor: str
    formula: str
    constants: str
    fn: Callable[[Context], object] = field(repr=False)


REGISTRY: dict[str, Check] = {}


class Split(dict):
    """Check output that becomes one record per key, named ``check[key]``."""


def check(suite: str, name: str, anchor: str, formula: str, constants: str = "none"):
    def wrap(fn):
        if name in REGISTRY:
            raise ValueError(f"duplicate check {name!r}")
        REGISTRY[name] = Check(name, suite, anchor, formula, constants, fn)
        return fn
    return wrap


def checks_for(suite: str) -> list[Check]:
    if suite == "all":
        return [c for s in SUITES for c in checks_for(s)]
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    return sorted((c for c in REGISTRY.values() if c.suite == suite), key=lambda c: c.name)


def lookup(name: str) -> Check:
    base = name.split("[", 1)[0]
    if base not in REGISTRY:
        raise KeyError(f"unknown check {name!r}")
    return REGISTRY[base]


def check_rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([seed % 2**64, zlib.crc32(name.encode())])


# ---------------------------------------------------------------------------
# residual text


def residual_text(r) -> str:
    """Canonical text of one residual; exactly "0" when it vanishes."""
    if r is None or r is True:
        return "0"
    if r is False:
        return "violated"
    if isinstance(r, SuperPoly):
        return r.to_text()
    if isinstance(r, np.ndarray):
        if not r.any():
            return "0"
        idx = [tuple(int(i) for i in ix) for ix in np.argwhere(r)]
        return "; ".join(f"{list(ix)}: {r[ix]}" for ix in idx[:4]) + ("; ..." if len(idx) > 4 else "")
    if isinstance(r, (int, Fraction)) or type(r).__name__ == "mpq":
        q = Fraction(r)
        return str(q)
    if isinstance(r, str):
        return r
    if hasattr(r, "is_zero") and hasattr(r, "rows"):
        if r.is_zero():
            return "0"
        bad = [f"[{i},{j}] {e.to_text()}" for i, row in enumerate(r.rows)
               for j, e in enumerate(row) if not e.is_zero()]
        return "; ".join(bad)
    if hasattr(r, "is_zero") and hasattr(r, "to_text"):
        return "0" if r.is_zero() else r.to_text()
    if isinstance(r, dict):
        texts = [(k, residual_text(v)) for k, v in r.items()]
        bad = [f"{k}: {t}" for k, t in texts if t != "0"]
        return "; ".join(bad) if bad else "0"
    if isinstance(r, (list, tuple, set, frozenset)):
        texts = [residual_text(v) for v in r]
        bad = [t for t in texts if t != "0"]
        return "; ".join(bad) if bad else "0"
    raise TypeError(f"cannot render residual of type {type(r).__name__}")


# ---------------------------------------------------------------------------
# superlinalg

_SL = {}


def _grassmann():
    from .superlinalg import grassmann

    if "L" not in _SL:
        _SL["L"] = grassmann(6)
    return _SL["L"]


@check("superlinalg", "ber-mult", "Berezinian multiplicativity",
       "Ber(AB) - Ber(A) Ber(B) = 0 for invertible even supermatrices of dimension 2|2 and 3|2 "
       "with rational and Grassmann entries", "200 seeded matrix pairs over a 6-generator Grassmann algebra")
def _ber_mult(ctx):
    from .superlinalg import SuperDimension, berezinian, random_matrix

    L = _grassmann()
    dims = [SuperDimension.of(2, 2), SuperDimension.of(3, 2)]
    out = []
    for i in range(ctx.count(200)):
        d = dims[i % 2]
        A = random_matrix(ctx.rng, L, d, invertible=True)
        B = random_matrix(ctx.rng, L, d, invertible=True)
        out.append(berezinian(A @ B) - berezinian(A) * berezinian(B))
    return out


def _quadric_forms():
    from .superlinalg import OddSymplecticForm

    return [OddSymplecticForm(lag) for lag in ([0, 0], [0, 1], [0, 0, 1])]


@check("superlinalg", "ber-quadric-square", "Berezinian on the odd symplectic quadric",
       "Ber(A) - Ber(P)^2 = 0 for A = [[P, Q], [R, S]] preserving the odd symplectic form",
       "100 seeded products of elementary quadric factors with invertible P")
def _ber_square(ctx):
    from .superlinalg import ber_half, berezinian, random_quadric

    L, forms = _grassmann(), _quadric_forms()
    out = []
    for i in range(ctx.count(100)):
        w = forms[i % len(forms)]
        A = random_quadric(ctx.rng, w, L)
        out.append(berezinian(A) - ber_half(A, w, verify=False) ** 2)
    return out


@check("superlinalg", "ber-half-mult", "Square root of the Berezinian is a character of the quadric",
       "Ber^(1/2)(AB) - Ber^(1/2)(A) Ber^(1/2)(B) = 0 with Ber^(1/2)(A) = Ber(P); "
       "AB stays on the quadric", "100 seeded pairs of quadric elements")
def _ber_half_mult(ctx):
    from .superlinalg import ber_half, quadric_residuals, random_quadric

    L, forms = _grassmann(), _quadric_forms()
    out = []
    for i in range(ctx.count(100)):
        w = forms[i % len(forms)]
        A, B = random_quadric(ctx.rng, w, L), random_quadric(ctx.rng, w, L)
        AB = A @ B
        res = quadric_residuals(AB, w)
        out.append(res)
        if all(r.is_zero() for r in res):
            out.append(ber_half(AB, w, verify=False)
                       - ber_half(A, w, verify=False) * ber_half(B, w, verify=False))
    return out


# ---------------------------------------------------------------------------
# BV calculus


class _BVData:
    def __init__(self):
        from .bvcalc import DarbouxChart
        from .superpoly import Universe

        self.U = U = Universe("bv-suite")
        self.hbar = U.declare_hbar()
        self.eps = U.nilpotent("eps")
        self.chart = DarbouxChart.create(U, [0, 0, 1], ghosts=[0, 1, 0])
        self.gens = self.chart.x + self.chart.xi

    def rand(self, ctx, parity=None, deg=None, terms=6, hbar=True):
        from .superpoly import random_poly

        deg = ctx.max_degree if deg is None else deg
        gens = self.gens + ([self.hbar] if hbar else [])
        return random_poly(ctx.rng, gens, deg, terms, parity=parity)


def _bv():
    if "bv" not in _SL:
        _SL["bv"] = _BVData()
    return _SL["bv"]


def _parities(ctx, n):
    return [int(p) for p in ctx.rng.integers(0, 2, n)]


@check("bv", "delta-square", "The BV operator squares to zero",
       "Delta(Delta(s)) = 0 for the plain and Gaussian-weighted operators",
       "100 seeded polynomials of degree <= max-degree on a 3|3 Darboux chart, hbar included")
def _delta_square(ctx):
    from .bvcalc import delta_op

    bv = _bv()
    D, G = delta_op(bv.chart), delta_op(bv.chart, gaussian=True)
    out = []
    for _ in range(ctx.count(100)):
        s = bv.rand(ctx)
        out += [D(D(s)), G(G(s))]
    return out


@check("bv", "antibracket-formula", "Antibracket as the failure of Delta to be a derivation",
       "(f,g) from [[Delta, f], g] equals the coordinate formula sum of graded partials",
       "100 seeded triples on a 3|3 chart")
def _bracket_formula(ctx):
    from .bvcalc import antibracket, antibracket_formula, bracket, delta_op, m

    bv = _bv()
    out = []
    for _ in range(ctx.count(100)):
        pf, pg = _parities(ctx, 2)
        f, g, test = bv.rand(ctx, pf), bv.rand(ctx, pg), bv.rand(ctx)
        fg = antibracket(f, g, bv.chart)
        out.append(fg - antibracket_formula(f, g, bv.chart))
        op = bracket(bracket(delta_op(bv.chart), m(f)), m(g))
        out.append(op(test) * (-1) ** pf - fg * test)
    return out


@check("bv", "antibracket-antisymmetry", "Graded antisymmetry of the antibracket",
       "(g,f) + (-1)^((|f|+1)(|g|+1)) (f,g) = 0", "100 seeded pairs on a 3|3 chart")
def _bracket_antisym(ctx):
    from .bvcalc import antibracket

    bv = _bv()
    out = []
    for _ in range(ctx.count(100)):
        pf, pg = _parities(ctx, 2)
        f, g = bv.rand(ctx, pf), bv.rand(ctx, pg)
        out.append(antibracket(g, f, bv.chart)
                   + antibracket(f, g, bv.chart) * (-1) ** ((pf + 1) * (pg + 1)))
    return out


@check("bv", "antibracket-jacobi", "Graded Jacobi identity of the antibracket",
       "(f,(g,h)) - ((f,g),h) - (-1)^((|f|+1)(|g|+1)) (g,(f,h)) = 0", "100 seeded triples on a 3|3 chart")
def _bracket_jacobi(ctx):
    from .bvcalc import antibracket

    bv = _bv()
    c = bv.chart
    out = []
    for _ in range(ctx.count(100)):
        pf, pg, ph = _parities(ctx, 3)
        f, g, h = bv.rand(ctx, pf), bv.rand(ctx, pg), bv.rand(ctx, ph)
        out.append(antibracket(f, antibracket(g, h, c), c) - antibracket(antibracket(f, g, c), h, c)
                   - antibracket(g, antibracket(f, h, c), c) * (-1) ** ((pf + 1) * (pg + 1)))
    return out


@check("bv", "hamlift-commutator", "Hamiltonian lift: commutator with multiplication",
       "[H_f, g] = (f,g) as operators on half-form coefficients", "100 seeded triples on a 3|3 chart")
def _hamlift_commutator(ctx):
    from .bvcalc import antibracket, bracket, hamlift_op, m

    bv = _bv()
    out = []
    for _ in range(ctx.count(100)):
        pf, pg = _parities(ctx, 2)
        f, g, s = bv.rand(ctx, pf), bv.rand(ctx, pg), bv.rand(ctx)
        out.append(bracket(hamlift_op(f, bv.chart), m(g))(s) - antibracket(f, g, bv.chart) * s)
    return out


@check("bv", "hamlift-leibniz", "Hamiltonian lift of a product",
       "H_fg = f H_g + (-1)^(|f||g|) g H_f + (-1)^|g| (f,g)", "100 seeded triples on a 3|3 chart")
def _hamlift_leibniz(ctx):
    from .bvcalc import antibracket, hamlift, hamlift_op

    bv = _bv()
    c = bv.chart
    out = []
    for _ in range(ctx.count(100)):
        pf, pg = _parities(ctx, 2)
        f, g, s = bv.rand(ctx, pf), bv.rand(ctx, pg), bv.rand(ctx)
        rhs = (f * hamlift_op(g, c)(s) + g * hamlift_op(f, c)(s) * (-1) ** (pf * pg)
               + antibracket(f, g, c) * s * (-1) ** pg)
        out.append(hamlift(f * g, s, c) - rhs)
    return out


@check("bv", "hamlift-bracket", "Hamiltonian lift is a Lie morphism",
       "H_(f,g) = [H_f, H_g]", "100 seeded triples on a 3|3 chart")
def _hamlift_bracket(ctx):
    from .bvcalc import antibracket, bracket, hamlift, hamlift_op

    bv = _bv()
    c = bv.chart
    out = []
    for _ in range(ctx.count(100)):
        pf, pg = _parities(ctx, 2)
        f, g, s = bv.rand(ctx, pf), bv.rand(ctx, pg), bv.rand(ctx)
        out.append(hamlift(antibracket(f, g, c), s, c)
                   - bracket(hamlift_op(f, c), hamlift_op(g, c))(s))
    return out


@check("bv", "hamlift-delta", "Hamiltonian lifts commute with Delta",
       "[H_f, Delta] = 0", "100 seeded pairs on a 3|3 chart")
def _hamlift_delta(ctx):
    from .bvcalc import bracket, delta_op, hamlift_op

    bv = _bv()
    out = []
    for _ in range(ctx.count(100)):
        (pf,) = _parities(ctx, 1)
        f, s = bv.rand(ctx, pf), bv.rand(ctx)
        out.append(bracket(hamlift_op(f, bv.chart), delta_op(bv.chart))(s))
    return out


@check("bv", "flow-law", "First-order flow of a half-form along an odd Hamiltonian",
       "pushing s dx along the flow of eps f gives (s + eps H_f s) dx, with eps^2 = 0",
       "100 seeded odd Hamiltonians and half-forms on a 3|3 chart")
def _flow_law(ctx):
    from .bvcalc import flow_first_order, hamlift

    bv = _bv()
    out = []
    for _ in range(ctx.count(100)):
        f, s = bv.rand(ctx, 1, hbar=False), bv.rand(ctx)
        out.append(flow_first_order(f, s, bv.chart, bv.eps) - (s + bv.eps * hamlift(f, s, bv.chart)))
    return out


@check("bv", "qme-tower", "Quantum master equation for a Laurent tower",
       "the level-n tower equations equal the hbar^(n-1) Laurent coefficients of "
       "hbar Delta S + (S,S)/2 for S = sum_n hbar^n S_n", "50 seeded towers S_0..S_3")
def _qme_tower(ctx):
    from .bvcalc import tower_vs_laurent

    bv = _bv()
    out = []
    for _ in range(ctx.count(50)):
        Sn = [bv.rand(ctx, 0, min(3, ctx.max_degree), 3, hbar=False) for _ in range(4)]
        out.append(tower_vs_laurent(Sn, 3, bv.chart))
    return out


# ---------------------------------------------------------------------------
# simplex forms


def _simplices():
    if "simplex" not in _SL:
        from .simplexforms import Simplex
        from .superpoly import Universe

        U = Universe("simplex-suite")
        _SL["simplex"] = ({k: Simplex(U, k, f"s{k}_") for k in range(4)},
                          {k: Simplex(U, k, f"f{k}_") for k in range(4)})
    return _SL["simplex"]


@check("simplex", "stokes", "Stokes formula on standard simplices",
       "int_Delta^k dw - sum_i (-1)^i int_Delta^(k-1) (d^i)^* w = 0",
       "100 seeded (k-1)-forms on each of the simplices k = 1, 2, 3")
def _stokes(ctx):
    from .simplexforms import random_form, stokes_residual

    S, F = _simplices()
    out = {}
    for k in (1, 2, 3):
        out[f"k={k}"] = [stokes_residual(S[k], F[k - 1], random_form(ctx.rng, S[k], k - 1, ctx.max_degree))
                         for _ in range(ctx.count(100))]
    return Split(out)


@check("simplex", "de-rham-square", "The simplicial de Rham differential squares to zero",
       "d(d w) = 0", "100 seeded forms on simplices of dimension 1 to 3")
def _de_rham_square(ctx):
    from .simplexforms import de_rham, random_form

    S, _ = _simplices()
    out = []
    for i in range(ctx.count(100)):
        k = 1 + i % 3
        w = random_form(ctx.rng, S[k], int(ctx.rng.integers(0, k)), ctx.max_degree)
        out.append(de_rham(S[k], de_rham(S[k], w)))
    return out


def _poly_mul(p, q):
    out = {}
    for a, c in p.items():
        for b, d in q.items():
            e = tuple(x + y for x, y in zip(a, b))
            out[e] = out.get(e, 0) + c * d
    return out


def _poly_pow(p, n, k):
    out = {(0,) * k: Fraction(1)}
    for _ in range(n):
        out = _poly_mul(out, p)
    return out


def iterated_integral(k: int, exps) -> Fraction:
    """Integrate t0^a0 ... tk^ak over the k-simplex one variable at a time.

    t0 = 1 - t1 - ... - tk; the innermost variable is t_k.  This is the
    independent reference for the closed Dirichlet formula.
    """
    unit = lambda i: tuple(int(j == i) for j in range(k))
    one_minus = lambda upto: {**{(0,) * k: Fraction(1)}, **{unit(j): Fraction(-1) for j in range(upto)}}
    p = _poly_pow(one_minus(k), exps[0], k)
    for i in range(k):
        p = _poly_mul(p, {tuple(exps[i + 1] * int(j == i) for j in range(k)): Fraction(1)})
    for i in reversed(range(k)):
        upper = one_minus(i)
        out = {}
        for e, c in p.items():
            n = e[i]
            rest = {tuple(0 if j == i else v for j, v in enumerate(e)): c / (n + 1)}
            for ee, cc in _poly_mul(rest, _poly_pow(upper, n + 1, k)).items():
                out[ee] = out.get(ee, 0) + cc
        p = out
    return sum(p.values(), Fraction(0))


@check("simplex", "dirichlet", "Dirichlet integral over the standard simplex",
       "int_Delta^k t0^a0 ... tk^ak dt1...dtk = a0! ... ak! / (a0 + ... + ak + k)!, "
       "cross-checked against iterated one-variable integration",
       "all exponent vectors with entries <= 4 for k = 1, 2, 3")
def _dirichlet(ctx):
    from .simplexforms import dirichlet

    return [dirichlet(e) - iterated_integral(k, e)
            for k in (1, 2, 3) for e in itertools.product(range(5), repeat=k + 1)]


# ---------------------------------------------------------------------------
# descent


class _DescentData:
    def __init__(self):
        from .bvcalc import DarbouxChart
        from .simplexforms import Simplex
        from .superpoly import Kind, Universe

        self.U = U = Universe("descent-suite")
        self.hbar = U.declare_hbar()
        self.lam = [U.gen(f"lam{i}", 1, 1, Kind.ODD_CONST) for i in range(1, 5)]
        self.chart = DarbouxChart.create(U, [0, 0])
        self.x, self.xi = self.chart.x, self.chart.xi
        self.D1, self.D2 = Simplex(U, 1, "a"), Simplex(U, 2, "b")
        self.aux = Simplex(U, 1, "v")
        self.v = self.aux.t[0]

    def pou(self, rng, n, gens, deg=2):
        from .superpoly import random_poly

        phis = [random_poly(rng, gens, deg, 2, parity=0) for _ in range(n - 1)]
        return phis + [1 - sum(phis, self.U.zero())]

    def family(self, rng, S, deg=3):
        from .descent import LagrangianFamily
        from .superpoly import random_poly

        psi = self.U.zero()
        for l in self.lam[:3]:
            psi = psi + l * random_poly(rng, self.x + S.t, deg, 3)
        return LagrangianFamily.from_gauge_fermion(self.chart, S, psi)

    def cover(self, rng, n, K, aux=None, pou=None):
        from .descent import CechModel, FlexibleLagrangian
        from .superpoly import random_poly

        pou = pou or self.pou(rng, n, self.x)
        psis = [self.lam[a % 3] * random_poly(rng, self.x, 2, 2) + self.lam[3] * self.x[0]
                for a in range(n)]
        model = CechModel(self.chart, pou, truncation=K, aux=aux)
        return model, FlexibleLagrangian(model, psis, basepoint=[1, 0]), pou, psis


def _descent():
    if "descent" not in _SL:
        _SL["descent"] = _DescentData()
    return _SL["descent"]


def _lemma_eta(ctx, k):
    from .descent import CechModel, lemma_eta_residual
    from .superpoly import random_poly

    d = _descent()
    x, xi = d.x, d.xi
    out = []
    for n in (2, 3):
        model = CechModel(d.chart, d.pou(ctx.rng, n, x + xi))
        sigma = random_poly(ctx.rng, x + xi + d.D2.t + d.D2.dt, 3, 6)
        out += [lemma_eta_residual(seq, model, sigma, k_simplex=2) for seq in model.sequences(k)]
        model = CechModel(d.chart, d.pou(ctx.rng, n, x + xi + [d.v]), aux=d.aux)
        sigma = random_poly(ctx.rng, x + xi + d.D1.t + d.D1.dt + [d.v] + d.aux.dt, 3, 6)
        out += [lemma_eta_residual(seq, model, sigma, k_simplex=1) for seq in model.sequences(k)]
    return out


_ETA_FORMULA = ("Delta Phi_(a0..ak) - Phi_(a0..ak) Delta = sum_i (-1)^i Phi_(a0..^ai..ak) "
                "for the partition-of-unity operators Phi, plain and parametrized by an auxiliary simplex")
_ETA_CONSTANTS = "seeded polynomial partitions of unity on two and three open sets, every index sequence"
for _k in range(3):
    check("descent", f"lemma-eta-k{_k}", "Coboundary identity of the partition-of-unity operators",
          _ETA_FORMULA + f"; sequences of length {_k + 1}", _ETA_CONSTANTS)(
        lambda ctx, _k=_k: _lemma_eta(ctx, _k))


@check("descent", "ms-theorem", "Variation of a half-form integral along a Lagrangian family",
       "d int_L(t) e^(-eta/hbar) sigma = int_L(t) e^(-eta/hbar) (hbar Delta) sigma for a proper family "
       "of Lagrangian submanifolds with generating one-form eta",
       "20 seeded families over the interval and 5 over the triangle on a 2|2 chart")
def _ms(ctx):
    from .descent import ms_residual
    from .superpoly import random_poly

    d = _descent()
    x, xi = d.x, d.xi
    n1 = ctx.count(20)
    out = []
    for _ in range(n1):
        fam = d.family(ctx.rng, d.D1)
        sigma = random_poly(ctx.rng, x + xi + d.D1.t + d.D1.dt + d.lam[3:], 3, 6)
        out.append(ms_residual(fam, sigma, [1, 0]))
    for _ in range(max(1, n1 // 4)):
        fam = d.family(ctx.rng, d.D2, deg=2)
        sigma = random_poly(ctx.rng, x + xi + d.D2.t + d.D2.dt, 3, 6)
        out.append(ms_residual(fam, sigma))
    return out


@check("descent", "trace-coboundary", "The glued trace vanishes on coboundaries",
       "Z((delta + hbar Delta) tau) = 0 as a Laurent polynomial in hbar, computed with nerve "
       "truncation K and K+1; both runs verify that the next two levels contribute nothing",
       "two and three open sets, even and odd tau, seeded covers and gauge fermions")
def _trace_coboundary(ctx):
    from .descent import CechModel, FlexibleLagrangian, TWCochain, trace_Z
    from .superpoly import random_poly

    d = _descent()
    K = ctx.truncation
    out = []
    for n, parity in itertools.product((2, 3), (0, 1)):
        model, fams, pou, psis = d.cover(ctx.rng, n, K)
        u = model.cover_simplex
        tau = random_poly(ctx.rng, d.x + d.xi + u.t + u.dt + d.lam[:2], 4, 20, parity=parity)
        out.append(trace_Z(TWCochain.from_global(model, tau).differential(), model, fams))
        model1 = CechModel(d.chart, pou, truncation=K + 1)
        fams1 = FlexibleLagrangian(model1, psis, basepoint=[1, 0])
        out.append(trace_Z(TWCochain.from_global(model1, tau).differential(), model1, fams1))
    return out


@check("descent", "pou-independence", "Independence of the glued trace from the partition of unity",
       "for a closed observable the trace over a partition of unity interpolated along an interval "
       "has zero derivative in the interpolation parameter",
       "three open sets, two seeded partitions of unity, seeded closed observable")
def _pou_independence(ctx):
    from .bvcalc import delta0
    from .descent import TWCochain, interpolate_pou, pou_independence_residual, trace_Z
    from .superpoly import random_poly, substitute

    d = _descent()
    x, xi = d.x, d.xi
    p0, p1 = d.pou(ctx.rng, 3, x), d.pou(ctx.rng, 3, x)
    model, fams, _, _ = d.cover(ctx.rng, 3, ctx.truncation, aux=d.aux, pou=interpolate_pou(d.aux, p0, p1))
    sigma = random_poly(ctx.rng, x, 3, 4) + delta0(d.chart, random_poly(ctx.rng, x + xi, 3, 5), True)
    obs = TWCochain.constant(model, sigma)
    z = trace_Z(obs, model, fams)
    # restricting to a vertex kills dv as well
    ends = [substitute(z, {d.v: c, d.aux.dt[0]: 0}) for c in (0, 1)]
    return [pou_independence_residual(obs, model, fams), ends[0] - ends[1]]


class _LieData:
    def __init__(self):
        from .bvcalc import DarbouxChart
        from .descent import LieSuperAlgebra
        from .superpoly import Kind, Universe

        self.U = L = Universe("lie-suite")
        L.declare_hbar()
        self.lam = [L.gen(f"lam{i}", 1, 1, Kind.ODD_CONST) for i in range(1, 4)]
        self.chart = DarbouxChart.create(L, [0, 0])
        self.x, self.xi = self.chart.x, self.chart.xi
        self.affine = LieSuperAlgebra(L, [0, 0], {(0, 1): {1: 1}, (1, 0): {1: -1}}, prefix="e")
        self.abelian = LieSuperAlgebra(L, [0], prefix="c")

    def moment_maps(self):
        from .descent import MomentMap

        x, xi = self.x, self.xi
        return {"abelian": MomentMap(self.abelian, self.chart, [xi[0]]),
                "affine": MomentMap(self.affine, self.chart, [x[0] * xi[0], xi[0]]),
                "affine-zero": MomentMap(self.affine, self.chart, [0, 0])}


def _lie():
    if "lie" not in _SL:
        _SL["lie"] = _LieData()
    return _SL["lie"]


@check("descent", "mc-equation", "Maurer-Cartan equation of a moment map",
       "d_CE mu + hbar Delta mu + (mu, mu)/2 = 0 for mu = sum_a eps^a rho(e_a)",
       "moment maps of the abelian and two-generator affine algebras on a 2|2 chart")
def _mc(ctx):
    from .descent import mc_residual

    return Split({name: [mc_residual(rho)] for name, rho in _lie().moment_maps().items()})


@check("descent", "conjugation-identity", "Conjugating the equivariant differential by e^(mu/hbar)",
       "e^(-mu/hbar) (d_CE + hbar Delta) e^(mu/hbar) sigma = (d_CE + hbar Delta + H_mu) sigma",
       "50 seeded half-forms for the affine moment map")
def _conjugation(ctx):
    from .descent import conjugation_residual
    from .superpoly import random_poly

    lie = _lie()
    rho = lie.moment_maps()["affine"]
    gens = lie.x + lie.xi + lie.affine.eps + lie.lam
    return [conjugation_residual(rho, random_poly(ctx.rng, gens, 3, 8)) for _ in range(ctx.count(50))]


@check("descent", "equivariant-closedness", "Closedness of the equivariant glued trace",
       "Z_g(D_g tau) = (d_CE) Z_g(tau) for Thom-Whitney cochains tau",
       "abelian and two-generator affine moment maps, seeded two-set covers, even and odd tau")
def _equivariant(ctx):
    from .descent import (CechModel, FlexibleLagrangian, TWCochain,
                          equivariant_closedness_residual)
    from .superpoly import random_poly

    lie = _lie()
    x, xi = lie.x, lie.xi
    maps = lie.moment_maps()
    out = {}
    for which in ("abelian", "affine"):
        rho = maps[which]
        phi = random_poly(ctx.rng, x, 2, 2)
        model = CechModel(lie.chart, [phi, 1 - phi], truncation=ctx.truncation)
        psis = [lie.lam[a] * random_poly(ctx.rng, x, 2, 2) + lie.lam[2] * x[0] for a in range(2)]
        fams = FlexibleLagrangian(model, psis)
        u = model.cover_simplex
        res = []
        for parity in (0, 1):
            tau = random_poly(ctx.rng, x + xi + u.t + u.dt + lie.lam[:2] + rho.g.eps, 4, 25, parity=parity)
            res.append(equivariant_closedness_residual(TWCochain.from_global(model, tau), model, fams, rho))
        out[which] = res
    return Split(out)


# ---------------------------------------------------------------------------
# clifford


@check("clifford", "clifford-relation", "Clifford relations of the chiral 16x16 blocks",
       "sigma^mu sigmabar^nu + sigma^nu sigmabar^mu = 2 eta^(mu nu) and the same with sigma, sigmabar "
       "exchanged, eta = diag(+1, -1, ..., -1)", "all 100 ordered index pairs")
def _clifford_relation(ctx):
    from .clifford import DIM, ETA, build_rep

    rep = build_rep()
    out = {}
    for mu, nu in itertools.product(range(DIM), repeat=2):
        target = 2 * ETA[mu, nu] * np.eye(16, dtype=np.int64)
        out[f"{mu},{nu}"] = [rep.sigma[mu] @ rep.sigmabar[nu] + rep.sigma[nu] @ rep.sigmabar[mu] - target,
                             rep.sigmabar[mu] @ rep.sigma[nu] + rep.sigmabar[nu] @ rep.sigma[mu] - target]
    return Split(out)


@check("clifford", "pairing-symmetry", "Symmetry of the spinor pairing",
       "T(gamma^mu a, b) = T(a, gamma^mu b) and T(gamma^(mu nu) a, b) = -T(a, gamma^(mu nu) b), "
       "as matrices and on symbolic odd spinors", "all indices")
def _pairing(ctx):
    from .clifford import DIM, ClMatrix, build_rep, pair, spinor
    from .superpoly import Universe

    rep = build_rep()
    out = [" ".join(map(str, r)) for r in rep.pairing_residuals()]
    U = Universe("pairing-suite")
    a, b = spinor(U, "a", "+", 0), spinor(U, "b", "+", 0)
    for mu in range(DIM):
        g = ClMatrix.gamma(U, mu)
        out.append(pair(g.apply(a), b) - pair(a, g.apply(b)))
    return out


@check("clifford", "lightcone-commutation", "Transverse rotations preserve the light-cone kernels",
       "gamma^(ab), 1 <= a < b <= 8, commute with cl(m+-) and gamma^(09) anticommutes", "none")
def _commutation(ctx):
    from .clifford import commutation_with_lightcone

    return commutation_with_lightcone()


@check("clifford", "cl-squares", "Clifford multiplication by light-like vectors",
       "cl(m)^2 = cl(n)^2 = 0 and cl(m) cl(n) + cl(n) cl(m) = 1 for m = (1,0,...,0,1)/2, "
       "n = (1,0,...,0,-1)/2; the projector cl(n) cl(m) has rank 8 on each chirality", "none")
def _cl_squares(ctx):
    from .clifford import ClMatrix, cl, lightcone_projector, m_minus, m_plus, projector_rank
    from .superpoly import Universe

    U = Universe("cl-suite")
    m, n = m_plus(U), m_minus(U)
    P = lightcone_projector(m, n)
    return [cl(m) @ cl(m), cl(n) @ cl(n), cl(m) @ cl(n) + cl(n) @ cl(m) - ClMatrix.identity(U),
            P @ P - P, projector_rank(P, "+") - 8, projector_rank(P, "-") - 8]


@check("clifford", "lemma-lightcone", "Collapse of the vector pairing on the light-cone kernel",
       "for theta, theta' with cl(m) theta = cl(m) theta' = 0: p.T(theta, theta') = 2 (p, m) n.T(theta, theta'), "
       "identically in p_mu and the odd spinor components", "both chiralities")
def _lemma_lightcone(ctx):
    from .clifford import lemma_lightcone_residual

    return Split({c: [lemma_lightcone_residual(c)] for c in "+-"})


def _ring():
    if "ring" not in _SL:
        from .clifford import LightconeRing

        _SL["ring"] = LightconeRing(name="ring-suite")
    return _SL["ring"]


@check("clifford", "g-special-values", "Endpoint values of the spinor rotation g(tau)",
       "g at (c, s) = (1, 0) is the identity and g at (0, 1) squares to -1", "none")
def _g_special(ctx):
    from .clifford import ClMatrix, g_tau

    ring = _ring()
    one = ClMatrix.identity(ring.universe)
    half = g_tau(ring, 0, 1)
    return [g_tau(ring, 1, 0) - one, half @ half + one]


@check("clifford", "g-rotation-square", "The rotation generator squares to -1",
       "(n_a gamma^(a9))^2 = -1 using n_8^2 = 1 - n_1^2 - ... - n_7^2", "none")
def _g_square(ctx):
    from .clifford import rotation_square_residual

    return [rotation_square_residual(_ring())]


@check("clifford", "g-group-law", "Group law of the spinor rotation",
       "g(tau1) g(tau2) = g(tau1 + tau2) via the angle-addition formulas on two circles",
       "both orientations of the rotation")
def _g_group(ctx):
    from .clifford import LightconeRing, group_law_residual

    return Split({str(o): [group_law_residual(LightconeRing(2, name=f"group{o}-suite"), o)] for o in (1, -1)})


@check("clifford", "g-conjugation", "The rotation moves the light-cone frame",
       "g cl(m+) g^-1 = cl(m(tau)), g cl(m-) g^-1 = cl(n(tau)), g(tau) g(-tau) = 1 in "
       "Q[c, s, n_a]/(c^2 + s^2 - 1, sum n_a^2 - 1)", "both orientations")
def _g_conjugation(ctx):
    from .clifford import conjugation_residual

    return Split({str(o): conjugation_residual(_ring(), o) for o in (1, -1)})


@check("clifford", "m-tau-frame", "The rotated frame stays light-like and normalized",
       "(m(tau), m(tau)) = (n(tau), n(tau)) = 0 and (m(tau), n(tau)) = 1/2", "none")
def _m_tau_frame(ctx):
    from .clifford import inner, m_tau, n_tau

    ring = _ring()
    m, n = m_tau(ring), n_tau(ring)
    return [inner(m, m), inner(n, n), inner(m, n) - mpq(1, 2)]


@check("clifford", "p-plus-flow", "Transport of the p+ component along the rotated gauge",
       "the derivative in tau of the gauge-fixed p+ pairing equals the explicit correction "
       "-(sin(pi tau)/2p*)(n_a n_c T^(c9) - T^(a9)), identically in Q[c, s, n_a, p*^(+-1)]",
       "tower levels 0, 1, 2 and both rotation orientations at level 0")
def _p_plus(ctx):
    from .clifford import p_plus_flow_residual

    ring = _ring()
    out = {f"level{lv}": p_plus_flow_residual(ring, lv) for lv in range(3)}
    out["level0-reversed"] = p_plus_flow_residual(ring, 0, orientation=-1)
    return Split(out)


@check("clifford", "lightcone-endpoints", "Boundary values of the rotated gauge",
       "m(0) = m+, n(0) = m-, m(1) = m-, n(1) = m+, so the family ends in the opposite gauge", "none")
def _endpoints(ctx):
    from .clifford import lagrangian_tau_at_one

    return lagrangian_tau_at_one(_ring())


# ---------------------------------------------------------------------------
# superparticle


def _registry(N=3):
    key = f"reg{N}"
    if key not in _SL:
        from .superparticle import FieldRegistry

        _SL[key] = FieldRegistry(N=N, name=f"suite{N}")
    return _SL[key]


@check("superparticle", "registry-pairing", "Field and antifield bookkeeping",
       "every field has exactly one antifield with ghost -1 - gh and paired parity and chirality",
       "tower cutoff 3")
def _registry_pairing(ctx):
    return [" ".join(map(str, p)) for p in _registry().pairing_problems()]


_GAUGES = ("L(m+)", "L(m-)", "L(tau)")


@check("superparticle", "lemma-fixed", "Gauge-fixed action of the superparticle tower",
       "on the light-cone gauge the kinetic, salient and tower terms reduce to the stated "
       "gauge-fixed integrands modulo total derivatives",
       "tower cutoff 3; fixed gauges L(m+), L(m-) and the rotated gauge L(tau)")
def _lemma_fixed(ctx):
    from .superparticle import lemma_fixed_residuals

    return Split({g: lemma_fixed_residuals(_registry(), g) for g in _GAUGES})


@check("superparticle", "tau-independence", "The redefined action does not depend on the gauge parameter",
       "after the field redefinition by r, the restricted action minus the free action is a total "
       "derivative and its tau-derivative vanishes", "tower cutoff 3")
def _tau_independence(ctx):
    from .superparticle import tau_independence_residuals

    return tau_independence_residuals(_registry())


@check("superparticle", "eta-plus-minus", "Generating one-form between the two light-cone gauges",
       "eta_(+-) = -(pi/p*) sum_a p_a T^(a9)(theta^+, theta) at level 0, identical before and after "
       "the redefinition at cutoff 3", "tower cutoffs 0 and 3")
def _eta(ctx):
    from .clifford import TRANSVERSE, pair_bivec
    from .superparticle import eta_plus_minus

    reg = _registry(0)
    U, ring = reg.universe, reg.ring
    expected = U.zero()
    for a in TRANSVERSE:
        expected = expected + ring.p(a) * pair_bivec(a, 9, reg.spinor("th0+"), reg.spinor("th0"))
    one = _registry()
    return [eta_plus_minus(reg) + expected * ring.P ** -1 * U["pi"].poly,
            eta_plus_minus(one) - eta_plus_minus(one, redefined=False)]


@check("superparticle", "psi-divergence", "The flow Hamiltonian is divergence free",
       "Delta psi = 0 for the Hamiltonian generating the rotated gauge family", "tower cutoff 3")
def _psi(ctx):
    from .superparticle import psi_divergence

    return [psi_divergence(_registry())]


@check("superparticle", "berezinian-weights", "Weights of the redefinition Berezinian",
       "the level-n fields contribute (-1)^(n+1) (2n+1) times a common factor 16",
       "tower cutoff 3, doubled weights -16, 48, -80, 112")
def _ber_weights(ctx):
    from .superparticle import berezinian_weights

    got = berezinian_weights(_registry())
    return [w - (-1) ** (n + 1) * (2 * n + 1) * 16 for n, w in enumerate(got)]


@check("superparticle", "moment-restrictions", "Symmetry charges on the light-cone gauges",
       "translations restrict to zero, the second supersymmetry vanishes, the surviving Lorentz "
       "charges are exactly (0,a) and (a,9), and the x+ p+ part of each vanishes",
       "tower cutoff 3, gauges L(m+) and L(m-)")
def _moments(ctx):
    from .clifford import TRANSVERSE
    from .superparticle import moment_restrictions

    expected = {(0, a) for a in TRANSVERSE} | {(a, 9) for a in TRANSVERSE}
    out = {}
    for g in ("L(m+)", "L(m-)"):
        m = moment_restrictions(_registry(), g)
        surv = m["lorentz surviving"]
        out[g] = [m["translation"], m["susy second"], not m["susy first"].is_zero(),
                  "0" if surv == expected else f"surviving {sorted(surv)}", m["lorentz x+ p+"]]
    return Split(out)


@check("superparticle", "cover-positivity", "The two rotated gauges cover the forward cone",
       "at points of U(m+) and U(m-): U+- holds, the lower bound for p(tau) is positive on the quarter "
       "circle and p* > p0/2", "1000 seeded rational points, four rational angles")
def _cover_positivity(ctx):
    from .superparticle import cover_membership, p_tau_lower_bound, sample_U_both

    quarter = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)),
               (Fraction(3, 5), Fraction(4, 5)), (Fraction(12, 13), Fraction(5, 13))]
    out = []
    for pt in sample_U_both(ctx.rng, ctx.count(1000)):
        rec = cover_membership(pt)
        out.append(rec["U+-"] and rec["p(tau) bound positive"] and rec["p* > p0/2"]
                   and all(p_tau_lower_bound(pt, c, s) for c, s in quarter))
    return out


@check("superparticle", "cover-property", "Inclusions between the cover pieces",
       "every point of the forward cone lies in U+ or U-, with U+ in U(m+) and U- in U(m-)",
       "1000 seeded rational momenta with entries in [-10, 10]")
def _cover_property(ctx):
    from .superparticle import MomentumPoint, cover_membership

    out = []
    for _ in range(ctx.count(1000)):
        comps = [Fraction(int(a), int(b)) for a, b in
                 zip(ctx.rng.integers(-90, 91, 10), ctx.rng.integers(1, 10, 10))]
        rec = cover_membership(MomentumPoint(comps))
        out.append(rec["covered"] and rec["U+ in U(m+)"] and rec["U- in U(m-)"])
    return out


@check("superparticle", "partition-sum", "Partition of unity subordinate to the two gauges",
       "phi+ + phi- = 1 exactly, with phi+ supported in U+ and phi- in U-",
       "100 seeded points of U with coordinates in thirds")
def _partition(ctx):
    from .superparticle import MomentumPoint, partition_phi

    out = []
    while len(out) < ctx.count(100):
        pt = MomentumPoint([Fraction(int(v), 3) for v in ctx.rng.integers(-40, 41, size=10)])
        if not pt.in_U():
            continue
        plus, minus = partition_phi(pt)
        out.append(plus + minus == 1 and (plus == 0 or pt.in_U_pm(1)) and (minus == 0 or pt.in_U_pm(-1)))
    return out


# ---------------------------------------------------------------------------
# zeta


@check("zeta", "bernoulli-b2", "Second Bernoulli polynomial", "B_2(a) - (a^2 - a + 1/6) = 0",
       "coefficients 1/6, -1, 1")
def _b2(ctx):
    from .superparticle import bernoulli

    return [Fraction(x) - y for x, y in zip(bernoulli(2), [Fraction(1, 6), -1, 1])]


@check("zeta", "bernoulli-reflection", "Reflection symmetry of Bernoulli polynomials",
       "B_n(1 - a) - (-1)^n B_n(a) = 0 for n <= 12", "a in {0, 1/3, 2/7, 5/4}")
def _reflection(ctx):
    from .superparticle import bernoulli, poly_eval

    return [poly_eval(bernoulli(n), 1 - a) - (-1) ** n * poly_eval(bernoulli(n), a)
            for n in range(1, 13) for a in (Fraction(0), Fraction(1, 3), Fraction(2, 7), Fraction(5, 4))]


@check("zeta", "zeta(-1,1)=-1/12", "Hurwitz zeta at -1", "zeta(-1, 1) + 1/12 = 0 via -B_2(1)/2", "none")
def _zeta(ctx):
    from .superparticle import hurwitz_neg

    return [hurwitz_neg(2, 1) + Fraction(1, 12)]


@check("zeta", "L(-1)=0", "Regularized Berezinian of the field redefinition",
       "L(-1) = 0 for L(s) = 1^-s - 3^-s + 5^-s - ..., computed as 4^-s (zeta(s, 1/4) - zeta(s, 3/4))",
       "none")
def _L(ctx):
    from .superparticle import dirichlet_L

    return [dirichlet_L(-1)]


@check("zeta", "L-nonpositive", "Values of L at non-positive integers",
       "L(-2k) = E_2k / 2 and L(-2k-1) = 0 for k <= 4", "Euler numbers 1, -1, 5, -61, 1385")
def _L_values(ctx):
    from .superparticle import dirichlet_L

    euler = [1, -1, 5, -61, 1385]
    return [dirichlet_L(-2 * k) - Fraction(e, 2) for k, e in enumerate(euler)] + \
        [dirichlet_L(-2 * k - 1) for k in range(5)]


# ---------------------------------------------------------------------------
# scenario checks (built from a scenario file, listed here for explain)

for _name, _anchor, _formula in [
    ("scenario-compatibility", "Gluing data of a scenario",
     "the flexible Lagrangian built from the gauge fermions is compatible with faces and degeneracies"),
    ("scenario-coboundary", "The glued trace vanishes on scenario coboundaries",
     "Z((delta + hbar Delta) tau) = 0, or = d Z(tau) over the interpolation interval, "
     "at truncation K and K+1 with the tail check"),
    ("scenario-observable", "Glued trace of a scenario observable",
     "Delta sigma = 0 for the observable; the record carries Z(sigma) as its value"),
    ("scenario-pou-independence", "Partition-of-unity independence for a scenario observable",
     "d Z(sigma) = 0 along the interpolation from pou to pou_end"),
]:
    REGISTRY[_name] = Check(_name, "scenario", _anchor, _formula, "read from the scenario file", None)
