"""Pointwise model of the superparticle in light-cone gauge.

World-line fields at a fixed time are generators of a :class:`Universe`,
together with their world-line derivatives up to a fixed order; the
derivative ``d`` acts as a formal even derivation.  Integrands are taken
modulo total derivatives, with an exact normal form computed by linear
algebra in each graded piece.

The momentum-space cover of a neighbourhood of the forward light-cone,
its partition of unity, and the Bernoulli / Hurwitz bookkeeping of the
field redefinition live here too.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from gmpy2 import mpq

from .clifford import (DIM, TRANSVERSE, ClMatrix, LightconeRing, MinkowskiVector, cl, g_tau,
                       inner, lightcone_projector, m_minus, m_plus, m_tau, n_tau, pair,
                       pair_bivec, pair_vec, p_plus_correction)
from .superpoly import Kind, SuperPoly, raw_partial, substitute


# ---------------------------------------------------------------------------
# field content


@dataclass(frozen=True)
class FieldSpec:
    name: str
    ghost: int
    parity: int
    form_degree: int
    size: int
    chirality: str | None = None
    antifield: str | None = None


def _field_specs(N: int) -> list[FieldSpec]:
    specs = [
        FieldSpec("x", 0, 0, 0, DIM, antifield="x+"),
        FieldSpec("p", 0, 0, 0, DIM, antifield="p+"),
        FieldSpec("e", 0, 0, 1, 1, antifield="e+"),
        FieldSpec("c", 1, 1, 0, 1, antifield="c+"),
        FieldSpec("x+", -1, 1, 1, DIM),
        FieldSpec("p+", -1, 1, 1, DIM),
        FieldSpec("e+", -1, 1, 0, 1),
        FieldSpec("c+", -2, 0, 1, 1),
    ]
    for n in range(N + 1):
        chi = "+" if n % 2 == 0 else "-"
        anti = "-" if chi == "+" else "+"
        specs.append(FieldSpec(f"th{n}", n, (n + 1) % 2, 0, 16, chi, antifield=f"th{n}+"))
        specs.append(FieldSpec(f"th{n}+", -1 - n, n % 2, 1, 16, anti))
    return specs


class FieldRegistry:
    """Fields, antifields and their jets up to ``order`` as generators.

    The universe also carries the light-cone ring (circle, sphere and p_*)
    so that gauge families can be restricted symbolically.
    """

    def __init__(self, N: int = 3, order: int = 2, name: str = "superparticle"):
        if N < -1:
            raise ValueError("cutoff must be >= -1")
        self.N, self.order = N, order
        self.ring = LightconeRing(name=name)
        U = self.universe = self.ring.universe
        self.specs = {s.name: s for s in _field_specs(N)}
        self.jet: dict[int, tuple[str, int, int]] = {}  # gen index -> (field, component, order)
        self._gens: dict[tuple[str, int, int], SuperPoly] = {}
        for s in self.specs.values():
            for i in range(s.size):
                for k in range(order + 1):
                    kind = Kind.FIELD if k == 0 else Kind.FIELD_DERIV
                    g = U.gen(f"{s.name}[{i}]" + "'" * k, s.parity, s.ghost, kind)
                    self.jet[g.index] = (s.name, i, k)
                    self._gens[s.name, i, k] = g.poly
        self.designated = {f"th{n}" for n in range(N + 1)}

    # access -----------------------------------------------------------------

    def comp(self, name: str, i: int = 0, order: int = 0) -> SuperPoly:
        return self._gens[name, i, order]

    def vector(self, name: str, order: int = 0) -> list[SuperPoly]:
        return [self.comp(name, i, order) for i in range(self.specs[name].size)]

    def spinor(self, name: str, order: int = 0) -> list[SuperPoly]:
        s = self.specs[name]
        comps = self.vector(name, order)
        zeros = [self.universe.zero()] * 16
        return comps + zeros if s.chirality == "+" else zeros + comps

    def momentum(self) -> MinkowskiVector:
        return MinkowskiVector(self.universe, self.vector("p"))

    def table(self) -> list[dict]:
        return [{"field": s.name, "ghost": s.ghost, "parity": s.parity,
                 "form_degree": s.form_degree, "components": s.size,
                 "chirality": s.chirality, "antifield": s.antifield}
                for s in self.specs.values()]

    def pairing_problems(self) -> list[str]:
        """Antifield pairing must be a bijection with ghost sum -1 and opposite parity."""
        bad = []
        fields = [s for s in self.specs.values() if s.antifield]
        targets = [s.antifield for s in fields]
        antis = {n for n, s in self.specs.items() if not s.antifield}
        if sorted(targets) != sorted(antis) or len(set(targets)) != len(targets):
            bad.append("antifield map is not a bijection")
        for s in fields:
            a = self.specs[s.antifield]
            if s.ghost + a.ghost != -1:
                bad.append(f"ghost({s.name}) + ghost({a.name}) != -1")
            if (s.parity + a.parity) % 2 != 1:
                bad.append(f"{s.name} and {a.name} have equal parity")
            if s.size != a.size:
                bad.append(f"{s.name} and {a.name} differ in size")
            if s.chirality and s.chirality == a.chirality:
                bad.append(f"{s.name} and {a.name} have equal chirality")
        return bad

    # world-line derivative ---------------------------------------------------

    def d(self, f: SuperPoly) -> SuperPoly:
        """Total world-line derivative, sum_v v' * (left d/dv) f."""
        U = self.universe
        out = U.zero()
        for g in f.generators():
            info = self.jet.get(g.index)
            if info is None:
                continue
            name, i, k = info
            if k == self.order:
                raise ValueError(f"derivative of {g.name} exceeds the jet order {self.order}")
            out = out + self._gens[name, i, k + 1] * raw_partial(g, f)
        return out

    def _split(self, mono):
        """(base multiset, non-field monomial, total order) of a monomial."""
        bases, rest, w = [], [], 0
        for i, e in mono:
            info = self.jet.get(i)
            if info is None:
                rest.append((i, e))
            else:
                name, comp, k = info
                bases.extend([(name, comp)] * e)
                w += k * e
        return tuple(sorted(bases)), tuple(rest), w

    def _monomials(self, bases, w):
        """Field monomials with the given base multiset and total order w (up to order-1 each)."""
        groups = {}
        for b in bases:
            groups[b] = groups.get(b, 0) + 1
        per_base = []
        top = self.order - 1
        for (name, comp), mult in sorted(groups.items()):
            odd = self.specs[name].parity == 1
            if odd:
                choices = list(itertools.combinations(range(top + 1), mult))
            else:
                choices = list(itertools.combinations_with_replacement(range(top + 1), mult))
            per_base.append([(name, comp, ks) for ks in choices])
        out = []
        for combo in itertools.product(*per_base):
            if sum(sum(ks) for _, _, ks in combo) != w:
                continue
            m = self.universe.one()
            for name, comp, ks in combo:
                for k in ks:
                    m = m * self._gens[name, comp, k]
            if not m.is_zero():
                out.append(m)
        return out

    def _key(self, mono):
        designated = 0
        for i, e in mono:
            info = self.jet.get(i)
            if info and info[0] in self.designated:
                designated += info[2] * e
        return (designated, mono)

    def normalize(self, f: SuperPoly) -> SuperPoly:
        """Canonical representative of f modulo total derivatives.

        Each piece with fixed field content and total derivative order w is
        reduced against the image of d on the piece of order w - 1, using a
        fully reduced echelon basis whose leading monomials carry the most
        derivatives on the spinor fields.
        """
        U = self.universe
        pieces: dict = {}
        for m, c in f.terms.items():
            bases, rest, w = self._split(m)
            pieces.setdefault((bases, rest, w), {})[m] = c
        out = U.zero()
        for (bases, rest, w), terms in pieces.items():
            part = SuperPoly(U, terms)
            if w == 0 or not bases:
                out = out + part
                continue
            const = SuperPoly(U, {rest: 1}) if rest else U.one()
            basis = _echelon([self.d(const * m) for m in self._monomials(bases, w - 1)], self._key)
            out = out + _reduce(part, basis)
        return out

    def is_total_derivative(self, f: SuperPoly) -> bool:
        return self.normalize(f).is_zero()


def _echelon(vectors, key):
    """Fully reduced echelon basis: list of (leading monomial, poly with lead coeff 1)."""
    basis: list = []
    for v in vectors:
        v = _reduce(v, basis)
        if v.is_zero():
            continue
        lead = max(v.terms, key=key)
        v = v * (mpq(1) / v.terms[lead])
        basis = [(l, b - v * b.terms[lead]) if lead in b.terms else (l, b) for l, b in basis]
        basis.append((lead, v))
    return basis


def _reduce(v, basis):
    for lead, b in basis:
        c = v.terms.get(lead)
        if c is not None:
            v = v - b * c
    return v


# ---------------------------------------------------------------------------
# integrands


def action_S0(reg: FieldRegistry) -> SuperPoly:
    """p_mu dx^mu - e (p,p)/2 + (de+ - (x+, p)) c."""
    U = reg.universe
    p = reg.momentum()
    dx = reg.vector("x", 1)
    kin = U.zero()
    for mu in range(DIM):
        kin = kin + p.comps[mu] * dx[mu]
    xp = inner(MinkowskiVector(U, reg.vector("x+")), p)
    e, c = reg.comp("e"), reg.comp("c")
    return kin - e * inner(p, p) * mpq(1, 2) + (reg.comp("e+", 0, 1) - xp) * c


def contract(p: MinkowskiVector, a, b) -> SuperPoly:
    """p_mu T^mu(a, b)."""
    U = p.universe
    out = U.zero()
    for mu in range(DIM):
        if not p.comps[mu].is_zero():
            out = out + p.comps[mu] * pair_vec(mu, a, b)
    return out


def salient_term(reg: FieldRegistry) -> SuperPoly:
    """-p_mu T^mu(th0, d th0) / 2."""
    if reg.N < 0:
        raise ValueError("the salient term needs th0")
    return contract(reg.momentum(), reg.spinor("th0"), reg.spinor("th0", 1)) * mpq(-1, 2)


def tower_term(reg: FieldRegistry) -> SuperPoly:
    """sum_{n < N} p_mu T^mu(th_n+, th_{n+1}), the tower coupling of the gauge-fixed action."""
    U = reg.universe
    out = U.zero()
    for n in range(reg.N):
        out = out + contract(reg.momentum(), reg.spinor(f"th{n}+"), reg.spinor(f"th{n + 1}"))
    return out


def ghost_and_parity(f: SuperPoly) -> tuple[set, int]:
    """(ghost numbers, parity); raises if parity is mixed."""
    if not f.is_homogeneous():
        raise ValueError("integrand has mixed parity")
    return f.ghosts(), f.parity


# ---------------------------------------------------------------------------
# light-cone gauges


@dataclass
class Gauge:
    """Lagrangian L(m): x+ = p+ = c+ = 0, e = 1, cl(m) th_n = cl(m) th_n+ = 0.

    ``momentum`` rewrites p_mu (identity for the fixed gauges, p_a -> p_* n_a
    for the family).  ``rotation`` is applied after projecting onto
    ker cl(m_+) for the family.
    """
    name: str
    m: MinkowskiVector
    n: MinkowskiVector
    projector: ClMatrix
    momentum: dict
    rotation: ClMatrix | None = None


def make_gauge(reg: FieldRegistry, which: str) -> Gauge:
    U, ring = reg.universe, reg.ring
    if which == "L(m+)":
        m, n = m_plus(U), m_minus(U)
        return Gauge(which, m, n, lightcone_projector(m, n), {})
    if which == "L(m-)":
        m, n = m_minus(U), m_plus(U)
        return Gauge(which, m, n, lightcone_projector(m, n), {})
    if which == "L(tau)":
        m, n = m_tau(ring), n_tau(ring)
        mom = {U[f"p[{mu}]"]: ring.p(mu) for mu in range(DIM)}
        P = lightcone_projector(m, n)
        return Gauge(which, m, n, P, mom)
    raise ValueError(f"unknown gauge {which!r}; expected L(m+), L(m-) or L(tau)")


def gauge_substitution(reg: FieldRegistry, gauge: Gauge) -> dict:
    """Generator -> value map restricting jets of all fields to the gauge.

    Spinor jets are replaced by their projections (the projector is treated
    as constant along the world-line; see :func:`restrict_to_gauge`).
    """
    U = reg.universe
    sub = dict(gauge.momentum)
    for name in ("x+", "p+", "c+"):
        for i in range(reg.specs[name].size):
            for k in range(reg.order + 1):
                sub[U[f"{name}[{i}]" + "'" * k]] = 0
    sub[U["e[0]"]] = 1
    for k in range(1, reg.order + 1):
        sub[U["e[0]" + "'" * k]] = 0
    for name, s in reg.specs.items():
        if s.chirality is None:
            continue
        for k in range(reg.order + 1):
            raw = reg.spinor(name, k)
            image = gauge.projector.apply(raw)
            off = 0 if s.chirality == "+" else 16
            for i in range(16):
                sub[U[f"{name}[{i}]" + "'" * k]] = image[off + i]
    return sub


def restrict_to_gauge(reg: FieldRegistry, f: SuperPoly, gauge: Gauge | str) -> SuperPoly:
    """Pull f back to the gauge.

    For the family L(tau) the projector depends on the momentum; its
    world-line derivative (proportional to dp) is dropped, which is the
    pointwise model at fixed momentum.
    """
    if isinstance(gauge, str):
        gauge = make_gauge(reg, gauge)
    return substitute(f, gauge_substitution(reg, gauge))


def lemma_fixed_residuals(reg: FieldRegistry, gauge: Gauge | str) -> dict[str, SuperPoly]:
    """Restrictions compared with the gauge-fixed action.

    Keys: "S0" (restricted S0 minus p dx - (p,p)/2 + de+ c), "salient"
    (restricted salient term plus (p,m) n_mu T^mu(th0, d th0)), and one
    "tower n" entry per level (restricted tower coupling minus
    2 (p,m) n_mu T^mu(th_n+, th_{n+1})).
    """
    if isinstance(gauge, str):
        gauge = make_gauge(reg, gauge)
    U = reg.universe
    sub = gauge_substitution(reg, gauge)
    res = {}
    p = reg.momentum().substitute(gauge.momentum)
    dx = reg.vector("x", 1)
    expected = U.zero()
    for mu in range(DIM):
        expected = expected + p.comps[mu] * dx[mu]
    expected = expected - inner(p, p) * mpq(1, 2) + reg.comp("e+", 0, 1) * reg.comp("c")
    res["S0"] = substitute(action_S0(reg), sub) - expected
    pm = inner(p, gauge.m)

    def on_gauge(name, k=0):
        return [substitute(c, sub) for c in reg.spinor(name, k)]

    if reg.N >= 0:
        th, dth = on_gauge("th0"), on_gauge("th0", 1)
        res["salient"] = substitute(salient_term(reg), sub) + pm * contract(gauge.n, th, dth)
    for n in range(reg.N):
        a, b = on_gauge(f"th{n}+"), on_gauge(f"th{n + 1}")
        lhs = substitute(contract(reg.momentum(), reg.spinor(f"th{n}+"), reg.spinor(f"th{n + 1}")), sub)
        res[f"tower {n}"] = lhs - pm * contract(gauge.n, a, b) * 2
    return res


# ---------------------------------------------------------------------------
# the rotated family and the field redefinition


def redefined_action(reg: FieldRegistry) -> SuperPoly:
    """Gauge-fixed action on L(tau) in redefined variables.

    theta_n = g(tau) r^-(2n+1) Xi_n and theta_n+ = g(tau) r^(2n+1) Xi_n+ with
    Xi in ker cl(m_+) and r^2 = p(tau) = (p, m(tau)); the prefactor p(tau)
    of the fixed action is written r^2.  Xi are the registry spinor
    generators projected by cl(m_+) cl(m_-).
    """
    ring, U = reg.ring, reg.universe
    r = _r(reg)
    g = g_tau(ring)
    P0 = lightcone_projector(m_plus(U), m_minus(U))

    def field(name, k=0):
        level = int(name[2:].rstrip("+"))
        power = 2 * level + 1
        scale = r ** (power if name.endswith("+") else -power)
        return [c * scale for c in (g @ P0).apply(reg.spinor(name, k))]

    nt = n_tau(ring)
    out = U.zero()
    if reg.N >= 0:
        out = out - contract(nt, field("th0"), field("th0", 1))
    for n in range(reg.N):
        out = out + contract(nt, field(f"th{n}+"), field(f"th{n + 1}")) * 2
    return out * r * r


def _r(reg: FieldRegistry) -> SuperPoly:
    U = reg.universe
    if "r" not in U:
        U.unit("r", kind=Kind.PARAM)
    return U["r"].poly


def free_action(reg: FieldRegistry) -> SuperPoly:
    """-n_mu T^mu(Xi0, d Xi0) + 2 sum n_mu T^mu(Xi_n+, Xi_{n+1}) with n = m_- and Xi in ker cl(m_+)."""
    U = reg.universe
    P0 = lightcone_projector(m_plus(U), m_minus(U))
    n = m_minus(U)

    def xi(name, k=0):
        return P0.apply(reg.spinor(name, k))

    out = U.zero()
    if reg.N >= 0:
        out = out - contract(n, xi("th0"), xi("th0", 1))
    for k in range(reg.N):
        out = out + contract(n, xi(f"th{k}+"), xi(f"th{k + 1}")) * 2
    return out


def tau_independence_residuals(reg: FieldRegistry) -> dict[str, SuperPoly]:
    """Residuals showing the redefined action is the free one for every tau.

    "tangent": (-s d/dc + c d/ds) of the action along the circle;
    "vs free": action minus the free action; "r-degree": terms still
    carrying a power of r.
    """
    ring, U = reg.ring, reg.universe
    A = redefined_action(reg)
    c, s = U["c"], U["s"]
    tangent = raw_partial(s, A, representative=True) * ring.c - raw_partial(c, A) * ring.s
    r = U["r"]
    stray = A.filter(lambda m: any(i == r.index for i, _ in m))
    return {"tangent": tangent, "vs free": A - free_action(reg), "r-degree": stray}


def eta_plus_minus(reg: FieldRegistry, redefined: bool = True) -> SuperPoly:
    """Coefficient of d tau: -(pi / p_*) sum_n p_a T^{a9}(th_n+, th_n).

    With ``redefined`` the spinors are Theta_n = r^(2n+1) th_n and
    Theta_n+ = r^-(2n+1) th_n+ (r^2 = p(tau)); the powers cancel.
    """
    ring, U = reg.ring, reg.universe
    pi = U["pi"].poly if "pi" in U else U.gen("pi", 0, 0, Kind.PARAM).poly
    r = _r(reg)
    out = U.zero()
    for n in range(reg.N + 1):
        th, ta = reg.spinor(f"th{n}"), reg.spinor(f"th{n}+")
        if redefined:
            th = [x * r ** (2 * n + 1) for x in th]
            ta = [x * r ** (-2 * n - 1) for x in ta]
        for a in TRANSVERSE:
            out = out + ring.n[a - 1] * pair_bivec(a, 9, ta, th)
    return out * pi * -1


def psi_divergence(reg: FieldRegistry) -> SuperPoly:
    """BV Laplacian of the flow Hamiltonian: sum_i d/d th_n[i] d/d th_n+[i] of psi."""
    psi = eta_plus_minus(reg, redefined=False)
    U = reg.universe
    out = U.zero()
    for n in range(reg.N + 1):
        for i in range(16):
            out = out + raw_partial(U[f"th{n}[{i}]"], raw_partial(U[f"th{n}+[{i}]"], psi))
    return out


def berezinian_weights(reg: FieldRegistry, physical: int = 8) -> list[int]:
    """Exponent of p(tau) in the Berezinian of the redefinition, per tower level.

    Theta_n = p^(n+1/2) th_n, Theta_n+ = p^-(n+1/2) th_n+; an even
    coordinate contributes its weight, an odd one minus its weight; each
    spinor has ``physical`` components on the gauge.  Returned doubled
    (weights are half-integers) so the result is integral.
    """
    out = []
    for n in range(reg.N + 1):
        total = 0
        for name, w2 in ((f"th{n}", 2 * n + 1), (f"th{n}+", -2 * n - 1)):
            sign = -1 if reg.specs[name].parity else 1
            total += sign * w2 * physical
        out.append(total)
    return out


# ---------------------------------------------------------------------------
# moment maps of the global symmetries


def moment_restrictions(reg: FieldRegistry, gauge: str = "L(m+)") -> dict:
    """Translation, supersymmetry and Lorentz moment densities on a gauge.

    Returns the restricted translation densities, the two supersymmetry
    terms (paired with an even spinor ghost eps in S_+), and for Lorentz
    the set of (mu, nu) whose coefficient T^{mu nu}(th_n+, th_n) survives
    at some level, together with the restricted x+ and p+ terms.
    """
    U = reg.universe
    G = make_gauge(reg, gauge)
    sub = gauge_substitution(reg, G)
    out = {"translation": [substitute(v, sub) for v in reg.vector("x+")]}
    if "eps[0]" in U:
        eps = [U[f"eps[{i}]"].poly for i in range(16)] + [U.zero()] * 16
    else:
        eps = [U.gen(f"eps[{i}]", 0, 1, Kind.COCHAIN).poly for i in range(16)] + [U.zero()] * 16
    if reg.N >= 0:
        ta0 = [substitute(c, sub) for c in reg.spinor("th0+")]
        th0 = reg.spinor("th0")
        x_plus = MinkowskiVector(U, reg.vector("x+"))
        second = pair(cl(x_plus, th0), eps) * mpq(-1, 2)
        out["susy first"] = pair(ta0, eps)
        out["susy second"] = substitute(second, sub)
    surviving = set()
    for n in range(reg.N + 1):
        ta = [substitute(c, sub) for c in reg.spinor(f"th{n}+")]
        th = [substitute(c, sub) for c in reg.spinor(f"th{n}")]
        for mu, nu in itertools.combinations(range(DIM), 2):
            if not pair_bivec(mu, nu, ta, th).is_zero():
                surviving.add((mu, nu))
    out["lorentz surviving"] = surviving
    xp = MinkowskiVector(U, reg.vector("x+"))
    pp = MinkowskiVector(U, reg.vector("p+"))
    out["lorentz x+ p+"] = [substitute(c, sub) for c in xp.comps + pp.comps]
    return out


def lorentz_p_plus_on_family(reg: FieldRegistry) -> list[SuperPoly]:
    """p^{+a} on L(tau) from p^{+a}(tau) = 0: minus the rotation correction, summed over levels."""
    ring = reg.ring
    out = []
    for a in TRANSVERSE:
        total = reg.universe.zero()
        for n in range(reg.N + 1):
            total = total - p_plus_correction(ring, a, spinors=(reg.spinor(f"th{n}"),
                                                                 reg.spinor(f"th{n}+")))
        out.append(total)
    return out


# ---------------------------------------------------------------------------
# momentum space: cover, positivity, partition of unity


@dataclass(frozen=True)
class MomentumPoint:
    p: tuple

    def __init__(self, comps: Sequence):
        if len(comps) != DIM:
            raise ValueError(f"need {DIM} components")
        object.__setattr__(self, "p", tuple(Fraction(c) for c in comps))

    @property
    def pstar_sq(self) -> Fraction:
        return sum(c * c for c in self.p[1:9])

    def in_U(self) -> bool:
        p0 = self.p[0]
        return p0 > 0 and sum(c * c for c in self.p[1:]) > p0 * p0 / 2

    def in_U_m(self, sign: int) -> bool:
        return self.p[0] > sign * self.p[9]

    def in_U_pm(self, sign: int) -> bool:
        return self.p[0] > 2 * sign * self.p[9] and self.in_U()

    def in_U_both(self) -> bool:
        return self.in_U_pm(1) and self.in_U_pm(-1)


def cover_membership(pt: MomentumPoint) -> dict[str, bool]:
    rec = {
        "U": pt.in_U(),
        "U(m+)": pt.in_U_m(1),
        "U(m-)": pt.in_U_m(-1),
        "U+": pt.in_U_pm(1),
        "U-": pt.in_U_pm(-1),
        "U+-": pt.in_U_both(),
    }
    p0, p9 = pt.p[0], pt.p[9]
    rec["covered"] = (not rec["U"]) or rec["U+"] or rec["U-"]
    rec["U+ in U(m+)"] = (not rec["U+"]) or rec["U(m+)"]
    rec["U- in U(m-)"] = (not rec["U-"]) or rec["U(m-)"]
    if rec["U+-"]:
        rec["p(tau) bound positive"] = (p0 - abs(p9)) / 2 > 0
        rec["p* > p0/2"] = pt.pstar_sq > p0 * p0 / 4
    return rec


def p_tau_lower_bound(pt: MomentumPoint, c: Fraction, s: Fraction) -> bool:
    """p(tau) >= (p0 - |p9|)/2 at (c, s) = (cos, sin)(pi tau / 2), 0 <= tau <= 1.

    p(tau) = (p0 - (c^2 - s^2) p9)/2 + c s p_*; the last term is >= 0.
    """
    if c < 0 or s < 0 or c * c + s * s != 1:
        raise ValueError("(c, s) must be a point of the first quarter circle")
    p0, p9 = pt.p[0], pt.p[9]
    return (p0 - (c * c - s * s) * p9) / 2 >= (p0 - abs(p9)) / 2


def sample_U_both(rng, count: int, bound: int = 20, denom: int = 7) -> list[MomentumPoint]:
    """Seeded rational points of U_{+-} by rejection."""
    out = []
    while len(out) < count:
        raw = rng.integers(-bound * denom, bound * denom + 1, size=DIM)
        pt = MomentumPoint([Fraction(int(v), denom) for v in raw])
        if pt.p[0] <= 0:
            pt = MomentumPoint([-pt.p[0]] + list(pt.p[1:]))
        if pt.in_U_both():
            out.append(pt)
    return out


def ramp(t: Fraction) -> Fraction:
    """0 for t <= 1/4, 1 for t >= 3/4, smoothstep 6y^5 - 15y^4 + 10y^3 in between.

    ramp(t) + ramp(1 - t) = 1 exactly; the profile is C^2.
    """
    t = Fraction(t)
    if t <= Fraction(1, 4):
        return Fraction(0)
    if t >= Fraction(3, 4):
        return Fraction(1)
    y = (t - Fraction(1, 4)) * 2
    return y ** 3 * (6 * y * y - 15 * y + 10)


def partition_phi(pt: MomentumPoint) -> tuple[Fraction, Fraction]:
    """(phi_+, phi_-) = (ramp(1/2 - p9/p0), ramp(1/2 + p9/p0))."""
    if not pt.in_U():
        raise ValueError("point is not in U")
    q = pt.p[9] / pt.p[0]
    return ramp(Fraction(1, 2) - q), ramp(Fraction(1, 2) + q)


# ---------------------------------------------------------------------------
# Bernoulli polynomials and the regularized alternating sum


def bernoulli_numbers(n: int) -> list[Fraction]:
    """B_0..B_n with B_1 = -1/2, from sum_{k<=m} C(m+1, k) B_k = 0."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(comb(m + 1, k) * B[k] for k in range(m)) / (m + 1))
    return B


def bernoulli(n: int) -> list[Fraction]:
    """Coefficients of B_n(a), lowest degree first."""
    if n < 0:
        raise ValueError("n must be >= 0")
    B = bernoulli_numbers(n)
    return [comb(n, j) * B[n - j] for j in range(n + 1)]


def poly_eval(coeffs: Sequence[Fraction], a) -> Fraction:
    a = Fraction(a)
    out = Fraction(0)
    for c in reversed(coeffs):
        out = out * a + c
    return out


def hurwitz_neg(n: int, a) -> Fraction:
    """zeta(1 - n, a) = -B_n(a) / n for n >= 1."""
    if n < 1:
        raise ValueError("hurwitz_neg needs n >= 1")
    return -poly_eval(bernoulli(n), a) / n


def dirichlet_L(s: int) -> Fraction:
    """L(s) = 4^-s (zeta(s, 1/4) - zeta(s, 3/4)) at a non-positive integer s."""
    if s > 0:
        raise ValueError("only non-positive integers are supported")
    n = 1 - s
    return Fraction(4) ** (-s) * (hurwitz_neg(n, Fraction(1, 4)) - hurwitz_neg(n, Fraction(3, 4)))
