"""Čech descent of gauge conditions and the glued trace Z.

Everything lives in a single flat Darboux chart with even coordinates
``x^a`` and odd antifields ``xi_a``.  Open sets of a cover are labels
``0..n-1``; all restriction maps are identities, so a Čech cochain is
determined by its simplex-form dependence.  Half-forms are Gaussian
dressed: a coefficient ``f`` stands for ``f exp(-|x|^2/2) dx``.

Index sequences ``(a_0, ..., a_k)`` sit over the k-simplex ``Delta^k``
whose generators are ``tk.1 .. tk.k`` and ``dtk.1 .. dtk.k``.  Cochains and
families built from data on the "cover simplex" (one vertex per open set)
are pulled back along the vertex map ``j -> a_j``, which makes them
compatible with all faces and degeneracies by construction; the
compatibility is still checked before a trace is taken.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from gmpy2 import mpq

from .bvcalc import DarbouxChart, Operator, antibracket, bracket, delta0, m
from .simplexforms import (Simplex, codegeneracy, coface, de_rham, integrate,
                           pullback)
from .superpoly import (Generator, Kind, SuperPoly, Universe, exp_nilpotent,
                        gaussian_moment, partial, substitute)


class TruncationError(RuntimeError):
    """A nerve level beyond the truncation contributes a nonzero term."""


class CompatibilityError(ValueError):
    """A simplicial cochain or family fails a face or degeneracy relation."""


def _require_even_chart(chart: DarbouxChart) -> None:
    odd = [x.name for x in chart.x if x.parity]
    if odd:
        raise ValueError(f"descent needs a chart with even base coordinates; odd: {odd}")


# ---------------------------------------------------------------------------
# the Čech model


class CechModel:
    """A cover of a flat chart by labelled opens with a polynomial partition of unity.

    ``pou`` lists even functions phi_a summing to one.  If ``aux`` is a
    :class:`Simplex`, the phi_a may depend on its coordinates (a family of
    partitions of unity parametrized by an auxiliary simplex) and the
    operators follow the parametrized rule H -> m(d phi) + hbar H.
    """

    def __init__(self, chart: DarbouxChart, pou: Sequence, truncation: int = 3,
                 aux: Simplex | None = None):
        _require_even_chart(chart)
        self.chart = chart
        self.universe = U = chart.universe
        if U.hbar is None:
            raise ValueError("the universe needs hbar")
        self.pou = [U.coerce(p) for p in pou]
        if not self.pou:
            raise ValueError("a cover needs at least one open set")
        for a, p in enumerate(self.pou):
            if p.terms and p.parity != 0:
                raise ValueError(f"partition function {a} is not even")
        total = sum(self.pou, U.zero()) - 1
        if not total.is_zero():
            raise ValueError(f"partition of unity does not sum to 1: residual {total.to_text()}")
        self.truncation = truncation
        self.aux = aux
        self._simplices: dict[int, Simplex] = {}
        self.cover_simplex = self.simplex_for_cover()
        D = self.delta_op()
        self._H = [bracket(D, m(p)) for p in self.pou]
        if aux is not None:
            h = U.hbar
            self._Hp = []
            for a, p in enumerate(self.pou):
                dp, Ha = de_rham(aux, p), self._H[a]
                self._Hp.append(Operator(lambda s, dp=dp, Ha=Ha: dp * s + h * Ha(s), 1, f"H{a}"))

    @property
    def opens(self) -> range:
        return range(len(self.pou))

    def simplex(self, k: int) -> Simplex:
        """The standard k-simplex carrying level-k simplex forms."""
        if k not in self._simplices:
            self._simplices[k] = Simplex(self.universe, k, f"t{k}.")
        return self._simplices[k]

    def simplex_for_cover(self) -> Simplex:
        return Simplex(self.universe, len(self.pou) - 1, "u")

    def sequences(self, k: int):
        """All index sequences of length k + 1, repeats included."""
        return itertools.product(self.opens, repeat=k + 1)

    def delta_op(self) -> Operator:
        return Operator(lambda s: delta0(self.chart, s, True), 1, "Delta")

    def hamiltonian(self, a: int) -> Operator:
        """H_a = [Delta, m(phi_a)] (or m(d phi_a) + hbar H_a when parametrized)."""
        self._check_index(a)
        return self._Hp[a] if self.aux is not None else self._H[a]

    def _check_index(self, a):
        if not (isinstance(a, int) and 0 <= a < len(self.pou)):
            raise KeyError(f"unknown open set {a!r}; opens are 0..{len(self.pou) - 1}")

    def differential(self, k: int) -> Operator:
        """d + delta + hbar Delta on level-k coefficients (d only when parametrized)."""
        S, h = self.simplex(k), self.universe.hbar

        def fn(s):
            out = de_rham(S, s) + h * delta0(self.chart, s, True)
            if self.aux is not None:
                out = out + de_rham(self.aux, s)
            return out

        return Operator(fn, 1, "D")

    def sum_of_hamiltonians(self, sigma) -> SuperPoly:
        """sum_a H_a sigma; zero because the phi_a sum to one."""
        sigma = self.universe.coerce(sigma)
        return sum((self._H[a](sigma) for a in self.opens), self.universe.zero())


def phi_operator(seq: Sequence[int], model: CechModel) -> Operator:
    """Phi_{a0..ak} = c_k sum_i (-1)^i H_a0 .. H_a(i-1) m(phi_ai) H_a(i+1) .. H_ak.

    c_k = hbar^k / (k + 1) for a plain model; c_k = 1 / (k + 1) for a
    parametrized model, where each H already carries its hbar.
    """
    seq = tuple(seq)
    if not seq:
        raise ValueError("empty index sequence")
    for a in seq:
        model._check_index(a)
    k = len(seq) - 1
    U = model.universe
    pref = mpq(1, k + 1) if model.aux is not None else U.hbar ** k * mpq(1, k + 1)
    hs = [model.hamiltonian(a) for a in seq]
    ms = [m(model.pou[a]) for a in seq]

    def fn(s):
        out = U.zero()
        for i in range(k + 1):
            v = s
            for j in range(k, -1, -1):
                v = ms[j](v) if j == i else hs[j](v)
                if v.is_zero():
                    break
            out = out + v if i % 2 == 0 else out - v
        return pref * out

    return Operator(fn, k, "Phi" + "".join(map(str, seq)))


def lemma_eta_residual(seq: Sequence[int], model: CechModel, sigma, k_simplex: int | None = None) -> SuperPoly:
    """([D, Phi_seq] - sum_i (-1)^i sum_a Phi_{seq with a inserted at i}) sigma.

    D is delta + hbar Delta (plus d when parametrized), with delta the
    de Rham differential of the level-``k_simplex`` simplex (default: the
    length of ``seq`` minus one).
    """
    seq = tuple(seq)
    k = len(seq) - 1 if k_simplex is None else k_simplex
    U = model.universe
    sigma = U.coerce(sigma)
    lhs = bracket(model.differential(k), phi_operator(seq, model))(sigma)
    rhs = U.zero()
    for i in range(len(seq) + 1):
        for a in model.opens:
            term = phi_operator(seq[:i] + (a,) + seq[i:], model)(sigma)
            rhs = rhs + term if i % 2 == 0 else rhs - term
    return lhs - rhs


# ---------------------------------------------------------------------------
# Lagrangian families and their generating one-forms


class LagrangianFamily:
    """Graph Lagrangians xi_a = xi_a(x, t) over a simplex."""

    def __init__(self, chart: DarbouxChart, simplex: Simplex, graph: Mapping[Generator, object]):
        _require_even_chart(chart)
        self.chart = chart
        self.simplex = simplex
        U = chart.universe
        self.graph = {xi: U.coerce(graph.get(xi, 0)) for xi in chart.xi}
        extra = set(graph) - set(chart.xi)
        if extra:
            raise ValueError(f"graph assigns non-antifield generators: {sorted(g.name for g in extra)}")
        for xi, f in self.graph.items():
            if f.terms and f.parity != xi.parity:
                raise ValueError(f"graph value for {xi.name} has the wrong parity")
        self._eta: dict = {}

    @property
    def k(self) -> int:
        return self.simplex.k

    @classmethod
    def from_gauge_fermion(cls, chart, simplex, psi) -> "LagrangianFamily":
        """xi_a = d psi / dx^a for an odd function psi(x, t)."""
        return cls(chart, simplex, {xi: partial(x, psi) for x, xi in chart.pairs})

    def closedness_residuals(self) -> dict[str, SuperPoly]:
        """Nonzero mixed-derivative residuals; empty when eta exists.

        Checks that each fibre is Lagrangian (d xi_a/dx^b symmetric) and that
        the velocity d xi_a/dt_i is closed in x.
        """
        out = {}
        pairs = self.chart.pairs
        for (xa, ja), (xb, jb) in itertools.combinations(pairs, 2):
            r = partial(xb, self.graph[ja]) - partial(xa, self.graph[jb])
            if not r.is_zero():
                out[f"d{ja.name}/d{xb.name} - d{jb.name}/d{xa.name}"] = r
            for t in self.simplex.t:
                r = partial(xb, partial(t, self.graph[ja])) - partial(xa, partial(t, self.graph[jb]))
                if not r.is_zero():
                    out[f"d2{ja.name}/d{t.name}d{xb.name} - d2{jb.name}/d{t.name}d{xa.name}"] = r
        return out

    def pullback_embedding(self, f) -> SuperPoly:
        """iota^* f: substitute the graph."""
        return substitute(self.chart.universe.coerce(f), self.graph)

    def integrate(self, f) -> SuperPoly:
        """Gaussian integral over L of iota^* f."""
        return gaussian_moment(self.pullback_embedding(f), self.chart.x)

    def eta(self, basepoint: Sequence | None = None) -> SuperPoly:
        key = tuple(basepoint) if basepoint is not None else None
        if key not in self._eta:
            self._eta[key] = compute_eta(self, basepoint)
        return self._eta[key]


def _radial_integral(chart: DarbouxChart, g: SuperPoly, x0: Sequence) -> SuperPoly:
    """int_0^1 g(x0 + s (x - x0)) ds, exactly."""
    U = chart.universe
    xs = chart.x
    shifted = substitute(g, {x: x + c for x, c in zip(xs, x0)})
    idx = {x.index for x in xs}
    terms = {}
    for mono, c in shifted.terms.items():
        deg = sum(e for i, e in mono if i in idx)
        terms[mono] = c * mpq(1, deg + 1)
    return substitute(SuperPoly(U, terms), {x: x - c for x, c in zip(xs, x0)})


def eta_components(fam: LagrangianFamily, basepoint: Sequence | None = None) -> list[SuperPoly]:
    """eta_i with d eta_i / dx^a = d xi_a / dt_i and eta_i(x0, t) = 0."""
    bad = fam.closedness_residuals()
    if bad:
        name, r = next(iter(bad.items()))
        raise ValueError(f"family is not closed: {name} = {r.to_text()}")
    chart = fam.chart
    x0 = list(basepoint) if basepoint is not None else [0] * len(chart.x)
    if len(x0) != len(chart.x):
        raise ValueError(f"basepoint needs {len(chart.x)} coordinates")
    out = []
    for t in fam.simplex.t:
        eta_i = chart.universe.zero()
        for (x, xi), c in zip(chart.pairs, x0):
            vel = partial(t, fam.graph[xi])
            if vel.is_zero():
                continue
            eta_i = eta_i + (x - c) * _radial_integral(chart, vel, x0)
        out.append(eta_i)
    return out


def compute_eta(fam: LagrangianFamily, basepoint: Sequence | None = None) -> SuperPoly:
    """The generating one-form eta = sum_i dt_i eta_i of the family.

    The radial homotopy centred at the basepoint makes eta vanish there
    identically, so delta eta (which is independent of x) vanishes too and
    no further normalization is needed.  Both defining equations are
    verified before returning.
    """
    comps = eta_components(fam, basepoint)
    S, chart = fam.simplex, fam.chart
    U = chart.universe
    eta = U.zero()
    for d, e in zip(S.dt, comps):
        eta = eta + d * e
    for t, e in zip(S.t, comps):
        for x, xi in chart.pairs:
            r = partial(x, e) - partial(t, fam.graph[xi])
            if not r.is_zero():
                raise ArithmeticError(f"eta check failed for {t.name}, {x.name}: {r.to_text()}")
    d_eta = de_rham(S, eta)
    if not d_eta.is_zero():
        raise ArithmeticError(f"delta eta = {d_eta.to_text()}")
    return eta


def weight(fam: LagrangianFamily, basepoint: Sequence | None = None) -> SuperPoly:
    """exp(-eta / hbar) as a finite sum (eta is nilpotent in the dt's)."""
    U = fam.chart.universe
    return exp_nilpotent(-fam.eta(basepoint) * U.hbar ** -1)


def _as_gaussian(sigma, chart):
    from .bvcalc import HalfForm

    if isinstance(sigma, HalfForm):
        if not sigma.gaussian:
            raise ValueError("half-form is not in the Gaussian class")
        return sigma.coef
    return chart.universe.coerce(sigma)


def ms_residual(fam: LagrangianFamily, sigma, basepoint: Sequence | None = None) -> SuperPoly:
    """delta int_L e^(-eta/hbar) iota^* sigma - int_L e^(-eta/hbar) iota^*((delta + hbar Delta) sigma)."""
    chart, S = fam.chart, fam.simplex
    U = chart.universe
    s = _as_gaussian(sigma, chart)
    E = weight(fam, basepoint)
    lhs = de_rham(S, gaussian_moment(E * fam.pullback_embedding(s), chart.x))
    ds = de_rham(S, s) + U.hbar * delta0(chart, s, True)
    rhs = gaussian_moment(E * fam.pullback_embedding(ds), chart.x)
    return lhs - rhs


# ---------------------------------------------------------------------------
# simplicial data over the nerve


class NerveData:
    """Per-sequence data built lazily from a rule, with a compatibility check."""

    def __init__(self, model: CechModel, rule: Callable[[tuple], object]):
        self.model = model
        self._rule = rule
        self._cache: dict = {}

    def __getitem__(self, seq) -> object:
        seq = tuple(seq)
        for a in seq:
            self.model._check_index(a)
        if seq not in self._cache:
            self._cache[seq] = self._rule(seq)
        return self._cache[seq]


def _structure_maps(l: int):
    """Generating order-preserving maps into [l] from [l-1] and [l+1]."""
    for i in range(l + 1):
        if l >= 1:
            yield l - 1, coface(i, l)
    for i in range(l + 1):
        yield l + 1, codegeneracy(i, l)


class TWCochain(NerveData):
    """A Thom-Whitney cochain: a level-k simplex form for every sequence.

    Components are Gaussian-dressed half-form coefficients with forms on
    ``model.simplex(k)``.
    """

    @classmethod
    def from_global(cls, model: CechModel, form) -> "TWCochain":
        """Pull a form on the cover simplex back along each vertex map."""
        U = model.universe
        form = U.coerce(form)
        big = model.cover_simplex

        def rule(seq):
            return pullback(seq, model.simplex(len(seq) - 1), big, form, monotone=False)

        out = cls(model, rule)
        out.global_form = form
        return out

    @classmethod
    def constant(cls, model: CechModel, sigma) -> "TWCochain":
        """The cochain of a global half-form: sigma at level 0, its pullbacks above."""
        return cls.from_global(model, sigma)

    def apply(self, op_for_level: Callable[[int], Operator]) -> "TWCochain":
        """Componentwise image under a level-dependent operator."""
        return TWCochain(self.model, lambda seq: op_for_level(len(seq) - 1)(self[seq]))

    def differential(self) -> "TWCochain":
        """(d +) delta + hbar Delta applied componentwise."""
        return self.apply(self.model.differential)

    def compatibility_residuals(self, max_level: int | None = None) -> list[str]:
        """Failures of mu^* sigma_l = sigma_(seq o mu) up to the given level."""
        model = self.model
        K = model.truncation if max_level is None else max_level
        bad = []
        for l in range(K + 1):
            for seq in model.sequences(l):
                for k, mu in _structure_maps(l):
                    if k > K:
                        continue
                    lhs = pullback(mu, model.simplex(k), model.simplex(l), self[seq])
                    rhs = self[tuple(seq[j] for j in mu)]
                    if not (lhs - rhs).is_zero():
                        bad.append(f"{seq} along {mu}")
        return bad

    def check_compatible(self, max_level: int | None = None) -> None:
        bad = self.compatibility_residuals(max_level)
        if bad:
            raise CompatibilityError(f"cochain not compatible: {bad[0]} ({len(bad)} failures)")


class FlexibleLagrangian(NerveData):
    """Lagrangian families over every sequence, from one gauge fermion per open set.

    Over (a_0..a_k) the gauge fermion is sum_j t_j psi_(a_j), i.e. the
    pullback of sum_a u_a psi_a from the cover simplex.
    """

    def __init__(self, model: CechModel, psis: Sequence, basepoint: Sequence | None = None):
        U = model.universe
        psis = [U.coerce(p) for p in psis]
        if len(psis) != len(model.pou):
            raise ValueError(f"need one gauge fermion per open set, got {len(psis)}")
        big = model.cover_simplex
        glob = U.zero()
        for a, p in enumerate(psis):
            glob = glob + big.coord(a) * p
        self.psis = psis
        self.basepoint = basepoint
        self.global_fermion = glob

        def rule(seq):
            S = model.simplex(len(seq) - 1)
            psi = pullback(seq, S, big, glob, monotone=False)
            return LagrangianFamily.from_gauge_fermion(model.chart, S, psi)

        super().__init__(model, rule)

    def compatibility_residuals(self, max_level: int | None = None) -> list[str]:
        model = self.model
        K = model.truncation if max_level is None else max_level
        bad = []
        for l in range(K + 1):
            for seq in model.sequences(l):
                for k, mu in _structure_maps(l):
                    if k > K:
                        continue
                    fam, sub = self[seq], self[tuple(seq[j] for j in mu)]
                    for xi in model.chart.xi:
                        lhs = pullback(mu, model.simplex(k), model.simplex(l), fam.graph[xi])
                        if not (lhs - sub.graph[xi]).is_zero():
                            bad.append(f"{seq} along {mu} at {xi.name}")
        return bad


# ---------------------------------------------------------------------------
# the glued trace


def _level_contribution(sigma: TWCochain, model: CechModel, families, k: int,
                        twist: Callable[[SuperPoly], SuperPoly] | None = None) -> SuperPoly:
    U = model.universe
    S = model.simplex(k)
    total = U.zero()
    basepoint = getattr(families, "basepoint", None)
    for seq in model.sequences(k):
        comp = sigma[seq]
        if twist is not None:
            comp = twist(comp)
        v = phi_operator(seq, model)(comp)
        if v.is_zero():
            continue
        try:
            fam = families[seq]
        except KeyError as exc:
            raise KeyError(f"no Lagrangian family for sequence {seq}") from exc
        integrand = weight(fam, basepoint) * fam.pullback_embedding(v)
        total = total + integrate(S, gaussian_moment(integrand, model.chart.x), volume_on_left=True)
    return total if k % 2 == 0 else -total


def truncation_tail(sigma: TWCochain, model: CechModel, extra: int = 2,
                    twist: Callable[[SuperPoly], SuperPoly] | None = None) -> list[tuple]:
    """Sequences at levels K+1..K+extra whose Phi-term is nonzero."""
    out = []
    K = model.truncation
    for k in range(K + 1, K + extra + 1):
        for seq in model.sequences(k):
            comp = sigma[seq]
            if twist is not None:
                comp = twist(comp)
            if not phi_operator(seq, model)(comp).is_zero():
                out.append(seq)
    return out


def trace_Z(sigma: TWCochain, model: CechModel, families, check: bool = True,
            twist: Callable[[SuperPoly], SuperPoly] | None = None) -> SuperPoly:
    """Z(sigma) = sum_k (-1)^k sum_seq int_Delta^k int_L e^(-eta/hbar) iota^*(Phi sigma).

    The sum stops at ``model.truncation``; with ``check`` the next two
    levels must contribute nothing term by term, and the cochain must be
    compatible with faces and degeneracies.
    """
    if check:
        sigma.check_compatible()
        if isinstance(families, FlexibleLagrangian):
            bad = families.compatibility_residuals()
            if bad:
                raise CompatibilityError(f"families not compatible: {bad[0]}")
        tail = truncation_tail(sigma, model, twist=twist)
        if tail:
            raise TruncationError(f"levels beyond K={model.truncation} contribute, e.g. {tail[0]}")
    U = model.universe
    total = U.zero()
    for k in range(model.truncation + 1):
        total = total + _level_contribution(sigma, model, families, k, twist)
    return total


def closedness_residual(sigma: TWCochain, model: CechModel, families) -> SuperPoly:
    """Z((d + delta + hbar Delta) sigma) - d Z(sigma); d only for a parametrized model."""
    lhs = trace_Z(sigma.differential(), model, families)
    if model.aux is None:
        return lhs
    return lhs - de_rham(model.aux, trace_Z(sigma, model, families, check=False))


def pou_independence_residual(sigma: TWCochain, model: CechModel, families) -> SuperPoly:
    """d Z(sigma) for an observable sigma and a pou family over the auxiliary simplex."""
    if model.aux is None:
        raise ValueError("the model has no auxiliary simplex")
    closed = sigma.differential()
    for l in range(model.truncation + 1):
        for seq in model.sequences(l):
            r = closed[seq]
            if not r.is_zero():
                raise ValueError(f"sigma is not closed at {seq}: {r.to_text()}")
    return de_rham(model.aux, trace_Z(sigma, model, families))


def interpolate_pou(aux: Simplex, pou0: Sequence, pou1: Sequence) -> list[SuperPoly]:
    """phi_a(v) = (1 - v) phi0_a + v phi1_a over an auxiliary interval."""
    if aux.k != 1:
        raise ValueError("interpolation needs a 1-simplex")
    if len(pou0) != len(pou1):
        raise ValueError("partitions of unity have different sizes")
    v = aux.t[0]
    return [(1 - v) * a + v * b for a, b in zip(pou0, pou1)]


# ---------------------------------------------------------------------------
# Lie superalgebra cochains and moment maps


class LieSuperAlgebra:
    """Basis with parities and structure constants C[(a, b)] = {c: C^c_ab}.

    Cochain generators eps^a (ghost 1, parity |xi_a| + 1) are declared in
    the universe under the given prefix.
    """

    def __init__(self, universe: Universe, parities: Sequence[int],
                 structure: Mapping[tuple[int, int], Mapping[int, object]] | None = None,
                 prefix: str = "eps"):
        self.universe = universe
        self.parities = [p % 2 for p in parities]
        n = len(self.parities)
        self.C: dict = {}
        for (a, b), row in (structure or {}).items():
            for c, v in row.items():
                if not all(0 <= i < n for i in (a, b, c)):
                    raise ValueError(f"structure index out of range: {(a, b, c)}")
                if v:
                    if self.parities[c] != (self.parities[a] + self.parities[b]) % 2:
                        raise ValueError(f"C^{c}_{a}{b} violates parity")
                    self.C[(a, b, c)] = mpq(Fraction(v)) if not isinstance(v, int) else mpq(v)
        self.eps = [universe.gen(f"{prefix}{a + 1}", p + 1, 1, Kind.COCHAIN)
                    for a, p in enumerate(self.parities)]

    @property
    def dim(self) -> int:
        return len(self.parities)

    def c(self, a, b, c):
        return self.C.get((a, b, c), 0)

    def antisymmetry_residuals(self) -> list[tuple]:
        n = self.dim
        pa = self.parities
        return [(a, b, c) for a in range(n) for b in range(n) for c in range(n)
                if self.c(a, b, c) + (-1) ** (pa[a] * pa[b]) * self.c(b, a, c) != 0]

    def bracket_vec(self, u: Mapping[int, object], v: Mapping[int, object]) -> dict:
        """Bracket of two homogeneous basis combinations."""
        out: dict = {}
        for a, ua in u.items():
            for b, vb in v.items():
                for c in range(self.dim):
                    k = self.c(a, b, c)
                    if k:
                        out[c] = out.get(c, 0) + ua * vb * k
        return {c: w for c, w in out.items() if w}

    def jacobi_residuals(self) -> list[tuple]:
        """[a,[b,c]] - [[a,b],c] - (-1)^(|a||b|) [b,[a,c]] on basis triples."""
        n, pa = self.dim, self.parities
        bad = []
        for a, b, c in itertools.product(range(n), repeat=3):
            e = lambda i: {i: 1}
            lhs = self.bracket_vec(e(a), self.bracket_vec(e(b), e(c)))
            r1 = self.bracket_vec(self.bracket_vec(e(a), e(b)), e(c))
            r2 = self.bracket_vec(e(b), self.bracket_vec(e(a), e(c)))
            s = (-1) ** (pa[a] * pa[b])
            for i in range(n):
                if lhs.get(i, 0) - r1.get(i, 0) - s * r2.get(i, 0) != 0:
                    bad.append((a, b, c))
                    break
        return bad

    def delta_generator(self, a: int) -> SuperPoly:
        """delta_g eps^a = 1/2 sum_bc (-1)^((|b|+1)|c|) C^a_bc eps^b eps^c."""
        U = self.universe
        pa = self.parities
        out = U.zero()
        for (b, c, a2), v in self.C.items():
            if a2 == a:
                out = out + self.eps[b] * self.eps[c] * (v * (-1) ** ((pa[b] + 1) * pa[c]) * mpq(1, 2))
        return out

    def delta_op(self) -> Operator:
        return Operator(lambda f: cochain_differential(self, f), 1, "delta_g")


def cochain_differential(g: LieSuperAlgebra, f) -> SuperPoly:
    """delta_g extended as an odd left derivation: sum_a delta_g(eps^a) d f / d eps^a."""
    U = g.universe
    f = U.coerce(f)
    out = U.zero()
    for a, e in enumerate(g.eps):
        df = partial(e, f)
        if not df.is_zero():
            out = out + g.delta_generator(a) * df
    return out


class MomentMap:
    """rho: basis of g -> functions on the chart, rho(xi_a) of parity |xi_a| + 1."""

    def __init__(self, g: LieSuperAlgebra, chart: DarbouxChart, rho: Sequence):
        U = chart.universe
        self.g, self.chart = g, chart
        self.rho = [U.coerce(r) for r in rho]
        if len(self.rho) != g.dim:
            raise ValueError(f"need {g.dim} moment functions, got {len(self.rho)}")
        for a, r in enumerate(self.rho):
            if r.terms and r.parity != (g.parities[a] + 1) % 2:
                raise ValueError(f"rho({a}) has parity {r.parity}, expected {(g.parities[a] + 1) % 2}")

    def mu(self) -> SuperPoly:
        U = self.chart.universe
        out = U.zero()
        for r, e in zip(self.rho, self.g.eps):
            out = out + r * e
        return out

    def morphism_residuals(self) -> dict[tuple, SuperPoly]:
        """(rho_a, rho_b) - sum_c C^c_ab rho_c, nonzero entries only."""
        out = {}
        n = self.g.dim
        for a in range(n):
            for b in range(n):
                r = antibracket(self.rho[a], self.rho[b], self.chart)
                for c in range(n):
                    k = self.g.c(a, b, c)
                    if k:
                        r = r - self.rho[c] * k
                if not r.is_zero():
                    out[(a, b)] = r
        return out


def mc_residual(rho: MomentMap) -> SuperPoly:
    """delta_g mu + 1/2 (mu, mu)."""
    mu = rho.mu()
    return cochain_differential(rho.g, mu) + antibracket(mu, mu, rho.chart) * mpq(1, 2)


def exp_mu(rho: MomentMap) -> SuperPoly:
    """exp(mu / hbar) as a finite sum; rejects a non-nilpotent mu."""
    U = rho.chart.universe
    try:
        return exp_nilpotent(rho.mu() * U.hbar ** -1)
    except ValueError as exc:
        raise ValueError("mu is not nilpotent, exp(mu/hbar) has no finite expansion") from exc


def conjugation_residual(rho: MomentMap, sigma) -> SuperPoly:
    """e^(mu/hbar)(delta_g + H_mu + hbar Delta) sigma - (delta_g + hbar Delta)(e^(mu/hbar) sigma)."""
    chart, g = rho.chart, rho.g
    U = chart.universe
    h = U.hbar
    sigma = U.coerce(sigma)
    E = exp_mu(rho)
    mu = rho.mu()
    D = Operator(lambda s: delta0(chart, s, True), 1)
    Hmu = bracket(D, m(mu))
    inner = cochain_differential(g, sigma) + Hmu(sigma) + h * D(sigma)
    es = E * sigma
    return E * inner - (cochain_differential(g, es) + h * D(es))


def equivariant_Z(sigma: TWCochain, model: CechModel, families, rho: MomentMap,
                  check: bool = True) -> SuperPoly:
    """Z with Phi applied to e^(mu/hbar) sigma."""
    E = exp_mu(rho)
    return trace_Z(sigma, model, families, check=check, twist=lambda s: E * s)


def equivariant_differential(model: CechModel, rho: MomentMap) -> Callable[[int], Operator]:
    """Level-k operator d + delta_g + H_mu + delta + hbar Delta."""
    chart, g = rho.chart, rho.g
    D = Operator(lambda s: delta0(chart, s, True), 1)
    Hmu = bracket(D, m(rho.mu()))

    def level(k):
        base = model.differential(k)
        return Operator(lambda s: base(s) + cochain_differential(g, s) + Hmu(s), 1, "Dg")

    return level


def equivariant_closedness_residual(sigma: TWCochain, model: CechModel, families,
                                    rho: MomentMap) -> SuperPoly:
    """Z_g((d + delta_g + H_mu + delta + hbar Delta) sigma) - (d + delta_g) Z_g(sigma).

    With the simplex volume read on the left, Z_g intertwines the two
    differentials exactly (no relative sign).
    """
    g = rho.g
    lhs = equivariant_Z(sigma.apply(equivariant_differential(model, rho)), model, families, rho)
    z = equivariant_Z(sigma, model, families, rho, check=False)
    dz = cochain_differential(g, z)
    if model.aux is not None:
        dz = dz + de_rham(model.aux, z)
    return lhs - dz


def find_moment_maps(g: LieSuperAlgebra, chart: DarbouxChart, candidates: Sequence[Sequence],
                     coefficients=(-1, 0, 1), limit: int = 1) -> list[MomentMap]:
    """Brute-force search for nonzero morphisms rho with rho_a in span(candidates[a])."""
    U = chart.universe
    options = []
    for a, basis in enumerate(candidates):
        opts = []
        for cs in itertools.product(coefficients, repeat=len(basis)):
            f = U.zero()
            for c, b in zip(cs, basis):
                if c:
                    f = f + U.coerce(b) * c
            opts.append(f)
        options.append(opts)
    found = []
    for rho in itertools.product(*options):
        if any(r.is_zero() for r in rho):
            continue
        mm = MomentMap(g, chart, rho)
        if not mm.morphism_residuals():
            found.append(mm)
            if len(found) >= limit:
                break
    return found
