"""Polynomial differential forms on the standard simplices.

A :class:`Simplex` declares the barycentric coordinates ``t1..tk`` (with
``t0 = 1 - t1 - ... - tk`` eliminated) and their differentials ``dt1..dtk``
inside a universe.  Forms are ordinary :class:`SuperPoly` elements; the
``dt`` generators are odd with ghost number 1.

Integration over the simplex uses the orientation ``dt1 dt2 ... dtk`` with
the form factors written to the right of the coefficient.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Sequence

from .superpoly import Kind, SuperPoly, Universe, raw_partial, substitute


def _declare(universe: Universe, name: str, parity: int, ghost: int, kind: Kind):
    """Declare a simplex generator, reusing an existing one of the same name and kind."""
    if name in universe:
        g = universe[name]
        if g.kind is not kind or g.parity != parity:
            raise ValueError(f"generator {name!r} already declared with another role")
        return g
    return universe.gen(name, parity, ghost, kind)


class Simplex:
    """The standard k-simplex; simplices with the same prefix share generators."""

    def __init__(self, universe: Universe, k: int, prefix: str = "t"):
        self.universe = universe
        self.k = k
        self.prefix = prefix
        self.t = [_declare(universe, f"{prefix}{i}", 0, 0, Kind.SIMPLEX) for i in range(1, k + 1)]
        self.dt = [_declare(universe, f"d{prefix}{i}", 1, 1, Kind.SIMPLEX_FORM) for i in range(1, k + 1)]

    def __repr__(self):
        return f"Simplex({self.k}, {self.prefix!r})"

    def coord(self, i: int) -> SuperPoly:
        """Barycentric coordinate t_i, including the eliminated t_0."""
        if i == 0:
            out = self.universe.one()
            for t in self.t:
                out = out - t
            return out
        return self.t[i - 1].poly

    def dcoord(self, i: int) -> SuperPoly:
        if i == 0:
            out = self.universe.zero()
            for d in self.dt:
                out = out - d
            return out
        return self.dt[i - 1].poly

    def volume(self) -> SuperPoly:
        out = self.universe.one()
        for d in self.dt:
            out = out * d
        return out

    def vertex(self, j: int) -> dict:
        """Assignment of t_i evaluating at vertex j (used with substitute)."""
        return {t: (1 if i + 1 == j else 0) for i, t in enumerate(self.t)}


def de_rham(S: Simplex, omega: SuperPoly) -> SuperPoly:
    """delta(omega) = sum_i dt_i * d(omega)/dt_i."""
    out = S.universe.zero()
    for t, d in zip(S.t, S.dt):
        dw = raw_partial(t, omega)
        if dw:
            out = out + d * dw
    return out


def form_degree(S: Simplex, omega: SuperPoly) -> set[int]:
    idx = {d.index for d in S.dt}
    return {sum(1 for i, _ in m if i in idx) for m in omega.terms}


def check_monotone(mu: Sequence[int], k: int, l: int) -> None:
    if len(mu) != k + 1:
        raise ValueError(f"map must have {k + 1} values, got {len(mu)}")
    if any(not 0 <= v <= l for v in mu):
        raise ValueError(f"map values must lie in [0, {l}]: {list(mu)}")
    if any(a > b for a, b in zip(mu, mu[1:])):
        raise ValueError(f"map {list(mu)} is not order-preserving")


def pullback(mu: Sequence[int], source: Simplex, target: Simplex, omega: SuperPoly,
             monotone: bool = True) -> SuperPoly:
    """Pull a form on Delta^l (target) back to Delta^k (source) along mu: [k] -> [l].

    The affine map sends vertex i to vertex mu(i), so the image point has
    coordinates t'_j = sum of t_i over mu(i) = j.  With ``monotone=False``
    any vertex map is accepted (used for index sequences of a cover).
    """
    k, l = source.k, target.k
    if monotone:
        check_monotone(mu, k, l)
    elif len(mu) != k + 1 or any(not 0 <= v <= l for v in mu):
        raise ValueError(f"invalid vertex map {list(mu)} from [{k}] to [{l}]")
    assign = {}
    for j in range(1, l + 1):
        val = source.universe.zero()
        dval = source.universe.zero()
        for i, v in enumerate(mu):
            if v == j:
                val = val + source.coord(i)
                dval = dval + source.dcoord(i)
        assign[target.t[j - 1]] = val
        assign[target.dt[j - 1]] = dval
    return substitute(omega, assign)


def coface(i: int, k: int) -> list[int]:
    """The map [k-1] -> [k] skipping i."""
    return [j if j < i else j + 1 for j in range(k)]


def codegeneracy(i: int, k: int) -> list[int]:
    """The map [k+1] -> [k] hitting i twice."""
    return [j if j <= i else j - 1 for j in range(k + 2)]


def compose(mu: Sequence[int], nu: Sequence[int]) -> list[int]:
    """mu after nu."""
    return [mu[v] for v in nu]


def dirichlet(exps: Sequence[int]) -> Fraction:
    """Integral of t0^a0 ... tk^ak dt1...dtk over the k-simplex."""
    k = len(exps) - 1
    num = 1
    for a in exps:
        num *= factorial(a)
    return Fraction(num, factorial(sum(exps) + k))


def integrate(S: Simplex, omega: SuperPoly, volume_on_left: bool = False) -> SuperPoly:
    """Integral over Delta^k; terms not of top form degree integrate to zero.

    Coefficients may contain other generators; the result is the
    coefficient c in ``c * dt1...dtk`` integrated in the t variables.
    With ``volume_on_left`` the coefficient is read from ``dt1...dtk * c``
    instead (fibre integration with the volume in front).
    """
    U = S.universe
    dt_idx = [d.index for d in S.dt]
    dt_set = set(dt_idx)
    t_pos = {t.index: i for i, t in enumerate(S.t)}
    vol = S.volume()
    (vol_m,) = vol.terms if S.k else ((),)
    vol_sign = vol.terms.get(vol_m, 1)
    out: dict = {}
    for m, c in omega.terms.items():
        dts = [i for i, _ in m if i in dt_set]
        if len(dts) != S.k:
            continue
        rest = tuple(p for p in m if p[0] not in dt_set)
        sign, prod = U.mono_mul(vol_m, rest) if volume_on_left else U.mono_mul(rest, vol_m)
        assert prod == m
        exps = [0] * (S.k + 1)
        rest2 = []
        for i, e in rest:
            if i in t_pos:
                exps[t_pos[i] + 1] = e
            else:
                rest2.append((i, e))
        val = dirichlet(exps) * c * sign * vol_sign
        key = tuple(rest2)
        out[key] = out.get(key, 0) + val
    return SuperPoly(U, out)


def stokes_residual(S: Simplex, faces: Sequence[Simplex], omega: SuperPoly) -> SuperPoly:
    """Integral of delta(omega) minus the alternating sum of face integrals.

    ``faces`` is a (k-1)-simplex of the same universe used for all faces.
    """
    face = faces[0] if isinstance(faces, (list, tuple)) else faces
    lhs = integrate(S, de_rham(S, omega))
    rhs = S.universe.zero()
    for i in range(S.k + 1):
        term = integrate(face, pullback(coface(i, S.k), face, S, omega))
        rhs = rhs + term if i % 2 == 0 else rhs - term
    return lhs - rhs


def random_form(rng, S: Simplex, degree: int, max_poly_degree: int = 3, n_terms: int = 4) -> SuperPoly:
    """Random form of the given form degree with integer coefficients."""
    from itertools import combinations

    U = S.universe
    out = U.zero()
    combos = list(combinations(range(S.k), degree))
    for _ in range(n_terms):
        term = U.coerce(int(rng.integers(-4, 5)))
        for _ in range(int(rng.integers(0, max_poly_degree + 1))):
            if S.k:
                term = term * S.t[int(rng.integers(0, S.k))]
        if combos:
            for j in combos[int(rng.integers(0, len(combos)))]:
                term = term * S.dt[j]
        elif degree:
            continue
        out = out + term
    return out
