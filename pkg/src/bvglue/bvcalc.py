"""The BV Laplacian on half-forms in a Darboux chart.

A half-form ``f dx`` is represented by its coefficient ``f``; operators
act on coefficients.  Operators are :class:`Operator` objects carrying a
parity, so graded commutators can be formed exactly as in the operator
identities they are meant to test.

The antibracket is not hard-coded: it is extracted from the nested
commutator ``(-1)^|f| [[Delta, m(f)], m(g)]`` applied to the unit
half-form.  The familiar coordinate formula is a test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .superpoly import (Generator, Kind, SuperPoly, Universe, laurent_coeff,
                        partial, substitute)


class DarbouxChart:
    """Ordered pairs (x^a, xi_a) with parities (p_a, p_a + 1).

    The odd symplectic form is sum_a (-1)^(p_a) dxi_a dx^a and the
    coordinate volume is dx = dx^1 ... dx^n.
    """

    def __init__(self, pairs: Sequence[tuple[Generator, Generator]]):
        self.pairs = list(pairs)
        if not self.pairs:
            raise ValueError("a chart needs at least one coordinate pair")
        self.universe = self.pairs[0][0].universe
        for x, xi in self.pairs:
            if x.parity == xi.parity:
                raise ValueError(f"{x.name} and {xi.name} must have opposite parity")

    @classmethod
    def create(cls, universe: Universe, parities: Sequence[int], x="x", xi="xi",
               ghosts: Sequence[int] | None = None) -> "DarbouxChart":
        """Declare generators x1.., xi1.. in the universe.

        The antifield xi_a has ghost number -1 - gh(x^a), so the
        antibracket raises ghost number by one.
        """
        ghosts = ghosts or [0] * len(parities)
        xs = [universe.gen(f"{x}{a + 1}", p, g,
                           Kind.EVEN_COORD if p == 0 else Kind.ODD_COORD)
              for a, (p, g) in enumerate(zip(parities, ghosts))]
        xis = [universe.gen(f"{xi}{a + 1}", p + 1, -1 - g,
                            Kind.ODD_COORD if p == 0 else Kind.EVEN_COORD)
               for a, (p, g) in enumerate(zip(parities, ghosts))]
        return cls(list(zip(xs, xis)))

    @property
    def x(self):
        return [p[0] for p in self.pairs]

    @property
    def xi(self):
        return [p[1] for p in self.pairs]

    def parities(self):
        return [x.parity for x, _ in self.pairs]

    def even_x(self):
        return [x for x, _ in self.pairs if x.parity == 0]

    def permuted(self, perm: Sequence[int]) -> tuple["DarbouxChart", int]:
        """Reordered chart and the sign relating the two coordinate volumes."""
        pairs = [self.pairs[i] for i in perm]
        sign = 1
        for par in (0, 1):
            seq = [i for i in perm if self.pairs[i][0].parity == par]
            for a in range(len(seq)):
                for b in range(a + 1, len(seq)):
                    if seq[a] > seq[b]:
                        sign = -sign
        return DarbouxChart(pairs), sign


@dataclass(frozen=True)
class HalfForm:
    """f dx, optionally times the Gaussian weight exp(-|x_even|^2 / 2)."""

    coef: SuperPoly
    chart: DarbouxChart
    gaussian: bool = False

    def __add__(self, other: "HalfForm"):
        return HalfForm(self.coef + other.coef, self.chart, self.gaussian)

    def delta(self) -> "HalfForm":
        return HalfForm(delta0(self.chart, self.coef, self.gaussian), self.chart, self.gaussian)


# ---------------------------------------------------------------------------
# operators


class Operator:
    """A graded linear operator on half-form coefficients."""

    def __init__(self, fn: Callable[[SuperPoly], SuperPoly], parity: int, name: str = "op"):
        self.fn = fn
        self.parity = parity % 2
        self.name = name

    def __call__(self, s):
        return self.fn(s)

    def __matmul__(self, other: "Operator") -> "Operator":
        return Operator(lambda s: self.fn(other.fn(s)), self.parity + other.parity,
                        f"{self.name}{other.name}")

    def __add__(self, other: "Operator") -> "Operator":
        return Operator(lambda s: self.fn(s) + other.fn(s), self.parity, f"({self.name}+{other.name})")

    def __sub__(self, other: "Operator") -> "Operator":
        return Operator(lambda s: self.fn(s) - other.fn(s), self.parity, f"({self.name}-{other.name})")

    def scale(self, c) -> "Operator":
        return Operator(lambda s: self.fn(s) * c if not isinstance(c, SuperPoly) else c * self.fn(s),
                        self.parity + (c.parity if isinstance(c, SuperPoly) else 0),
                        f"{c}{self.name}")

    def __repr__(self):
        return f"Operator({self.name}, parity={self.parity})"


def bracket(A: Operator, B: Operator) -> Operator:
    """Graded commutator [A, B] = AB - (-1)^(|A||B|) BA."""
    sign = -1 if (A.parity & B.parity) else 1

    def fn(s):
        return A.fn(B.fn(s)) - B.fn(A.fn(s)) * sign

    return Operator(fn, A.parity + B.parity, f"[{A.name},{B.name}]")


def m(f) -> Operator:
    """Left multiplication by a homogeneous function."""
    p = f.parity if isinstance(f, SuperPoly) else 0
    return Operator(lambda s: f * s, p, f"m({f})")


def identity() -> Operator:
    return Operator(lambda s: s, 0, "1")


def delta0(chart: DarbouxChart, f: SuperPoly, gaussian: bool = False) -> SuperPoly:
    """sum_a (-1)^(p_a) d/dx^a d/dxi_a f  (Gaussian-dressed: d/dx^a -> d/dx^a - x^a)."""
    U = chart.universe
    f = U.coerce(f)
    out = U.zero()
    for x, xi in chart.pairs:
        g = partial(xi, f)
        if g.is_zero():
            continue
        h = partial(x, g)
        if gaussian and x.parity == 0:
            h = h - x * g
        out = out + h if x.parity == 0 else out - h
    return out


def delta_op(chart: DarbouxChart, gaussian: bool = False) -> Operator:
    return Operator(lambda s: delta0(chart, s, gaussian), 1, "Delta")


def delta(sigma: HalfForm) -> HalfForm:
    return sigma.delta()


def antibracket(f, g, chart: DarbouxChart) -> SuperPoly:
    """(f, g) from m((f,g)) = (-1)^|f| [[Delta, m(f)], m(g)], applied to dx."""
    U = chart.universe
    f, g = U.coerce(f), U.coerce(g)
    op = bracket(bracket(delta_op(chart), m(f)), m(g))
    val = op(U.one())
    return -val if f.parity else val


def antibracket_formula(f, g, chart: DarbouxChart) -> SuperPoly:
    """Coordinate formula for the antibracket, with left derivatives:

    (f, g) = sum_a (-1)^(p_a + p_a |f|) df/dx^a dg/dxi_a
             + (-1)^(p_a + |f| + p_a |f|) df/dxi_a dg/dx^a.

    Used as an independent oracle for :func:`antibracket`.
    """
    U = chart.universe
    f, g = U.coerce(f), U.coerce(g)
    pf = f.parity
    out = U.zero()
    for x, xi in chart.pairs:
        p = x.parity
        t1 = partial(x, f) * partial(xi, g)
        t2 = partial(xi, f) * partial(x, g)
        out = out + t1 * (-1) ** (p + p * pf) + t2 * (-1) ** (p + pf + p * pf)
    return out


def hamlift(f, sigma: SuperPoly, chart: DarbouxChart, gaussian: bool = False) -> SuperPoly:
    """H_f sigma = (-1)^|f| [Delta, m(f)] sigma."""
    return hamlift_op(f, chart, gaussian)(sigma)


def hamlift_op(f, chart: DarbouxChart, gaussian: bool = False) -> Operator:
    f = chart.universe.coerce(f)
    op = bracket(delta_op(chart, gaussian), m(f))
    if f.parity:
        return Operator(lambda s: -op(s), op.parity, f"H({f})")
    return Operator(op.fn, op.parity, f"H({f})")


# ---------------------------------------------------------------------------
# infinitesimal flows


def flow_first_order(f, sigma: SuperPoly, chart: DarbouxChart, eps: Generator) -> SuperPoly:
    """Transport sigma = g dx along exp(eps H_f) for odd f, eps**2 = 0.

    Coordinates move to x + eps (f, x) and xi + eps (f, xi); the volume dx
    picks up the Berezinian of the Jacobian of the new x coordinates.
    """
    from .superlinalg import SuperDimension, SuperMatrix, berezinian

    U = chart.universe
    f = U.coerce(f)
    if f.is_zero():
        return U.coerce(sigma)
    if f.parity != 1:
        raise ValueError("the flow law needs an odd Hamiltonian")
    if eps.index not in U.rules or U.rules[eps.index][0] != 2 or not U.rules[eps.index][1].is_zero():
        raise ValueError(f"{eps.name} must be declared nilpotent with {eps.name}^2 = 0")
    new = {}
    for x, xi in chart.pairs:
        new[x] = x + eps * antibracket(f, x, chart)
        new[xi] = xi + eps * antibracket(f, xi, chart)
    moved = substitute(U.coerce(sigma), new)
    dims = SuperDimension(chart.parities())
    jac = SuperMatrix(U, dims, dims,
                      [[partial(y, new[x]) for y in chart.x] for x in chart.x])
    return berezinian(jac) * moved


def flow_coordinates_formula(f, chart: DarbouxChart, eps: Generator) -> dict:
    """Displayed flow formulas x - eps df/dxi, xi + eps df/dx (even x only)."""
    return {**{x: x - eps * partial(xi, f) for x, xi in chart.pairs},
            **{xi: xi + eps * partial(x, f) for x, xi in chart.pairs}}


# ---------------------------------------------------------------------------
# quantum master equation


def qme_residual(S, chart: DarbouxChart) -> SuperPoly:
    """hbar Delta_0 S + 1/2 (S, S)."""
    U = chart.universe
    if U.hbar is None:
        raise ValueError("the universe has no hbar")
    S = U.coerce(S)
    return U.hbar * delta0(chart, S) + antibracket(S, S, chart) * Fraction(1, 2)


def qme_tower(Sn: Sequence[SuperPoly], N: int, chart: DarbouxChart) -> list[SuperPoly]:
    """Coefficients of hbar^0..hbar^N of the QME for S = sum hbar^n S_n.

    Order 0 is 1/2 (S_0, S_0); order n is
    Delta_0 S_{n-1} + (S_0, S_n) + 1/2 sum_{0<i<n} (S_i, S_{n-i}).
    """
    U = chart.universe
    S = [U.coerce(s) for s in Sn] + [U.zero()] * max(0, N + 1 - len(Sn))
    out = [antibracket(S[0], S[0], chart) * Fraction(1, 2)]
    for n in range(1, N + 1):
        r = delta0(chart, S[n - 1]) + antibracket(S[0], S[n], chart)
        for i in range(1, n):
            r = r + antibracket(S[i], S[n - i], chart) * Fraction(1, 2)
        out.append(r)
    return out


def tower_vs_laurent(Sn: Sequence[SuperPoly], N: int, chart: DarbouxChart) -> list[SuperPoly]:
    """Differences between qme_tower and the Laurent coefficients of qme_residual."""
    U = chart.universe
    S = U.zero()
    for n, s in enumerate(Sn[: N + 1]):
        S = S + s * U.hbar ** n
    full = qme_residual(S, chart)
    return [t - laurent_coeff(full, n) for n, t in enumerate(qme_tower(Sn, N, chart))]
