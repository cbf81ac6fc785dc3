"""Real chiral spinors of R^{1,9} and the light-cone gauge identities.

The Clifford algebra is generated by 32x32 integer matrices gamma^mu with
gamma^mu gamma^nu + gamma^nu gamma^mu = 2 eta^{mu nu}, where
eta = diag(+1, -1, ..., -1) is the pairing on covectors (so (p, m_+) =
(p_0 - p_9)/2 for m_+ = (E^0 + E^9)/2).  Every gamma^mu is a signed tensor
product of the 2x2 matrices I, X, Z, E (E = [[0, 1], [-1, 0]]); the first
factor is block structure, so gamma^mu = [[0, sigma^mu], [sigmabar^mu, 0]]
on S = S_+ + S_-.

Symbolic Clifford elements are :class:`ClMatrix` objects: linear
combinations of such signed words with :class:`SuperPoly` coefficients.
The 4^5 words are a basis of the 32x32 matrices, so a combination is zero
exactly when all its coefficients vanish.

Spinors are lists of 32 coefficients; a spinor of chirality + has zeros
in the last 16 slots.  The pairing T(a, b) pairs the S_+ part of one
argument with the S_- part of the other through the identity matrix.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from gmpy2 import mpq

from .superpoly import Kind, SuperPoly, Universe, partial, raw_partial, substitute

LETTERS = "IXZE"
_P2 = {
    "I": np.array([[1, 0], [0, 1]], dtype=np.int64),
    "X": np.array([[0, 1], [1, 0]], dtype=np.int64),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.int64),
    "E": np.array([[0, 1], [-1, 0]], dtype=np.int64),
}
DIM = 10
ETA = np.diag([1] + [-1] * 9)
TRANSVERSE = range(1, 9)


def _letter_table():
    table = {}
    for a, b in itertools.product(LETTERS, repeat=2):
        prod = _P2[a] @ _P2[b]
        for c in LETTERS:
            for sign in (1, -1):
                if (prod == sign * _P2[c]).all():
                    table[a, b] = (sign, c)
    return table


_TABLE = _letter_table()


def kron_word(word: str) -> np.ndarray:
    out = np.eye(1, dtype=np.int64)
    for ch in word:
        out = np.kron(out, _P2[ch])
    return out


def word_mul(w1: str, w2: str) -> tuple[int, str]:
    sign, out = 1, []
    for a, b in zip(w1, w2):
        s, c = _TABLE[a, b]
        sign *= s
        out.append(c)
    return sign, "".join(out)


@lru_cache(maxsize=None)
def _word_action(word: str):
    """(columns, signs) with (M v)_i = signs[i] * v[columns[i]]."""
    M = kron_word(word)
    cols = [int(np.flatnonzero(row)[0]) for row in M]
    signs = [int(M[i, j]) for i, j in enumerate(cols)]
    return cols, signs


# ---------------------------------------------------------------------------
# the representation


def _euclidean_gammas() -> list[str]:
    """Nine mutually anticommuting symmetric 16x16 words (squares = +1).

    Deterministic depth-first search over 4-letter words with an even
    number of E factors (these are exactly the symmetric ones).
    """
    cands = ["".join(w) for w in itertools.product(LETTERS, repeat=4)
             if w.count("E") % 2 == 0 and "".join(w) != "IIII"]

    def anticommute(a, b):
        s1, w1 = word_mul(a, b)
        s2, w2 = word_mul(b, a)
        return w1 == w2 and s1 == -s2

    def search(chosen, start):
        if len(chosen) == 9:
            return chosen
        for i in range(start, len(cands)):
            if all(anticommute(cands[i], c) for c in chosen):
                found = search(chosen + [cands[i]], i + 1)
                if found:
                    return found
        return None

    out = search([], 0)
    if out is None:
        raise RuntimeError("no Clifford basis found")
    return out


class SpinorRep:
    """gamma-matrices, their chiral blocks and the pairing T, all verified."""

    def __init__(self):
        euclid = _euclidean_gammas()
        # gamma^0 = [[0, 1], [1, 0]], gamma^i = [[0, g_i], [-g_i, 0]]
        self.words = [(1, "XIIII")] + [(1, "E" + w) for w in euclid]
        self.gamma = [s * kron_word(w) for s, w in self.words]
        self.sigma = [g[:16, 16:].copy() for g in self.gamma]
        self.sigmabar = [g[16:, :16].copy() for g in self.gamma]
        self.T = np.eye(16, dtype=np.int64)
        self.pairing = kron_word("XIIII")
        self.chirality = kron_word("ZIIII")
        self.verify()

    def gamma2(self, mu: int, nu: int) -> np.ndarray:
        g = self.gamma
        return (g[mu] @ g[nu] - g[nu] @ g[mu]) // 2

    def clifford_residuals(self) -> list[tuple]:
        bad = []
        for mu, nu in itertools.product(range(DIM), repeat=2):
            target = 2 * ETA[mu, nu] * np.eye(16, dtype=np.int64)
            if not (self.sigma[mu] @ self.sigmabar[nu] + self.sigma[nu] @ self.sigmabar[mu] == target).all():
                bad.append(("sigma", mu, nu))
            if not (self.sigmabar[mu] @ self.sigma[nu] + self.sigmabar[nu] @ self.sigma[mu] == target).all():
                bad.append(("sigmabar", mu, nu))
        return bad

    def pairing_residuals(self) -> list[tuple]:
        """T(gamma^mu a, b) = T(a, gamma^mu b) and T(gamma^{mu nu} a, b) = -T(a, gamma^{mu nu} b)."""
        C = self.pairing
        bad = []
        for mu in range(DIM):
            g = self.gamma[mu]
            if not (g.T @ C == C @ g).all():
                bad.append(("T", mu))
        for mu, nu in itertools.combinations(range(DIM), 2):
            g = self.gamma2(mu, nu)
            if not (g.T @ C == -(C @ g)).all():
                bad.append(("T2", mu, nu))
        return bad

    def verify(self) -> None:
        bad = self.clifford_residuals() + self.pairing_residuals()
        for g in self.gamma:
            if not (self.chirality @ g == -(g @ self.chirality)).all():
                bad.append(("chirality",))
        if bad:
            raise RuntimeError(f"Clifford module construction failed: {bad[:3]}")

    def to_json(self) -> dict:
        return {
            "metric": [int(ETA[i, i]) for i in range(DIM)],
            "sigma": [m.tolist() for m in self.sigma],
            "sigmabar": [m.tolist() for m in self.sigmabar],
            "T": self.T.tolist(),
            "words": [f"{'+' if s > 0 else '-'}{w}" for s, w in self.words],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


@lru_cache(maxsize=1)
def build_rep() -> SpinorRep:
    return SpinorRep()


def commutation_with_lightcone(rep: SpinorRep | None = None) -> dict[str, bool]:
    """gamma^{ab} (1 <= a < b <= 8) commute and gamma^{09} anticommutes with cl(m_+-).

    Either way they preserve ker cl(m_+-).
    """
    rep = rep or build_rep()
    out = {}
    for sign, name in ((1, "m+"), (-1, "m-")):
        clm = rep.gamma[0] + sign * rep.gamma[9]
        out[f"gamma^ab commute with cl({name})"] = all(
            (rep.gamma2(a, b) @ clm == clm @ rep.gamma2(a, b)).all()
            for a, b in itertools.combinations(TRANSVERSE, 2))
        g09 = rep.gamma2(0, 9)
        out[f"gamma^09 anticommutes with cl({name})"] = bool((g09 @ clm == -(clm @ g09)).all())
    return out


# ---------------------------------------------------------------------------
# symbolic Clifford elements


class ClMatrix:
    """sum of coefficient * signed word, coefficients in a universe."""

    def __init__(self, universe: Universe, terms: dict | None = None):
        self.universe = universe
        self.terms = {w: c for w, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def word(cls, universe, sign: int, word: str, coef=1) -> "ClMatrix":
        return cls(universe, {word: universe.coerce(coef) * sign})

    @classmethod
    def identity(cls, universe) -> "ClMatrix":
        return cls.word(universe, 1, "IIIII")

    @classmethod
    def gamma(cls, universe, mu: int, rep: SpinorRep | None = None) -> "ClMatrix":
        rep = rep or build_rep()
        s, w = rep.words[mu]
        return cls.word(universe, s, w)

    @classmethod
    def gamma2(cls, universe, mu: int, nu: int) -> "ClMatrix":
        g = cls.gamma
        return (g(universe, mu) @ g(universe, nu) - g(universe, nu) @ g(universe, mu)).scale(mpq(1, 2))

    def __add__(self, other: "ClMatrix") -> "ClMatrix":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return ClMatrix(self.universe, out)

    def __neg__(self):
        return ClMatrix(self.universe, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ClMatrix":
        c = self.universe.coerce(c)
        return ClMatrix(self.universe, {w: c * v for w, v in self.terms.items()})

    def __matmul__(self, other: "ClMatrix") -> "ClMatrix":
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                s, w = word_mul(w1, w2)
                v = c1 * c2 * s
                out[w] = out[w] + v if w in out else v
        return ClMatrix(self.universe, out)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, ClMatrix) and (self - other).is_zero()

    def map_coefficients(self, fn) -> "ClMatrix":
        return ClMatrix(self.universe, {w: fn(c) for w, c in self.terms.items()})

    def apply(self, spinor: Sequence) -> list[SuperPoly]:
        U = self.universe
        out = [U.zero() for _ in range(32)]
        for w, c in self.terms.items():
            cols, signs = _word_action(w)
            for i in range(32):
                v = spinor[cols[i]]
                if not (isinstance(v, SuperPoly) and v.is_zero()) and v != 0:
                    out[i] = out[i] + c * v * signs[i]
        return out

    def grid(self) -> list[list[SuperPoly]]:
        U = self.universe
        out = [[U.zero() for _ in range(32)] for _ in range(32)]
        for w, c in self.terms.items():
            cols, signs = _word_action(w)
            for i in range(32):
                out[i][cols[i]] = out[i][cols[i]] + c * signs[i]
        return out

    def block(self, chirality: str) -> list[list[SuperPoly]]:
        """The 16x16 block acting S_chi -> S_chi (for even elements)."""
        g = self.grid()
        sl = slice(0, 16) if chirality == "+" else slice(16, 32)
        return [row[sl] for row in g[sl]]

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c.to_text()})*{w}" for w, c in sorted(self.terms.items()))


# ---------------------------------------------------------------------------
# vectors and spinors


class MinkowskiVector:
    """Covector components v_mu, mu = 0..9, paired by eta = diag(+1, -1, ..., -1)."""

    def __init__(self, universe: Universe, comps: Sequence):
        if len(comps) != DIM:
            raise ValueError(f"need {DIM} components")
        self.universe = universe
        self.comps = [universe.coerce(c) for c in comps]

    @classmethod
    def basis(cls, universe, mu: int, scale=1) -> "MinkowskiVector":
        comps = [0] * DIM
        comps[mu] = scale
        return cls(universe, comps)

    def __add__(self, other):
        return MinkowskiVector(self.universe, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        return MinkowskiVector(self.universe, [a - b for a, b in zip(self.comps, other.comps)])

    def scale(self, c):
        c = self.universe.coerce(c)
        return MinkowskiVector(self.universe, [c * a for a in self.comps])

    def __eq__(self, other):
        return all((a - b).is_zero() for a, b in zip(self.comps, other.comps))

    def substitute(self, assignment) -> "MinkowskiVector":
        return MinkowskiVector(self.universe, [substitute(c, assignment) for c in self.comps])


def inner(u: MinkowskiVector, v: MinkowskiVector) -> SuperPoly:
    out = u.comps[0] * v.comps[0]
    for i in range(1, DIM):
        out = out - u.comps[i] * v.comps[i]
    return out


def cl(v: MinkowskiVector, psi: Sequence | None = None):
    """Clifford multiplication v_mu gamma^mu, applied to ``psi`` when given.

    On a spinor it flips chirality; cl(v) cl(v) = (v, v).
    """
    U = v.universe
    out = ClMatrix(U)
    for mu, c in enumerate(v.comps):
        if not c.is_zero():
            out = out + ClMatrix.gamma(U, mu).scale(c)
    return out if psi is None else out.apply(psi)


def m_plus(U) -> MinkowskiVector:
    return MinkowskiVector.basis(U, 0, mpq(1, 2)) + MinkowskiVector.basis(U, 9, mpq(1, 2))


def m_minus(U) -> MinkowskiVector:
    return MinkowskiVector.basis(U, 0, mpq(1, 2)) - MinkowskiVector.basis(U, 9, mpq(1, 2))


def spinor(universe: Universe, prefix: str, chirality: str, parity: int, ghost: int = 0,
           kind: Kind = Kind.FIELD) -> list[SuperPoly]:
    """A spinor of the given chirality with 16 fresh component generators."""
    if chirality not in "+-":
        raise ValueError("chirality must be '+' or '-'")
    gens = [universe.gen(f"{prefix}{i + 1}", parity, ghost, kind) for i in range(16)]
    zeros = [universe.zero()] * 16
    comps = [g.poly for g in gens]
    return comps + zeros if chirality == "+" else zeros + comps


def chirality_of(s: Sequence[SuperPoly]) -> str | None:
    top = any(not c.is_zero() for c in s[:16])
    bottom = any(not c.is_zero() for c in s[16:])
    if top and bottom:
        return None
    return "+" if top or not bottom else "-"


def pair(a: Sequence, b: Sequence) -> SuperPoly:
    """T(a, b): S_+ part of a with S_- part of b, plus S_- part of a with S_+ part of b."""
    U = next(c.universe for c in list(a) + list(b) if isinstance(c, SuperPoly))
    out = U.zero()
    for i in range(16):
        for x, y in ((a[i], b[16 + i]), (a[16 + i], b[i])):
            if not x.is_zero() and not y.is_zero():
                out = out + x * y
    return out


def pair_vec(mu: int, a, b) -> SuperPoly:
    """T^mu(a, b) = T(gamma^mu a, b)."""
    U = a[0].universe
    return pair(ClMatrix.gamma(U, mu).apply(a), b)


def pair_bivec(mu: int, nu: int, a, b) -> SuperPoly:
    """T^{mu nu}(a, b) = T(gamma^{mu nu} a, b)."""
    U = a[0].universe
    return pair(ClMatrix.gamma2(U, mu, nu).apply(a), b)


# ---------------------------------------------------------------------------
# light-cone projector and lemma


def _exact_rank(rows) -> int:
    M = [[Fraction(int(c.numerator), int(c.denominator)) if hasattr(c, "numerator") else Fraction(c)
          for c in row] for row in rows]
    rank, cols = 0, len(M[0]) if M else 0
    for j in range(cols):
        piv = next((i for i in range(rank, len(M)) if M[i][j] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(len(M)):
            if i != rank and M[i][j] != 0:
                f = M[i][j] / M[rank][j]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def lightcone_projector(m: MinkowskiVector, n: MinkowskiVector) -> ClMatrix:
    """P = cl(m) cl(n), projecting S onto ker cl(m); needs (m,m) = (n,n) = 0, (m,n) = 1/2."""
    for name, val, want in (("(m,m)", inner(m, m), 0), ("(n,n)", inner(n, n), 0),
                            ("(m,n)", inner(m, n), mpq(1, 2))):
        if not (val - want).is_zero():
            raise ValueError(f"{name} = {val.to_text()}, expected {want}")
    return cl(m) @ cl(n)


def projector_rank(P: ClMatrix, chirality: str) -> int:
    block = P.block(chirality)
    for row in block:
        for c in row:
            if not c.is_scalar():
                raise ValueError("rank needs a numeric projector")
    return _exact_rank([[c.constant_term() for c in row] for row in block])


@lru_cache(maxsize=None)
def _lemma_universe():
    U = Universe("lightcone-lemma")
    p = [U.gen(f"p{mu}", 0, 0, Kind.FIELD) for mu in range(DIM)]
    return U, p


def lemma_lightcone_residual(chirality: str = "+", p_values: Sequence | None = None) -> SuperPoly:
    """p_mu T^mu(a, b) - 2 (p, m) n_nu T^nu(a, b) for a, b in ker cl(m) of one chirality.

    m = m_+, n = m_-; a = P chi, b = P chi' with free odd chi, chi'.  With
    ``p_values`` the momentum is numeric instead of symbolic.
    """
    U, p = _lemma_universe()
    tag = f"{chirality}{'n' if p_values is not None else 's'}"
    names = (f"chi{tag}_", f"chj{tag}_")
    if names[0] + "1" in U:
        chi = _existing_spinor(U, names[0], chirality)
        chj = _existing_spinor(U, names[1], chirality)
    else:
        chi = spinor(U, names[0], chirality, 1)
        chj = spinor(U, names[1], chirality, 1)
    m, n = m_plus(U), m_minus(U)
    P = lightcone_projector(m, n)
    a, b = P.apply(chi), P.apply(chj)
    pv = MinkowskiVector(U, list(p_values) if p_values is not None else p)
    lhs = U.zero()
    rhs = U.zero()
    for mu in range(DIM):
        t = pair_vec(mu, a, b)
        lhs = lhs + pv.comps[mu] * t
        rhs = rhs + n.comps[mu] * t
    return lhs - inner(pv, m) * rhs * 2


def _existing_spinor(U, prefix, chirality):
    comps = [U[f"{prefix}{i + 1}"].poly for i in range(16)]
    zeros = [U.zero()] * 16
    return comps + zeros if chirality == "+" else zeros + comps


# ---------------------------------------------------------------------------
# the rotation g(tau) in the (transverse, 9) planes


class LightconeRing:
    """Q[c_i, s_i, n_1..n_8, P^(+-1), p_0, p_9] with c_i^2 + s_i^2 = 1 and sum n_a^2 = 1.

    Transverse momenta are p_a = P n_a with P = p_* = |p_transverse| a unit;
    (c, s) = (cos(pi tau/2), sin(pi tau/2)).
    """

    def __init__(self, circles: int = 1, name: str = "lightcone"):
        U = self.universe = Universe(name)
        self.spinor_cache = {}
        self.circles = []
        for i in range(circles):
            sfx = "" if i == 0 else str(i + 1)
            c = U.gen(f"c{sfx}", 0, 0, Kind.PARAM)
            s = U.gen(f"s{sfx}", 0, 0, Kind.PARAM)
            U.relation(s, 2, 1 - c * c)
            self.circles.append((c.poly, s.poly))
        self.P = U.unit("pstar", kind=Kind.PARAM).poly
        self.n = [U.gen(f"n{a}", 0, 0, Kind.PARAM).poly for a in TRANSVERSE]
        rest = U.one()
        for na in self.n[:-1]:
            rest = rest - na * na
        U.relation(U["n8"], 2, rest)
        self.p0 = U.gen("p0", 0, 0, Kind.PARAM).poly
        self.p9 = U.gen("p9", 0, 0, Kind.PARAM).poly

    @property
    def c(self):
        return self.circles[0][0]

    @property
    def s(self):
        return self.circles[0][1]

    def p(self, mu: int) -> SuperPoly:
        if mu == 0:
            return self.p0
        if mu == 9:
            return self.p9
        return self.P * self.n[mu - 1]

    def momentum(self) -> MinkowskiVector:
        return MinkowskiVector(self.universe, [self.p(mu) for mu in range(DIM)])

    def d_dp(self, f: SuperPoly, a: int) -> SuperPoly:
        """d f / d p_a for transverse a, through n_c = p_c / P and P = |p|.

        Valid on the reduced form because the tangential projector
        (delta_ca - n_c n_a) kills the gradient of sum n^2 - 1.
        """
        U = self.universe
        out = U.zero()
        na = self.n[a - 1]
        Pinv = self.P ** -1
        for c, nc in enumerate(self.n, start=1):
            df = raw_partial(U[f"n{c}"], f, representative=True)
            if df.is_zero():
                continue
            coef = (1 if c == a else 0) - nc * na
            out = out + df * coef * Pinv
        dP = partial(U["pstar"], f)
        if not dP.is_zero():
            out = out + dP * na
        return out


def rotation_generator(ring: LightconeRing) -> ClMatrix:
    """n_a gamma^{a9}; its square is -1."""
    U = ring.universe
    out = ClMatrix(U)
    for a in TRANSVERSE:
        out = out + ClMatrix.gamma2(U, a, 9).scale(ring.n[a - 1])
    return out


def g_tau(ring: LightconeRing, c=None, s=None, orientation: int = 1) -> ClMatrix:
    """g = c + orientation * s * n_a gamma^{a9}.

    orientation = -1 is the displayed c - (s / p_*) p_a gamma^{a9};
    orientation = +1 (default) is the one carrying m_+ to m(tau) below.
    """
    c = ring.c if c is None else ring.universe.coerce(c)
    s = ring.s if s is None else ring.universe.coerce(s)
    U = ring.universe
    return ClMatrix.identity(U).scale(c) + rotation_generator(ring).scale(s * orientation)


def m_tau(ring: LightconeRing, c=None, s=None, orientation: int = 1) -> MinkowskiVector:
    """(E^0 + cos(pi tau) E^9 - orientation sin(pi tau) n_a E^a) / 2 with double angles."""
    U = ring.universe
    c = ring.c if c is None else U.coerce(c)
    s = ring.s if s is None else U.coerce(s)
    half = mpq(1, 2)
    comps = [U.coerce(half)] + [-(c * s) * na * orientation for na in ring.n] + [(c * c - s * s) * half]
    return MinkowskiVector(U, comps)


def n_tau(ring: LightconeRing, c=None, s=None, orientation: int = 1) -> MinkowskiVector:
    U = ring.universe
    c = ring.c if c is None else U.coerce(c)
    s = ring.s if s is None else U.coerce(s)
    half = mpq(1, 2)
    comps = [U.coerce(half)] + [(c * s) * na * orientation for na in ring.n] + [-(c * c - s * s) * half]
    return MinkowskiVector(U, comps)


def rotation_square_residual(ring: LightconeRing) -> ClMatrix:
    """(p_a gamma^{a9})^2 + p_*^2."""
    U = ring.universe
    R = rotation_generator(ring).scale(ring.P)
    return R @ R + ClMatrix.identity(U).scale(ring.P * ring.P)


def group_law_residual(ring: LightconeRing, orientation: int = 1) -> ClMatrix:
    """g(c1, s1) g(c2, s2) - g(c1 c2 - s1 s2, s1 c2 + c1 s2)."""
    (c1, s1), (c2, s2) = ring.circles[:2]
    lhs = g_tau(ring, c1, s1, orientation) @ g_tau(ring, c2, s2, orientation)
    return lhs - g_tau(ring, c1 * c2 - s1 * s2, s1 * c2 + c1 * s2, orientation)


def conjugation_residual(ring: LightconeRing, orientation: int = 1) -> dict[str, ClMatrix]:
    """g cl(m_+) g^-1 - cl(m(tau)) and g cl(m_-) g^-1 - cl(n(tau)), with g^-1 = g(c, -s)."""
    U = ring.universe
    g = g_tau(ring, orientation=orientation)
    ginv = g_tau(ring, ring.c, -ring.s, orientation)
    return {
        "m": g @ cl(m_plus(U)) @ ginv - cl(m_tau(ring, orientation=orientation)),
        "n": g @ cl(m_minus(U)) @ ginv - cl(n_tau(ring, orientation=orientation)),
        "inverse": g @ ginv - ClMatrix.identity(U),
    }


def tower_spinors(ring: LightconeRing, level: int, tag: str = ""):
    """theta_n and theta+_n constrained to ker cl(m_+), with the parities of the tower.

    theta_n: chirality + for even n (odd components), - for odd n (even
    components).  theta+_n has the opposite chirality and parity.
    """
    key = (level, tag)
    if key in ring.spinor_cache:
        return ring.spinor_cache[key]
    U = ring.universe
    chi_t = "+" if level % 2 == 0 else "-"
    chi_a = "-" if chi_t == "+" else "+"
    par_t = (level + 1) % 2
    th = spinor(U, f"th{level}{tag}_", chi_t, par_t, level)
    ta = spinor(U, f"ta{level}{tag}_", chi_a, par_t + 1, -1 - level)
    P = lightcone_projector(m_plus(U), m_minus(U))
    ring.spinor_cache[key] = P.apply(th), P.apply(ta)
    return ring.spinor_cache[key]


def p_plus_correction(ring: LightconeRing, a: int, orientation: int = 1, spinors=None) -> SuperPoly:
    """-orientation (sin(pi tau) / 2 p_*)(n_a n_c T^{c9}(theta+, theta) - T^{a9}(theta+, theta)).

    With orientation = -1 this is the displayed closed form of p^{+a}(tau) - p^{+a}.
    """
    U = ring.universe
    th, ta = spinors if spinors is not None else tower_spinors(ring, 0)
    nt = U.zero()
    for c in TRANSVERSE:
        nt = nt + ring.n[c - 1] * pair_bivec(c, 9, ta, th)
    sin_pi = ring.c * ring.s * 2
    bracket = ring.n[a - 1] * nt - pair_bivec(a, 9, ta, th)
    return bracket * sin_pi * ring.P ** -1 * mpq(1, 2) * (-orientation)


def p_plus_flow_residual(ring: LightconeRing, level: int = 0, orientation: int = 1,
                         spinors=None) -> list[SuperPoly]:
    """Per transverse a: T(g^-1 dg/dp_a theta+, theta) - p_plus_correction.

    theta and theta+ lie in ker cl(m_+); the common p^{+a} cancels.
    """
    spinors = spinors if spinors is not None else tower_spinors(ring, level)
    th, ta = spinors
    g = g_tau(ring, orientation=orientation)
    ginv = g_tau(ring, ring.c, -ring.s, orientation)
    out = []
    for a in TRANSVERSE:
        dg = g.map_coefficients(lambda f, a=a: ring.d_dp(f, a))
        lhs = pair((ginv @ dg).apply(ta), th)
        out.append(lhs - p_plus_correction(ring, a, orientation, spinors))
    return out


def lagrangian_tau_at_one(ring: LightconeRing, orientation: int = 1) -> dict[str, bool]:
    """At (c, s) = (0, 1): m(tau) = m_-, n(tau) = m_+ and the p^+ correction vanishes."""
    U = ring.universe
    m1 = m_tau(ring, 0, 1, orientation)
    n1 = n_tau(ring, 0, 1, orientation)
    m0 = m_tau(ring, 1, 0, orientation)
    n0 = n_tau(ring, 1, 0, orientation)
    return {
        "m(1) = m-": m1 == m_minus(U),
        "n(1) = m+": n1 == m_plus(U),
        "m(0) = m+": m0 == m_plus(U),
        "n(0) = m-": n0 == m_minus(U),
        "p+ correction vanishes at tau = 1": substitute(
            ring.c * ring.s * 2, {U["c"]: 0, U["s"]: 1}).is_zero(),
    }
