"""Exact Z x Z/2-graded supercommutative polynomials.

Every symbol (coordinates, odd constants, hbar, simplex coordinates and
their differentials, cochain generators, circle parameters) is a
:class:`Generator` of a :class:`Universe`.  The universe fixes a global
total order on its generators; monomials are stored sorted by that order
and the Koszul sign is applied while sorting, so every element has a
unique canonical form.

Scalars are exact: coefficients are ``int`` or ``gmpy2.mpq`` rationals
(``fractions.Fraction`` inputs are converted).
Laurent generators (hbar, declared units) may carry negative exponents;
algebraic constants are reduced by monic rewrite rules ``g**d -> r``.
"""

from __future__ import annotations

import enum
import itertools
import json
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq
from typing import Iterable, Mapping, Sequence


class Kind(enum.Enum):
    EVEN_COORD = "even-coordinate"
    ODD_COORD = "odd-coordinate"
    ODD_CONST = "odd-constant"
    SIMPLEX = "simplex-coordinate"
    SIMPLEX_FORM = "simplex-one-form"
    COCHAIN = "cochain-generator"
    FIELD = "field"
    FIELD_DERIV = "field-derivative"
    PARAM = "parameter"


_NO_DERIVATION = {Kind.ODD_CONST, Kind.SIMPLEX_FORM}
_COORDINATES = {Kind.EVEN_COORD, Kind.ODD_COORD}


@dataclass(frozen=True, eq=False)
class Generator:
    name: str
    parity: int
    ghost: int
    kind: Kind
    index: int
    universe: "Universe"

    def __repr__(self):
        return self.name

    def __hash__(self):
        return hash((id(self.universe), self.index))

    def __eq__(self, other):
        return (isinstance(other, Generator) and other.universe is self.universe
                and other.index == self.index)

    @property
    def poly(self) -> "SuperPoly":
        return SuperPoly(self.universe, {((self.index, 1),): 1})

    # arithmetic promotes to SuperPoly
    def __add__(self, o): return self.poly + o
    def __radd__(self, o): return o + self.poly
    def __sub__(self, o): return self.poly - o
    def __rsub__(self, o): return -self.poly + o
    def __mul__(self, o): return self.poly * o
    def __rmul__(self, o): return self.poly.__rmul__(o)
    def __neg__(self): return -self.poly
    def __pow__(self, e): return self.poly ** e
    def __truediv__(self, o): return self.poly / o


def _frac_text(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


_MPQ = type(mpq(1, 2))
RATIONAL = (int, Fraction, _MPQ)


def _clean(c):
    if type(c) is Fraction:
        return mpq(c.numerator, c.denominator)
    return c


class Universe:
    """A set of generators with a fixed total order and reduction rules."""

    def __init__(self, name: str = "U"):
        self.name = name
        self.gens: list[Generator] = []
        self._by_name: dict[str, Generator] = {}
        self.laurent: set[int] = set()
        self.rules: dict[int, tuple[int, "SuperPoly"]] = {}
        self.hbar: Generator | None = None
        self._mul_cache: dict = {}
        self._red_cache: dict = {}

    # -- construction -------------------------------------------------
    def gen(self, name: str, parity: int = 0, ghost: int = 0,
            kind: Kind = Kind.PARAM) -> Generator:
        if name in self._by_name:
            raise ValueError(f"generator {name!r} already declared")
        g = Generator(name, parity % 2, ghost, kind, len(self.gens), self)
        self.gens.append(g)
        self._by_name[name] = g
        self._mul_cache.clear()
        self._red_cache.clear()
        return g

    def even(self, name, ghost=0, kind=Kind.EVEN_COORD):
        return self.gen(name, 0, ghost, kind)

    def odd(self, name, ghost=1, kind=Kind.ODD_COORD):
        return self.gen(name, 1, ghost, kind)

    def unit(self, name, ghost=0, kind=Kind.PARAM) -> Generator:
        """An even symbol with a formal inverse (Laurent exponents allowed)."""
        g = self.gen(name, 0, ghost, kind)
        self.laurent.add(g.index)
        return g

    def declare_hbar(self, name="hbar") -> Generator:
        self.hbar = self.unit(name)
        return self.hbar

    def nilpotent(self, name, order=2, kind=Kind.PARAM) -> Generator:
        g = self.gen(name, 0, 0, kind)
        self.relation(g, order, 0)
        return g

    def relation(self, g: Generator, degree: int, replacement) -> None:
        """Declare the monic rewrite rule ``g**degree -> replacement``."""
        if g.index in self.laurent:
            raise ValueError(f"{g.name} is a declared unit; relations on units "
                             "would break uniqueness of canonical forms")
        if g.parity:
            raise ValueError(f"relation on odd generator {g.name}")
        rep = self.coerce(replacement)
        for m in rep.terms:
            for i, e in m:
                if i == g.index and e >= degree:
                    raise ValueError(f"relation for {g.name} is not reducing")
        self.rules[g.index] = (degree, rep)
        self._mul_cache.clear()
        self._red_cache.clear()

    def __getitem__(self, name: str) -> Generator:
        return self._by_name[name]

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    # -- element helpers ----------------------------------------------
    def coerce(self, value) -> "SuperPoly":
        if isinstance(value, SuperPoly):
            if value.universe is not self:
                bad = next(iter(value.generators()), None)
                raise ValueError(f"generator {bad} belongs to universe "
                                 f"{value.universe.name!r}, not {self.name!r}")
            return value
        if isinstance(value, Generator):
            if value.universe is not self:
                raise ValueError(f"generator {value.name} belongs to universe "
                                 f"{value.universe.name!r}, not {self.name!r}")
            return value.poly
        if isinstance(value, RATIONAL):
            return SuperPoly(self, {(): _clean(value)} if value else {})
        raise TypeError(f"cannot coerce {type(value).__name__} into {self.name}")

    def zero(self) -> "SuperPoly":
        return SuperPoly(self, {})

    def one(self) -> "SuperPoly":
        return SuperPoly(self, {(): 1})

    def order_table(self) -> list[dict]:
        return [{"name": g.name, "parity": g.parity, "ghost": g.ghost,
                 "kind": g.kind.value, "unit": g.index in self.laurent}
                for g in self.gens]

    # -- monomial kernel ----------------------------------------------
    def mono_mul(self, m1: tuple, m2: tuple):
        """Product of two canonical monomials: ``(sign, monomial)`` or ``(0, None)``."""
        if not m1:
            return 1, m2
        if not m2:
            return 1, m1
        row = self._mul_row(m1)
        hit = row.get(m2)
        if hit is not None:
            return hit
        res = row[m2] = self._mono_mul_raw(m1, m2)
        return res

    def _mul_row(self, m1: tuple) -> dict:
        row = self._mul_cache.get(m1)
        if row is None:
            if len(self._mul_cache) > 20000:
                self._mul_cache.clear()
            row = self._mul_cache[m1] = {}
        return row

    def _mono_mul_raw(self, m1: tuple, m2: tuple):
        gens = self.gens
        odd1 = [i for i, _ in m1 if gens[i].parity]
        sign = 1
        if odd1:
            for i, _ in m2:
                if gens[i].parity:
                    # odd factors of m1 standing to the right of i
                    k = len(odd1) - bisect_right(odd1, i)
                    if k & 1:
                        sign = -sign
        out = []
        a = b = 0
        n1, n2 = len(m1), len(m2)
        res = None
        while a < n1 and b < n2:
            i, e = m1[a]
            j, f = m2[b]
            if i < j:
                out.append(m1[a]); a += 1
            elif j < i:
                out.append(m2[b]); b += 1
            else:
                if gens[i].parity:
                    res = (0, None)
                    break
                s = e + f
                if s:
                    out.append((i, s))
                a += 1; b += 1
        if res is None:
            out.extend(m1[a:])
            out.extend(m2[b:])
            res = (sign, tuple(out))
        return res

    def reduce_mono(self, m: tuple) -> dict | None:
        """Rewrite a monomial by the declared relations; None if already reduced."""
        if not self.rules:
            return None
        hit = self._red_cache.get(m, False)
        if hit is not False:
            return hit
        res = None
        for pos, (i, e) in enumerate(m):
            rule = self.rules.get(i)
            if rule and e >= rule[0]:
                d, rep = rule
                rest = m[:pos] + (((i, e - d),) if e - d else ()) + m[pos + 1:]
                # g is even, so it can be pulled out without signs
                acc: dict = {}
                for rm, rc in rep.terms.items():
                    s, mm = self.mono_mul(rest, rm)
                    if not s:
                        continue
                    sub = self.reduce_mono(mm)
                    if sub is None:
                        _acc(acc, mm, s * rc)
                    else:
                        for sm, sc in sub.items():
                            _acc(acc, sm, s * rc * sc)
                res = acc
                break
        self._red_cache[m] = res
        return res


def _acc(d: dict, m, c):
    v = d.get(m, 0) + c
    if v:
        d[m] = v
    else:
        d.pop(m, None)


class SuperPoly:
    """Canonical-form element of the supercommutative algebra of a universe."""

    __slots__ = ("universe", "terms")

    def __init__(self, universe: Universe, terms: Mapping | None = None):
        self.universe = universe
        self.terms = {m: _clean(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, universe, terms):
        obj = cls.__new__(cls)
        obj.universe = universe
        obj.terms = terms
        return obj

    def _coerce(self, other) -> "SuperPoly":
        return self.universe.coerce(other)

    # -- ring operations ------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            _acc(out, m, c)
        return SuperPoly._raw(self.universe, out)

    __radd__ = __add__

    def __neg__(self):
        return SuperPoly._raw(self.universe, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RATIONAL):
            if not other:
                return SuperPoly._raw(self.universe, {})
            return SuperPoly._raw(self.universe,
                                  {m: _clean(c * other) for m, c in self.terms.items()})
        other = self._coerce(other)
        U = self.universe
        out: dict = {}
        get = out.get
        raw = U._mono_mul_raw
        red = U.reduce_mono if U.rules else None
        for m1, c1 in self.terms.items():
            row = U._mul_row(m1)
            for m2, c2 in other.terms.items():
                hit = row.get(m2)
                if hit is None:
                    hit = row[m2] = raw(m1, m2) if m1 and m2 else (1, m1 or m2)
                s, m = hit
                if not s:
                    continue
                c = c1 * c2 if s > 0 else -c1 * c2
                if red is not None:
                    sub = red(m)
                    if sub is not None:
                        for sm, sc in sub.items():
                            out[sm] = get(sm, 0) + c * sc
                        continue
                out[m] = get(m, 0) + c
        return SuperPoly._raw(U, {m: _clean(c) for m, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, RATIONAL):
            return self * other
        return self._coerce(other) * self

    def __truediv__(self, other):
        if isinstance(other, RATIONAL):
            return self * (mpq(1) / other)
        return self * self._coerce(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.universe.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return self.to_text()

    # -- structure -------------------------------------------------------
    def generators(self) -> set[Generator]:
        gens = self.universe.gens
        return {gens[i] for m in self.terms for i, _ in m}

    def mono_parity(self, m) -> int:
        gens = self.universe.gens
        return sum(gens[i].parity for i, _ in m) & 1

    def mono_ghost(self, m) -> int:
        gens = self.universe.gens
        return sum(gens[i].ghost * e for i, e in m)

    @property
    def parity(self) -> int:
        """Parity of a homogeneous element (0 for zero); raises if mixed."""
        ps = {self.mono_parity(m) for m in self.terms}
        if len(ps) > 1:
            raise ValueError(f"inhomogeneous parity: {self.to_text()}")
        return ps.pop() if ps else 0

    def is_homogeneous(self) -> bool:
        return len({self.mono_parity(m) for m in self.terms}) <= 1

    def ghosts(self) -> set[int]:
        return {self.mono_ghost(m) for m in self.terms}

    def parity_parts(self) -> tuple["SuperPoly", "SuperPoly"]:
        parts = ({}, {})
        for m, c in self.terms.items():
            parts[self.mono_parity(m)][m] = c
        return SuperPoly._raw(self.universe, parts[0]), SuperPoly._raw(self.universe, parts[1])

    def constant_term(self):
        return self.terms.get((), 0)

    def is_scalar(self) -> bool:
        return all(self.universe.gens[i].kind not in _COORDINATES
                   for m in self.terms for i, _ in m)

    def coefficient(self, gen: Generator, power: int = 1) -> "SuperPoly":
        """Coefficient of ``gen**power`` (for even gen) with gen removed."""
        if gen.parity:
            raise ValueError("use partial() for odd generators")
        out = {}
        for m, c in self.terms.items():
            e = dict(m).get(gen.index, 0)
            if e == power:
                out[tuple(p for p in m if p[0] != gen.index)] = c
        return SuperPoly._raw(self.universe, out)

    def degree_in(self, gens: Iterable[Generator]) -> int:
        idx = {g.index for g in gens}
        return max((sum(e for i, e in m if i in idx) for m in self.terms), default=-1)

    def filter(self, pred) -> "SuperPoly":
        return SuperPoly._raw(self.universe, {m: c for m, c in self.terms.items() if pred(m)})

    def inverse(self) -> "SuperPoly":
        """Inverse of a unit: monomial in declared units, or body + nilpotent."""
        U = self.universe
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            if all(i in U.laurent for i, _ in m):
                return SuperPoly._raw(U, {tuple((i, -e) for i, e in m): mpq(1) / c})
        body = self.constant_term()
        if not body:
            raise ZeroDivisionError(f"not a unit: {self.to_text()}")
        nil = (self - body) * (mpq(-1) / body)
        result = U.one()
        power = U.one()
        for _ in range(4 * len(U.gens) + 8):
            power = power * nil
            if power.is_zero():
                return result * (mpq(1) / body)
            result = result + power
        raise ZeroDivisionError(f"cannot invert {self.to_text()}: non-nilpotent remainder")

    # -- serialization ---------------------------------------------------
    def _mono_text(self, m) -> str:
        gens = self.universe.gens
        parts = []
        for i, e in m:
            parts.append(gens[i].name if e == 1 else f"{gens[i].name}^{e}")
        return "*".join(parts)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: mc[0])

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            mono = self._mono_text(m)
            c = Fraction(c)
            sign = "-" if c < 0 else "+"
            mag = _frac_text(abs(c))
            if not mono:
                body = mag
            elif mag == "1":
                body = mono
            else:
                body = f"{mag}*{mono}"
            out.append((sign, body))
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def to_json(self) -> dict:
        gens = self.universe.gens
        return {"terms": [[[[gens[i].name, e] for i, e in m], _frac_text(c)]
                          for m, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, universe: Universe, data: Mapping) -> "SuperPoly":
        out = universe.zero()
        for mono, coeff in data["terms"]:
            term = universe.coerce(mpq(coeff))
            for name, e in mono:
                term = term * universe[name] ** e
            out = out + term
        return out


def const(universe: Universe, value) -> SuperPoly:
    return universe.coerce(Fraction(value) if not isinstance(value, int) else value)


# ---------------------------------------------------------------------------
# operations


def mul(f, g) -> SuperPoly:
    """Canonical product; rejects elements of different universes."""
    if isinstance(f, SuperPoly) and isinstance(g, SuperPoly) and f.universe is not g.universe:
        bad = next(iter(g.generators() - f.generators()), None) or next(iter(g.generators()), None)
        raise ValueError(f"mismatched universes: generator {bad} is not in {f.universe.name!r}")
    if isinstance(f, Generator):
        f = f.poly
    return f * g


def raw_partial(v: Generator, f: SuperPoly, representative: bool = False) -> SuperPoly:
    """Left derivative without the kind check (used by integration).

    Differentiating by a generator with a rewrite rule is refused unless
    ``representative`` is set: the result is then the derivative of the
    canonical representative, which is only meaningful when the caller
    projects away the gradient of the relation.
    """
    idx = v.index
    gens = f.universe.gens
    out = {}
    if v.parity:
        for m, c in f.terms.items():
            sign = 1
            for pos, (i, e) in enumerate(m):
                if i == idx:
                    out[m[:pos] + m[pos + 1:]] = c * sign
                    break
                if i > idx:
                    break
                if gens[i].parity:
                    sign = -sign
    else:
        for m, c in f.terms.items():
            for pos, (i, e) in enumerate(m):
                if i == idx:
                    rest = m[:pos] + (((i, e - 1),) if e != 1 else ()) + m[pos + 1:]
                    _acc(out, rest, c * e)
                    break
                if i > idx:
                    break
    res = SuperPoly._raw(f.universe, out)
    if not representative and v.index in f.universe.rules:
        raise ValueError(f"cannot differentiate by {v.name}: it has a rewrite rule")
    return res


def partial(v: Generator, f) -> SuperPoly:
    """Left partial derivative with Koszul signs."""
    if v.kind in _NO_DERIVATION:
        raise ValueError(f"cannot differentiate by {v.name} of kind {v.kind.value}")
    f = v.universe.coerce(f)
    return raw_partial(v, f)


def substitute(f: SuperPoly, assignment: Mapping[Generator, object]) -> SuperPoly:
    """Simultaneous graded substitution of generators by polynomials."""
    U = f.universe
    sub: dict[int, SuperPoly] = {}
    for g, val in assignment.items():
        val = U.coerce(val)
        if not val.is_zero():
            if not val.is_homogeneous() or val.parity != g.parity:
                vp = "mixed" if not val.is_homogeneous() else val.parity
                raise ValueError(f"parity mismatch substituting {g.name} "
                                 f"(parity {g.parity}) by value of parity {vp}")
        sub[g.index] = val
    if not sub:
        return f
    powers: dict = {}

    def power(i, e):
        key = (i, e)
        p = powers.get(key)
        if p is None:
            p = sub[i] ** e
            powers[key] = p
        return p

    out = U.zero()
    for m, c in f.terms.items():
        if not any(i in sub for i, _ in m):
            out = out + SuperPoly._raw(U, {m: c})
            continue
        term = U.coerce(c)
        run = []
        for i, e in m:
            if i in sub:
                if run:
                    term = term * SuperPoly._raw(U, {tuple(run): 1})
                    run = []
                term = term * power(i, e)
                if term.is_zero():
                    break
            else:
                run.append((i, e))
        if run and not term.is_zero():
            term = term * SuperPoly._raw(U, {tuple(run): 1})
        out = out + term
    return out


def berezin(f, odd_vars: Sequence[Generator]) -> SuperPoly:
    """Berezin integral with the convention that the integral of v1*v2*...*vm is 1."""
    names = [v.name for v in odd_vars]
    if len(set(names)) != len(names):
        raise ValueError(f"repeated generator in Berezin integral: {names}")
    for v in odd_vars:
        if not v.parity:
            raise ValueError(f"Berezin integration over even generator {v.name}")
    f = odd_vars[0].universe.coerce(f) if odd_vars else f
    for v in odd_vars:
        f = raw_partial(v, f)
    return f


def _double_factorial_odd(k: int) -> int:
    # (2j-1)!! for e = 2j
    out = 1
    for i in range(1, k, 2):
        out *= i
    return out


def gaussian_moment(f, even_vars: Sequence[Generator]) -> SuperPoly:
    """Moment of f under the normalized standard Gaussian in the listed variables."""
    if not even_vars:
        return f
    U = even_vars[0].universe
    f = U.coerce(f)
    idx = {v.index for v in even_vars}
    for v in even_vars:
        if v.parity:
            raise ValueError(f"Gaussian moment over odd generator {v.name}")
    for m in f.terms:
        for i, _ in m:
            if U.gens[i].kind is Kind.ODD_COORD:
                raise ValueError(f"residual odd coordinate {U.gens[i].name} in Gaussian moment")
    out: dict = {}
    for m, c in f.terms.items():
        weight = 1
        rest = []
        for i, e in m:
            if i in idx:
                if e < 0 or e % 2:
                    weight = 0
                    break
                weight *= _double_factorial_odd(e)
            else:
                rest.append((i, e))
        if weight:
            _acc(out, tuple(rest), c * weight)
    return SuperPoly._raw(U, out)


def laurent_coeff(f: SuperPoly, k: int) -> SuperPoly:
    """Coefficient of hbar**k."""
    U = f.universe
    if U.hbar is None:
        return f if k == 0 else U.zero()
    h = U.hbar.index
    out = {}
    for m, c in f.terms.items():
        e = 0
        rest = []
        for i, x in m:
            if i == h:
                e = x
            else:
                rest.append((i, x))
        if e == k:
            out[tuple(rest)] = c
    return SuperPoly._raw(U, out)


def hbar_support(f: SuperPoly) -> list[int]:
    U = f.universe
    if U.hbar is None:
        return [0] if f.terms else []
    h = U.hbar.index
    return sorted({dict(m).get(h, 0) for m in f.terms})


def graded_commutator(a, b, pa: int, pb: int):
    """[a, b] = ab - (-1)^{|a||b|} ba for elements of a universe."""
    return a * b - b * a if not (pa & pb) else a * b + b * a


def exp_nilpotent(x: SuperPoly, max_order: int = 64) -> SuperPoly:
    """exp(x) for nilpotent x as a finite sum; raises if x is not nilpotent."""
    U = x.universe
    total = U.one()
    power = U.one()
    for j in range(1, max_order + 1):
        power = power * x * mpq(1, j)
        if power.is_zero():
            return total
        total = total + power
    raise ValueError("exponent is not nilpotent within the order bound")


def monomials(gens: Sequence[Generator], max_degree: int):
    """All monomials (as SuperPoly) of total degree <= max_degree in gens."""
    U = gens[0].universe
    for deg in range(max_degree + 1):
        for combo in itertools.combinations_with_replacement(gens, deg):
            if any(g.parity and combo.count(g) > 1 for g in combo):
                continue
            p = U.one()
            for g in combo:
                p = p * g
            yield p


def random_poly(rng, gens: Sequence[Generator], max_degree: int, n_terms: int = 4,
                coeff_range: int = 3, parity: int | None = None) -> SuperPoly:
    """Random polynomial with n_terms small-integer terms (optionally of one parity)."""
    U = gens[0].universe
    out = U.zero()
    accepted = attempts = 0
    while accepted < n_terms and attempts < 50 * n_terms:
        attempts += 1
        deg = int(rng.integers(0, max_degree + 1))
        term = U.coerce(int(rng.integers(1, coeff_range + 1)) * (1 if rng.random() < 0.5 else -1))
        for _ in range(deg):
            term = term * gens[int(rng.integers(0, len(gens)))]
        if term.is_zero() or (parity is not None and term.parity != parity):
            continue
        out = out + term
        accepted += 1
    return out


def dumps(f: SuperPoly) -> str:
    return json.dumps(f.to_json(), sort_keys=True)
