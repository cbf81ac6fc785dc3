"""Supermatrices over a Grassmann coefficient ring.

A :class:`SuperMatrix` represents a homogeneous morphism ``V -> W`` between
superspaces with homogeneous bases.  Entries are elements of a universe
(usually a Grassmann algebra of odd constants, see :func:`grassmann`);
the entry in row ``i`` and column ``j`` has parity
``parity + tgt[i] + src[j]``.  Composition is the ordinary matrix product.

Entries with odd constants are needed: with purely rational entries an
even morphism has vanishing off-diagonal blocks and the interesting sign
behaviour of the Berezinian never shows up.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .superpoly import Kind, SuperPoly, Universe


def grassmann(n: int = 6, name: str = "Lambda") -> Universe:
    """A universe with n odd constants lam1..lamn (the coefficient ring)."""
    U = Universe(name)
    for i in range(1, n + 1):
        U.gen(f"lam{i}", 1, 0, Kind.ODD_CONST)
    return U


class SuperDimension:
    """Basis parities of a superspace (and optional ghost labels)."""

    def __init__(self, parities: Sequence[int], ghosts: Sequence[int] | None = None):
        self.parities = tuple(int(p) % 2 for p in parities)
        self.ghosts = tuple(ghosts) if ghosts is not None else None

    @classmethod
    def of(cls, even: int, odd: int) -> "SuperDimension":
        return cls([0] * even + [1] * odd)

    @property
    def even(self):
        return self.parities.count(0)

    @property
    def odd(self):
        return self.parities.count(1)

    def flipped(self) -> "SuperDimension":
        return SuperDimension([1 - p for p in self.parities])

    def __len__(self):
        return len(self.parities)

    def __eq__(self, other):
        return isinstance(other, SuperDimension) and self.parities == other.parities

    def __hash__(self):
        return hash(self.parities)

    def __repr__(self):
        return f"{self.even}|{self.odd}"


class SuperMatrix:
    def __init__(self, universe: Universe, src, tgt, rows, parity: int = 0, check: bool = True):
        self.universe = universe
        self.src = src if isinstance(src, SuperDimension) else SuperDimension(src)
        self.tgt = tgt if isinstance(tgt, SuperDimension) else SuperDimension(tgt)
        self.parity = parity % 2
        self.rows = [[universe.coerce(e) for e in row] for row in rows]
        if len(self.rows) != len(self.tgt) or any(len(r) != len(self.src) for r in self.rows):
            raise ValueError("entry grid does not match dimensions")
        if check:
            for i, row in enumerate(self.rows):
                for j, e in enumerate(row):
                    want = (self.parity + self.tgt.parities[i] + self.src.parities[j]) % 2
                    if e and (not e.is_homogeneous() or e.parity != want):
                        raise ValueError(f"entry ({i},{j}) = {e} should have parity {want}")

    # -- constructors ---------------------------------------------------
    @classmethod
    def identity(cls, universe, dim) -> "SuperMatrix":
        dim = dim if isinstance(dim, SuperDimension) else SuperDimension(dim)
        n = len(dim)
        return cls(universe, dim, dim, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, universe, src, tgt, parity=0) -> "SuperMatrix":
        src = src if isinstance(src, SuperDimension) else SuperDimension(src)
        tgt = tgt if isinstance(tgt, SuperDimension) else SuperDimension(tgt)
        return cls(universe, src, tgt, [[0] * len(src) for _ in range(len(tgt))], parity)

    @classmethod
    def blocks(cls, universe, A, B, C, D) -> "SuperMatrix":
        """Assemble [[A, B], [C, D]] (A: V1->W1, B: V2->W1, C: V1->W2, D: V2->W2)."""
        parity = A.parity
        src = SuperDimension(A.src.parities + B.src.parities)
        tgt = SuperDimension(A.tgt.parities + C.tgt.parities)
        rows = [ra + rb for ra, rb in zip(A.rows, B.rows)] + \
               [rc + rd for rc, rd in zip(C.rows, D.rows)]
        return cls(universe, src, tgt, rows, parity)

    # -- algebra -----------------------------------------------------------
    def shape(self):
        return len(self.tgt), len(self.src)

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        if self.src != other.tgt:
            raise ValueError(f"cannot compose: source {self.src} != target {other.tgt}")
        U = self.universe
        n, m, k = len(self.tgt), len(self.src), len(other.src)
        rows = []
        for i in range(n):
            row = []
            for j in range(k):
                acc = U.zero()
                for l in range(m):
                    a = self.rows[i][l]
                    if a:
                        b = other.rows[l][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            rows.append(row)
        return SuperMatrix(U, other.src, self.tgt, rows, self.parity + other.parity, check=False)

    def __add__(self, other):
        self._same_shape(other)
        return SuperMatrix(self.universe, self.src, self.tgt,
                           [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
                           self.parity, check=False)

    def __sub__(self, other):
        self._same_shape(other)
        return SuperMatrix(self.universe, self.src, self.tgt,
                           [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
                           self.parity, check=False)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "SuperMatrix":
        return SuperMatrix(self.universe, self.src, self.tgt,
                           [[e * c for e in r] for r in self.rows], self.parity, check=False)

    def _same_shape(self, other):
        if self.src != other.src or self.tgt != other.tgt:
            raise ValueError("dimension mismatch")

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def __eq__(self, other):
        return (isinstance(other, SuperMatrix) and self.src == other.src and self.tgt == other.tgt
                and all(a == b for r1, r2 in zip(self.rows, other.rows) for a, b in zip(r1, r2)))

    def submatrix(self, row_idx, col_idx) -> "SuperMatrix":
        return SuperMatrix(self.universe,
                           SuperDimension([self.src.parities[j] for j in col_idx]),
                           SuperDimension([self.tgt.parities[i] for i in row_idx]),
                           [[self.rows[i][j] for j in col_idx] for i in row_idx],
                           self.parity, check=False)

    def body(self) -> list[list[Fraction]]:
        return [[Fraction(e.constant_term()) for e in r] for r in self.rows]

    def to_text(self) -> str:
        return "[" + "; ".join(", ".join(e.to_text() for e in r) for r in self.rows) + "]"

    def to_json(self) -> dict:
        return {"src": list(self.src.parities), "tgt": list(self.tgt.parities),
                "parity": self.parity, "rows": [[e.to_text() for e in r] for r in self.rows]}

    def __repr__(self):
        return f"SuperMatrix({self.src}->{self.tgt}, parity={self.parity}, {self.to_text()})"


# ---------------------------------------------------------------------------
# commutative linear algebra over the even part of the coefficient ring


def _even_inverse_scalar(x: SuperPoly) -> SuperPoly:
    return x.inverse()


def det_even(rows: list[list[SuperPoly]], universe: Universe) -> SuperPoly:
    """Determinant of a square matrix with even (mutually commuting) entries.

    Gaussian elimination pivoting on entries with invertible body.
    """
    n = len(rows)
    if n == 0:
        return universe.one()
    a = [list(r) for r in rows]
    det = universe.one()
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col].constant_term()), None)
        if piv is None:
            raise ZeroDivisionError("singular body")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        pinv = _even_inverse_scalar(p)
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * pinv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def inverse(A: SuperMatrix) -> SuperMatrix:
    """Inverse of an even square supermatrix whose body is invertible."""
    if A.parity:
        raise ValueError("only even matrices are inverted")
    U = A.universe
    n = len(A.src)
    body = A.body()
    # invert the rational body by Gauss-Jordan
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(body)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix body is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    b_inv = SuperMatrix(U, A.tgt, A.src, [[aug[i][n + j] for j in range(n)] for i in range(n)], check=False)
    # A = B (1 + B^{-1} N), N nilpotent
    nil = SuperMatrix(U, A.src, A.tgt,
                      [[e - e.constant_term() for e in r] for r in A.rows], check=False)
    X = b_inv @ nil
    result = SuperMatrix.identity(U, A.src)
    term = SuperMatrix.identity(U, A.src)
    for _ in range(len(U.gens) + 2):
        term = (term @ X).scale(-1)
        if term.is_zero():
            break
        result = result + term
    else:
        raise ZeroDivisionError("nilpotent part did not terminate")
    return result @ b_inv


def _parity_blocks(A: SuperMatrix):
    ev = [i for i, p in enumerate(A.src.parities) if p == 0]
    od = [i for i, p in enumerate(A.src.parities) if p == 1]
    return ev, od


def berezinian(A: SuperMatrix) -> SuperPoly:
    """Ber(A) = det(A00 - A01 A11^{-1} A10) / det(A11)."""
    if A.parity:
        raise ValueError("the Berezinian is defined for even matrices")
    if A.src != A.tgt:
        raise ValueError("the Berezinian needs an endomorphism")
    U = A.universe
    ev, od = _parity_blocks(A)
    A00, A01 = A.submatrix(ev, ev), A.submatrix(ev, od)
    A10, A11 = A.submatrix(od, ev), A.submatrix(od, od)
    try:
        A11inv = inverse(A11)
    except ZeroDivisionError:
        raise ZeroDivisionError("block A11 is singular") from None
    schur = A00 - A01 @ A11inv @ A10
    try:
        num = det_even(schur.rows, U)
        den = det_even(A11.rows, U)
    except ZeroDivisionError:
        raise ZeroDivisionError("block A00 Schur complement is singular") from None
    return num * den.inverse()


def berezinian_alt(A: SuperMatrix) -> SuperPoly:
    """Ber(A) = det(A00) / det(A11 - A10 A00^{-1} A01), the other Schur complement."""
    U = A.universe
    ev, od = _parity_blocks(A)
    A00, A01 = A.submatrix(ev, ev), A.submatrix(ev, od)
    A10, A11 = A.submatrix(od, ev), A.submatrix(od, od)
    try:
        A00inv = inverse(A00)
    except ZeroDivisionError:
        raise ZeroDivisionError("block A00 is singular") from None
    schur = A11 - A10 @ A00inv @ A01
    return det_even(A00.rows, U) * det_even(schur.rows, U).inverse()


def random_entry(rng, universe: Universe, parity: int, n_terms: int = 3) -> SuperPoly:
    """Random Grassmann element of the given parity with small rational coefficients."""
    odd = [g for g in universe.gens if g.parity]
    out = universe.zero()
    if parity == 0:
        out = out + Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
    for _ in range(n_terms):
        deg = 2 * int(rng.integers(0, 2)) + parity
        if deg == 0:
            continue
        term = universe.coerce(Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 3))))
        for g in rng.choice(len(odd), size=deg, replace=False):
            term = term * odd[int(g)]
        out = out + term
    return out


def random_matrix(rng, universe: Universe, src, tgt=None, parity: int = 0,
                  invertible: bool = False) -> SuperMatrix:
    """Random homogeneous supermatrix; with invertible=True the body blocks are invertible."""
    src = src if isinstance(src, SuperDimension) else SuperDimension(src)
    tgt = src if tgt is None else (tgt if isinstance(tgt, SuperDimension) else SuperDimension(tgt))
    while True:
        rows = [[random_entry(rng, universe, (parity + pt + ps) % 2) for ps in src.parities]
                for pt in tgt.parities]
        A = SuperMatrix(universe, src, tgt, rows, parity)
        if not invertible:
            return A
        ev, od = _parity_blocks(A)
        try:
            det_even(A.submatrix(ev, ev).rows, universe)
            det_even(A.submatrix(od, od).rows, universe)
        except ZeroDivisionError:
            continue
        return A


# ---------------------------------------------------------------------------
# transposes


def _transpose_sign(pi: int, pa: int, qb: int) -> int:
    """Sign attached to entry (b, a) of A when it moves to position (a, b).

    pa is the parity of the source basis vector, qb that of the target one.
    On matrices with scalar entries this reduces to (-1)^(pi*qb); the extra
    terms make the sign rules hold for Grassmann-valued entries as well.
    """
    return -1 if (pa * (1 + qb + pi) + pi * qb) & 1 else 1


def supertranspose(A: SuperMatrix) -> SuperMatrix:
    """A*: W* -> V* for A: V -> W (dual bases keep their parities).

    (AB)* = (-1)^(|A||B|) B* A*.  Applying it twice gives (-1)^|A| A on
    scalar matrices; with Grassmann entries the odd coefficients pick up an
    additional sign (the grading involution of the coefficient ring).
    """
    rows = [[A.rows[j][i] * _transpose_sign(A.parity, A.src.parities[i], A.tgt.parities[j])
             for j in range(len(A.tgt))] for i in range(len(A.src))]
    return SuperMatrix(A.universe, A.tgt, A.src, rows, A.parity, check=False)


def pidual(A: SuperMatrix) -> SuperMatrix:
    """A°: W° -> V° where V° is the parity-flipped dual of V.

    Involutive, (AB)° = (-1)^(|A||B|) B° A°, and Ber(A°) = 1/Ber(A).
    """
    rows = [[A.rows[j][i] * _transpose_sign(A.parity, A.src.parities[i], A.tgt.parities[j])
             for j in range(len(A.tgt))] for i in range(len(A.src))]
    return SuperMatrix(A.universe, A.tgt.flipped(), A.src.flipped(), rows, A.parity, check=False)


# ---------------------------------------------------------------------------
# the odd symplectic quadric


class OddSymplecticForm:
    """Darboux pairing on V = L + L°: omega(e_a, f_b) = delta_ab = -omega(f_b, e_a).

    ``ghosts`` are the ghost numbers of the e_a; the dual vectors f_a get
    1 - gh(e_a) so that omega has ghost number -1.
    """

    def __init__(self, lagrangian: SuperDimension | Sequence[int], ghosts: Sequence[int] | None = None):
        L = lagrangian if isinstance(lagrangian, SuperDimension) else SuperDimension(lagrangian)
        self.L = L
        self.Lo = L.flipped()
        self.ghosts = tuple(ghosts) if ghosts is not None else (0,) * len(L)
        self.dual_ghosts = tuple(1 - g for g in self.ghosts)
        self.V = SuperDimension(L.parities + self.Lo.parities,
                                self.ghosts + self.dual_ghosts)

    @property
    def n(self):
        return len(self.L)

    def pairing(self, i: int, j: int) -> int:
        n = self.n
        if i < n <= j and j - n == i:
            return 1
        if j < n <= i and i - n == j:
            return -1
        return 0


def split_blocks(A: SuperMatrix, form: OddSymplecticForm):
    if A.src != form.V or A.tgt != form.V:
        raise ValueError(f"matrix dimensions {A.src}->{A.tgt} do not match the form on {form.V}")
    n = form.n
    lo, hi = list(range(n)), list(range(n, 2 * n))
    return A.submatrix(lo, lo), A.submatrix(lo, hi), A.submatrix(hi, lo), A.submatrix(hi, hi)


def quadric_residuals(A: SuperMatrix, form: OddSymplecticForm) -> list[SuperMatrix]:
    """S°P - Q°R - 1, P°R - R°P, Q°S - S°Q, P°S - R°Q - 1."""
    P, Q, R, S = split_blocks(A, form)
    U = A.universe
    IL = SuperMatrix.identity(U, form.L)
    ILo = SuperMatrix.identity(U, form.Lo)
    return [pidual(S) @ P - pidual(Q) @ R - IL,
            pidual(P) @ R - pidual(R) @ P,
            pidual(Q) @ S - pidual(S) @ Q,
            pidual(P) @ S - pidual(R) @ Q - ILo]


def on_quadric(A: SuperMatrix, form: OddSymplecticForm) -> bool:
    return all(r.is_zero() for r in quadric_residuals(A, form))


def ber_half(A: SuperMatrix, form: OddSymplecticForm, verify: bool = True) -> SuperPoly:
    """Ber(P) for A on the quadric (a square root of Ber(A)).

    With ``verify=False`` the caller vouches that A is on the quadric.
    """
    res = quadric_residuals(A, form) if verify else []
    bad = [k for k, r in enumerate(res) if not r.is_zero()]
    if bad:
        names = ["S°P-Q°R-1", "P°R-R°P", "Q°S-S°Q", "P°S-R°Q-1"]
        raise ValueError("matrix is not on the quadric; nonzero residuals: "
                         + ", ".join(names[k] for k in bad))
    P = split_blocks(A, form)[0]
    return berezinian(P)


def random_quadric(rng, form: OddSymplecticForm, universe: Universe, factors: int = 3) -> SuperMatrix:
    """Product of random elementary quadric factors, verified before return.

    Products whose P block is singular are resampled, since Ber(P) is only
    defined where P is invertible.
    """
    while True:
        A = _quadric_product(rng, form, universe, factors)
        try:
            berezinian(split_blocks(A, form)[0])
        except ZeroDivisionError:
            continue
        if not on_quadric(A, form):
            raise RuntimeError("generated matrix left the quadric")
        return A


def _quadric_product(rng, form: OddSymplecticForm, universe: Universe, factors: int) -> SuperMatrix:
    U = universe
    L, Lo = form.L, form.Lo
    IL, ILo = SuperMatrix.identity(U, L), SuperMatrix.identity(U, Lo)
    zLLo, zLoL = SuperMatrix.zero(U, L, Lo), SuperMatrix.zero(U, Lo, L)
    A = SuperMatrix.identity(U, form.V)
    for f in range(factors):
        kind = int(rng.integers(0, 3))
        if kind == 0:
            R = random_matrix(rng, U, L, Lo)
            R = (R + pidual(R)).scale(Fraction(1, 2))
            F = SuperMatrix.blocks(U, IL, zLoL, R, ILo)
        elif kind == 1:
            Q = random_matrix(rng, U, Lo, L)
            Q = (Q + pidual(Q)).scale(Fraction(1, 2))
            F = SuperMatrix.blocks(U, IL, Q, zLLo, ILo)
        else:
            P = random_matrix(rng, U, L, L, invertible=True)
            F = SuperMatrix.blocks(U, P, zLoL, zLLo, inverse(pidual(P)))
        A = A @ F
    return A
