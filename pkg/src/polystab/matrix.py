"""Dense exact rational matrices and the stability primitives built on them.

Everything here works over :class:`fractions.Fraction`.  The elimination
helpers (:func:`nullspace_vector`, :func:`solve_field`) only use field
operations and ``== 0``, so they also run over :class:`~polystab.rational.Surd`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, InconsistentSystem, SingularMatrix
from .rational import format_rat, rat


class RatMatrix:
    """Immutable dense matrix of Fractions stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(rat(x) for x in entries)
        if rows < 1 or cols < 1:
            raise DimensionMismatch("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise DimensionMismatch(f"expected {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise DimensionMismatch("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), width, (x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RatMatrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def diag(cls, values: Sequence) -> "RatMatrix":
        n = len(values)
        return cls(n, n, (values[i] if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def block(cls, blocks: Sequence[Sequence["RatMatrix"]]) -> "RatMatrix":
        """Assemble a block matrix from a grid of compatible blocks."""
        out = []
        for brow in blocks:
            h = brow[0].rows
            if any(b.rows != h for b in brow):
                raise DimensionMismatch("block row heights differ")
            for i in range(h):
                out.append([x for b in brow for x in b.row(i)])
        return cls.from_rows(out)

    # -- access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self.entries[j::self.cols]

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RatMatrix":
        return RatMatrix(len(rows), len(cols), (self[i, j] for i in rows for j in cols))

    def to_numpy(self) -> np.ndarray:
        return np.array([float(x) for x in self.entries], dtype=float).reshape(self.rows, self.cols)

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i + 1, self.cols)
        )

    # -- arithmetic ---------------------------------------------------------
    def _check_same(self, other: "RatMatrix"):
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if not isinstance(other, RatMatrix):
            return NotImplemented
        self._check_same(other)
        return RatMatrix(self.rows, self.cols, (a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if not isinstance(other, RatMatrix):
            return NotImplemented
        self._check_same(other)
        return RatMatrix(self.rows, self.cols, (a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, (-a for a in self.entries))

    def scale(self, s) -> "RatMatrix":
        s = rat(s)
        return RatMatrix(self.rows, self.cols, (s * a for a in self.entries))

    def __mul__(self, s):
        if isinstance(s, RatMatrix):
            return NotImplemented
        return self.scale(s)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
            cols = [other.col(j) for j in range(other.cols)]
            return RatMatrix(
                self.rows,
                other.cols,
                (sum(a * b for a, b in zip(self.row(i), c)) for i in range(self.rows) for c in cols),
            )
        vec = list(other)
        if len(vec) != self.cols:
            raise DimensionMismatch(f"vector of length {len(vec)} for {self.shape} matrix")
        return [sum((a * b for a, b in zip(self.row(i), vec)), Fraction(0)) for i in range(self.rows)]

    def trace(self) -> Fraction:
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), Fraction(0))

    def quadratic_form(self, p: Sequence) -> Fraction:
        """p^T A p."""
        ap = self @ p
        return sum((x * y for x, y in zip(p, ap)), Fraction(0))

    # -- comparisons --------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(format_rat(x) for x in self.row(i)) for i in range(self.rows))
        return f"RatMatrix([{body}])"


def combine(weights: Sequence, matrices: Sequence[RatMatrix]) -> RatMatrix:
    """Exact linear combination sum_i w_i A_i (rational weights)."""
    if len(weights) != len(matrices) or not matrices:
        raise DimensionMismatch("weights and matrices differ in length")
    r, c = matrices[0].shape
    acc = [Fraction(0)] * (r * c)
    for w, m in zip(weights, matrices):
        if m.shape != (r, c):
            raise DimensionMismatch("matrices differ in shape")
        w = rat(w)
        if w == 0:
            continue
        acc = [a + w * x for a, x in zip(acc, m.entries)]
    return RatMatrix(r, c, acc)


def combine_field(weights: Sequence, matrices: Sequence[RatMatrix]) -> list[list]:
    """Linear combination with weights from any field (e.g. surds), as nested lists."""
    r, c = matrices[0].shape
    out = [[0] * c for _ in range(r)]
    for w, m in zip(weights, matrices):
        for i in range(r):
            row = out[i]
            for j in range(c):
                x = m[i, j]
                if x != 0:
                    row[j] = row[j] + w * x
    return out


# ---------------------------------------------------------------------------
# determinants and elimination


def _integer_rows(a: RatMatrix) -> tuple[list[list[int]], Fraction]:
    """Scale each row to integers; returns the rows and the product of scale factors."""
    rows = []
    scale = Fraction(1)
    for i in range(a.rows):
        r = a.row(i)
        lcm = 1
        for x in r:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        rows.append([int(x * lcm) for x in r])
        scale *= lcm
    return rows, scale


def bareiss_det_int(m: list[list[int]]) -> int:
    """Fraction-free (Bareiss) determinant of an integer matrix; ``m`` is consumed."""
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            a = ri[k]
            for j in range(k + 1, n):
                ri[j] = (pivot * ri[j] - a * rk[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def mat_determinant(a: RatMatrix) -> Fraction:
    """Exact determinant via Bareiss elimination on a row-scaled integer copy."""
    if not a.is_square:
        raise DimensionMismatch("determinant of a non-square matrix")
    rows, scale = _integer_rows(a)
    return Fraction(bareiss_det_int(rows)) / scale


def _rref(rows: list[list], ncols: int) -> list[int]:
    """In-place reduced row echelon form over a field; returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        inv = 1 / pr[c] if not isinstance(pr[c], Fraction) else Fraction(pr[c].denominator, pr[c].numerator)
        rows[r] = pr = [x * inv for x in pr]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    ri = rows[i]
                    rows[i] = [x - f * y for x, y in zip(ri, pr)]
        pivots.append(c)
        r += 1
    return pivots


def mat_inverse(a: RatMatrix) -> RatMatrix:
    """Exact inverse by Gauss-Jordan elimination on [A | I].

    Raises SingularMatrix when A is not invertible.
    """
    if not a.is_square:
        raise DimensionMismatch("inverse of a non-square matrix")
    n = a.rows
    aug = [list(a.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    pivots = _rref(aug, n)
    if len(pivots) < n:
        raise SingularMatrix("matrix is singular")
    return RatMatrix(n, n, (x for r in aug for x in r[n:]))


def solve_linear(a: RatMatrix, b: Sequence) -> list[Fraction]:
    """Solve ``A x = b`` exactly.

    Square nonsingular systems have a unique answer.  Rectangular or singular
    systems return one particular solution (free variables set to zero) when
    consistent, and raise InconsistentSystem otherwise.
    """
    b = [rat(x) for x in b]
    if len(b) != a.rows:
        raise DimensionMismatch("right-hand side length does not match")
    aug = [list(a.row(i)) + [b[i]] for i in range(a.rows)]
    pivots = _rref(aug, a.cols)
    for r in aug[len(pivots):]:
        if r[-1] != 0:
            raise InconsistentSystem("system has no solution")
    x = [Fraction(0)] * a.cols
    for r, c in enumerate(pivots):
        x[c] = aug[r][-1]
    return x


def solve_field(rows: Sequence[Sequence], rhs: Sequence) -> list | None:
    """Unique solution of a square system over any field, or None if singular."""
    n = len(rows)
    aug = [list(r) + [v] for r, v in zip(rows, rhs)]
    pivots = _rref(aug, n)
    if len(pivots) < n:
        return None
    return [aug[i][-1] for i in range(n)]


def nullspace_vector(rows: Sequence[Sequence], ncols: int | None = None) -> list | None:
    """A nonzero kernel vector of the matrix given by ``rows``, or None.

    The vector is normalized so its first nonzero component is 1.  The last
    free column is chosen, which makes the result deterministic.
    """
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if ncols is None else ncols
    pivots = _rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    f = free[-1]
    one = rows[0][0] * 0 + 1 if rows and rows[0] else Fraction(1)
    zero = one * 0
    x = [zero] * ncols
    x[f] = one
    for r, c in enumerate(pivots):
        x[c] = -rows[r][f]
    lead = next(v for v in x if v != 0)
    return [v / lead for v in x]


# ---------------------------------------------------------------------------
# characteristic polynomial and Hurwitz test


@dataclass(frozen=True)
class CharPoly:
    """Monic polynomial stored highest degree first: [1, a1, ..., an]."""

    coefficients: tuple

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        acc = 0
        for c in self.coefficients:
            acc = acc * z + (float(c) if isinstance(z, (float, complex)) else c)
        return acc


def char_poly(a: RatMatrix) -> CharPoly:
    """Exact characteristic polynomial det(lambda I - A) by Faddeev-LeVerrier."""
    if not a.is_square:
        raise DimensionMismatch("characteristic polynomial of a non-square matrix")
    n = a.rows
    coeffs = [Fraction(1)]
    ident = RatMatrix.identity(n)
    mk = RatMatrix.zeros(n)
    for k in range(1, n + 1):
        mk = a @ mk + ident.scale(coeffs[-1])
        coeffs.append(-(a @ mk).trace() / k)
    return CharPoly(tuple(coeffs))


def hurwitz_matrix(coeffs: Sequence[Fraction]) -> RatMatrix:
    """Hurwitz matrix H[i][j] = a_{2j-i} (1-based) of a0 x^n + a1 x^(n-1) + ... + an."""
    n = len(coeffs) - 1

    def a(k):
        return coeffs[k] if 0 <= k <= n else 0

    return RatMatrix(n, n, (a(2 * (j + 1) - (i + 1)) for i in range(n) for j in range(n)))


def hurwitz_minors(coeffs: Sequence[Fraction]) -> list[Fraction]:
    n = len(coeffs) - 1
    if n == 0:
        return []
    h = hurwitz_matrix(coeffs)
    return [mat_determinant(h.submatrix(range(k), range(k))) for k in range(1, n + 1)]


def is_hurwitz(a: RatMatrix) -> bool:
    """True iff every eigenvalue of A has strictly negative real part.

    Decided exactly with the Routh-Hurwitz leading-minor test on the
    characteristic polynomial; any zero minor counts as unstable.
    """
    coeffs = char_poly(a).coefficients
    if any(c <= 0 for c in coeffs):
        # necessary condition for a monic Hurwitz polynomial
        return False
    return all(d > 0 for d in hurwitz_minors(coeffs))


def is_negative_semidefinite(s: RatMatrix) -> bool:
    """Exact test that a symmetric matrix has no positive eigenvalue.

    All eigenvalues are real, so det(lambda I - S) has only nonpositive roots
    exactly when every coefficient is nonnegative (Descartes' rule of signs).
    """
    if not s.is_symmetric():
        raise ValueError("matrix is not symmetric")
    return all(c >= 0 for c in char_poly(s).coefficients)


def eigs_numeric(a: RatMatrix | np.ndarray) -> np.ndarray:
    arr = a.to_numpy() if isinstance(a, RatMatrix) else np.asarray(a, dtype=float)
    try:
        return np.linalg.eigvals(arr)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


def svals_numeric(a: RatMatrix | np.ndarray) -> np.ndarray:
    """Singular values, descending."""
    arr = a.to_numpy() if isinstance(a, RatMatrix) else np.asarray(a, dtype=float)
    try:
        return np.linalg.svd(arr, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


@dataclass(frozen=True)
class SimplexPoint:
    """Exact point of the probability simplex (Fraction or Surd weights)."""

    weights: tuple

    def __post_init__(self):
        w = tuple(x if not isinstance(x, int) else Fraction(x) for x in self.weights)
        if not w:
            raise ValueError("empty simplex point")
        if any(x < 0 for x in w):
            raise ValueError("simplex weights must be nonnegative")
        if sum(w[1:], w[0]) != 1:
            raise ValueError("simplex weights must sum to 1")
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.weights) if x != 0)

    @classmethod
    def vertex(cls, k: int, i: int) -> "SimplexPoint":
        return cls(tuple(Fraction(int(j == i)) for j in range(k)))

    @classmethod
    def uniform(cls, k: int, support: Sequence[int] | None = None) -> "SimplexPoint":
        support = range(k) if support is None else support
        s = set(support)
        return cls(tuple(Fraction(1, len(s)) if j in s else Fraction(0) for j in range(k)))

    def to_numpy(self) -> np.ndarray:
        return np.array([float(x) for x in self.weights])
