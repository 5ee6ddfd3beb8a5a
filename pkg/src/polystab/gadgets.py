"""Constructive reductions from maximum clique to polytope stability.

The chain is

    graph G  ->  quadratic-threshold instance (M^{-1})
             ->  nonsingularity polytope {X_i},  X_i = [[M^{-1}, e_i], [e_i^T, 1]]
             ->  stability polytope {B_i},       B_i = [[0, X_i^T], [-X_i, -I]]

together with the clique-number recovery scan over the threshold ladder
{0, 1/2, 2/3, ..., 1 - 1/n}, Caratheodory support reduction and the
determinant identity behind the nonsingularity gadget.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import DimensionMismatch, SingularMatrix
from .graph import Graph, adjacency_matrix, write_dimacs
from .matrix import (
    RatMatrix,
    SimplexPoint,
    combine,
    mat_determinant,
    mat_inverse,
    nullspace_vector,
)
from .rational import rat

KINDS = ("general", "nonsingularity-gadget", "stability-gadget")


@dataclass(frozen=True)
class QtInstance:
    """Quadratic-threshold instance: does some p in the simplex have p^T M p = 1?

    Only ``minv`` (the inverse of M) is part of the instance.  ``provenance``
    optionally records how it was built from a graph: keys ``graph_dimacs``,
    ``tau`` and ``istar``.
    """

    minv: RatMatrix
    provenance: Optional[dict] = None

    def __post_init__(self):
        if not self.minv.is_square:
            raise DimensionMismatch("QT input must be square")
        if mat_determinant(self.minv) == 0:
            raise SingularMatrix("QT input must be nonsingular")

    @property
    def n(self) -> int:
        return self.minv.rows

    def form_matrix(self) -> RatMatrix:
        """M itself, recovered by exact inversion."""
        return mat_inverse(self.minv)


@dataclass(frozen=True)
class PolytopeInstance:
    """Finite list of equal-size square matrices spanning a matrix polytope."""

    matrices: tuple
    kind: str = "general"
    provenance: Optional[dict] = field(default=None, compare=False)

    def __post_init__(self):
        mats = tuple(self.matrices)
        if not mats:
            raise DimensionMismatch("polytope needs at least one matrix")
        d = mats[0].rows
        for m in mats:
            if m.shape != (d, d):
                raise DimensionMismatch(f"matrix of shape {m.shape} in a {d}x{d} polytope")
        if self.kind not in KINDS:
            raise ValueError(f"unknown polytope kind {self.kind!r}")
        object.__setattr__(self, "matrices", mats)

    @property
    def dim(self) -> int:
        return self.matrices[0].rows

    @property
    def k(self) -> int:
        return len(self.matrices)

    def combination(self, weights: Sequence) -> RatMatrix:
        return combine(list(weights), self.matrices)


def threshold_ladder(n: int) -> list[Fraction]:
    """The candidate values 1 - 1/w for w = 1..n, ascending."""
    if n < 1:
        raise ValueError("ladder needs n >= 1")
    return [1 - Fraction(1, w) for w in range(1, n + 1)]


def select_perturbation(m: RatMatrix, n: int | None = None) -> tuple[int, RatMatrix]:
    """Smallest i in 1..n+1 with M + I/(n^2 + i) nonsingular.

    At most n of the n+1 shifts can hit an eigenvalue of M, so one always works.
    The shift is applied even if M itself is invertible.
    """
    n = m.rows if n is None else n
    if m.shape != (n, n):
        raise DimensionMismatch("M must be n x n")
    ident = RatMatrix.identity(n)
    for i in range(1, n + 2):
        shifted = m + ident.scale(Fraction(1, n * n + i))
        if mat_determinant(shifted) != 0:
            return i, shifted
    raise AssertionError("no nonsingular shift found; impossible for an n x n matrix")


def _check_tau(n: int, tau) -> Fraction:
    tau = rat(tau)
    if tau <= 0:
        raise ValueError("threshold must be positive")
    if tau not in threshold_ladder(n):
        raise ValueError(f"threshold {tau} is not on the ladder for n={n}")
    return tau


def build_qt_instance(g: Graph, tau) -> QtInstance:
    """QT instance whose answer is 'yes' iff max_p p^T M_{i*} p >= tau.

    The instance input is the inverse of (1/tau) M_{i*}, i.e. tau * M_{i*}^{-1}.
    """
    tau = _check_tau(g.n, tau)
    istar, m_istar = select_perturbation(adjacency_matrix(g), g.n)
    minv = mat_inverse(m_istar).scale(tau)
    prov = {"graph_dimacs": write_dimacs(g), "tau": tau, "istar": istar}
    return QtInstance(minv, prov)


def build_nonsingularity_gadget(q: QtInstance) -> PolytopeInstance:
    """n matrices X_i = [[M^{-1}, e_i], [e_i^T, 1]] of size n+1."""
    n = q.n
    mats = []
    for i in range(n):
        e = RatMatrix(n, 1, (int(j == i) for j in range(n)))
        mats.append(RatMatrix.block([[q.minv, e], [e.T, RatMatrix.identity(1)]]))
    return PolytopeInstance(tuple(mats), "nonsingularity-gadget", q.provenance)


def stability_block(a: RatMatrix) -> RatMatrix:
    """B = [[0, A^T], [-A, -I]]; Hurwitz exactly when A is nonsingular."""
    if not a.is_square:
        raise DimensionMismatch("stability block needs a square matrix")
    n = a.rows
    return RatMatrix.block([[RatMatrix.zeros(n), a.T], [-a, -RatMatrix.identity(n)]])


def build_stability_gadget(inst: PolytopeInstance) -> PolytopeInstance:
    return PolytopeInstance(
        tuple(stability_block(a) for a in inst.matrices), "stability-gadget", inst.provenance
    )


def unwrap_stability_gadget(inst: PolytopeInstance) -> Optional[PolytopeInstance]:
    """Recover {A_i} from matrices of the form [[0, A^T], [-A, -I]], else None."""
    if inst.dim % 2:
        return None
    n = inst.dim // 2
    top, bot = range(n), range(n, 2 * n)
    out = []
    for b in inst.matrices:
        if b.submatrix(top, top) != RatMatrix.zeros(n):
            return None
        if b.submatrix(bot, bot) != -RatMatrix.identity(n):
            return None
        a = -b.submatrix(bot, top)
        if b.submatrix(top, bot) != a.T:
            return None
        out.append(a)
    kind = "nonsingularity-gadget" if qt_from_nonsingularity(out) is not None else "general"
    return PolytopeInstance(tuple(out), kind, inst.provenance)


def qt_from_nonsingularity(matrices: Sequence[RatMatrix]) -> Optional[QtInstance]:
    """Read M^{-1} off matrices shaped like X_i = [[M^{-1}, e_i], [e_i^T, 1]]."""
    d = matrices[0].rows
    n = d - 1
    if n < 1 or len(matrices) != n:
        return None
    head = range(n)
    minv = matrices[0].submatrix(head, head)
    for i, x in enumerate(matrices):
        if x.shape != (d, d) or x.submatrix(head, head) != minv or x[n, n] != 1:
            return None
        for j in range(n):
            if x[j, n] != int(j == i) or x[n, j] != int(j == i):
                return None
    if mat_determinant(minv) == 0:
        return None
    return QtInstance(minv)


def recover_clique_number(g: Graph, oracle: Callable[[QtInstance], bool] | None = None) -> int:
    """Clique number from QT decisions along the threshold ladder.

    Thresholds are scanned from the top; the first accepted tau gives
    omega = 1/(1 - tau).  If none is accepted the graph has no edge and
    omega = 1.
    """
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    if oracle is None:
        from .oracles import qt_decide

        oracle = qt_decide
    for tau in reversed(threshold_ladder(g.n)):
        if tau == 0:
            break
        if oracle(build_qt_instance(g, tau)):
            return int(1 / (1 - tau))
    return 1


def caratheodory_reduce(inst: PolytopeInstance, weights: SimplexPoint | Sequence) -> SimplexPoint:
    """Re-express sum_i w_i A_i using at most dim^2 + 1 of the matrices.

    Repeatedly finds an affine dependence among the supported matrices and
    shifts weight along it until some weight hits zero.  Exact throughout.
    """
    w = [rat(x) for x in weights]
    if len(w) != inst.k:
        raise DimensionMismatch("one weight per matrix required")
    SimplexPoint(tuple(w))
    bound = inst.dim * inst.dim + 1
    if inst.k <= bound:
        return SimplexPoint(tuple(w))
    # exact duplicates: move their mass onto the first copy
    first = {}
    for i, m in enumerate(inst.matrices):
        j = first.setdefault(m, i)
        if j != i and w[i]:
            w[j] += w[i]
            w[i] = Fraction(0)
    vecs = [m.entries for m in inst.matrices]
    while True:
        support = [i for i, x in enumerate(w) if x != 0]
        if len(support) <= bound:
            return SimplexPoint(tuple(w))
        # rows: matrix coordinates plus the affine row of ones
        rows = [[vecs[i][r] for i in support] for r in range(len(vecs[0]))]
        rows.append([Fraction(1)] * len(support))
        mu = nullspace_vector(rows, len(support))
        if not any(x > 0 for x in mu):
            mu = [-x for x in mu]
        ratio = min(w[i] / m for i, m in zip(support, mu) if m > 0)
        for i, m in zip(support, mu):
            w[i] -= ratio * m


def schur_identity_holds(m: RatMatrix, p: Sequence) -> bool:
    """det(M) * det([[M^{-1}, p], [p^T, 1]]) == 1 - p^T M p, exactly."""
    p = [rat(x) for x in p]
    n = m.rows
    col = RatMatrix(n, 1, p)
    x = RatMatrix.block([[mat_inverse(m), col], [col.T, RatMatrix.identity(1)]])
    return mat_determinant(m) * mat_determinant(x) == 1 - m.quadratic_form(p)


def random_simplex_point(n: int, rng: random.Random, max_den: int = 20) -> SimplexPoint:
    """Random rational simplex point from positive integer draws (may include zeros)."""
    raw = [rng.randint(0, max_den) for _ in range(n)]
    if not any(raw):
        raw[rng.randrange(n)] = 1
    s = sum(raw)
    return SimplexPoint(tuple(Fraction(r, s) for r in raw))


def check_determinantal_identity(g: Graph, tau, trials: int = 10, seed=0) -> bool:
    """Check det(M_tau) det(X(p)) = 1 - p^T M_tau p at random simplex points.

    M_tau = (1/tau) M_{i*} is the form matrix of the QT instance and
    X(p) = sum_i p_i X_i is the corresponding point of the nonsingularity
    polytope.
    """
    q = build_qt_instance(g, tau)
    gadget = build_nonsingularity_gadget(q)
    m_tau = q.form_matrix()
    det_m = mat_determinant(m_tau)
    rng = random.Random(seed)
    for _ in range(trials):
        p = random_simplex_point(g.n, rng)
        lhs = det_m * mat_determinant(gadget.combination(p.weights))
        if lhs != 1 - m_tau.quadratic_form(p.weights):
            return False
    return True


def spectrum_relation_residual(a: RatMatrix) -> float:
    """max over eigenvalues lam of B of min over singular values s of |lam^2 + lam + s^2|.

    For B = [[0, A^T], [-A, -I]] with eigenvector (x, y), y = -A x / (lam + 1)
    and A^T A x = -lam (lam + 1) x, so every eigenvalue solves
    lam^2 + lam + s^2 = 0 for a singular value s of A.
    """
    import numpy as np

    lams = np.linalg.eigvals(stability_block(a).to_numpy())
    svals = np.linalg.svd(a.to_numpy(), compute_uv=False)
    return float(max(np.min(np.abs(lam * lam + lam + svals ** 2)) for lam in lams))


def sandwich_holds(g: Graph, p: Sequence) -> bool:
    """p^T M p <= p^T M_{i*} p <= p^T M p + 1/(n^2 + i*), exactly."""
    m = adjacency_matrix(g)
    istar, m_istar = select_perturbation(m, g.n)
    p = [rat(x) for x in p]
    base = m.quadratic_form(p)
    pert = m_istar.quadratic_form(p)
    return base <= pert <= base + Fraction(1, g.n * g.n + istar)
