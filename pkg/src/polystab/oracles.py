"""Exact desk-scale oracles over the simplex and the matrix polytope.

* :func:`simplex_quadratic_extrema_exact` optimizes p^T Q p over the simplex by
  enumerating every face and solving its critical (KKT) system exactly.
* :func:`qt_decide` answers the quadratic-threshold question through the
  intermediate value theorem: some p has p^T M p = 1 iff min <= 1 <= max.
* :func:`find_singular_combination` turns a 'yes' answer into an exact
  singular point of the nonsingularity polytope (coordinates in Q(sqrt c)).
* :func:`polytope_hurwitz_check` decides stability exactly for stability
  gadgets and falls back to vertex tests plus a numeric search otherwise.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, FieldMismatch, NoCertificate, SizeCapExceeded
from .gadgets import (
    PolytopeInstance,
    QtInstance,
    build_nonsingularity_gadget,
    qt_from_nonsingularity,
    unwrap_stability_gadget,
)
from .matrix import (
    RatMatrix,
    SimplexPoint,
    combine,
    combine_field,
    is_hurwitz,
    nullspace_vector,
    solve_field,
)
from .rational import Surd

log = logging.getLogger(__name__)

MAX_SIMPLEX_DIM = 20


@dataclass(frozen=True)
class QuadraticMaxResult:
    value: Fraction
    argpoint: SimplexPoint
    support: frozenset


def _face_critical_points(q: RatMatrix):
    """Yield (value, p) for every face whose critical system is nonsingular.

    On a face F the system is 2 Q_F p_F = lambda 1, 1^T p_F = 1.  Only
    solutions with p_F >= 0 are kept.  Faces with a singular system are
    skipped: there the form is affine along some tangent direction, so the
    optimum over that face is attained on a proper sub-face.
    """
    n = q.rows
    rows = q.tolist()
    one, zero = Fraction(1), Fraction(0)
    for size in range(1, n + 1):
        for face in itertools.combinations(range(n), size):
            system = [[2 * rows[i][j] for j in face] + [-one] for i in face]
            system.append([one] * size + [zero])
            sol = solve_field(system, [zero] * size + [one])
            if sol is None:
                continue
            pf = sol[:size]
            if any(x < 0 for x in pf):
                continue
            p = [zero] * n
            for i, x in zip(face, pf):
                p[i] = x
            # on the face p^T Q p = lambda/2 * sum(p) = lambda / 2
            yield sol[size] / 2, p


def _check_form(q: RatMatrix):
    if not q.is_square:
        raise DimensionMismatch("quadratic form must be square")
    if q.rows > MAX_SIMPLEX_DIM:
        raise SizeCapExceeded(f"simplex dimension {q.rows} exceeds {MAX_SIMPLEX_DIM}")
    if not q.is_symmetric():
        # p^T Q p only sees the symmetric part
        q = (q + q.T).scale(Fraction(1, 2))
    return q


def _result(value, p) -> QuadraticMaxResult:
    pt = SimplexPoint(tuple(p))
    return QuadraticMaxResult(value, pt, frozenset(pt.support))


def simplex_quadratic_bounds(q: RatMatrix) -> tuple[QuadraticMaxResult, QuadraticMaxResult]:
    """Exact (minimum, maximum) of p^T Q p over the simplex in one face sweep.

    Ties keep the first candidate found, i.e. the one with the smallest
    support size and then the lexicographically first face.
    """
    q = _check_form(q)
    best_lo = best_hi = None
    for value, p in _face_critical_points(q):
        if best_lo is None or value < best_lo[0]:
            best_lo = (value, p)
        if best_hi is None or value > best_hi[0]:
            best_hi = (value, p)
    return _result(*best_lo), _result(*best_hi)


def simplex_quadratic_extrema_exact(q: RatMatrix, direction: str = "max") -> QuadraticMaxResult:
    if direction not in ("max", "min"):
        raise ValueError("direction must be 'max' or 'min'")
    lo, hi = simplex_quadratic_bounds(q)
    return hi if direction == "max" else lo


def simplex_quadratic_max_exact(q: RatMatrix) -> QuadraticMaxResult:
    return simplex_quadratic_extrema_exact(q, "max")


def qt_decide(q: QtInstance) -> bool:
    """Is p^T M p = 1 for some p in the simplex (M = inverse of q.minv)?"""
    lo, hi = simplex_quadratic_bounds(q.form_matrix())
    return hi.value >= 1 and lo.value <= 1


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class SingularityCertificate:
    """Simplex point p and kernel vector v with (sum_i p_i X_i) v = 0.

    Coordinates are Fractions, or Surds sharing the single radicand ``radicand``
    (0 means everything is rational).
    """

    weights: tuple
    kernel: tuple
    radicand: int = 0
    instance_sha256: Optional[str] = None


def _segment_root(m: RatMatrix, p0: Sequence[Fraction], p1: Sequence[Fraction]):
    """Parameter t in [0, 1] with f(t) = 1 on the segment p0 -> p1, f = p^T M p.

    Requires f(p0) <= 1 <= f(p1).  Returns a Fraction or a Surd.
    """
    d = [b - a for a, b in zip(p0, p1)]
    qa = m.quadratic_form(d)
    qb = 2 * sum(x * y for x, y in zip(p0, m @ d))
    qc = m.quadratic_form(p0) - 1
    if qc == 0:
        return Fraction(0)
    if qa + qb + qc == 0:
        return Fraction(1)
    if qa == 0:
        return -qc / qb
    disc = qb * qb - 4 * qa * qc
    root = Surd.sqrt(disc)
    for sgn in (1, -1):
        t = (root * sgn - qb) / (2 * qa)
        if 0 <= t <= 1:
            return t.a if t.is_rational else t
    raise AssertionError("no root on the segment despite a sign change")


def find_singular_combination(q: QtInstance) -> SingularityCertificate:
    """Exact singular point of the nonsingularity polytope built from ``q``.

    The minimizer and maximizer of p^T M p bracket the value 1; the quadratic
    along the segment joining them is solved exactly, and the kernel of
    X(p) = [[M^{-1}, p], [p^T, 1]] is computed over Q(sqrt c).
    """
    m = q.form_matrix()
    lo, hi = simplex_quadratic_bounds(m)
    if not (lo.value <= 1 <= hi.value):
        raise NoCertificate("no simplex point reaches p^T M p = 1")
    t = _segment_root(m, lo.argpoint.weights, hi.argpoint.weights)
    p = tuple(a + t * (b - a) for a, b in zip(lo.argpoint, hi.argpoint))
    radicand = t.c if isinstance(t, Surd) else 0
    gadget = build_nonsingularity_gadget(q)
    xp = combine_field(p, gadget.matrices)
    kernel = nullspace_vector(xp)
    if kernel is None:
        raise AssertionError("combination is not singular; arithmetic error")
    from .formats import instance_sha256

    return SingularityCertificate(SimplexPoint(p).weights, tuple(kernel), radicand, instance_sha256(gadget))


def _radicand_of(values) -> int:
    cs = {v.c for v in values if isinstance(v, Surd) and v.c != 0}
    if len(cs) > 1:
        raise FieldMismatch(f"certificate mixes radicands {sorted(cs)}")
    return cs.pop() if cs else 0


def verify_singularity_certificate(cert: SingularityCertificate, inst: PolytopeInstance) -> bool:
    """Independent exact re-check of a certificate against a polytope."""
    w = tuple(cert.weights)
    v = tuple(cert.kernel)
    if len(w) != inst.k or len(v) != inst.dim:
        raise DimensionMismatch("certificate does not match the instance dimensions")
    c = _radicand_of(w + v)
    if c not in (0, cert.radicand):
        raise FieldMismatch(f"coordinates use radicand {c}, certificate declares {cert.radicand}")
    if any(x < 0 for x in w) or sum(w[1:], w[0]) != 1:
        return False
    if all(x == 0 for x in v):
        return False
    xp = combine_field(w, inst.matrices)
    for row in xp:
        acc = 0
        for a, b in zip(row, v):
            if a != 0 and b != 0:
                acc = acc + a * b
        if acc != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# polytope stability


@dataclass(frozen=True)
class StabilityVerdict:
    """Outcome of a polytope Hurwitz check.

    ``outcome`` is one of 'exactly-resolved', 'unstable-combination-found' or
    'no-counterexample-found'; ``stable`` is True/False when known and None
    when the check was incomplete.
    """

    outcome: str
    method: str
    stable: Optional[bool]
    weights: Optional[tuple] = None
    max_real_part: Optional[float] = None
    certificate: Optional[SingularityCertificate] = None


def _max_real(mats: np.ndarray, w: np.ndarray) -> float:
    return float(np.max(np.linalg.eigvals(np.tensordot(w, mats, axes=1)).real))


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, len(v) + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def rationalize_simplex(w: np.ndarray, max_den: int = 10**6) -> SimplexPoint:
    """Nearby exact simplex point with denominators about ``max_den``."""
    fr = [Fraction(float(x)).limit_denominator(max_den) if x > 0 else Fraction(0) for x in w]
    s = sum(fr)
    if s == 0:
        fr = [Fraction(1, len(fr))] * len(fr)
        s = Fraction(1)
    return SimplexPoint(tuple(x / s for x in fr))


def _ascend(mats, w, tol=1e-10, h=1e-6, max_iter=500):
    """Projected gradient ascent on the largest real eigenvalue part."""
    val = _max_real(mats, w)
    step = 0.1
    k = len(w)
    for _ in range(max_iter):
        if val >= 0 or step < tol:
            break
        grad = np.empty(k)
        for i in range(k):
            e = np.zeros(k)
            e[i] = h
            grad[i] = (_max_real(mats, w + e) - _max_real(mats, w - e)) / (2 * h)
        while step >= tol:
            cand = project_simplex(w + step * grad)
            cval = _max_real(mats, cand)
            if cval > val:
                w, val = cand, cval
                break
            step /= 2
    return w, val


def polytope_hurwitz_check(inst: PolytopeInstance, budget: int = 20, seed: int = 0) -> StabilityVerdict:
    """Decide (or search for a counterexample to) stability of every convex combination."""
    k = inst.k
    for i, a in enumerate(inst.matrices):
        if not is_hurwitz(a):
            w = SimplexPoint.vertex(k, i)
            mr = float(np.max(np.linalg.eigvals(a.to_numpy()).real))
            return StabilityVerdict("unstable-combination-found", "vertex", False, w.weights, mr)
    if k == 1:
        return StabilityVerdict("exactly-resolved", "vertex", True)

    if inst.kind == "stability-gadget":
        inner = unwrap_stability_gadget(inst)
        qt = qt_from_nonsingularity(inner.matrices) if inner is not None else None
        if qt is not None:
            if not qt_decide(qt):
                return StabilityVerdict("exactly-resolved", "exact-via-gadget-structure", True)
            cert = find_singular_combination(qt)
            # B(p) has the eigenvector (v, 0) with eigenvalue exactly 0
            return StabilityVerdict(
                "unstable-combination-found", "exact-via-gadget-structure", False,
                cert.weights, 0.0, cert,
            )

    mats = np.stack([a.to_numpy() for a in inst.matrices])
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        w, val = _ascend(mats, rng.dirichlet(np.ones(k)))
        if val < -1e-9:
            continue
        exact = rationalize_simplex(w)
        if not is_hurwitz(combine(exact.weights, inst.matrices)):
            mr = _max_real(mats, exact.to_numpy())
            return StabilityVerdict("unstable-combination-found", "vertex+search", False, exact.weights, mr)
        log.debug("numeric candidate at %s did not survive exact re-check", w)
    return StabilityVerdict("no-counterexample-found", "vertex+search", None)
