"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (add ``-s`` to interleave the
lines with pytest's own output; they are printed either way).
"""
import random
import time
from fractions import Fraction as F

import numpy as np
import pytest

from polystab.corpus import clique_corpus, random_graph, random_rational_matrix, random_singular_matrix
from polystab.gadgets import (
    PolytopeInstance,
    build_nonsingularity_gadget,
    build_qt_instance,
    build_stability_gadget,
    caratheodory_reduce,
    random_simplex_point,
    recover_clique_number,
    schur_identity_holds,
    select_perturbation,
    spectrum_relation_residual,
    stability_block,
)
from polystab.graph import Graph, adjacency_matrix, max_clique_exact
from polystab.matrix import RatMatrix, SimplexPoint, is_hurwitz, mat_determinant
from polystab.oracles import (
    find_singular_combination,
    qt_decide,
    simplex_quadratic_extrema_exact,
    verify_singularity_certificate,
)
from polystab.switched import (
    check_monotone_norm,
    lie_product_gap,
    random_signal,
    random_unit_vector,
    simulate,
    stationary_certificate,
)

pytestmark = pytest.mark.slow


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}  {title}  {detail}".rstrip())
        assert ok, f"criterion {number} failed: {detail}"

    return emit


@pytest.fixture(scope="module")
def corpus():
    return clique_corpus()


def block_test_matrices(seed=101, total=200, singular=20):
    rng = random.Random(seed)
    out = []
    for t in range(total):
        n = rng.randint(1, 5)
        if t < singular:
            # n = 1 singular means the zero matrix
            a = random_singular_matrix(n, rng) if n > 1 else RatMatrix.zeros(1)
        else:
            a = random_rational_matrix(n, None, rng)
        out.append(a)
    return out


def test_c1_reduction_recovers_clique_number(report, corpus):
    start = time.perf_counter()
    bad = [name for name, g in corpus if recover_clique_number(g) != max_clique_exact(g)[0]]
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 300
    report(1, "clique number via the reduction pipeline", ok,
           f"{len(corpus) - len(bad)}/{len(corpus)} graphs agree, {elapsed:.1f}s (limit 300s) {bad[:5] or ''}")


def test_c2_stability_block_hurwitz_iff_nonsingular(report):
    mats = block_test_matrices()
    agree = sum(is_hurwitz(stability_block(a)) == (mat_determinant(a) != 0) for a in mats)
    singular = sum(mat_determinant(a) == 0 for a in mats)
    report(2, "B Hurwitz <=> A nonsingular", agree == len(mats),
           f"{agree}/{len(mats)} agree, {singular} singular cases")


def test_c3_spectrum_relation(report):
    worst = max(spectrum_relation_residual(a) for a in block_test_matrices())
    report(3, "|lam^2 + lam + s^2| <= 1e-7", worst <= 1e-7, f"worst residual {worst:.2e}")


def k3_gadget_points():
    pts = [SimplexPoint.vertex(3, i) for i in range(3)]
    pts.append(SimplexPoint.uniform(3))
    pts += [SimplexPoint.uniform(3, pair) for pair in ((0, 1), (0, 2), (1, 2))]
    rng = random.Random(7)
    pts += [random_simplex_point(3, rng) for _ in range(20)]
    return pts


def test_c4_schur_identity(report):
    rng = random.Random(202)
    checked = failures = 0
    while checked < 100:
        n = rng.randint(1, 6)
        m = random_rational_matrix(n, None, rng)
        if mat_determinant(m) == 0:
            continue
        failures += not schur_identity_holds(m, random_simplex_point(n, rng).weights)
        checked += 1
    q = build_qt_instance(Graph.complete(3), F(1, 2))
    m_tau = q.form_matrix()
    gadget = build_nonsingularity_gadget(q)
    det_m = mat_determinant(m_tau)
    pts = k3_gadget_points()
    k3_fail = sum(
        det_m * mat_determinant(gadget.combination(p.weights)) != 1 - m_tau.quadratic_form(p.weights) for p in pts
    )
    # at the exact singular point both sides vanish: the kernel is nonzero and p^T M p = 1
    cert = find_singular_combination(q)
    singular_ok = verify_singularity_certificate(cert, gadget)
    ok = failures == 0 and k3_fail == 0 and singular_ok
    report(4, "det(M) det(X(p)) = 1 - p^T M p", ok,
           f"{100 - failures}/100 random, {len(pts) - k3_fail}/{len(pts)} K3 points, singular point {singular_ok}")


def test_c5_motzkin_straus(report, corpus):
    bad = []
    for name, g in corpus:
        omega, _ = max_clique_exact(g)
        res = simplex_quadratic_extrema_exact(adjacency_matrix(g))
        if res.value != 1 - F(1, omega) or not g.is_clique(res.support):
            bad.append(name)
    report(5, "max p^T A p = 1 - 1/omega with clique support", not bad,
           f"{len(corpus) - len(bad)}/{len(corpus)} graphs {bad[:5] or ''}")


def test_c6_sandwich_bounds(report, corpus):
    bad = []
    for name, g in corpus:
        omega, _ = max_clique_exact(g)
        istar, m_istar = select_perturbation(adjacency_matrix(g), g.n)
        top = simplex_quadratic_extrema_exact(m_istar).value
        base = 1 - F(1, omega)
        if not base <= top <= base + F(1, g.n * g.n + istar):
            bad.append(name)
    report(6, "max p^T M_i* p within [1 - 1/omega, 1 - 1/omega + 1/(n^2 + i*)]", not bad,
           f"{len(corpus) - len(bad)}/{len(corpus)} graphs {bad[:5] or ''}")


def switched_instances(seed=303):
    """Ten exactly-nonsingular and ten certified-singular gadgets with n <= 5."""
    rng = random.Random(seed)
    stable, singular = [], []
    while len(stable) < 10 or len(singular) < 10:
        g = random_graph(rng.randint(2, 5), rng)
        omega, _ = max_clique_exact(g)
        if omega < g.n and len(stable) < 10:
            q = build_qt_instance(g, 1 - F(1, omega + 1))
            if not qt_decide(q):
                stable.append(q)
        if omega >= 2 and len(singular) < 10:
            w = rng.randint(2, omega)
            q = build_qt_instance(g, 1 - F(1, w))
            if qt_decide(q):
                singular.append(q)
    return stable, singular


def test_c7_switched_dichotomy(report):
    start = time.perf_counter()
    stable, singular = switched_instances()
    rng = np.random.default_rng(404)
    worst_final = 0.0
    worst_increase = 0.0
    for q in stable:
        gadget = build_stability_gadget(build_nonsingularity_gadget(q))
        for _ in range(200):
            traj = simulate(gadget, random_signal(gadget.k, rng), random_unit_vector(gadget.dim, rng))
            rep = check_monotone_norm(traj, gadget)
            worst_final = max(worst_final, rep.final_norm)
            worst_increase = max(worst_increase, rep.max_increase)
    worst_drift = worst_leak = 0.0
    for q in singular:
        gadget = build_stability_gadget(build_nonsingularity_gadget(q))
        x0, sig = stationary_certificate(find_singular_combination(q), gadget)
        traj = simulate(gadget, sig, x0)
        worst_drift = max(worst_drift, abs(traj.norms[-1] - 1))
        worst_leak = max(worst_leak, float(np.max(np.abs(traj.states[-1][gadget.dim // 2:]))))
    elapsed = time.perf_counter() - start
    ok = (worst_final <= 1 - 1e-6 and worst_increase <= 1e-8
          and worst_drift <= 1e-9 and worst_leak <= 1e-9 and elapsed < 600)
    report(7, "switched gadget dichotomy", ok,
           f"nonsingular: max ||x(1)|| {worst_final:.6f}, max increase {worst_increase:.1e}; "
           f"singular: drift {worst_drift:.1e}, lower block {worst_leak:.1e}; {elapsed:.1f}s")


def lie_pairs(seed=505):
    rng = random.Random(seed)
    pairs = []
    while len(pairs) < 10:
        n = rng.randint(1, 3)
        a1, a2 = (random_rational_matrix(n, None, rng) for _ in range(2))
        b1, b2 = stability_block(a1), stability_block(a2)
        if b1 @ b2 != b2 @ b1:
            pairs.append(PolytopeInstance((b1, b2), "stability-gadget"))
    return pairs


def test_c8_lie_product_gap(report):
    worst = np.inf
    for gadget in lie_pairs():
        gaps = {m: lie_product_gap(gadget, [0.5, 0.5], m) for m in (8, 16, 32, 64, 128, 256)}
        worst = min(worst, min(gaps[m] / gaps[2 * m] for m in (8, 16, 32, 64, 128)))
    report(8, "gap(m)/gap(2m) >= 1.5", worst >= 1.5, f"smallest ratio {worst:.3f}")


def test_c9_caratheodory(report):
    rng = random.Random(606)
    bad = 0
    largest = 0
    for t in range(50):
        d = rng.randint(1, 3)
        bound = d * d + 1
        k = rng.randint(bound + 1, 3 * bound)
        mats = [random_rational_matrix(d, None, rng) for _ in range(k)]
        if t % 5 == 0:
            # some exact repeats exercise the duplicate merge
            mats[-1] = mats[0]
        inst = PolytopeInstance(tuple(mats), "general")
        w = random_simplex_point(k, rng).weights
        out = caratheodory_reduce(inst, w)
        largest = max(largest, len(out.support) - bound)
        bad += len(out.support) > bound or inst.combination(out.weights) != inst.combination(w)
    report(9, "support <= n^2 + 1 with exact reconstruction", bad == 0,
           f"{50 - bad}/50 instances, max (support - bound) = {largest}")
