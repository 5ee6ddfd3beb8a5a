import math
from fractions import Fraction as F

import numpy as np
import pytest

from helpers import mat
from polystab.errors import DimensionMismatch, InvalidCertificate, PreconditionNotVerified
from polystab.gadgets import (
    PolytopeInstance,
    QtInstance,
    build_nonsingularity_gadget,
    build_qt_instance,
    build_stability_gadget,
)
from polystab.graph import Graph
from polystab.matrix import RatMatrix
from polystab.oracles import SingularityCertificate, find_singular_combination
from polystab.switched import (
    SwitchingSignal,
    check_monotone_norm,
    expm,
    lie_product_gap,
    random_signal,
    random_unit_vector,
    simulate,
    stationary_certificate,
)


def taylor_expm(a, t, terms=60):
    # independent oracle: truncated series, fine for small ||A t||
    out = np.eye(a.shape[0])
    term = np.eye(a.shape[0])
    for k in range(1, terms):
        term = term @ a * (t / k)
        out = out + term
    return out


def scalar_gadget(a):
    return build_stability_gadget(PolytopeInstance((mat([[a]]),), "general"))


# -- expm ------------------------------------------------------------------------

def test_expm_examples():
    assert np.allclose(expm(RatMatrix.zeros(2)), np.eye(2))
    assert np.allclose(expm(RatMatrix.diag([1, -1]), 2.0), np.diag([math.exp(2), math.exp(-2)]))
    rot = expm(mat([[0, 1], [-1, 0]]), math.pi / 2)
    assert np.allclose(rot, [[0, 1], [-1, 0]], atol=1e-14)
    with pytest.raises(ValueError):
        expm(RatMatrix.identity(2), -1.0)


def test_expm_matches_series_and_semigroup():
    rng = np.random.default_rng(0)
    for _ in range(10):
        a = rng.normal(size=(4, 4))
        assert np.allclose(expm(a, 0.3), taylor_expm(a, 0.3), rtol=1e-12, atol=1e-12)
        assert np.allclose(expm(a, 0.7), expm(a, 0.3) @ expm(a, 0.4), rtol=1e-10, atol=1e-12)


# -- signals ---------------------------------------------------------------------

def test_signal_validation():
    with pytest.raises(ValueError):
        SwitchingSignal(np.array([0.0, 0.5, 0.5]), np.array([[1.0], [1.0]]))
    with pytest.raises(ValueError):
        SwitchingSignal(np.array([0.1, 1.0]), np.array([[1.0]]))
    with pytest.raises(ValueError):
        SwitchingSignal(np.array([0.0, 1.0]), np.array([[0.7, 0.7]]))


def test_random_signal_shape():
    rng = np.random.default_rng(3)
    for _ in range(50):
        s = random_signal(3, rng)
        assert s.horizon == 1.0
        assert 1 <= s.controls.shape[0] <= 32
        assert np.allclose(s.controls.sum(axis=1), 1)


# -- simulation ---------------------------------------------------------------------

def test_empty_signal_keeps_state():
    g = scalar_gadget(1)
    traj = simulate(g, SwitchingSignal.empty(), [1.0, 0.0])
    assert traj.times.tolist() == [0.0]
    assert np.array_equal(traj.states, [[1.0, 0.0]])


def test_zero_block_is_stationary_on_top():
    # A = [0] gives B = [[0, 0], [0, -1]]; (1, 0) never moves
    traj = simulate(scalar_gadget(0), SwitchingSignal.constant([1.0]), [1.0, 0.0])
    assert np.allclose(traj.states[-1], [1.0, 0.0], atol=1e-15)


def test_unit_block_matches_eigendecomposition():
    b = np.array([[0.0, 1.0], [-1.0, -1.0]])
    lam, vec = np.linalg.eig(b)
    x0 = np.array([0.6, 0.8])
    expected = (vec @ np.diag(np.exp(lam)) @ np.linalg.solve(vec, x0)).real
    traj = simulate(scalar_gadget(1), SwitchingSignal.constant([1.0]), x0, samples_per_segment=4)
    assert np.allclose(traj.states[-1], expected, rtol=1e-12, atol=1e-13)
    assert traj.norms[-1] < 1


def test_simulate_input_checks():
    g = scalar_gadget(1)
    with pytest.raises(DimensionMismatch):
        simulate(g, SwitchingSignal.constant([1.0]), [1.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        simulate(g, SwitchingSignal.constant([1.0]), [2.0, 0.0])
    with pytest.raises(DimensionMismatch):
        simulate(g, SwitchingSignal.constant([0.5, 0.5]), [1.0, 0.0])


def test_switching_concatenates_segments():
    a1, a2 = mat([[1]]), mat([[2]])
    g = build_stability_gadget(PolytopeInstance((a1, a2), "general"))
    sig = SwitchingSignal(np.array([0.0, 0.25, 1.0]), np.array([[1.0, 0.0], [0.3, 0.7]]))
    x0 = np.array([0.0, 1.0])
    traj = simulate(g, sig, x0)
    b1, b2 = (m.to_numpy() for m in g.matrices)
    expected = taylor_expm(0.3 * b1 + 0.7 * b2, 0.75) @ taylor_expm(b1, 0.25) @ x0
    assert np.allclose(traj.states[-1], expected, rtol=1e-12, atol=1e-14)


# -- monotonicity -------------------------------------------------------------------

def test_monotone_norm_report():
    rng = np.random.default_rng(5)
    q = build_qt_instance(Graph.empty(3), F(1, 2))
    g = build_stability_gadget(build_nonsingularity_gadget(q))
    traj = simulate(g, random_signal(g.k, rng), random_unit_vector(g.dim, rng))
    rep = check_monotone_norm(traj, g)
    assert not rep.violation
    assert rep.final_norm < 1
    assert rep.decay_exponent > 0
    assert "empirical" in rep.to_json()["note"]


def test_monotone_precondition():
    unstable = PolytopeInstance((mat([[1, 0], [0, -1]]),), "general")
    traj = simulate(unstable, SwitchingSignal.constant([1.0]), [1.0, 0.0])
    with pytest.raises(PreconditionNotVerified):
        check_monotone_norm(traj, unstable)


# -- Lie product ----------------------------------------------------------------------

def test_lie_gap_commuting_cases():
    one = scalar_gadget(1)
    assert lie_product_gap(one, [1], 5) < 1e-14
    twin = build_stability_gadget(PolytopeInstance((mat([[1]]), mat([[1]])), "general"))
    assert lie_product_gap(twin, [0.5, 0.5], 7) < 1e-14
    with pytest.raises(ValueError):
        lie_product_gap(one, [1], 0)


def test_lie_gap_first_order():
    g = build_stability_gadget(PolytopeInstance((mat([[1, 0], [0, 2]]), mat([[0, 1], [1, 0]])), "general"))
    gaps = [lie_product_gap(g, [0.5, 0.5], m) for m in (8, 16, 32, 64)]
    assert gaps[0] > 1e-6
    for a, b in zip(gaps, gaps[1:]):
        assert 1.8 < a / b < 2.2


# -- stationary certificate ----------------------------------------------------------------

def test_stationary_certificate_trivial():
    q = QtInstance(mat([[1]]))
    gadget = build_stability_gadget(build_nonsingularity_gadget(q))
    x0, sig = stationary_certificate(find_singular_combination(q), gadget)
    assert np.allclose(x0, [1 / math.sqrt(2), -1 / math.sqrt(2), 0, 0])
    traj = simulate(gadget, sig, x0)
    assert abs(traj.norms[-1] - 1) < 1e-12
    assert np.max(np.abs(traj.states[:, 2:])) < 1e-12


def test_stationary_certificate_k3():
    q = build_qt_instance(Graph.complete(3), F(1, 2))
    gadget = build_stability_gadget(build_nonsingularity_gadget(q))
    x0, sig = stationary_certificate(find_singular_combination(q), gadget)
    traj = simulate(gadget, sig, x0)
    assert abs(traj.norms[-1] - 1) <= 1e-9
    assert np.max(np.abs(traj.states[-1][4:])) <= 1e-9


def test_stationary_certificate_rejects():
    q = QtInstance(mat([[1]]))
    gadget = build_stability_gadget(build_nonsingularity_gadget(q))
    with pytest.raises(InvalidCertificate):
        stationary_certificate(SingularityCertificate((F(1),), (F(1), F(1))), gadget)
    with pytest.raises(InvalidCertificate):
        stationary_certificate(SingularityCertificate((F(1),), (F(1),)), gadget)
    plain = PolytopeInstance((RatMatrix.identity(4),), "general")
    with pytest.raises(InvalidCertificate):
        stationary_certificate(find_singular_combination(q), plain)
