"""Simulation of switched systems x' = (sum_i p_i(t) B_i) x on stability gadgets.

Switching signals are piecewise constant: on each segment the state is
propagated exactly by a matrix exponential.  Norm monitoring is in the
Euclidean norm only; the decay exponent reported here is an empirical
l2 quantity and not the invariant norm of the absolute-stability problem.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, InvalidCertificate, PreconditionNotVerified
from .gadgets import PolytopeInstance, unwrap_stability_gadget
from .matrix import RatMatrix, is_negative_semidefinite
from .oracles import SingularityCertificate, verify_singularity_certificate

MONOTONE_TOL = 1e-8


def expm(b, t: float = 1.0) -> np.ndarray:
    """exp(B t) by scaling and squaring with a Pade kernel."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    arr = b.to_numpy() if isinstance(b, RatMatrix) else np.asarray(b, dtype=float)
    return scipy.linalg.expm(arr * t)


@dataclass(frozen=True)
class SwitchingSignal:
    """Piecewise-constant control: ``controls[j]`` is active on [t_j, t_{j+1})."""

    breakpoints: np.ndarray
    controls: np.ndarray

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        ctrl = np.asarray(self.controls, dtype=float)
        if ctrl.ndim == 1:
            ctrl = ctrl.reshape(0, 0) if ctrl.size == 0 else ctrl[None, :]
        if bp.ndim != 1 or bp.size < 1 or bp[0] != 0:
            raise ValueError("breakpoints must start at 0")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if ctrl.shape[0] != bp.size - 1:
            raise ValueError("one control per segment required")
        if ctrl.size and (np.any(ctrl < -1e-12) or np.any(np.abs(ctrl.sum(axis=1) - 1) > 1e-9)):
            raise ValueError("controls must lie in the simplex")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "controls", ctrl)

    @property
    def horizon(self) -> float:
        return float(self.breakpoints[-1])

    @classmethod
    def constant(cls, p: Sequence[float], horizon: float = 1.0) -> "SwitchingSignal":
        return cls(np.array([0.0, horizon]), np.asarray([list(map(float, p))]))

    @classmethod
    def empty(cls) -> "SwitchingSignal":
        return cls(np.array([0.0]), np.zeros((0, 0)))


def random_signal(k: int, rng: np.random.Generator, horizon: float = 1.0, max_segments: int = 32) -> SwitchingSignal:
    """Uniform segment count in 1..max_segments, uniform breakpoints, Dirichlet(1) controls."""
    m = int(rng.integers(1, max_segments + 1))
    inner = np.sort(rng.uniform(0.0, horizon, size=m - 1))
    bp = np.concatenate([[0.0], inner, [horizon]])
    # drop coincident breakpoints (probability zero, but keep the invariant)
    keep = np.concatenate([[True], np.diff(bp) > 0])
    bp = bp[keep]
    return SwitchingSignal(bp, rng.dirichlet(np.ones(k), size=bp.size - 1))


def random_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.standard_normal(dim)
    return x / np.linalg.norm(x)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray

    @property
    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)


def simulate(gadget: PolytopeInstance, signal: SwitchingSignal, x0, samples_per_segment: int = 8) -> Trajectory:
    """Propagate x0 through the signal, sampling each segment uniformly."""
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (gadget.dim,):
        raise DimensionMismatch(f"x0 has shape {x0.shape}, gadget dim is {gadget.dim}")
    if abs(np.linalg.norm(x0) - 1.0) > 1e-12:
        raise ValueError("x0 must have unit 2-norm")
    if signal.controls.size and signal.controls.shape[1] != gadget.k:
        raise DimensionMismatch("signal dimension differs from the number of matrices")
    if samples_per_segment < 1:
        raise ValueError("need at least one sample per segment")
    mats = np.stack([b.to_numpy() for b in gadget.matrices])
    times = [0.0]
    states = [x0]
    x = x0
    for j, p in enumerate(signal.controls):
        t0, t1 = signal.breakpoints[j], signal.breakpoints[j + 1]
        h = (t1 - t0) / samples_per_segment
        step = expm(np.tensordot(p, mats, axes=1), h)
        for s in range(1, samples_per_segment + 1):
            x = step @ x
            times.append(t0 + s * h if s < samples_per_segment else t1)
            states.append(x)
    return Trajectory(np.array(times), np.array(states))


@dataclass(frozen=True)
class DecayReport:
    """Empirical l2 behaviour of one trajectory.

    ``decay_exponent`` is -ln(||x(T)||) / T; it is an l2 surrogate and says
    nothing about the existence of a contracting norm.
    """

    final_norm: float
    max_increase: float
    decay_exponent: float
    violation: bool

    def to_json(self) -> dict:
        return {
            "final_norm": self.final_norm,
            "max_increase": self.max_increase,
            "decay_exponent": self.decay_exponent,
            "violation": self.violation,
            "note": "empirical l2 decay exponent; not an invariant-norm certificate",
        }


@functools.lru_cache(maxsize=64)
def _first_non_dissipative(matrices: tuple) -> int | None:
    for i, b in enumerate(matrices):
        if not is_negative_semidefinite(b + b.T):
            return i
    return None


def check_dissipative(gadget: PolytopeInstance) -> None:
    """Raise PreconditionNotVerified unless every B_i + B_i^T is negative semidefinite."""
    i = _first_non_dissipative(gadget.matrices)
    if i is not None:
        raise PreconditionNotVerified(f"B_{i + 1} + B_{i + 1}^T has a positive eigenvalue")


def check_monotone_norm(traj: Trajectory, gadget: PolytopeInstance, tol: float = MONOTONE_TOL) -> DecayReport:
    check_dissipative(gadget)
    norms = traj.norms
    inc = float(np.max(np.diff(norms))) if norms.size > 1 else 0.0
    inc = max(inc, 0.0)
    final = float(norms[-1])
    horizon = float(traj.times[-1])
    rate = -math.log(final) / horizon if horizon > 0 and final > 0 else (math.inf if horizon > 0 else 0.0)
    return DecayReport(final, inc, rate, inc > tol)


def lie_product_gap(gadget: PolytopeInstance, p: Sequence, m: int) -> float:
    """Spectral norm of (prod_i exp(p_i B_i / m))^m - exp(sum_i p_i B_i)."""
    if m < 1:
        raise ValueError("m must be positive")
    p = np.array([float(x) for x in p])
    mats = [b.to_numpy() for b in gadget.matrices]
    factor = np.eye(gadget.dim)
    for w, b in zip(p, mats):
        factor = factor @ expm(b, w / m)
    product = np.linalg.matrix_power(factor, m)
    target = expm(np.tensordot(p, np.stack(mats), axes=1))
    return float(np.linalg.norm(product - target, 2))


def stationary_certificate(cert: SingularityCertificate, gadget: PolytopeInstance) -> tuple[np.ndarray, SwitchingSignal]:
    """Initial state and signal whose trajectory never leaves the unit sphere.

    With (sum_i p_i A_i) v = 0, the state (v, 0) is an equilibrium of the
    gadget combination [[0, A^T], [-A, -I]] at the same weights.
    """
    inner = unwrap_stability_gadget(gadget)
    if inner is None:
        raise InvalidCertificate("gadget is not of the form [[0, A^T], [-A, -I]]")
    try:
        ok = verify_singularity_certificate(cert, inner)
    except (DimensionMismatch, ValueError) as exc:
        raise InvalidCertificate(str(exc)) from exc
    if not ok:
        raise InvalidCertificate("certificate does not verify against the gadget's polytope")
    v = np.array([float(x) for x in cert.kernel])
    x0 = np.concatenate([v / np.linalg.norm(v), np.zeros(inner.dim)])
    p = np.array([float(x) for x in cert.weights])
    p = np.clip(p, 0.0, None)
    p /= p.sum()
    return x0, SwitchingSignal.constant(p)
