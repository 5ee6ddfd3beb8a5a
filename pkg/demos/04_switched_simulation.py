"""Switched trajectories on stability gadgets.

Every B_i + B_i^T is negative semidefinite, so the Euclidean norm never grows
along any switching signal.  If every combination is nonsingular the state
decays; a singular combination gives an equilibrium that stays on the sphere.
"""
from fractions import Fraction

import numpy as np

from polystab import Graph, build_nonsingularity_gadget, build_qt_instance, build_stability_gadget
from polystab.oracles import find_singular_combination, qt_decide
from polystab.switched import (
    check_monotone_norm,
    random_signal,
    random_unit_vector,
    simulate,
    stationary_certificate,
)

rng = np.random.default_rng(1)
g = Graph.cycle(5)  # clique number 2

# tau = 2/3 asks for a triangle: 'no', every combination is nonsingular
q_no = build_qt_instance(g, Fraction(2, 3))
gad = build_stability_gadget(build_nonsingularity_gadget(q_no))
print("qt_decide(tau=2/3):", qt_decide(q_no))
finals = []
for _ in range(50):
    traj = simulate(gad, random_signal(gad.k, rng), random_unit_vector(gad.dim, rng))
    rep = check_monotone_norm(traj, gad)
    assert not rep.violation
    finals.append(rep.final_norm)
print(f"50 random signals: ||x(1)|| in [{min(finals):.4f}, {max(finals):.4f}]")

# tau = 1/2 asks for an edge: 'yes', and the certificate gives a stuck trajectory
q_yes = build_qt_instance(g, Fraction(1, 2))
gad = build_stability_gadget(build_nonsingularity_gadget(q_yes))
x0, sig = stationary_certificate(find_singular_combination(q_yes), gad)
traj = simulate(gad, sig, x0)
print(f"certificate trajectory: ||x(1)|| = {traj.norms[-1]:.17g}")
print("lower block at t=1:", np.abs(traj.states[-1][gad.dim // 2:]).max())
