"""From a graph to a threshold question and back.

We take a small graph, turn each candidate clique size into a quadratic
threshold instance, and let the exact simplex oracle answer.  The first
threshold that is accepted, scanning from the top, gives the clique number.
"""
from fractions import Fraction

from polystab import Graph, build_qt_instance, max_clique_exact, qt_decide, threshold_ladder
from polystab.graph import adjacency_matrix
from polystab.oracles import simplex_quadratic_extrema_exact

# two triangles sharing an edge, plus a pendant vertex
g = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (1, 3), (2, 3), (3, 4)])
omega, witness = max_clique_exact(g)
print("clique number by branch and bound:", omega, "witness", sorted(witness))

# the continuous view: max of p^T A p over the simplex is 1 - 1/omega
best = simplex_quadratic_extrema_exact(adjacency_matrix(g))
print("max p^T A p =", best.value, "attained on", sorted(best.support))

print("\n tau    accepted")
for tau in reversed(threshold_ladder(g.n)):
    if tau == 0:
        break
    q = build_qt_instance(g, tau)
    print(f" {str(tau):5}  {qt_decide(q)}")

print("\nfirst accepted tau 2/3 means omega =", 1 / (1 - Fraction(2, 3)))
