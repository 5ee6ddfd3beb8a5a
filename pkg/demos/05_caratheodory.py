"""Shrinking the support of a convex combination of matrices.

Any point of the convex hull of k matrices in R^{n x n} is a combination of
at most n^2 + 1 of them.  The reduction is exact: the combined matrix is the
same Fraction for Fraction.
"""
import random

from polystab import PolytopeInstance, caratheodory_reduce
from polystab.corpus import random_rational_matrix
from polystab.gadgets import random_simplex_point

rng = random.Random(3)
n, k = 2, 14
inst = PolytopeInstance(tuple(random_rational_matrix(n, None, rng) for _ in range(k)), "general")
w = random_simplex_point(k, rng, max_den=9)
reduced = caratheodory_reduce(inst, w.weights)

print("support before:", len(w.support), " after:", len(reduced.support), " bound:", n * n + 1)
print("kept weights:", {i + 1: str(reduced.weights[i]) for i in reduced.support})
print("same matrix:", inst.combination(w.weights) == inst.combination(reduced.weights))
print(inst.combination(reduced.weights))
