"""Independent oracles shared by the tests."""
import itertools
from fractions import Fraction

from polystab.matrix import RatMatrix


def cofactor_det(rows):
    """Laplace expansion along the first row; independent of the elimination code."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = Fraction(0)
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * cofactor_det(minor)
    return total


def brute_clique_number(n, edges):
    """Largest vertex subset with every pair adjacent, by plain enumeration."""
    edges = {frozenset(e) for e in edges}
    best = 0
    for mask in range(1, 1 << n):
        vs = [v for v in range(n) if mask >> v & 1]
        if len(vs) > best and all(frozenset(p) in edges for p in itertools.combinations(vs, 2)):
            best = len(vs)
    return best


def mat(rows):
    return RatMatrix.from_rows(rows)
