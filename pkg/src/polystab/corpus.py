"""Seeded generators for graphs, rational matrices and test corpora."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .graph import Graph
from .matrix import RatMatrix


def random_graph(n: int, rng: random.Random, density: float | None = None) -> Graph:
    density = rng.uniform(0.2, 0.8) if density is None else density
    return Graph.from_edges(n, (e for e in itertools.combinations(range(n), 2) if rng.random() < density))


def random_rational(rng: random.Random, max_num: int = 9, max_den: int = 5) -> Fraction:
    return Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))


def random_rational_matrix(rows: int, cols: int | None, rng: random.Random, **kw) -> RatMatrix:
    cols = rows if cols is None else cols
    return RatMatrix(rows, cols, (random_rational(rng, **kw) for _ in range(rows * cols)))


def random_singular_matrix(n: int, rng: random.Random, **kw) -> RatMatrix:
    """Random n x n matrix whose last row is a rational combination of the others."""
    if n == 1:
        return RatMatrix.zeros(1)
    rows = random_rational_matrix(n - 1, n, rng, **kw).tolist()
    coef = [random_rational(rng, **kw) for _ in range(n - 1)]
    last = [sum((c * r[j] for c, r in zip(coef, rows)), Fraction(0)) for j in range(n)]
    rows.append(last)
    # put the dependent row somewhere random so elimination order varies
    k = rng.randrange(n)
    rows[k], rows[-1] = rows[-1], rows[k]
    return RatMatrix.from_rows(rows)


def petersen_subgraphs() -> list[Graph]:
    """Induced 8-vertex subgraphs of the Petersen graph (one per removed pair type)."""
    p = Graph.petersen()
    drops = [(0, 1), (0, 2), (0, 5), (5, 6), (5, 7)]
    return [p.induced(v for v in range(10) if v not in d) for d in drops]


def clique_corpus(seed: int = 2024, random_count: int = 50) -> list[tuple[str, Graph]]:
    """Named graphs: seeded random graphs on 2..8 vertices plus structured ones."""
    rng = random.Random(seed)
    out = []
    for i in range(random_count):
        n = rng.randint(2, 8)
        out.append((f"random-{i:02d}-n{n}", random_graph(n, rng)))
    out += [(f"K{n}", Graph.complete(n)) for n in range(2, 9)]
    out += [("C5", Graph.cycle(5)), ("C7", Graph.cycle(7))]
    out += [(f"petersen-sub-{i}", g) for i, g in enumerate(petersen_subgraphs())]
    return out
