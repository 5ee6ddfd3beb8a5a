"""Simple undirected graphs, DIMACS I/O and exact maximum cliques."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import FormatError, SelfLoopError, SizeCapExceeded
from .matrix import RatMatrix

DEFAULT_CLIQUE_CAP = 32


@dataclass(frozen=True)
class Graph:
    """Vertices are 0..n-1; edges are stored as sorted pairs (i < j)."""

    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise SelfLoopError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise FormatError(f"edge {e} has an endpoint outside [0, {self.n})")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edges(n, itertools.combinations(range(n), 2))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, frozenset())

    @classmethod
    def petersen(cls) -> "Graph":
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        return cls.from_edges(10, outer + spokes + inner)

    def induced(self, vertices: Iterable[int]) -> "Graph":
        keep = sorted(set(vertices))
        index = {v: k for k, v in enumerate(keep)}
        return Graph.from_edges(
            len(keep), ((index[i], index[j]) for i, j in self.edges if i in index and j in index)
        )

    def neighbors(self) -> list[set[int]]:
        nbrs = [set() for _ in range(self.n)]
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return nbrs

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(self.has_edge(a, b) for a, b in itertools.combinations(vs, 2))


def parse_dimacs(text: str) -> Graph:
    """Read the DIMACS edge format (1-indexed vertices, 'c' comment lines)."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) < 3 or n is not None:
                raise FormatError(f"line {lineno}: bad or repeated problem line")
            try:
                n = int(parts[2])
            except ValueError as exc:
                raise FormatError(f"line {lineno}: bad vertex count") from exc
        elif parts[0] == "e":
            if n is None:
                raise FormatError(f"line {lineno}: edge before the problem line")
            if len(parts) < 3:
                raise FormatError(f"line {lineno}: malformed edge")
            try:
                i, j = int(parts[1]), int(parts[2])
            except ValueError as exc:
                raise FormatError(f"line {lineno}: malformed edge") from exc
            if not (1 <= i <= n and 1 <= j <= n):
                raise FormatError(f"line {lineno}: vertex out of range")
            if i == j:
                raise SelfLoopError(f"line {lineno}: self-loop at vertex {i}")
            edges.append((i - 1, j - 1))
        else:
            raise FormatError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise FormatError("missing 'p edge n m' line")
    return Graph.from_edges(n, edges)


def write_dimacs(g: Graph) -> str:
    lines = [f"p edge {g.n} {len(g.edges)}"]
    lines += [f"e {i + 1} {j + 1}" for i, j in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def adjacency_matrix(g: Graph) -> RatMatrix:
    n = g.n
    return RatMatrix(n, n, (1 if g.has_edge(i, j) else 0 for i in range(n) for j in range(n)))


def _color_bound(cands: list[int], nbrs: list[set[int]]) -> list[tuple[int, int]]:
    """Greedy sequential coloring; returns (vertex, color) sorted by color."""
    classes: list[list[int]] = []
    for v in cands:
        for cls_ in classes:
            if not (nbrs[v] & set(cls_)):
                cls_.append(v)
                break
        else:
            classes.append([v])
    return [(v, c + 1) for c, cls_ in enumerate(classes) for v in cls_]


def _clique_number(nbrs: list[set[int]], n: int) -> int:
    best = 0

    def expand(size: int, cands: list[int]):
        nonlocal best
        colored = _color_bound(cands, nbrs)
        while colored:
            v, color = colored.pop()
            if size + color <= best:
                return
            new = [u for u, _ in colored if u in nbrs[v]]
            if new:
                expand(size + 1, new)
            elif size + 1 > best:
                best = size + 1

    order = sorted(range(n), key=lambda v: -len(nbrs[v]))
    expand(0, order)
    return best


def _lex_first_clique(nbrs: list[set[int]], n: int, size: int) -> list[int]:
    """Lexicographically smallest sorted clique with ``size`` vertices."""

    def search(chosen: list[int], cands: list[int]):
        if len(chosen) == size:
            return chosen
        need = size - len(chosen)
        for idx, v in enumerate(cands):
            rest = [u for u in cands[idx + 1:] if u in nbrs[v]]
            if len(rest) + 1 < need:
                continue
            if need > 1 and len(_color_classes(rest, nbrs)) + 1 < need:
                continue
            found = search(chosen + [v], rest)
            if found is not None:
                return found
        return None

    found = search([], list(range(n)))
    assert found is not None
    return found


def _color_classes(cands, nbrs):
    return {c for _, c in _color_bound(cands, nbrs)}


def max_clique_exact(g: Graph, cap: int = DEFAULT_CLIQUE_CAP) -> tuple[int, frozenset]:
    """Clique number and a witness clique.

    Branch and bound with greedy-coloring upper bounds finds the clique
    number; the witness returned is the lexicographically smallest maximum
    clique, so the result is deterministic.
    """
    if g.n > cap:
        raise SizeCapExceeded(f"graph has {g.n} vertices, cap is {cap}")
    if g.n == 0:
        return 0, frozenset()
    nbrs = g.neighbors()
    omega = _clique_number(nbrs, g.n)
    return omega, frozenset(_lex_first_clique(nbrs, g.n, omega))


def max_clique_bruteforce(g: Graph, cap: int = 16) -> tuple[int, frozenset]:
    """Subset enumeration, largest subsets first; kept as an independent check."""
    if g.n > cap:
        raise SizeCapExceeded(f"graph has {g.n} vertices, brute-force cap is {cap}")
    for size in range(g.n, 0, -1):
        for subset in itertools.combinations(range(g.n), size):
            if g.is_clique(subset):
                return size, frozenset(subset)
    return 0, frozenset()


def motzkin_straus_value(g: Graph, cap: int = DEFAULT_CLIQUE_CAP) -> Fraction:
    """max over the simplex of p^T A p for adjacency A, i.e. 1 - 1/omega."""
    if g.n < 1:
        raise ValueError("graph must have at least one vertex")
    omega, _ = max_clique_exact(g, cap)
    return 1 - Fraction(1, omega)
