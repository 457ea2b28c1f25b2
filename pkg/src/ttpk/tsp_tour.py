"""Hamiltonian cycles: Christofides for the construction, Held-Karp as the exact oracle."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import networkx as nx
from networkx.utils import UnionFind

from . import kernels
from .errors import CapabilityError, DomainError
from .instance import DistanceMatrix, Number

EXACT_LIMIT = 16


@dataclass(frozen=True)
class Tour:
    """Cyclic vertex order (0-based) with its exact length."""

    order: tuple[int, ...]
    length: Number
    exact: bool = False

    def to_json(self) -> dict:
        return {"order": [v + 1 for v in self.order], "length": _num_json(self.length)}


def _num_json(x):
    return x if isinstance(x, int) else str(x)


def _scaled_length(m: DistanceMatrix, order: Sequence[int]) -> int:
    D = m.scaled
    return int(sum(D[order[i - 1], order[i]] for i in range(len(order))))


def tour_length(m: DistanceMatrix, order: Sequence[int]) -> Number:
    """Cyclic length of ``order``, closing edge included."""
    if sorted(order) != list(range(m.n)):
        raise DomainError(f"tour must be a permutation of 0..{m.n - 1}")
    return m.value(_scaled_length(m, order))


def _sorted_edges(m: DistanceMatrix, vertices: Sequence[int]):
    D = m.scaled
    vs = sorted(vertices)
    edges = [(int(D[a, b]), a, b) for x, a in enumerate(vs) for b in vs[x + 1:]]
    edges.sort()
    return edges


def minimum_spanning_tree(m: DistanceMatrix) -> list[tuple[int, int]]:
    """Kruskal with ties broken by lexicographic (i, j)."""
    uf = UnionFind(range(m.n))
    tree = []
    for _, a, b in _sorted_edges(m, range(m.n)):
        if uf[a] != uf[b]:
            uf.union(a, b)
            tree.append((a, b))
    return tree


def _greedy_matching(m: DistanceMatrix, odd: Sequence[int]) -> list[tuple[int, int]]:
    used: set[int] = set()
    pairs = []
    for _, a, b in _sorted_edges(m, odd):
        if a not in used and b not in used:
            used.update((a, b))
            pairs.append((a, b))
    return pairs


def _exact_matching(m: DistanceMatrix, odd: Sequence[int]) -> list[tuple[int, int]]:
    G = nx.Graph()
    G.add_nodes_from(odd)
    G.add_weighted_edges_from((a, b, w) for w, a, b in _sorted_edges(m, odd))
    pairs = nx.min_weight_matching(G)
    return sorted((min(a, b), max(a, b)) for a, b in pairs)


def christofides(m: DistanceMatrix, exact_matching: bool = True) -> Tour:
    """Christofides tour: MST, min-weight perfect matching on odd vertices,
    Euler circuit from vertex 0, first-visit shortcut.

    ``exact_matching=False`` swaps in a greedy matching, which voids the 3/2
    guarantee.
    """
    tree = minimum_spanning_tree(m)
    degree = [0] * m.n
    for a, b in tree:
        degree[a] += 1
        degree[b] += 1
    odd = [v for v in range(m.n) if degree[v] % 2]
    matching = _exact_matching(m, odd) if exact_matching else _greedy_matching(m, odd)
    if len(matching) * 2 != len(odd):
        raise AssertionError("matching is not perfect on the odd-degree vertices")

    multi = nx.MultiGraph()
    multi.add_nodes_from(range(m.n))
    multi.add_edges_from(tree)
    multi.add_edges_from(matching)
    seen: set[int] = set()
    order = []
    for u, _ in nx.eulerian_circuit(multi, source=0):
        if u not in seen:
            seen.add(u)
            order.append(u)
    return Tour(tuple(order), tour_length(m, order))


def exact_tour(m: DistanceMatrix, limit: int = EXACT_LIMIT) -> Tour:
    """Optimal tour by Held-Karp dynamic programming; ``O(2^n n^2)``."""
    if m.n > limit:
        raise CapabilityError(
            f"exact tour limited to n <= {limit} (got n={m.n}); use christofides instead"
        )
    length, order = kernels.held_karp(m.scaled)
    return Tour(tuple(order), m.value(length), exact=True)


def one_tree_bound(m: DistanceMatrix) -> Number:
    """Best 1-tree lower bound on the optimal tour length over all special vertices."""
    D = m.scaled
    best = 0
    for v in range(m.n):
        rest = [u for u in range(m.n) if u != v]
        uf = UnionFind(rest)
        weight = 0
        for w, a, b in _sorted_edges(m, rest):
            if uf[a] != uf[b]:
                uf.union(a, b)
                weight += w
        two = sorted(int(D[v, u]) for u in rest)[:2]
        best = max(best, weight + sum(two))
    return m.value(best)
