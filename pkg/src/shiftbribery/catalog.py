"""Exhaustive catalogs of tiny source instances, up to isomorphism."""

from __future__ import annotations

from itertools import combinations, permutations, product
from typing import Iterator

import networkx as nx

from .reductions import Graph, SetCoverInput


def all_graphs(max_vertices: int = 6) -> Iterator[Graph]:
    """Every graph on at most ``max_vertices`` (<= 7) vertices, one per isomorphism class."""
    if max_vertices > 7:
        raise ValueError("the graph atlas stops at 7 vertices")
    for g in nx.graph_atlas_g():
        if g.number_of_nodes() <= max_vertices:
            yield Graph(g.number_of_nodes(), tuple(g.edges()))


def _canonical_colored(edges, h, q):
    """Smallest edge list over relabelings inside color classes and renamings of colors."""
    best = None
    inner = list(permutations(range(q)))
    for color_perm in permutations(range(h)):
        for within in product(inner, repeat=h):
            relabel = [color_perm[v // q] * q + within[v // q][v % q] for v in range(h * q)]
            key = tuple(sorted(tuple(sorted((relabel[a], relabel[b]))) for a, b in edges))
            if best is None or key < best:
                best = key
    return best


def colored_graphs(h: int, q: int) -> Iterator[Graph]:
    """Graphs with ``h`` color classes of ``q`` vertices each and no edge inside a class.

    Vertex ``v`` has color ``v // q + 1``.  One graph per class of
    color-preserving isomorphism combined with renaming of the colors.
    """
    colors = tuple(v // q + 1 for v in range(h * q))
    if q == 1:
        for g in nx.graph_atlas_g():
            if g.number_of_nodes() == h:
                yield Graph(h, tuple(g.edges()), colors)
        return
    cross = [(a, b) for a, b in combinations(range(h * q), 2) if a // q != b // q]
    seen = set()
    for mask in range(1 << len(cross)):
        edges = [e for i, e in enumerate(cross) if mask >> i & 1]
        key = _canonical_colored(edges, h, q)
        if key not in seen:
            seen.add(key)
            yield Graph(h * q, key, colors)


def colored_graph_families(max_vertices: int = 6) -> Iterator[tuple[int, Graph]]:
    """``(h, graph)`` for every admissible class shape with ``h * q <= max_vertices``."""
    for h in range(1, max_vertices + 1):
        for q in range(1, max_vertices // h + 1):
            for g in colored_graphs(h, q):
                yield h, g


def set_systems(max_sets: int = 3, max_elements: int = 3) -> Iterator[tuple[int, tuple[frozenset, ...]]]:
    """``(r, sets)`` for every sequence of nonempty subsets of ``{0..r-1}``."""
    for r in range(1, max_elements + 1):
        subsets = [frozenset(c) for size in range(1, r + 1) for c in combinations(range(r), size)]
        for s in range(1, max_sets + 1):
            for family in product(subsets, repeat=s):
                yield r, family


def set_cover_inputs(max_sets: int = 3, max_elements: int = 3) -> Iterator[SetCoverInput]:
    for r, family in set_systems(max_sets, max_elements):
        for h in range(1, len(family) + 1):
            yield SetCoverInput(r, family, h)
