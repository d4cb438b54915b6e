"""Generators for the hypergraph families used throughout the package.

The product construction (`compose`) places one disjoint copy of the inner
vertex set on every outer vertex and expands each outer edge into all ways
of choosing one inner edge per copy; iterating it on the Fano plane gives
the classical 3^m-uniform intersecting families with 7^((3^m-1)/2) edges
whose spectrum is the odd numbers up to 3^m - 2.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb
from typing import Optional

from .core import Hypergraph, is_uniform, vertices_of
from .errors import (
    NonUniformError,
    SizeCapExceededError,
    TooManyEdgesRequestedError,
)

__all__ = [
    "DEFAULT_SIZE_CAP",
    "ConstructionSpec",
    "fano",
    "compose",
    "iterated_fano",
    "complete_subsets",
    "ramsey_clique_hypergraph",
    "random_uniform",
    "build_construction",
]

# Blocks accidental iterate-once-more explosions (7^13 edges) while leaving
# every desk-scale family comfortable.
DEFAULT_SIZE_CAP = 10**7


def fano() -> Hypergraph:
    """The projective plane of order 2 in its difference-set labeling:
    lines {i, i+1, i+3} mod 7."""
    return Hypergraph(7, [{i, (i + 1) % 7, (i + 3) % 7} for i in range(7)])


def compose(outer: Hypergraph, inner: Hypergraph, size_cap: int = DEFAULT_SIZE_CAP) -> Hypergraph:
    """Product of two uniform hypergraphs.

    Vertex (a, b) is numbered a * inner.num_vertices + b (copy-major), so
    serialized output is reproducible bit-exactly. The result is
    (k1*k2)-uniform with m1 * m2^k1 edges, sorted lexicographically.
    """
    k1 = is_uniform(outer)
    k2 = is_uniform(inner)
    if k1 is None or k2 is None:
        raise NonUniformError("compose needs uniform factors")
    expected = outer.num_edges * inner.num_edges**k1
    if expected > size_cap:
        raise SizeCapExceededError(
            f"composition would have {expected} edges, cap is {size_cap}"
        )
    n2 = inner.num_vertices
    inner_edges = [vertices_of(m) for m in inner.edge_masks]
    edges: list[tuple[int, ...]] = []
    for outer_mask in outer.edge_masks:
        copies = vertices_of(outer_mask)
        for choice in product(inner_edges, repeat=k1):
            # Copies are ascending and disjoint, so concatenation is sorted.
            edge: list[int] = []
            for a, inner_edge in zip(copies, choice):
                base = a * n2
                edge.extend(base + b for b in inner_edge)
            edges.append(tuple(edge))
    edges.sort()
    return Hypergraph(outer.num_vertices * n2, edges)


def iterated_fano(m: int, size_cap: int = DEFAULT_SIZE_CAP) -> Hypergraph:
    """m-fold Fano product: 3^m-uniform with 7^((3^m - 1) // 2) edges.

    m = 0 is the single-edge 1-uniform hypergraph, m = 1 the Fano plane.
    """
    if m < 0:
        raise ValueError("iteration count must be non-negative")
    expected = 7 ** ((3**m - 1) // 2)
    if expected > size_cap:
        raise SizeCapExceededError(
            f"iterated Fano at m={m} would have {expected} edges, cap is {size_cap}"
        )
    if m == 0:
        return Hypergraph(1, [{0}])
    h = fano()
    for _ in range(m - 1):
        h = compose(fano(), h, size_cap=size_cap)
    return h


def complete_subsets(n: int, k: int, size_cap: int = DEFAULT_SIZE_CAP) -> Hypergraph:
    """All k-subsets of [n]. Intersecting iff n <= 2k - 1."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if comb(n, k) > size_cap:
        raise SizeCapExceededError(f"C({n},{k}) exceeds cap {size_cap}")
    return Hypergraph(n, combinations(range(n), k))


def ramsey_clique_hypergraph(n: int, k: int, size_cap: int = DEFAULT_SIZE_CAP) -> Hypergraph:
    """Vertices are the (k-1)-subsets of [n]; each k-subset of [n] becomes
    the edge consisting of its k (k-1)-subsets.

    k-uniform; for n > k the spectrum is {0, 1} because two distinct
    k-sets share at most one (k-1)-subset.
    """
    if k < 2 or n < k:
        raise ValueError(f"need k >= 2 and n >= k, got n={n}, k={k}")
    if comb(n, k - 1) > size_cap or comb(n, k) > size_cap:
        raise SizeCapExceededError("vertex or edge count exceeds cap")
    vertex_index = {c: i for i, c in enumerate(combinations(range(n), k - 1))}
    edges = [
        [vertex_index[sub] for sub in combinations(clique, k - 1)]
        for clique in combinations(range(n), k)
    ]
    return Hypergraph(len(vertex_index), edges)


def random_uniform(n: int, k: int, m: int, seed: int) -> Hypergraph:
    """m distinct uniformly random k-subsets of [n]; deterministic per seed."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    total = comb(n, k)
    if m > total:
        raise TooManyEdgesRequestedError(f"asked for {m} edges, only C({n},{k})={total} exist")
    rng = random.Random(seed)
    population = range(n)
    seen: set[tuple[int, ...]] = set()
    edges: list[tuple[int, ...]] = []
    while len(edges) < m:
        edge = tuple(sorted(rng.sample(population, k)))
        if edge not in seen:
            seen.add(edge)
            edges.append(edge)
    return Hypergraph(n, edges)


@dataclass(frozen=True)
class ConstructionSpec:
    """CLI-facing description of a construction request."""

    family: str
    params: dict[str, int] = field(default_factory=dict)
    seed: Optional[int] = None
    inputs: tuple[Hypergraph, ...] = ()

    _FAMILIES = (
        "fano",
        "iterated-fano",
        "complete-subsets",
        "ramsey-clique",
        "random-uniform",
        "compose",
    )


def build_construction(spec: ConstructionSpec, size_cap: int = DEFAULT_SIZE_CAP) -> Hypergraph:
    """Dispatch a :class:`ConstructionSpec` to its generator."""
    fam = spec.family
    p = spec.params
    if fam == "fano":
        return fano()
    if fam == "iterated-fano":
        return iterated_fano(p["m"], size_cap=size_cap)
    if fam == "complete-subsets":
        return complete_subsets(p["n"], p["k"], size_cap=size_cap)
    if fam == "ramsey-clique":
        return ramsey_clique_hypergraph(p["n"], p["k"], size_cap=size_cap)
    if fam == "random-uniform":
        if spec.seed is None:
            raise ValueError("random-uniform needs a seed")
        return random_uniform(p["n"], p["k"], p["m"], spec.seed)
    if fam == "compose":
        if len(spec.inputs) != 2:
            raise ValueError("compose needs exactly two input hypergraphs")
        return compose(spec.inputs[0], spec.inputs[1], size_cap=size_cap)
    raise ValueError(f"unknown family {fam!r}; choose from {ConstructionSpec._FAMILIES}")
