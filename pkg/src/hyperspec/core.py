"""Exact finite hypergraphs with bitmask intersection kernels.

Vertices are dense 0-based integers. Every edge is stored as a Python int
bitmask (bit v set iff vertex v belongs to the edge), so a pairwise
intersection size is a single AND plus popcount even for the 2.88M-pair
scan of the large composed instances. All averaging is done with
``fractions.Fraction``; nothing in this module touches floating point.

Edge-index sets and vertex sets are plain iterables of ints; functions
normalize them internally. Hypergraphs are immutable after construction
and safe to share between threads.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Optional

from .errors import (
    DuplicateEdgeError,
    EmptyEdgeError,
    EmptyHypergraphError,
    EmptySetError,
    OutOfRangeVertexError,
    OverlappingSetsError,
    ParseError,
    TooFewEdgesError,
)

__all__ = [
    "Hypergraph",
    "Spectrum",
    "new_hypergraph",
    "is_uniform",
    "is_intersecting",
    "intersection_spectrum",
    "lambda_within",
    "lambda_across",
    "edges_containing",
    "parse_hypergraph",
    "serialize_hypergraph",
    "mask_of",
    "vertices_of",
]


def mask_of(vertices: Iterable[int]) -> int:
    """Pack vertex indices into a bitmask."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def vertices_of(mask: int) -> tuple[int, ...]:
    """Unpack a bitmask into an ascending vertex tuple."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


class Hypergraph:
    """An immutable hypergraph: a vertex count plus an ordered edge list.

    Edge order is stable; edge index i always refers to the same vertex
    set. Duplicate edges (as sets) and empty edges are rejected.
    """

    __slots__ = ("num_vertices", "edge_masks", "_cache")

    def __init__(self, num_vertices: int, edges: Iterable[Iterable[int]]):
        if num_vertices < 0:
            raise ValueError("vertex count must be non-negative")
        masks: list[int] = []
        seen: set[int] = set()
        for pos, edge in enumerate(edges):
            vs = set(edge)
            if not vs:
                raise EmptyEdgeError(f"edge {pos} is empty")
            lo, hi = min(vs), max(vs)
            if lo < 0 or hi >= num_vertices:
                raise OutOfRangeVertexError(
                    f"edge {pos} uses vertex {hi if hi >= num_vertices else lo}, "
                    f"valid range is [0, {num_vertices})"
                )
            m = mask_of(vs)
            if m in seen:
                raise DuplicateEdgeError(f"edge {pos} repeats {sorted(vs)}")
            seen.add(m)
            masks.append(m)
        self.num_vertices = num_vertices
        self.edge_masks: tuple[int, ...] = tuple(masks)
        self._cache: dict = {}

    # -- basic accessors ------------------------------------------------

    @property
    def num_edges(self) -> int:
        return len(self.edge_masks)

    def edge_mask(self, i: int) -> int:
        return self.edge_masks[i]

    def edge_vertices(self, i: int) -> tuple[int, ...]:
        return vertices_of(self.edge_masks[i])

    def edges(self) -> Iterator[frozenset[int]]:
        for m in self.edge_masks:
            yield frozenset(vertices_of(m))

    def intersection_size(self, i: int, j: int) -> int:
        return (self.edge_masks[i] & self.edge_masks[j]).bit_count()

    def index_of(self, vertices: Iterable[int]) -> Optional[int]:
        """Edge index of the given vertex set, or None if absent."""
        lookup = self._cache.get("index")
        if lookup is None:
            lookup = {m: i for i, m in enumerate(self.edge_masks)}
            self._cache["index"] = lookup
        return lookup.get(mask_of(vertices))

    def degree(self, v: int) -> int:
        bit = 1 << v
        return sum(1 for m in self.edge_masks if m & bit)

    # -- dunders ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Hypergraph)
            and self.num_vertices == other.num_vertices
            and self.edge_masks == other.edge_masks
        )

    def __hash__(self) -> int:
        return hash((self.num_vertices, self.edge_masks))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.num_vertices}, m={self.num_edges})"


def new_hypergraph(num_vertices: int, edges: Iterable[Iterable[int]]) -> Hypergraph:
    """Validate and build a hypergraph (alias for the constructor)."""
    return Hypergraph(num_vertices, edges)


@dataclass(frozen=True)
class Spectrum:
    """Distinct pairwise intersection sizes with their pair multiplicities.

    ``sizes`` is strictly increasing and ``multiplicities[i]`` counts the
    unordered edge pairs realizing ``sizes[i]``; the multiplicities sum to
    C(num_edges, 2).
    """

    sizes: tuple[int, ...]
    multiplicities: tuple[int, ...]

    @property
    def r(self) -> int:
        """Number of distinct intersection sizes."""
        return len(self.sizes)

    @property
    def num_pairs(self) -> int:
        return sum(self.multiplicities)

    def multiplicity_of(self, size: int) -> int:
        try:
            return self.multiplicities[self.sizes.index(size)]
        except ValueError:
            return 0


def is_uniform(h: Hypergraph) -> Optional[int]:
    """Common edge size k if every edge has the same size, else None."""
    if "uniform" not in h._cache:
        if not h.edge_masks:
            raise EmptyHypergraphError("uniformity needs at least one edge")
        k = h.edge_masks[0].bit_count()
        h._cache["uniform"] = k if all(m.bit_count() == k for m in h.edge_masks) else None
    return h._cache["uniform"]


def is_intersecting(h: Hypergraph) -> bool:
    """True iff every pair of distinct edges shares a vertex."""
    if "intersecting" not in h._cache:
        masks = h.edge_masks
        result = True
        for i in range(len(masks) - 1):
            # `0 in map(...)` keeps the scan inside the C interpreter loop.
            if 0 in map(masks[i].__and__, masks[i + 1 :]):
                result = False
                break
        h._cache["intersecting"] = result
    return h._cache["intersecting"]


def intersection_spectrum(h: Hypergraph) -> Spectrum:
    """Exact spectrum over all C(m, 2) unordered edge pairs.

    Deterministic; the full scan of a 2401-edge instance stays within a
    couple of seconds because the inner loop is C-level (map + Counter).
    """
    cached = h._cache.get("spectrum")
    if cached is not None:
        return cached
    masks = h.edge_masks
    m = len(masks)
    if m < 2:
        raise TooFewEdgesError("a spectrum needs at least two edges")
    mask_counts: Counter[int] = Counter()
    for i in range(m - 1):
        mask_counts.update(map(masks[i].__and__, masks[i + 1 :]))
    by_size: Counter[int] = Counter()
    for inter_mask, c in mask_counts.items():
        by_size[inter_mask.bit_count()] += c
    sizes = tuple(sorted(by_size))
    spectrum = Spectrum(sizes, tuple(by_size[s] for s in sizes))
    h._cache["spectrum"] = spectrum
    return spectrum


def _check_indices(h: Hypergraph, indices: Iterable[int]) -> frozenset[int]:
    s = frozenset(indices)
    for i in s:
        if not 0 <= i < h.num_edges:
            raise IndexError(f"edge index {i} out of range for {h!r}")
    return s


def lambda_within(h: Hypergraph, s: Iterable[int]) -> Fraction:
    """Average intersection size over unordered pairs inside ``s``. Exact."""
    idx = sorted(_check_indices(h, s))
    if len(idx) < 2:
        raise TooFewEdgesError("within-set average needs at least two edges")
    masks = h.edge_masks
    total = 0
    for a, b in combinations(idx, 2):
        total += (masks[a] & masks[b]).bit_count()
    return Fraction(total, comb(len(idx), 2))


def lambda_across(h: Hypergraph, s: Iterable[int], t: Iterable[int]) -> Fraction:
    """Average intersection size over all pairs with one edge in each set."""
    s_idx = _check_indices(h, s)
    t_idx = _check_indices(h, t)
    if not s_idx or not t_idx:
        raise EmptySetError("cross-set average needs two nonempty sets")
    if s_idx & t_idx:
        raise OverlappingSetsError(f"sets share edges {sorted(s_idx & t_idx)}")
    masks = h.edge_masks
    total = 0
    for a in s_idx:
        ma = masks[a]
        for b in t_idx:
            total += (ma & masks[b]).bit_count()
    return Fraction(total, len(s_idx) * len(t_idx))


def edges_containing(h: Hypergraph, vertices: Iterable[int]) -> frozenset[int]:
    """Indices of edges containing every given vertex (all edges for [])."""
    want = mask_of(vertices)
    if want and want.bit_length() > h.num_vertices:
        raise OutOfRangeVertexError("vertex out of range")
    return frozenset(i for i, m in enumerate(h.edge_masks) if m & want == want)


# -- text format ---------------------------------------------------------
#
# ".hg" files: optional '#' comment lines, a "n m" header, then m lines of
# strictly ascending vertex indices. Canonical output sorts edges
# lexicographically and uses LF endings with no trailing whitespace.


def parse_hypergraph(text: str) -> Hypergraph:
    """Parse ``.hg`` text. Raises :class:`ParseError` with a line number."""
    header: Optional[tuple[int, int]] = None
    edges: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 2:
                raise ParseError("header must be 'num_vertices num_edges'", lineno)
            try:
                n, m = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise ParseError("header fields must be integers", lineno) from None
            if n < 0 or m < 0:
                raise ParseError("header fields must be non-negative", lineno)
            header = (n, m)
            continue
        if len(edges) >= header[1]:
            raise ParseError("more edge lines than the header announced", lineno)
        try:
            vs = tuple(int(tok) for tok in tokens)
        except ValueError:
            raise ParseError("malformed vertex index", lineno) from None
        if any(b <= a for a, b in zip(vs, vs[1:])):
            raise ParseError("vertex indices must be strictly ascending", lineno)
        if vs[0] < 0 or vs[-1] >= header[0]:
            raise ParseError("vertex index out of range", lineno)
        edges.append(vs)
    if header is None:
        raise ParseError("missing header", 1)
    if len(edges) != header[1]:
        raise ParseError(
            f"expected {header[1]} edges, found {len(edges)}",
            text.count("\n") + 1,
        )
    return Hypergraph(header[0], edges)


def serialize_hypergraph(h: Hypergraph) -> str:
    """Canonical ``.hg`` text: lexicographically sorted edges, LF endings."""
    rows = sorted(vertices_of(m) for m in h.edge_masks)
    lines = [f"{h.num_vertices} {h.num_edges}"]
    lines.extend(" ".join(str(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"
