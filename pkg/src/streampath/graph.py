"""Graph value types: edges, matchings, contractions, path covers, tours.

All types here are immutable value objects.  Algorithms never mutate a
Graph; operations like contraction return a fresh Graph plus a mapping
object describing where each original vertex went.

Conventions used throughout the package:

* vertices are ``0 .. n-1``,
* self-loops are never representable (``Edge`` rejects them),
* parallel edges are allowed in a ``Graph`` and are meaningful: the edge
  sequence *is* the arrival order of the stream,
* weights are positive integers; an unweighted graph is one where every
  edge has weight 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence


@dataclass(frozen=True, order=True)
class Edge:
    """An undirected edge.  Endpoints are unordered; ``pair`` normalizes."""

    u: int
    v: int
    weight: int = 1

    def __post_init__(self) -> None:
        if not (isinstance(self.u, int) and isinstance(self.v, int)):
            raise ValueError("endpoints must be ints")
        if self.u < 0 or self.v < 0:
            raise ValueError(f"negative endpoint in edge ({self.u}, {self.v})")
        if self.u == self.v:
            raise ValueError(f"self-loop at vertex {self.u} is not allowed")
        if not isinstance(self.weight, int) or self.weight < 1:
            raise ValueError(f"edge weight must be a positive int, got {self.weight!r}")

    @property
    def pair(self) -> tuple[int, int]:
        """Endpoints as a sorted tuple, usable as a dict key."""
        return (self.u, self.v) if self.u < self.v else (self.v, self.u)

    def other(self, vertex: int) -> int:
        if vertex == self.u:
            return self.v
        if vertex == self.v:
            return self.u
        raise ValueError(f"vertex {vertex} is not an endpoint of {self}")


@dataclass(frozen=True)
class Graph:
    """An edge-sequence multigraph.

    ``edges`` keeps arrival order; iterating a Graph replays the stream.
    """

    n: int
    edges: tuple[Edge, ...]
    weighted: bool = False

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        for e in self.edges:
            if e.u >= self.n or e.v >= self.n:
                raise ValueError(f"edge ({e.u}, {e.v}) out of range for n={self.n}")
            if not self.weighted and e.weight != 1:
                raise ValueError("unweighted graph cannot hold an edge of weight != 1")

    @classmethod
    def from_pairs(
        cls,
        n: int,
        pairs: Iterable[tuple[int, ...]],
        weighted: bool = False,
    ) -> "Graph":
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples, preserving order."""
        edges = []
        for p in pairs:
            if len(p) == 2:
                edges.append(Edge(p[0], p[1]))
            elif len(p) == 3:
                edges.append(Edge(p[0], p[1], p[2]))
            else:
                raise ValueError(f"expected (u, v) or (u, v, w), got {p!r}")
        return cls(n, tuple(edges), weighted)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def max_weight(self) -> int:
        """Largest edge weight, 1 for an edgeless graph."""
        return max((e.weight for e in self.edges), default=1)

    def total_weight(self) -> int:
        return sum(e.weight for e in self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1
        return deg

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)


@dataclass(frozen=True)
class DegreeCensus:
    """Degree histogram of a graph: which degrees occur and how often."""

    histogram: tuple[tuple[int, int], ...]

    @property
    def degrees_present(self) -> frozenset[int]:
        return frozenset(d for d, _ in self.histogram)

    def count(self, degree: int) -> int:
        for d, c in self.histogram:
            if d == degree:
                return c
        return 0

    def within(self, allowed: Iterable[int]) -> bool:
        """True if every occurring degree is in ``allowed``."""
        allowed_set = set(allowed)
        return all(d in allowed_set for d in self.degrees_present)


def degree_census(g: Graph) -> DegreeCensus:
    counts: dict[int, int] = {}
    for d in g.degrees():
        counts[d] = counts.get(d, 0) + 1
    return DegreeCensus(tuple(sorted(counts.items())))


@dataclass(frozen=True)
class Matching:
    """A set of vertex-disjoint edges, kept in the order they were chosen."""

    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for e in self.edges:
            if e.u in seen or e.v in seen:
                raise ValueError(f"edges share vertex: ({e.u}, {e.v}) overlaps earlier edge")
            seen.add(e.u)
            seen.add(e.v)

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def weight(self) -> int:
        return sum(e.weight for e in self.edges)

    @property
    def covered(self) -> frozenset[int]:
        return frozenset(v for e in self.edges for v in (e.u, e.v))

    @property
    def pair_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(e.pair for e in self.edges)

    def partner(self, vertex: int) -> int | None:
        for e in self.edges:
            if vertex == e.u:
                return e.v
            if vertex == e.v:
                return e.u
        return None

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class ContractionMap:
    """Maps original vertices onto the vertices of a contracted graph.

    ``target[v]`` is the contracted id of original vertex ``v``.  Contracted
    ids are assigned in increasing order of each class's smallest original
    vertex, so the mapping is a pure function of the contracted vertex sets.
    """

    n_old: int
    n_new: int
    target: tuple[int, ...]

    def apply(self, vertex: int) -> int:
        return self.target[vertex]

    def map_pair(self, u: int, v: int) -> tuple[int, int] | None:
        """Map an edge's endpoints; None when the edge becomes a self-loop."""
        a, b = self.target[u], self.target[v]
        if a == b:
            return None
        return (a, b)

    def classes(self) -> tuple[tuple[int, ...], ...]:
        """Original vertices of each contracted vertex, indexed by new id."""
        groups: list[list[int]] = [[] for _ in range(self.n_new)]
        for v, t in enumerate(self.target):
            groups[t].append(v)
        return tuple(tuple(g) for g in groups)


def components_contraction(n: int, pairs: Iterable[tuple[int, int]]) -> ContractionMap:
    """Contract each connected component spanned by ``pairs`` into one vertex."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            # Keep the smaller root so class representatives are minima.
            if ru > rv:
                ru, rv = rv, ru
            parent[rv] = ru

    roots = sorted({find(v) for v in range(n)})
    new_id = {r: i for i, r in enumerate(roots)}
    target = tuple(new_id[find(v)] for v in range(n))
    return ContractionMap(n_old=n, n_new=len(roots), target=target)


def matching_contraction(n: int, matching: Matching) -> ContractionMap:
    """Contraction map that merges the two endpoints of every matching edge."""
    return components_contraction(n, [e.pair for e in matching])


def contract_edges(g: Graph, merge: Iterable[tuple[int, int]]) -> tuple[Graph, ContractionMap]:
    """Contract vertex classes spanned by ``merge`` pairs; drop self-loops.

    Parallel edges that arise are kept, in original arrival order, because
    the contracted graph is itself streamed.
    """
    cmap = components_contraction(g.n, merge)
    kept = []
    for e in g.edges:
        mapped = cmap.map_pair(e.u, e.v)
        if mapped is not None:
            kept.append(Edge(mapped[0], mapped[1], e.weight))
    return Graph(cmap.n_new, tuple(kept), g.weighted), cmap


def contract(g: Graph, matching: Matching) -> tuple[Graph, ContractionMap]:
    """Contract every matching edge of ``g``."""
    return contract_edges(g, [e.pair for e in matching])


def dedupe_parallel_max(g: Graph) -> Graph:
    """Keep one copy per endpoint pair: the max-weight copy, earliest on ties."""
    best: dict[tuple[int, int], Edge] = {}
    order: list[tuple[int, int]] = []
    for e in g.edges:
        key = e.pair
        cur = best.get(key)
        if cur is None:
            best[key] = e
            order.append(key)
        elif e.weight > cur.weight:
            best[key] = e
    return Graph(g.n, tuple(best[k] for k in order), g.weighted)


@dataclass(frozen=True)
class CoverCheck:
    """Outcome of validating an edge set as a path cover."""

    ok: bool
    reason: str | None
    paths: tuple[tuple[int, ...], ...]

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(p) - 1 for p in self.paths)


def validate_path_cover(n: int, edges: Sequence[Edge]) -> CoverCheck:
    """Check that ``edges`` form vertex-disjoint simple paths in [0, n).

    On success the paths are returned sorted by smallest contained vertex,
    each oriented from its lower-id endpoint.  Isolated vertices are legal
    (a path cover may leave vertices uncovered by edges; they are trivial
    zero-length paths) and are not listed.
    """
    adj: dict[int, list[int]] = {}
    seen_pairs: set[tuple[int, int]] = set()
    for e in edges:
        if e.u >= n or e.v >= n:
            return CoverCheck(False, f"edge ({e.u}, {e.v}) out of range for n={n}", ())
        if e.pair in seen_pairs:
            return CoverCheck(False, f"parallel edges between {e.pair[0]} and {e.pair[1]}", ())
        seen_pairs.add(e.pair)
        adj.setdefault(e.u, []).append(e.v)
        adj.setdefault(e.v, []).append(e.u)

    for v, nbrs in adj.items():
        if len(nbrs) > 2:
            return CoverCheck(False, f"vertex {v} has degree {len(nbrs)}", ())

    # Every component is now a path or a cycle; walk from degree-1 vertices
    # and anything left unvisited with edges is part of a cycle.
    visited: set[int] = set()
    paths: list[tuple[int, ...]] = []
    for start in sorted(adj):
        if start in visited or len(adj[start]) != 1:
            continue
        walk = [start]
        visited.add(start)
        prev, cur = start, adj[start][0]
        while True:
            walk.append(cur)
            visited.add(cur)
            nxt = [x for x in adj[cur] if x != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
        paths.append(tuple(walk))

    leftover = sorted(set(adj) - visited)
    if leftover:
        return CoverCheck(False, f"cycle through vertex {leftover[0]}", ())

    paths.sort(key=min)
    oriented = tuple(p if p[0] < p[-1] else p[::-1] for p in paths)
    return CoverCheck(True, None, oriented)


@dataclass(frozen=True)
class PathCover:
    """A validated path cover: vertex-disjoint simple paths."""

    n: int
    edges: tuple[Edge, ...]
    paths: tuple[tuple[int, ...], ...] = field(init=False)

    def __post_init__(self) -> None:
        check = validate_path_cover(self.n, self.edges)
        if not check.ok:
            raise ValueError(f"not a path cover: {check.reason}")
        object.__setattr__(self, "paths", check.paths)

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def weight(self) -> int:
        return sum(e.weight for e in self.edges)

    @property
    def path_lengths(self) -> tuple[int, ...]:
        return tuple(len(p) - 1 for p in self.paths)

    @property
    def covered(self) -> frozenset[int]:
        return frozenset(v for p in self.paths for v in p)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)


@dataclass(frozen=True)
class Tour:
    """A Hamiltonian cycle given as a vertex order, plus its total cost."""

    order: tuple[int, ...]
    cost: int

    def __post_init__(self) -> None:
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("tour order must be a permutation of 0..n-1")
        if len(self.order) < 3:
            raise ValueError("a tour needs at least 3 vertices")

    @classmethod
    def from_order(cls, order: Sequence[int], weight_of: Callable[[int, int], int]) -> "Tour":
        """Cost the cycle ``order[0] - ... - order[-1] - order[0]``."""
        n = len(order)
        cost = sum(weight_of(order[i], order[(i + 1) % n]) for i in range(n))
        return cls(tuple(order), cost)

    @property
    def n(self) -> int:
        return len(self.order)

    def legs(self) -> tuple[tuple[int, int], ...]:
        n = len(self.order)
        return tuple((self.order[i], self.order[(i + 1) % n]) for i in range(n))
