"""Tours from path covers: the (1,2)-cost and max-weight TSP pipelines.

Both pipelines run the two-phase cover construction and then close the
cover into a Hamiltonian cycle deterministically.  For (1,2)-costs every
missing edge costs 2, so any completion works and the tour cost is at
most ``2 n - cover_size``.  For max-weight tours on complete graphs the
cover is first patched so at most one vertex is left uncovered, then the
paths are concatenated.

The exact oracles (Held-Karp tours, branch-and-bound path cover) are
deliberately small-instance: they exist to certify the streaming results
on test corpora, not to scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .graph import Edge, Graph, Matching, PathCover, Tour, contract, matching_contraction
from .matching import (
    ApproxParams,
    ContractionView,
    OracleLimitError,
    oracle_max_weight_matching,
    release_matching,
    streaming_max_weight_matching,
)
from .pathcover import MpcResult, two_phase_path_cover
from .stream import InMemoryEdgeSource, StreamReport, open_session


@dataclass(frozen=True)
class Tsp12Instance:
    """Symmetric TSP where every pair costs 1 or 2.

    Only the cost-1 pairs are stored (as ``edges``); every absent pair
    costs 2.  The cost-1 pairs form the graph whose path cover drives the
    approximation.
    """

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ValueError("need at least 3 vertices for a tour")
        seen: set[tuple[int, int]] = set()
        for e in self.edges:
            if e.u >= self.n or e.v >= self.n:
                raise ValueError(f"edge ({e.u}, {e.v}) out of range for n={self.n}")
            if e.weight != 1:
                raise ValueError("cost-1 edge list must have weight 1 throughout")
            if e.pair in seen:
                raise ValueError(f"duplicate pair {e.pair}")
            seen.add(e.pair)

    @classmethod
    def from_graph(cls, g: Graph) -> "Tsp12Instance":
        """Use ``g``'s distinct pairs as the cost-1 pairs (first copy wins)."""
        seen: set[tuple[int, int]] = set()
        kept = []
        for e in g.edges:
            if e.pair not in seen:
                seen.add(e.pair)
                kept.append(Edge(e.u, e.v))
        return cls(g.n, tuple(kept))

    @property
    def m(self) -> int:
        return len(self.edges)

    def cheap_graph(self) -> Graph:
        """The cost-1 pairs as an unweighted graph."""
        return Graph(self.n, self.edges, weighted=False)

    def weight(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError("no self-loop cost")
        key = (u, v) if u < v else (v, u)
        return 1 if key in self._pair_set else 2

    @property
    def _pair_set(self) -> frozenset[tuple[int, int]]:
        cached = getattr(self, "_pairs_cache", None)
        if cached is None:
            cached = frozenset(e.pair for e in self.edges)
            object.__setattr__(self, "_pairs_cache", cached)
        return cached


@dataclass(frozen=True)
class MaxTspInstance:
    """Complete graph with positive integer weights, tour weight maximized."""

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ValueError("need at least 3 vertices for a tour")
        want = self.n * (self.n - 1) // 2
        seen: set[tuple[int, int]] = set()
        for e in self.edges:
            if e.u >= self.n or e.v >= self.n:
                raise ValueError(f"edge ({e.u}, {e.v}) out of range for n={self.n}")
            if e.pair in seen:
                raise ValueError(f"duplicate pair {e.pair}")
            seen.add(e.pair)
        if len(seen) != want:
            raise ValueError(f"instance must be complete: {len(seen)} of {want} pairs present")

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def max_weight(self) -> int:
        return max(e.weight for e in self.edges)

    def graph(self) -> Graph:
        return Graph(self.n, self.edges, weighted=True)

    def weight(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError("no self-loop weight")
        key = (u, v) if u < v else (v, u)
        table = getattr(self, "_weight_cache", None)
        if table is None:
            table = {e.pair: e.weight for e in self.edges}
            object.__setattr__(self, "_weight_cache", table)
        return table[key]


def hamiltonian_order(paths: Sequence[Sequence[int]], n: int) -> tuple[int, ...]:
    """Concatenate disjoint paths into one vertex order covering 0..n-1.

    Each path is oriented from its lower-id endpoint, paths are sorted by
    their smallest vertex, and vertices on no path are appended in
    increasing order.  Purely deterministic so tours are reproducible.
    """
    fixed = [tuple(p) if p[0] < p[-1] else tuple(reversed(p)) for p in paths]
    fixed.sort(key=min)
    order: list[int] = []
    for p in fixed:
        order.extend(p)
    covered = set(order)
    if len(covered) != len(order):
        raise ValueError("paths are not vertex-disjoint")
    order.extend(v for v in range(n) if v not in covered)
    return tuple(order)


@dataclass(frozen=True)
class Tsp12Result:
    """Tour for a (1,2) instance plus the cover run that produced it."""

    tour: Tour
    mpc: MpcResult

    @property
    def report(self) -> StreamReport:
        return self.mpc.report


def approx_tsp12(
    inst: Tsp12Instance,
    params: ApproxParams,
    *,
    words_budget: int | None = None,
    strict: bool = False,
) -> Tsp12Result:
    """Cover the cost-1 graph, then close the cover into a tour.

    Every cover edge the tour actually uses costs 1 and everything else
    costs at most 2, so the tour costs at most ``2 n - cover_size``; with
    the cover guarantee that lands within ``4/3 + epsilon + 1/n`` of the
    optimum.
    """
    src = InMemoryEdgeSource(inst.cheap_graph(), name="tsp12-cost1")
    sess = open_session(src, k=params.k, words_budget=words_budget, strict=strict)
    mpc = two_phase_path_cover(src, params, sess)
    order = hamiltonian_order(mpc.cover.paths, inst.n)
    tour = Tour.from_order(order, inst.weight)
    if tour.cost > 2 * inst.n - mpc.cover.size:
        raise AssertionError("tour exceeded the 2n - cover_size ceiling")
    return Tsp12Result(tour, mpc)


@dataclass(frozen=True)
class MaxTspResult:
    """Heavy tour plus the cover and matchings behind it."""

    tour: Tour
    cover: PathCover
    first_matching: Matching
    second_matching: Matching
    report: StreamReport


def approx_max_tsp(
    inst: MaxTspInstance,
    params: ApproxParams,
    *,
    words_budget: int | None = None,
    strict: bool = False,
) -> MaxTspResult:
    """Two weighted matching phases, then close the heavy cover into a tour.

    Phase one matches the whole instance; phase two matches the contraction
    of phase one (parallel copies collapse to their heaviest copy inside
    the engine).  Completeness plus engine maximality leave at most one
    uncovered vertex; if the degree cap ever spoils maximality, one extra
    greedy patch pass over the stream restores it.  The leftover vertex,
    if any, is attached at the cover endpoint with the smallest id.
    """
    g = inst.graph()
    src = InMemoryEdgeSource(g, name="max-tsp")
    sess = open_session(src, k=params.k, words_budget=words_budget, strict=strict)
    first = streaming_max_weight_matching(src, params, sess, label="first-matching")
    sess.charge(inst.n)
    view = ContractionView(matching_contraction(inst.n, first))
    second = streaming_max_weight_matching(src, params, sess, view=view, label="second-matching")
    sess.release(inst.n)

    cover = PathCover(inst.n, first.edges + second.edges)
    free = sorted(set(range(inst.n)) - cover.covered)
    if len(free) >= 2:
        remaining = set(free)
        patch: list[Edge] = []

        def patch_visit(pos: int, e: Edge) -> None:
            if e.u in remaining and e.v in remaining:
                remaining.discard(e.u)
                remaining.discard(e.v)
                patch.append(e)
                sess.charge(3)

        sess.begin_run("leftover-patch")
        sess.run_pass(patch_visit)
        sess.end_run()
        second = Matching(second.edges + tuple(patch))
        cover = PathCover(inst.n, first.edges + second.edges)
        free = sorted(set(range(inst.n)) - cover.covered)
    if len(free) > 1:
        raise AssertionError("complete instance left more than one vertex uncovered")

    paths = [list(p) for p in cover.paths]
    if free:
        if not paths:
            raise AssertionError("empty cover on a complete instance")
        v = free[0]
        ends = [(p[0], i, 0) for i, p in enumerate(paths)]
        ends += [(p[-1], i, -1) for i, p in enumerate(paths)]
        _, at, side = min(ends)
        if side == 0:
            paths[at].insert(0, v)
        else:
            paths[at].append(v)

    order = hamiltonian_order(paths, inst.n)
    tour = Tour.from_order(order, inst.weight)
    release_matching(sess, first)
    release_matching(sess, second)
    return MaxTspResult(tour, cover, first, second, sess.report())


def _held_karp(n: int, cost: list[list[int]], maximize: bool) -> int:
    """Exact tour value by dynamic programming over vertex subsets.

    State: (set of visited vertices including 0, current vertex).  Capped
    at n = 15 which is roughly half a million states.
    """
    if n < 3:
        raise ValueError("need at least 3 vertices for a tour")
    if n > 15:
        raise OracleLimitError(f"exact tours handle n <= 15, got {n}")
    worse = -1 if maximize else None

    def better(a: int | None, b: int) -> bool:
        if a is None:
            return True
        return b > a if maximize else b < a

    size = 1 << n
    dp: list[list[int | None]] = [[None] * n for _ in range(size)]
    for v in range(1, n):
        dp[(1 << v) | 1][v] = cost[0][v]
    for mask in range(size):
        if not mask & 1:
            continue
        row = dp[mask]
        for last in range(1, n):
            cur = row[last]
            if cur is None:
                continue
            for nxt in range(1, n):
                if mask & (1 << nxt):
                    continue
                cand = cur + cost[last][nxt]
                target = dp[mask | (1 << nxt)]
                if better(target[nxt], cand):
                    target[nxt] = cand
    best: int | None = None
    full = size - 1
    for last in range(1, n):
        cur = dp[full][last]
        if cur is None:
            continue
        cand = cur + cost[last][0]
        if better(best, cand):
            best = cand
    assert best is not None
    return best


def oracle_tsp12(inst: Tsp12Instance) -> int:
    """Exact optimum cost of a (1,2) instance (n <= 15)."""
    cost = [[0] * inst.n for _ in range(inst.n)]
    for u in range(inst.n):
        for v in range(inst.n):
            if u != v:
                cost[u][v] = inst.weight(u, v)
    return _held_karp(inst.n, cost, maximize=False)


def oracle_max_tsp(inst: MaxTspInstance) -> int:
    """Exact maximum tour weight (n <= 15)."""
    cost = [[0] * inst.n for _ in range(inst.n)]
    for u in range(inst.n):
        for v in range(inst.n):
            if u != v:
                cost[u][v] = inst.weight(u, v)
    return _held_karp(inst.n, cost, maximize=True)


def _has_all_cheap_tour(inst: Tsp12Instance) -> bool:
    """Is there a Hamiltonian cycle using cost-1 pairs only?  Subset DP."""
    n = inst.n
    adj = [0] * n
    for e in inst.edges:
        adj[e.u] |= 1 << e.v
        adj[e.v] |= 1 << e.u
    size = 1 << n
    reach: list[int] = [0] * size  # bitmask of possible current vertices
    reach[1] = 1
    for mask in range(1, size):
        if not mask & 1:
            continue
        cur = reach[mask]
        if not cur:
            continue
        for v in range(n):
            if cur & (1 << v):
                ext = adj[v] & ~mask
                while ext:
                    w = ext & -ext
                    reach[mask | w] |= w
                    ext ^= w
    full = size - 1
    closing = reach[full] & adj[0]
    return closing != 0


@dataclass(frozen=True)
class Tsp12Identity:
    """Exact relation between the (1,2) optimum and the best path cover.

    The optimum equals ``2 n - best_cover_size``, minus one exactly when a
    tour of all cost-1 legs exists.  Each quantity is computed by an
    independent exhaustive method so the relation is genuinely checked.
    """

    n: int
    optimum: int
    best_cover_size: int
    has_cheap_tour: bool
    predicted: int = field(init=False)
    holds: bool = field(init=False)

    def __post_init__(self) -> None:
        predicted = 2 * self.n - self.best_cover_size - (1 if self.has_cheap_tour else 0)
        object.__setattr__(self, "predicted", predicted)
        object.__setattr__(self, "holds", predicted == self.optimum)


def tsp12_identity_check(inst: Tsp12Instance) -> Tsp12Identity:
    """Compute optimum, best cover and cheap-tour existence independently."""
    return Tsp12Identity(
        n=inst.n,
        optimum=oracle_tsp12(inst),
        best_cover_size=oracle_path_cover(inst.cheap_graph()).size,
        has_cheap_tour=_has_all_cheap_tour(inst),
    )


def oracle_path_cover(g: Graph) -> PathCover:
    """Exact maximum-size path cover by branch and bound (<= 22 distinct edges).

    Deterministic witness: the first maximum found by include-first search
    in stream order.
    """
    seen: set[tuple[int, int]] = set()
    items: list[Edge] = []
    for e in g.edges:
        if e.pair not in seen:
            seen.add(e.pair)
            items.append(e)
    m = len(items)
    if m > 22:
        raise OracleLimitError(f"exact path cover handles <= 22 distinct edges, got {m}")
    n = g.n

    deg = [0] * n
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            x = parent[x]
        return x

    # Room left in the degree budget: each vertex may take at most 2 edges,
    # and each edge consumes 2 endpoint slots.
    slack = 2 * len({v for e in items for v in (e.u, e.v)})

    best_edges: list[Edge] = []
    best_size = -1
    chosen: list[Edge] = []

    def rec(i: int, slack_now: int) -> None:
        nonlocal best_size, best_edges
        if i == m:
            if len(chosen) > best_size:
                best_size = len(chosen)
                best_edges = list(chosen)
            return
        if len(chosen) + min(m - i, slack_now // 2) <= best_size:
            return
        e = items[i]
        ru, rv = find(e.u), find(e.v)
        if deg[e.u] < 2 and deg[e.v] < 2 and ru != rv:
            deg[e.u] += 1
            deg[e.v] += 1
            parent[ru] = rv
            chosen.append(e)
            rec(i + 1, slack_now - 2)
            chosen.pop()
            parent[ru] = ru
            deg[e.u] -= 1
            deg[e.v] -= 1
        rec(i + 1, slack_now)

    rec(0, slack)
    return PathCover(n, tuple(best_edges))


def extract_matching_from_cycle(edges: Sequence[Edge]) -> Matching:
    """Heaviest of the two near-alternating matchings inside a simple cycle.

    Drops the lightest cycle edge (earliest on ties), splits the remaining
    path into the two parity classes, and returns the heavier class (the
    one containing the first path edge on ties).  For a cycle of k edges
    the result has ceil((k-1)/2) >= (k-1)/2 edges, and its weight is at
    least (k-1)/(2k) of the cycle weight.
    """
    k = len(edges)
    if k < 3:
        raise ValueError("a simple cycle needs at least 3 edges")
    order = _walk_closed(edges)
    drop_at = min(range(k), key=lambda i: (edges[order[i]].weight, i))
    path = order[drop_at + 1 :] + order[:drop_at]
    return _heavier_parity_class(edges, path)


def extract_matching_from_path_or_cycle(edges: Sequence[Edge]) -> Matching:
    """Matching of at least a third of the structure's weight.

    Accepts a simple path, a simple cycle, or the two-vertex cycle made of
    two parallel edges (a closed tour on two vertices).  Paths keep the
    heavier parity class directly; cycles go through
    ``extract_matching_from_cycle``; the parallel pair keeps its heavier
    copy.  In every case 3 * w(matching) >= w(structure).
    """
    k = len(edges)
    if k == 0:
        return Matching(())
    if k == 1:
        return Matching((edges[0],))
    if k == 2 and edges[0].pair == edges[1].pair:
        return Matching((max(edges, key=lambda e: e.weight),))
    pairs = [e.pair for e in edges]
    if len(set(pairs)) != k:
        raise ValueError("parallel edges are only allowed as a two-edge cycle")
    deg: dict[int, int] = {}
    for e in edges:
        deg[e.u] = deg.get(e.u, 0) + 1
        deg[e.v] = deg.get(e.v, 0) + 1
    odd = [v for v, d in deg.items() if d == 1]
    if not odd:
        return extract_matching_from_cycle(edges)
    if len(odd) != 2 or any(d > 2 for d in deg.values()):
        raise ValueError("edges form neither a simple path nor a simple cycle")
    path = _walk_open(edges, min(odd))
    return _heavier_parity_class(edges, path)


def _adjacency(edges: Sequence[Edge]) -> dict[int, list[tuple[int, int]]]:
    adj: dict[int, list[tuple[int, int]]] = {}
    for i, e in enumerate(edges):
        adj.setdefault(e.u, []).append((e.v, i))
        adj.setdefault(e.v, []).append((e.u, i))
    return adj


def _walk_closed(edges: Sequence[Edge]) -> list[int]:
    """Edge indices of a simple cycle in traversal order from its min vertex."""
    adj = _adjacency(edges)
    if any(len(nbrs) != 2 for nbrs in adj.values()):
        raise ValueError("not a cycle: some vertex does not have degree 2")
    start = min(adj)
    order: list[int] = []
    cur = start
    last_idx = -1
    for _ in range(len(edges)):
        nxt, idx = next((x, i) for x, i in adj[cur] if i != last_idx)
        order.append(idx)
        cur, last_idx = nxt, idx
    if cur != start or len(set(order)) != len(edges):
        raise ValueError("edges do not form one single cycle")
    return order


def _walk_open(edges: Sequence[Edge], start: int) -> list[int]:
    """Edge indices of a simple path in traversal order from ``start``."""
    adj = _adjacency(edges)
    order: list[int] = []
    cur = start
    last_idx = -1
    while True:
        step = [(x, i) for x, i in adj[cur] if i != last_idx]
        if not step:
            break
        nxt, idx = step[0]
        order.append(idx)
        cur, last_idx = nxt, idx
    if len(order) != len(edges):
        raise ValueError("edges do not form one single path")
    return order


def _heavier_parity_class(edges: Sequence[Edge], path_order: list[int]) -> Matching:
    evens = [edges[i] for i in path_order[0::2]]
    odds = [edges[i] for i in path_order[1::2]]
    w_even = sum(e.weight for e in evens)
    w_odd = sum(e.weight for e in odds)
    return Matching(tuple(evens if w_even >= w_odd else odds))


@dataclass(frozen=True)
class ContractBound:
    """Inequality tying a matching's contraction to the best tour weight.

    With M a matching of the complete instance and C* its heaviest tour:
    6 n * mu_w(G/M) >= n * (w(C*) - w(M)) - 2 w(C*), where mu_w(G/M) is
    the maximum matching weight of the contraction (parallel copies
    collapsed to their heaviest).  This is what makes the second phase of
    the tour pipeline pull enough extra weight.
    """

    n: int
    matching_weight: int
    contracted_matching_weight: int
    best_tour_weight: int
    lhs: int = field(init=False)
    rhs: int = field(init=False)
    holds: bool = field(init=False)

    def __post_init__(self) -> None:
        lhs = 6 * self.n * self.contracted_matching_weight
        rhs = self.n * (self.best_tour_weight - self.matching_weight) - 2 * self.best_tour_weight
        object.__setattr__(self, "lhs", lhs)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "holds", lhs >= rhs)


def contract_bound_check(inst: MaxTspInstance, matching: Matching) -> ContractBound:
    """Evaluate the contraction inequality exactly via the oracles."""
    contracted, _ = contract(inst.graph(), matching)
    mu_w = oracle_max_weight_matching(contracted).weight
    return ContractBound(
        n=inst.n,
        matching_weight=matching.weight,
        contracted_matching_weight=mu_w,
        best_tour_weight=oracle_max_tsp(inst),
    )
