"""Streaming matching engines and exact matching oracles.

Two engines live here, one per weight model.  Both follow the same plan:
a cheap first pass builds a starting matching (or weight tables), then a
second pass retains a degree-capped kernel of the stream, and all further
improvement happens offline on the kernel.

* ``streaming_max_matching`` starts from the greedy maximal matching and
  eliminates augmenting paths of length <= 2k - 1 inside the kernel, in
  increasing length order, flipping maximal vertex-disjoint batches
  (Hopcroft-Karp style, so one sweep per length suffices).
* ``streaming_max_weight_matching`` keeps per-vertex tables of the
  heaviest incident edges, then runs a local search over alternating
  path/cycle swaps of at most 2k - 1 edges, accepting a swap only when
  its gain beats a damping threshold, and finishes with a plain
  maximality sweep.

Guarantee tiers, stated precisely because the kernel cap matters:

* Whenever the kernel retains every distinct endpoint pair (true iff no
  vertex hits the cap of 6k kept edges; in particular whenever the
  deduplicated degree is at most 6k), the unweighted engine returns at
  least k/(k+1) >= 1 - epsilon of the maximum matching, and the weighted
  engine at least (k/(k+1)) / (1 + epsilon/4) >= 1 - epsilon of the
  maximum weight matching.
* Unconditionally, the unweighted result is a maximal matching (>= 1/2 of
  optimum) and the weighted result is locally optimal within the kernel.

No fixed per-vertex cap can make the strong tier unconditional: pad both
endpoints of every optimum edge with enough earlier junk edges and a
capped kernel drops the optimum entirely.  Degree caps trade that corner
case for a hard O(n k) memory bound, which is the model being simulated.

Matched edges are charged (3 words each) to the session and stay charged
after the engine returns, because the caller retains the matching between
passes; drop the charge with ``release_matching`` when it is let go.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .graph import ContractionMap, Edge, Graph, Matching
from .stream import EdgeStreamSource, StreamSession


class OracleLimitError(ValueError):
    """The instance is too large for an exact oracle."""


@dataclass(frozen=True)
class ApproxParams:
    """Quality knob shared by the engines.

    ``epsilon`` is an exact Fraction in (0, 1); ``k = ceil(1/epsilon)`` is
    derived.  The engines remove augmenting structures of up to ``2k - 1``
    edges, which is what buys the k/(k+1) fraction of optimum.
    """

    epsilon: Fraction
    k: int = field(init=False)

    def __post_init__(self) -> None:
        if not isinstance(self.epsilon, Fraction):
            raise ValueError("epsilon must be a fractions.Fraction")
        if not (0 < self.epsilon < 1):
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")
        k = -((-self.epsilon.denominator) // self.epsilon.numerator)
        object.__setattr__(self, "k", k)

    @classmethod
    def parse(cls, text: str) -> "ApproxParams":
        try:
            eps = Fraction(text)
        except (ValueError, ZeroDivisionError, OverflowError):
            raise ValueError(
                f"cannot parse epsilon {text!r}; write a fraction such as 1/3"
            ) from None
        return cls(eps)

    @property
    def max_swap_edges(self) -> int:
        return 2 * self.k - 1

    @property
    def kernel_degree_cap(self) -> int:
        return 6 * self.k


@dataclass(frozen=True)
class ContractionView:
    """Rewrites a stream on the fly for the engines.

    Edges with a banned original endpoint are dropped, remaining endpoints
    are mapped through the contraction, and edges that become self-loops
    are dropped.  Nothing is materialized; each arriving edge costs O(1).
    """

    cmap: ContractionMap
    banned: frozenset[int] = frozenset()

    @property
    def n_viewed(self) -> int:
        return self.cmap.n_new

    def map_edge(self, e: Edge) -> tuple[int, int] | None:
        if e.u in self.banned or e.v in self.banned:
            return None
        return self.cmap.map_pair(e.u, e.v)


def release_matching(session: StreamSession, matching: Matching) -> None:
    """Return a matching's 3 words per edge to the session budget."""
    session.release(3 * matching.size)


def _identity_mapper(e: Edge) -> tuple[int, int]:
    return (e.u, e.v)


def streaming_max_matching(
    source: EdgeStreamSource,
    params: ApproxParams,
    session: StreamSession,
    view: ContractionView | None = None,
    label: str = "matching",
) -> Matching:
    """Unweighted engine: greedy pass, then kernel augmentation.

    Uses 1 pass for k = 1 and 2 passes otherwise.  Edge weights are
    ignored.  The returned edges are original stream edges (pre-view), in
    arrival order; when a view is given their *viewed* endpoints are
    disjoint, the original endpoints need not be.
    """
    n_view = view.n_viewed if view is not None else source.n
    mapper = view.map_edge if view is not None else _identity_mapper

    session.begin_run(label)
    partner: list[int | None] = [None] * n_view
    session.charge(n_view)
    witness: dict[tuple[int, int], tuple[int, Edge]] = {}

    def match(u: int, v: int, pos: int, e: Edge) -> None:
        partner[u] = v
        partner[v] = u
        witness[(u, v) if u < v else (v, u)] = (pos, e)
        session.charge(3)

    def unmatch(key: tuple[int, int]) -> None:
        partner[key[0]] = None
        partner[key[1]] = None
        del witness[key]
        session.release(3)

    def greedy_visit(pos: int, e: Edge) -> None:
        mapped = mapper(e)
        if mapped is None:
            return
        u, v = mapped
        if partner[u] is None and partner[v] is None:
            match(u, v, pos, e)

    session.run_pass(greedy_visit)

    if params.k >= 2:
        cap = params.kernel_degree_cap
        adj: list[list[int]] = [[] for _ in range(n_view)]
        entries: list[tuple[int, int, int, Edge]] = []
        kept: set[tuple[int, int]] = set()

        def kernel_visit(pos: int, e: Edge) -> None:
            mapped = mapper(e)
            if mapped is None:
                return
            u, v = mapped
            key = (u, v) if u < v else (v, u)
            if key in kept:
                return
            if len(adj[u]) < cap or len(adj[v]) < cap:
                kept.add(key)
                idx = len(entries)
                entries.append((u, v, pos, e))
                adj[u].append(idx)
                adj[v].append(idx)
                session.charge(3)

        session.run_pass(kernel_visit)
        _augment_on_kernel(
            n_view, partner, adj, entries, params.max_swap_edges, match, unmatch, session
        )
        session.release(3 * len(entries))

    session.release(n_view)
    edges = tuple(e for _, e in sorted(witness.values(), key=lambda t: t[0]))
    session.end_run()
    return Matching(edges)


def _augment_on_kernel(
    n_view: int,
    partner: list[int | None],
    adj: list[list[int]],
    entries: list[tuple[int, int, int, Edge]],
    max_len: int,
    match: Callable[[int, int, int, Edge], None],
    unmatch: Callable[[tuple[int, int]], None],
    session: StreamSession,
) -> None:
    """Flip maximal disjoint batches of augmenting paths, shortest first.

    After flipping a maximal vertex-disjoint set of shortest augmenting
    paths the next-shortest gets strictly longer, so sweeping the lengths
    1, 3, ..., max_len once each leaves no augmenting path of length
    <= max_len among the retained edges.  Applying each accepted path
    immediately and skipping its vertices afterwards builds exactly such a
    maximal set.
    """
    used = [False] * n_view
    session.charge(n_view)
    for target in range(1, max_len + 1, 2):
        for s in range(n_view):
            if used[s] or partner[s] is not None:
                continue
            hit = _alternating_path_exact(s, target, partner, adj, entries, used)
            if hit is None:
                continue
            adds, drops = hit
            for key in drops:
                unmatch(key)
            for idx in adds:
                u, v, pos, e = entries[idx]
                match(u, v, pos, e)
                used[u] = True
                used[v] = True
    session.release(n_view)


def _alternating_path_exact(
    s: int,
    length: int,
    partner: list[int | None],
    adj: list[list[int]],
    entries: list[tuple[int, int, int, Edge]],
    used: list[bool],
) -> tuple[list[int], list[tuple[int, int]]] | None:
    """First augmenting path of exactly ``length`` edges starting at free ``s``.

    Deterministic: neighbors are tried in arrival order.  Returns entry
    indices to match and pair keys to unmatch, or None.
    """

    def walk(u: int, remaining: int, visited: set[int]):
        for idx in adj[u]:
            eu, ev, _, _ = entries[idx]
            v = ev if eu == u else eu
            if v in visited or used[v] or partner[u] == v:
                continue
            if remaining == 1:
                if partner[v] is None:
                    return [idx], []
                continue
            mate = partner[v]
            if mate is None or mate in visited or used[mate]:
                continue
            tail = walk(mate, remaining - 2, visited | {v, mate})
            if tail is not None:
                adds, drops = tail
                key = (v, mate) if v < mate else (mate, v)
                return [idx] + adds, [key] + drops
        return None

    return walk(s, length, {s})


def streaming_max_weight_matching(
    source: EdgeStreamSource,
    params: ApproxParams,
    session: StreamSession,
    view: ContractionView | None = None,
    label: str = "weighted-matching",
) -> Matching:
    """Weighted engine: one table-building pass, then offline local search.

    The pass keeps, per viewed vertex, the heaviest ``6k`` incident edges
    with per-pair maximum semantics (best copy among parallels, earliest
    on weight ties), so the kernel is a deterministic function of the
    per-pair maxima whenever the cap never binds.  The local search then
    applies alternating path/cycle swaps of at most ``2k - 1`` edges whose
    gain exceeds ``eps^2 * w(M) / (4 n)``; the damping term is what keeps
    the loop finite, and it is small enough that the k/(k+1) local-search
    bound only erodes to (k/(k+1)) / (1 + eps/4) >= 1 - eps.  A final
    zero-threshold sweep makes the matching maximal within the kernel.
    """
    n_view = view.n_viewed if view is not None else source.n
    mapper = view.map_edge if view is not None else _identity_mapper

    session.begin_run(label)
    cap = params.kernel_degree_cap
    tables: list[dict[int, tuple[int, int, Edge]]] = [dict() for _ in range(n_view)]

    def consider(u: int, v: int, w: int, pos: int, e: Edge) -> None:
        tab = tables[u]
        cur = tab.get(v)
        if cur is not None:
            if (w, -pos) > (cur[0], -cur[1]):
                tab[v] = (w, pos, e)
            return
        if len(tab) < cap:
            tab[v] = (w, pos, e)
            session.charge(2)
            return
        worst_v, worst = min(tab.items(), key=lambda kv: (kv[1][0], -kv[1][1]))
        if (w, -pos) > (worst[0], -worst[1]):
            del tab[worst_v]
            tab[v] = (w, pos, e)

    def table_visit(pos: int, e: Edge) -> None:
        mapped = mapper(e)
        if mapped is None:
            return
        u, v = mapped
        consider(u, v, e.weight, pos, e)
        consider(v, u, e.weight, pos, e)

    session.run_pass(table_visit)

    # Union of the per-vertex tables, one entry per pair, best copy wins.
    union: dict[tuple[int, int], tuple[int, int, Edge]] = {}
    for u in range(n_view):
        for v, (w, pos, e) in tables[u].items():
            key = (u, v) if u < v else (v, u)
            cur = union.get(key)
            if cur is None or (w, -pos) > (cur[0], -cur[1]):
                union[key] = (w, pos, e)
    kentries = [
        (key[0], key[1], w, pos, e)
        for key, (w, pos, e) in sorted(union.items(), key=lambda kv: kv[1][1])
    ]
    session.charge(3 * len(kentries))
    for u in range(n_view):
        session.release(2 * len(tables[u]))
    tables.clear()

    adj: list[list[int]] = [[] for _ in range(n_view)]
    for idx, (u, v, _, _, _) in enumerate(kentries):
        adj[u].append(idx)
        adj[v].append(idx)
    for lst in adj:
        lst.sort(key=lambda i: (-kentries[i][2], kentries[i][3]))

    partner: list[int | None] = [None] * n_view
    session.charge(n_view)
    matched: dict[tuple[int, int], int] = {}
    weight_now = 0

    def match(idx: int) -> None:
        nonlocal weight_now
        u, v, w, pos, e = kentries[idx]
        if partner[u] is not None or partner[v] is not None:
            raise AssertionError("swap application touched a non-free vertex")
        partner[u] = v
        partner[v] = u
        matched[(u, v) if u < v else (v, u)] = idx
        weight_now += w
        session.charge(3)

    def unmatch(key: tuple[int, int]) -> None:
        nonlocal weight_now
        idx = matched.pop(key)
        weight_now -= kentries[idx][2]
        partner[key[0]] = None
        partner[key[1]] = None
        session.release(3)

    # The scan cap is a defensive bound on the damped local search; see the
    # module docstring.  Exceeding it would mean the gain threshold failed
    # to force geometric progress, i.e. a bug.
    w_bits = max(1, source.max_weight.bit_length())
    n_bits = max(1, n_view.bit_length())
    scan_cap = 64 + 8 * n_view * params.k * params.k * (w_bits + n_bits + 4)
    scans = 0
    while True:
        scans += 1
        if scans > scan_cap:
            raise AssertionError("weighted local search failed to converge")
        # Accept gain > eps^2 * w(M) / (4 n), compared cross-multiplied so the
        # hot path stays in integers.
        eps_sq = params.epsilon * params.epsilon
        thr_num = eps_sq.numerator * weight_now
        thr_mul = eps_sq.denominator * 4 * n_view
        swaps = _enumerate_swaps(
            n_view, kentries, adj, partner, matched, params.max_swap_edges, thr_num, thr_mul
        )
        if not swaps:
            break
        swaps.sort(key=lambda c: (-c[0], c[1]))
        touched: set[int] = set()
        for _, _, adds, drops in swaps:
            verts: set[int] = set()
            for idx in adds:
                verts.add(kentries[idx][0])
                verts.add(kentries[idx][1])
            for key in drops:
                verts.add(key[0])
                verts.add(key[1])
            if verts & touched:
                continue
            for key in drops:
                unmatch(key)
            for idx in adds:
                match(idx)
            touched |= verts

    for idx in sorted(range(len(kentries)), key=lambda i: (-kentries[i][2], kentries[i][3])):
        u, v, _, _, _ = kentries[idx]
        if partner[u] is None and partner[v] is None:
            match(idx)

    session.release(3 * len(kentries))
    session.release(n_view)
    picked = sorted(matched.values(), key=lambda i: kentries[i][3])
    edges = tuple(kentries[i][4] for i in picked)
    session.end_run()
    return Matching(edges)


def _enumerate_swaps(
    n_view: int,
    kentries: list[tuple[int, int, int, Edge]],
    adj: list[list[int]],
    partner: list[int | None],
    matched: dict[tuple[int, int], int],
    limit: int,
    thr_num: int,
    thr_mul: int,
) -> list[tuple[int, tuple[int, ...], tuple[int, ...], tuple[tuple[int, int], ...]]]:
    """All improving alternating path/cycle swaps of at most ``limit`` edges.

    A swap adds kernel edges and drops matched edges so that the result is
    again a matching: walks start either at a free vertex or by dropping a
    matched edge, strictly alternate add/drop, may stop at a free vertex or
    right after a drop, and may close into an even cycle at a start whose
    matched edge was dropped.  "Improving" means ``gain * thr_mul >
    thr_num``.  Every swap is reported once, deduplicated by its sorted
    position signature; vertices visited along a walk are tracked as a
    bitmask.
    """
    out: list[tuple[int, tuple[int, ...], tuple[int, ...], tuple[tuple[int, int], ...]]] = []
    seen: set[tuple[int, ...]] = set()

    def weight_of(key: tuple[int, int]) -> int:
        return kentries[matched[key]][2]

    def record(gain: int, adds: list[int], drops: list[tuple[int, int]]) -> None:
        if gain * thr_mul <= thr_num:
            return
        signature = tuple(
            sorted([kentries[i][3] for i in adds] + [kentries[matched[k]][3] for k in drops])
        )
        if signature in seen:
            return
        seen.add(signature)
        out.append((gain, signature, tuple(adds), tuple(drops)))

    def grow(
        cur: int,
        start: int,
        start_matched: bool,
        adds: list[int],
        drops: list[tuple[int, int]],
        visited: int,
        gain: int,
    ) -> None:
        room = limit - len(adds) - len(drops)
        if room < 1:
            return
        for idx in adj[cur]:
            u, v, w, _, _ = kentries[idx]
            nxt = v if u == cur else u
            key = (u, v) if u < v else (v, u)
            if key in matched:
                continue
            if nxt == start and start_matched:
                record(gain + w, adds + [idx], drops)
                continue
            if (visited >> nxt) & 1:
                continue
            mate = partner[nxt]
            if mate is None:
                record(gain + w, adds + [idx], drops)
                continue
            if room < 2 or (visited >> mate) & 1:
                continue
            mkey = (nxt, mate) if nxt < mate else (mate, nxt)
            dropped = gain + w - weight_of(mkey)
            record(dropped, adds + [idx], drops + [mkey])
            grow(
                mate,
                start,
                start_matched,
                adds + [idx],
                drops + [mkey],
                visited | (1 << nxt) | (1 << mate),
                dropped,
            )

    for s in range(n_view):
        mate = partner[s]
        if mate is None:
            grow(s, s, False, [], [], 1 << s, 0)
        else:
            skey = (s, mate) if s < mate else (mate, s)
            grow(mate, s, True, [], [skey], (1 << s) | (1 << mate), -weight_of(skey))
    return out


def oracle_max_matching(g: Graph) -> Matching:
    """Exact maximum cardinality matching; see ``_exact_matching`` limits."""
    return _exact_matching(g, weighted=False)


def oracle_max_weight_matching(g: Graph) -> Matching:
    """Exact maximum weight matching; see ``_exact_matching`` limits."""
    return _exact_matching(g, weighted=True)


def _exact_matching(g: Graph, weighted: bool) -> Matching:
    """Exhaustive maximum matching via subset DP or edge branching.

    Handles up to 16 non-isolated vertices (DP over vertex subsets) or,
    past that, up to 24 distinct edges (branching).  Deterministic witness:
    among optima, the one found first by lowest-vertex DP backtracking or
    by include-first branching in stream order.
    """
    best: dict[tuple[int, int], tuple[int, int, Edge]] = {}
    for pos, e in enumerate(g.edges):
        val = e.weight if weighted else 1
        cur = best.get(e.pair)
        if cur is None or val > cur[0]:
            best[e.pair] = (val, pos, e)
    items = sorted(best.values(), key=lambda t: t[1])
    active = sorted({v for _, _, e in items for v in (e.u, e.v)})
    if len(active) <= 16:
        chosen = _matching_subset_dp(items, active)
    elif len(items) <= 24:
        chosen = _matching_branching(items)
    else:
        raise OracleLimitError(
            "exact matching handles <= 16 non-isolated vertices or <= 24 distinct "
            f"edges; got {len(active)} vertices and {len(items)} edges"
        )
    return Matching(tuple(e for _, _, e in sorted(chosen, key=lambda t: t[1])))


def _matching_subset_dp(
    items: list[tuple[int, int, Edge]], active: list[int]
) -> list[tuple[int, int, Edge]]:
    index = {v: i for i, v in enumerate(active)}
    a = len(active)
    cell: list[list[tuple[int, int, Edge] | None]] = [[None] * a for _ in range(a)]
    for val, pos, e in items:
        i, j = index[e.u], index[e.v]
        cell[i][j] = cell[j][i] = (val, pos, e)
    size = 1 << a
    value = [0] * size
    choice = [-1] * size
    for mask in range(1, size):
        i = (mask & -mask).bit_length() - 1
        without_i = mask ^ (1 << i)
        best_val = value[without_i]
        best_j = -1
        rest = without_i
        while rest:
            j = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            c = cell[i][j]
            if c is not None:
                cand = c[0] + value[without_i ^ (1 << j)]
                if cand > best_val:
                    best_val = cand
                    best_j = j
        value[mask] = best_val
        choice[mask] = best_j
    chosen = []
    mask = size - 1
    while mask:
        i = (mask & -mask).bit_length() - 1
        j = choice[mask]
        if j == -1:
            mask ^= 1 << i
        else:
            chosen.append(cell[i][j])
            mask ^= (1 << i) | (1 << j)
    return chosen


def _matching_branching(items: list[tuple[int, int, Edge]]) -> list[tuple[int, int, Edge]]:
    m = len(items)
    suffix = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] + items[i][0]
    best_val = -1
    best_set: list[tuple[int, int, Edge]] = []
    chosen: list[tuple[int, int, Edge]] = []
    used: set[int] = set()

    def rec(i: int, val: int) -> None:
        nonlocal best_val, best_set
        if i == m:
            if val > best_val:
                best_val = val
                best_set = list(chosen)
            return
        if val + suffix[i] <= best_val:
            return
        v0, _, e0 = items[i]
        if e0.u not in used and e0.v not in used:
            used.add(e0.u)
            used.add(e0.v)
            chosen.append(items[i])
            rec(i + 1, val + v0)
            chosen.pop()
            used.discard(e0.u)
            used.discard(e0.v)
        rec(i + 1, val)

    rec(0, 0)
    return best_set
