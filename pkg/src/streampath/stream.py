"""Edge streams and the pass/memory bookkeeping around them.

The streaming model simulated here: an algorithm may read the edge
sequence front to back as often as it likes (each full read is a *pass*)
but may only retain a working state of O(n) machine words between and
during passes.  A ``StreamSession`` counts both resources.  Counting is
cooperative: engine code calls ``charge``/``release`` as it grows and
shrinks its retained state, with the conversion

* one machine word per stored vertex id or small counter,
* three words per retained edge (two endpoints + weight or stream slot).

The session does not try to measure actual Python object sizes; the point
is to certify the model's asymptotics, not CPython's allocator.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, Iterator

from .graph import Edge, Graph


class StreamFormatError(ValueError):
    """An edge-list file does not follow the expected format."""


class BudgetExceededError(RuntimeError):
    """Retained words exceeded the session budget (strict mode only)."""


class EdgeStreamSource:
    """Interface for anything that can replay an edge sequence.

    Subclasses provide ``n``, ``m``, ``weighted``, ``max_weight``, ``name``
    and an ``edges()`` iterator.  ``edges()`` must yield the same sequence
    every time it is called.
    """

    name: str
    n: int
    m: int
    weighted: bool
    max_weight: int

    def edges(self) -> Iterator[Edge]:
        raise NotImplementedError


class InMemoryEdgeSource(EdgeStreamSource):
    """Streams a Graph held in memory.  The graph itself is not charged
    against any session budget: it plays the role of the external input."""

    def __init__(self, graph: Graph, name: str = "memory") -> None:
        self.graph = graph
        self.name = name
        self.n = graph.n
        self.m = graph.m
        self.weighted = graph.weighted
        self.max_weight = graph.max_weight

    def edges(self) -> Iterator[Edge]:
        return iter(self.graph.edges)


def _parse_header(line: str, path: str) -> tuple[int, int, bool]:
    tokens = line.split()
    if len(tokens) == 2:
        weighted = False
    elif len(tokens) == 3 and tokens[2] == "weighted":
        weighted = True
    else:
        raise StreamFormatError(
            f"{path}:1: header must be 'n m' or 'n m weighted', got {line.strip()!r}"
        )
    try:
        n, m = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise StreamFormatError(f"{path}:1: vertex and edge counts must be ints") from None
    if n < 0 or m < 0:
        raise StreamFormatError(f"{path}:1: vertex and edge counts must be non-negative")
    return n, m, weighted


def _parse_edge_line(line: str, lineno: int, n: int, weighted: bool, path: str) -> Edge:
    tokens = line.split()
    want = 3 if weighted else 2
    if len(tokens) != want:
        raise StreamFormatError(
            f"{path}:{lineno}: expected {want} fields on an edge line, got {len(tokens)}"
        )
    try:
        values = [int(t) for t in tokens]
    except ValueError:
        raise StreamFormatError(f"{path}:{lineno}: edge fields must be ints") from None
    u, v = values[0], values[1]
    w = values[2] if weighted else 1
    if not (0 <= u < n and 0 <= v < n):
        raise StreamFormatError(f"{path}:{lineno}: endpoint out of range [0, {n})")
    if u == v:
        raise StreamFormatError(f"{path}:{lineno}: self-loop at vertex {u}")
    if w < 1:
        raise StreamFormatError(f"{path}:{lineno}: weight must be >= 1, got {w}")
    return Edge(u, v, w)


class FileEdgeSource(EdgeStreamSource):
    """Streams an edge-list file.

    Format: first line ``n m`` or ``n m weighted``; then exactly m lines
    ``u v`` (or ``u v w``), 0-indexed, no self-loops, weights >= 1.  Line
    order is the stream's arrival order.  The whole file is validated once
    when the source is opened, without retaining the edges; each pass then
    re-reads from disk.
    """

    def __init__(self, path: str) -> None:
        self.path = path
        self.name = os.path.basename(path)
        max_w = 1
        with open(path, "r", encoding="ascii") as fh:
            header = fh.readline()
            if not header:
                raise StreamFormatError(f"{path}:1: empty file")
            self.n, self.m, self.weighted = _parse_header(header, path)
            count = 0
            for lineno, line in enumerate(fh, start=2):
                if line.strip() == "":
                    raise StreamFormatError(f"{path}:{lineno}: blank line inside edge list")
                e = _parse_edge_line(line, lineno, self.n, self.weighted, path)
                max_w = max(max_w, e.weight)
                count += 1
            if count != self.m:
                raise StreamFormatError(
                    f"{path}: header promises {self.m} edges, file has {count}"
                )
        self.max_weight = max_w

    def edges(self) -> Iterator[Edge]:
        with open(self.path, "r", encoding="ascii") as fh:
            fh.readline()
            for lineno, line in enumerate(fh, start=2):
                yield _parse_edge_line(line, lineno, self.n, self.weighted, self.path)


def load_edge_list(path: str) -> Graph:
    """Read a whole edge-list file into a Graph (non-streaming convenience)."""
    src = FileEdgeSource(path)
    return Graph(src.n, tuple(src.edges()), src.weighted)


def save_edge_list(path: str, g: Graph) -> None:
    """Write ``g`` in the edge-list format, preserving edge order."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{g.n} {g.m} weighted\n" if g.weighted else f"{g.n} {g.m}\n")
        for e in g.edges:
            fh.write(f"{e.u} {e.v} {e.weight}\n" if g.weighted else f"{e.u} {e.v}\n")


def default_words_budget(n: int, k: int, max_weight: int = 0) -> int:
    """Budget of 64*n*k words, scaled by ceil(log2(W+1)) when weighted.

    ``max_weight`` of 0 means the unweighted model.  The constant is loose
    on purpose: the budget exists to catch accidentally-superlinear state,
    not to squeeze the engines.
    """
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    words = 64 * n * k
    if max_weight > 0:
        words *= max(1, math.ceil(math.log2(max_weight + 1)))
    return words


@dataclass(frozen=True)
class RunRecord:
    """Resources one labeled engine run consumed inside a session."""

    label: str
    passes: int
    words_peak: int


@dataclass(frozen=True)
class StreamReport:
    """Immutable snapshot of a session's accounting."""

    source: str
    n: int
    m: int
    passes_used: int
    words_budget: int
    words_peak: int
    budget_exceeded: bool
    runs: tuple[RunRecord, ...]

    def as_dict(self) -> dict:
        return {
            "source": self.source,
            "n": self.n,
            "m": self.m,
            "passes_used": self.passes_used,
            "words_budget": self.words_budget,
            "words_peak": self.words_peak,
            "budget_exceeded": self.budget_exceeded,
            "runs": [
                {"label": r.label, "passes": r.passes, "words_peak": r.words_peak}
                for r in self.runs
            ],
        }


class StreamSession:
    """Counts passes over a source and words of retained state.

    In strict mode the first ``charge`` that pushes retained state past the
    budget raises ``BudgetExceededError``; otherwise the overrun is only
    recorded in the report.  ``begin_run``/``end_run`` bracket one engine
    invocation so multi-run pipelines can attribute resources per phase.
    """

    def __init__(self, source: EdgeStreamSource, words_budget: int, strict: bool = False) -> None:
        if words_budget < 1:
            raise ValueError("words budget must be positive")
        self.source = source
        self.words_budget = words_budget
        self.strict = strict
        self.passes_used = 0
        self.words_in_use = 0
        self.words_peak = 0
        self.budget_exceeded = False
        self._runs: list[RunRecord] = []
        self._run_label: str | None = None
        self._run_pass_start = 0
        self._run_peak = 0

    def charge(self, words: int) -> None:
        if words < 0:
            raise ValueError("cannot charge negative words")
        self.words_in_use += words
        if self.words_in_use > self.words_peak:
            self.words_peak = self.words_in_use
        if self._run_label is not None and self.words_in_use > self._run_peak:
            self._run_peak = self.words_in_use
        if self.words_in_use > self.words_budget:
            self.budget_exceeded = True
            if self.strict:
                raise BudgetExceededError(
                    f"retained {self.words_in_use} words, budget {self.words_budget}"
                )

    def release(self, words: int) -> None:
        if words < 0:
            raise ValueError("cannot release negative words")
        if words > self.words_in_use:
            raise ValueError("releasing more words than are in use")
        self.words_in_use -= words

    def run_pass(self, visit: Callable[[int, Edge], None]) -> None:
        """Stream every edge through ``visit(position, edge)`` once."""
        self.passes_used += 1
        for pos, e in enumerate(self.source.edges()):
            visit(pos, e)

    def begin_run(self, label: str) -> None:
        if self._run_label is not None:
            raise RuntimeError(f"run {self._run_label!r} is still open")
        self._run_label = label
        self._run_pass_start = self.passes_used
        self._run_peak = self.words_in_use

    def end_run(self) -> RunRecord:
        if self._run_label is None:
            raise RuntimeError("no run is open")
        record = RunRecord(
            label=self._run_label,
            passes=self.passes_used - self._run_pass_start,
            words_peak=self._run_peak,
        )
        self._runs.append(record)
        self._run_label = None
        return record

    def report(self) -> StreamReport:
        return StreamReport(
            source=self.source.name,
            n=self.source.n,
            m=self.source.m,
            passes_used=self.passes_used,
            words_budget=self.words_budget,
            words_peak=self.words_peak,
            budget_exceeded=self.budget_exceeded,
            runs=tuple(self._runs),
        )


def open_session(
    source: EdgeStreamSource,
    *,
    k: int | None = None,
    words_budget: int | None = None,
    strict: bool = False,
) -> StreamSession:
    """Make a session for ``source`` with an explicit or default budget.

    Exactly one of ``k`` (for the default 64*n*k budget) or ``words_budget``
    must be given.
    """
    if words_budget is None:
        if k is None:
            raise ValueError("need k to size the default budget")
        words_budget = default_words_budget(
            max(source.n, 1), k, source.max_weight if source.weighted else 0
        )
    return StreamSession(source, words_budget, strict)
