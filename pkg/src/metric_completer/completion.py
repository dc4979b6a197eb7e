"""The magic completion engine, a bounded shortest-path baseline, and an
exhaustive completion oracle for cross-checking both."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .errors import CapacityError, PreconditionError
from .graphs import EdgeLabelledGraph, TriangleViolation, violations
from .params import (
    Params,
    TriangleStatus,
    classify_triangle,
    default_magic,
    distance_at_rank,
    fork_families,
    require_acceptable,
    require_magic,
)


class CompletionStatus(Enum):
    COMPLETED = "completed"
    FAILED = "failed"


class Family(Enum):
    SUM = "F+"
    DIFF = "F-"
    CAP = "FC"
    FINAL = "FinalM"
    PATH = "SP"


@dataclass(frozen=True)
class TraceStep:
    rank: int
    distance: int
    u: int
    v: int
    witness: int | None
    fork: tuple[int, int] | None
    family: Family

    def as_dict(self) -> dict:
        return {
            "rank": self.rank,
            "distance": self.distance,
            "u": self.u,
            "v": self.v,
            "witness": self.witness,
            "fork": list(self.fork) if self.fork is not None else None,
            "family": self.family.value,
        }

    def describe(self) -> str:
        if self.family is Family.FINAL:
            return f"final: ({self.u},{self.v}) = {self.distance}"
        if self.family is Family.PATH:
            return f"step {self.rank}: ({self.u},{self.v}) = {self.distance}"
        a, b = self.fork
        return (
            f"rank {self.rank}: ({self.u},{self.v}) = {self.distance} "
            f"witness {self.witness} fork ({a},{b}) {self.family.value}"
        )


@dataclass(frozen=True)
class CompletionTrace:
    steps: tuple[TraceStep, ...]
    final_graph: EdgeLabelledGraph

    def as_json(self) -> str:
        return json.dumps([step.as_dict() for step in self.steps])


@dataclass(frozen=True)
class CompletionResult:
    status: CompletionStatus
    trace: CompletionTrace
    violations: tuple[TriangleViolation, ...]


def _family_tag(a: int, b: int, x: int, params: Params) -> Family:
    if a + b == x:
        return Family.SUM
    if abs(a - b) == x:
        return Family.DIFF
    assert params.c - 1 - a - b == x, "fork does not generate this distance"
    return Family.CAP


def complete_magic(
    g: EdgeLabelledGraph, params: Params, magic: int | None = None
) -> CompletionResult:
    """Complete ``g`` by inserting distances rank by rank around ``magic``.

    Each rank carries one distance (see time_function).  At a rank, every
    non-edge with a witness vertex whose two distances form a fork of that
    distance's family receives the distance; the insertions of one rank are
    simultaneous, collected before any of them lands.  Pairs still open after
    the last rank receive the magic distance.  The result is Failed exactly
    when the finished graph contains a forbidden triangle, and an input that
    already contains one fails immediately.  Defaults to the maximum magic
    distance when ``magic`` is omitted.
    """
    require_acceptable(params)
    if magic is None:
        magic = default_magic(params)
    require_magic(magic, params)
    for (u, v), d in g.edges.items():
        if d > params.delta:
            raise PreconditionError(
                f"edge ({u}, {v}) carries {d}, beyond delta={params.delta}"
            )

    initial = violations(g, params)
    if initial:
        return CompletionResult(
            CompletionStatus.FAILED, CompletionTrace((), g), tuple(initial)
        )

    n = g.vertex_count
    dist = g.matrix()
    families = fork_families(magic, params)
    steps: list[TraceStep] = []
    for rank in range(1, 2 * params.delta + 1):
        x = distance_at_rank(rank, magic, params.delta)
        if x is None:
            continue
        fam = families.family(x)
        if not fam:
            continue
        additions = []
        for u in range(n):
            row_u = dist[u]
            for v in range(u + 1, n):
                if row_u[v]:
                    continue
                for w in range(n):
                    if w == u or w == v:
                        continue
                    a = row_u[w]
                    b = dist[w][v]
                    if a and b and (a, b) in fam:
                        additions.append((u, v, w, a, b))
                        break
        for u, v, w, a, b in additions:
            dist[u][v] = dist[v][u] = x
            steps.append(TraceStep(rank, x, u, v, w, (a, b), _family_tag(a, b, x, params)))

    final_rank = 2 * params.delta + 1
    for u in range(n):
        for v in range(u + 1, n):
            if not dist[u][v]:
                dist[u][v] = dist[v][u] = magic
                steps.append(TraceStep(final_rank, magic, u, v, None, None, Family.FINAL))

    final = EdgeLabelledGraph(
        n, [(u, v, dist[u][v]) for u in range(n) for v in range(u + 1, n)]
    )
    viol = violations(final, params)
    status = CompletionStatus.COMPLETED if not viol else CompletionStatus.FAILED
    return CompletionResult(status, CompletionTrace(tuple(steps), final), tuple(viol))


def shortest_path_completion(g: EdgeLabelledGraph, params: Params) -> CompletionResult:
    """Fill every non-edge with its path distance capped at delta.

    Disconnected pairs get delta.  Existing edges are kept as they are.
    """
    require_acceptable(params)
    n = g.vertex_count
    big = float("inf")
    dist = [[big] * n for _ in range(n)]
    for i in range(n):
        dist[i][i] = 0
    for (u, v), d in g.edges.items():
        dist[u][v] = dist[v][u] = d
    for w in range(n):
        row_w = dist[w]
        for u in range(n):
            duw = dist[u][w]
            if duw is big:
                continue
            row_u = dist[u]
            for v in range(n):
                alt = duw + row_w[v]
                if alt < row_u[v]:
                    row_u[v] = alt
    steps = []
    triples = []
    for u, v in itertools.combinations(range(n), 2):
        d = g.distance(u, v)
        if d is None:
            d = int(min(dist[u][v], params.delta))
            steps.append(TraceStep(d, d, u, v, None, None, Family.PATH))
        triples.append((u, v, d))
    steps.sort(key=lambda s: (s.rank, s.u, s.v))
    final = EdgeLabelledGraph(n, triples)
    viol = violations(final, params)
    status = CompletionStatus.COMPLETED if not viol else CompletionStatus.FAILED
    return CompletionResult(status, CompletionTrace(tuple(steps), final), tuple(viol))


@lru_cache(maxsize=None)
def _allowed_table(params: Params):
    """allowed[a][b][c] over 0..delta, False whenever an index is 0."""
    delta = params.delta
    table = [
        [[False] * (delta + 1) for _ in range(delta + 1)] for _ in range(delta + 1)
    ]
    for a in range(1, delta + 1):
        for b in range(1, delta + 1):
            row = table[a][b]
            for c in range(1, delta + 1):
                row[c] = classify_triangle(a, b, c, params) is TriangleStatus.ALLOWED
    return table


def _completion_values(g: EdgeLabelledGraph, params: Params, budget: int):
    """Yield (pairs, values) for every completion of ``g``, depth first.

    ``pairs`` is the fixed tuple of unset pairs, grouped so that each new
    vertex is fully connected before the next one starts; ``values`` is
    reused between yields and must be copied by consumers that keep it.
    """
    require_acceptable(params)
    delta = params.delta
    pairs = tuple(sorted(g.non_edges(), key=lambda p: (p[1], p[0])))
    if pairs and delta ** len(pairs) > budget:
        raise CapacityError(
            f"{len(pairs)} unset pairs mean {delta ** len(pairs)} assignments, "
            f"over the budget of {budget}"
        )
    if violations(g, params):
        return
    n = g.vertex_count
    dist = g.matrix()
    allowed = _allowed_table(params)
    values = [0] * len(pairs)

    def search(i: int):
        if i == len(pairs):
            yield pairs, values
            return
        u, v = pairs[i]
        row_u = dist[u]
        row_v = dist[v]
        for val in range(1, delta + 1):
            ok = True
            for w in range(n):
                if w == u or w == v:
                    continue
                a = row_u[w]
                b = row_v[w]
                if a and b and not allowed[a][b][val]:
                    ok = False
                    break
            if ok:
                row_u[v] = row_v[u] = val
                values[i] = val
                yield from search(i + 1)
                row_u[v] = row_v[u] = 0
        return

    yield from search(0)


def oracle_completions(g: EdgeLabelledGraph, params: Params, budget: int = 10**8):
    """Yield every completion of ``g`` in the class, in a fixed search order."""
    n = g.vertex_count
    base = list(g.edges.items())
    for pairs, values in _completion_values(g, params, budget):
        triples = [(u, v, d) for (u, v), d in base]
        triples.extend((u, v, d) for (u, v), d in zip(pairs, values))
        yield EdgeLabelledGraph(n, triples)


def oracle_complete(
    g: EdgeLabelledGraph, params: Params, budget: int = 10**8
) -> EdgeLabelledGraph | None:
    """The first completion found by exhaustive search, or None."""
    return next(oracle_completions(g, params, budget), None)


def oracle_value_ranges(g: EdgeLabelledGraph, params: Params, budget: int = 10**8):
    """Exhaust all completions, tracking each unset pair's extreme values.

    Returns (count, ranges) where ranges maps each unset pair to the
    (smallest, largest) value it takes over all completions; count is the
    number of completions.
    """
    count = 0
    lows: list[int] | None = None
    highs: list[int] | None = None
    kept_pairs = None
    for pairs, values in _completion_values(g, params, budget):
        kept_pairs = pairs
        if lows is None:
            lows = list(values)
            highs = list(values)
        else:
            for i, val in enumerate(values):
                if val < lows[i]:
                    lows[i] = val
                elif val > highs[i]:
                    highs[i] = val
        count += 1
    if count == 0:
        return 0, {}
    return count, {
        pair: (lows[i], highs[i]) for i, pair in enumerate(kept_pairs)
    }


@dataclass(frozen=True)
class SandwichReport:
    holds: bool
    pair: tuple[int, int] | None = None
    engine_value: int | None = None
    other_value: int | None = None


def check_sandwich(
    g: EdgeLabelledGraph,
    magic_result: CompletionResult,
    other: EdgeLabelledGraph,
    magic: int,
) -> SandwichReport:
    """Verify the engine's completion sits between magic and any other one.

    Pair by pair, with d the engine's value and d' the other completion's,
    either d' >= d >= magic or d' <= d <= magic must hold.  Reports the first
    offending pair.
    """
    if magic_result.status is not CompletionStatus.COMPLETED:
        raise PreconditionError("engine result is not a completion")
    final = magic_result.trace.final_graph
    if other.vertex_count != g.vertex_count or not other.is_complete():
        raise PreconditionError("other completion must be complete on the same vertices")
    for pair, d in g.edges.items():
        if other.edges.get(pair) != d:
            raise PreconditionError(f"other completion changes input edge {pair}")
    for u, v in g.pairs():
        dv = final.distance(u, v)
        ov = other.distance(u, v)
        if not (ov >= dv >= magic or ov <= dv <= magic):
            return SandwichReport(False, (u, v), dv, ov)
    return SandwichReport(True)
