"""Parameters of the bounded metric classes and the fork machinery.

A class of finite integer metric spaces is described by three integers:
``delta`` bounds every distance, every triangle perimeter must stay strictly
below ``c``, and every odd triangle perimeter must be at least ``2*k + 1``.
This module validates parameter triples, classifies distance triples against
the three constraints, computes the magic distances, and builds the fork
families and insertion schedule that drive the completion engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Mapping

from .errors import ParameterError, RangeError

Fork = tuple[int, int]


@dataclass(frozen=True)
class Params:
    """Class parameters.

    Distances live in 1..delta.  Acceptability requires delta >= 2,
    1 <= k <= delta and 2*delta + k < c <= 3*delta + 1.
    """

    delta: int
    k: int
    c: int

    def check(self) -> "ParamCheck":
        return validate_params(self.delta, self.k, self.c)


@dataclass(frozen=True)
class ParamCheck:
    accepted: bool
    reason: str | None = None


def _is_positive_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 1


def validate_params(delta, k, c) -> ParamCheck:
    """Check a parameter triple, reporting the first violated clause."""
    for name, value in (("delta", delta), ("k", k), ("c", c)):
        if not _is_positive_int(value):
            return ParamCheck(False, f"{name} must be a positive integer")
    if delta < 2:
        return ParamCheck(False, "delta must be at least 2")
    if k > delta:
        return ParamCheck(False, "k exceeds delta")
    if c <= 2 * delta + k:
        return ParamCheck(False, f"c must exceed 2*delta + k = {2 * delta + k}")
    if c > 3 * delta + 1:
        return ParamCheck(False, f"c exceeds 3*delta + 1 = {3 * delta + 1}")
    return ParamCheck(True)


def require_acceptable(params: Params) -> None:
    check = params.check()
    if not check.accepted:
        raise ParameterError(
            f"unacceptable parameters delta={params.delta} k={params.k} "
            f"c={params.c}: {check.reason}"
        )


class TriangleStatus(Enum):
    ALLOWED = "allowed"
    NON_METRIC = "non-metric"
    ODD_SHORT = "odd-short"
    LONG_PERIMETER = "long-perimeter"


def _check_distance(value, params: Params) -> None:
    if not _is_positive_int(value) or value > params.delta:
        raise RangeError(f"distance {value!r} outside 1..{params.delta}")


def classify_triangle(a: int, b: int, c: int, params: Params) -> TriangleStatus:
    """Classify one distance triple against the three class constraints.

    The order is fixed: a triple failing several predicates reports the first
    of non-metric, odd-short, long-perimeter.  Symmetric in a, b, c.
    """
    require_acceptable(params)
    for value in (a, b, c):
        _check_distance(value, params)
    perimeter = a + b + c
    if 2 * max(a, b, c) > perimeter:
        return TriangleStatus.NON_METRIC
    if perimeter % 2 == 1 and perimeter < 2 * params.k + 1:
        return TriangleStatus.ODD_SHORT
    if perimeter >= params.c:
        return TriangleStatus.LONG_PERIMETER
    return TriangleStatus.ALLOWED


def magic_distances(params: Params) -> tuple[int, ...]:
    """All magic distances, ascending.

    A distance m is magic when max(k, ceil(delta/2)) <= m <= (c-delta-1)//2.
    Equivalently, the triangle (m, m, b) is allowed for every b; see
    magic_oracle.  Nonempty for every acceptable triple.
    """
    require_acceptable(params)
    low = max(params.k, (params.delta + 1) // 2)
    high = (params.c - params.delta - 1) // 2
    return tuple(range(low, high + 1))


def magic_oracle(params: Params) -> tuple[int, ...]:
    """Magic distances computed the slow way, by sweeping classify_triangle."""
    require_acceptable(params)
    allowed = TriangleStatus.ALLOWED
    return tuple(
        a
        for a in range(1, params.delta + 1)
        if all(
            classify_triangle(a, a, b, params) is allowed
            for b in range(1, params.delta + 1)
        )
    )


def is_magic(magic: int, params: Params) -> bool:
    return magic in magic_distances(params)


def require_magic(magic: int, params: Params) -> None:
    if not is_magic(magic, params):
        choices = " ".join(str(m) for m in magic_distances(params))
        raise ParameterError(f"{magic} not magic (magic distances: {choices})")


def default_magic(params: Params) -> int:
    """The magic distance used when a caller does not pick one: the maximum."""
    return magic_distances(params)[-1]


def fork_range(a: int, b: int, params: Params) -> tuple[int, ...]:
    """All distances that close the fork (a, b) into an allowed triangle."""
    require_acceptable(params)
    _check_distance(a, params)
    _check_distance(b, params)
    allowed = TriangleStatus.ALLOWED
    return tuple(
        x
        for x in range(1, params.delta + 1)
        if classify_triangle(a, b, x, params) is allowed
    )


def fork_choice(a: int, b: int, magic: int, params: Params) -> int:
    """The completion the engine picks for the fork (a, b).

    This is the allowed distance nearest to magic.  The allowed values on or
    above magic form a gap-free run, so the nearest value is unique: magic
    itself when allowed, otherwise the endpoint of the allowed range facing
    magic.
    """
    require_magic(magic, params)
    allowed = fork_range(a, b, params)
    if not allowed:
        raise ParameterError(f"fork ({a}, {b}) has no allowed completion")
    return min(allowed, key=lambda x: (abs(x - magic), x))


def time_function(x: int, magic: int, delta: int) -> int:
    """Insertion rank of distance x: 2x - 1 below magic, 2*(delta - x) above.

    The magic distance has no rank; it is filled in the final step.
    """
    if not _is_positive_int(x) or x > delta:
        raise RangeError(f"distance {x!r} outside 1..{delta}")
    if x == magic:
        raise RangeError("the magic distance has no rank; it is filled last")
    if x < magic:
        return 2 * x - 1
    return 2 * (delta - x)


def distance_at_rank(rank: int, magic: int, delta: int) -> int | None:
    """Inverse of time_function: the distance inserted at ``rank``, or None."""
    if rank % 2 == 1:
        x = (rank + 1) // 2
        if x < magic:
            return x
    else:
        x = delta - rank // 2
        if x > magic:
            return x
    return None


@dataclass(frozen=True)
class FamilyBucket:
    """The forks that can produce one distance, split by generating rule."""

    distance: int
    sum_forks: frozenset[Fork]  # a + b = distance
    diff_forks: frozenset[Fork]  # |a - b| = distance
    cap_forks: frozenset[Fork]  # (c - 1) - a - b = distance


@dataclass(frozen=True)
class ForkFamilies:
    """The fork families of one magic distance, one bucket per other distance.

    Below magic a distance is produced by its sum and cap forks, above magic
    by its difference forks.  Empty buckets are kept so that the insertion
    schedule can be read off uniformly.
    """

    magic: int
    delta: int
    buckets: Mapping[int, FamilyBucket]

    def family(self, x: int) -> frozenset[Fork]:
        """The forks whose presence inserts distance x."""
        bucket = self.buckets[x]
        if x < self.magic:
            return bucket.sum_forks | bucket.cap_forks
        return bucket.diff_forks


@lru_cache(maxsize=None)
def fork_families(magic: int, params: Params) -> ForkFamilies:
    """Build the fork families of ``magic`` for every distance except magic."""
    require_acceptable(params)
    require_magic(magic, params)
    delta, cap = params.delta, params.c
    pairs = [
        (a, b)
        for a in range(1, delta + 1)
        for b in range(1, delta + 1)
    ]
    buckets = {}
    for x in range(1, delta + 1):
        if x == magic:
            continue
        buckets[x] = FamilyBucket(
            distance=x,
            sum_forks=frozenset(p for p in pairs if p[0] + p[1] == x),
            diff_forks=frozenset(p for p in pairs if abs(p[0] - p[1]) == x),
            cap_forks=frozenset(p for p in pairs if cap - 1 - p[0] - p[1] == x),
        )
    return ForkFamilies(magic=magic, delta=delta, buckets=buckets)
