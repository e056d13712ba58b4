"""Exactly rounded float64 accumulation primitives.

Every row-level reduction in the solver (inner products, squared norms, and
the sum of violation slices) is computed with exactly rounded summation,
i.e. the result is the correctly rounded value of the exact real sum.  An
exactly rounded sum depends only on the multiset of addends, never on
evaluation order, grouping, or SIMD backend.  This is what lets the
master-worker engine return bit-identical iterates for any worker count:
each worker keeps its partial sum as an exact expansion (a short list of
non-overlapping doubles whose exact sum equals the partial sum), the master
concatenates expansions, and the total is rounded once.

The expansion arithmetic is the classic two-sum cascade used by
``math.fsum`` internally; it requires IEEE-754 round-to-nearest, which
CPython guarantees for float64.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["exact_dot", "grow_expansion", "VectorExpansion"]


def exact_dot(u: np.ndarray, v: np.ndarray) -> float:
    """Exactly rounded inner product of two equal-length 1-D float arrays.

    The elementwise products round individually (ordinary IEEE multiply);
    their sum is exactly rounded, so the result is a pure function of the
    operand values.
    """
    return math.fsum((u * v).tolist())


def grow_expansion(partials: list[float], value: float) -> None:
    """Add ``value`` into ``partials`` in place, keeping the sum exact.

    Invariant: sum(partials) as an exact real number equals the exact sum
    of every value ever grown into the list.  Components stay
    non-overlapping, so the list stays short (typically 1-3 entries).
    """
    x = value
    i = 0
    for y in partials:
        if abs(x) < abs(y):
            x, y = y, x
        hi = x + y
        lo = y - (hi - x)
        if lo:
            partials[i] = lo
            i += 1
        x = hi
    partials[i:] = [x]


class VectorExpansion:
    """Per-coordinate exact accumulator for sums of float64 vectors.

    ``add`` folds one vector into the running sum, ``merge`` folds in another
    accumulator (both exact), and ``rounded`` rounds each coordinate once.
    Two accumulators that saw the same addends in any order and any grouping
    round to identical bits.
    """

    __slots__ = ("dim", "_partials")

    def __init__(self, dim: int):
        self.dim = dim
        self._partials: list[list[float]] = [[] for _ in range(dim)]

    def add(self, vec: np.ndarray) -> None:
        for j, v in enumerate(vec.tolist()):
            if v:
                grow_expansion(self._partials[j], v)

    def merge(self, other: "VectorExpansion") -> None:
        if other.dim != self.dim:
            raise ValueError(
                f"dimension mismatch: cannot merge expansion of dim {other.dim} "
                f"into dim {self.dim}"
            )
        for mine, theirs in zip(self._partials, other._partials):
            for v in theirs:
                grow_expansion(mine, v)

    def rounded(self) -> np.ndarray:
        return np.fromiter(
            (math.fsum(p) for p in self._partials), dtype=np.float64, count=self.dim
        )
