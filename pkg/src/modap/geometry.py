"""Pointwise operators over dense systems of linear inequalities.

A system is ``A x <= b`` with m rows in R^n.  The operators here are the
building blocks of the projection solvers: signed residuals, reflection
vectors, orthogonal projections onto the bounding hyperplanes, positive
slices of reflections, the averaged violation direction (pseudo-projection)
and its fixed-length rescaling, and tolerance-based membership tests.

Conventions:
  * points and directions are plain 1-D float64 numpy arrays;
  * a row is *violated* by x iff its residual <a_i, x> - b_i is strictly
    positive (equality counts as satisfied);
  * squared row norms are computed once per system and cached, never per
    call;
  * every row-level reduction goes through :mod:`modap.summation`, so all
    results are independent of evaluation order and of how the row list is
    partitioned across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .summation import VectorExpansion, exact_dot

__all__ = [
    "FeasiblePointError",
    "InequalitySystem",
    "SliceResult",
    "residual",
    "reflection_vector",
    "orthogonal_projection",
    "positive_slice",
    "pseudo_projection",
    "fixed_step_direction",
    "eps_satisfies",
    "eps_membership",
    "max_relative_violation",
    "vector_norm",
]


class FeasiblePointError(ValueError):
    """Raised when an operator that needs a violated inequality is handed a
    point that already satisfies the whole system."""


class InequalitySystem:
    """Dense inequality system ``A x <= b`` with cached squared row norms.

    Every coefficient row must be non-zero.  Instances are treated as
    immutable: translation and right-hand-side updates go through
    :meth:`with_rhs`, which shares the coefficient matrix and the cached
    norms instead of recomputing them.
    """

    __slots__ = ("a", "b", "row_norms_sq", "row_norms")

    def __init__(self, a, b):
        a = np.array(a, dtype=np.float64, order="C")
        b = np.array(b, dtype=np.float64).reshape(-1)
        if a.ndim != 2:
            raise ValueError(f"coefficient array must be 2-D, got shape {a.shape}")
        m, n = a.shape
        if m < 1 or n < 1:
            raise ValueError(f"system must have m >= 1 rows and n >= 1 columns, got {a.shape}")
        if b.shape != (m,):
            raise ValueError(
                f"right-hand side has length {b.shape[0]}, expected m = {m}"
            )
        norms_sq = np.fromiter(
            (exact_dot(row, row) for row in a), dtype=np.float64, count=m
        )
        for i, v in enumerate(norms_sq.tolist()):
            if v == 0.0:
                raise ValueError(
                    f"row {i} is the zero vector; every inequality needs a non-zero "
                    "coefficient row"
                )
        self.a = a
        self.b = b
        self.row_norms_sq = norms_sq
        self.row_norms = np.sqrt(norms_sq)

    @property
    def n(self) -> int:
        return self.a.shape[1]

    @property
    def m(self) -> int:
        return self.a.shape[0]

    def with_rhs(self, b) -> "InequalitySystem":
        """New system with the same rows and a fresh right-hand side.

        The coefficient matrix and cached norms are shared, not copied; rows
        never change through this path so the cache stays valid.
        """
        b = np.array(b, dtype=np.float64).reshape(-1)
        if b.shape != (self.m,):
            raise ValueError(
                f"right-hand side has length {b.shape[0]}, expected m = {self.m}"
            )
        obj = object.__new__(InequalitySystem)
        obj.a = self.a
        obj.b = b
        obj.row_norms_sq = self.row_norms_sq
        obj.row_norms = self.row_norms
        return obj

    def __repr__(self) -> str:
        return f"InequalitySystem(m={self.m}, n={self.n})"


@dataclass
class SliceResult:
    """Positive slice of one row's reflection vector plus its violation flag.

    ``violated`` is 1 iff the row's residual is strictly positive, which is
    exactly when ``direction`` is non-zero.
    """

    direction: np.ndarray
    violated: int


def _as_point(x, n: int) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise ValueError(
            f"dimension mismatch: expected a point of length {n}, got shape {arr.shape}"
        )
    return arr


def _check_row(sys: InequalitySystem, i: int) -> None:
    if not 0 <= i < sys.m:
        raise IndexError(f"row index {i} out of range for system with m = {sys.m}")


def residual(sys: InequalitySystem, i: int, x) -> float:
    """Signed residual ``<a_i, x> - b_i``; positive iff x violates row i."""
    _check_row(sys, i)
    x = _as_point(x, sys.n)
    return exact_dot(sys.a[i], x) - float(sys.b[i])


def reflection_vector(sys: InequalitySystem, i: int, x) -> np.ndarray:
    """Reflection of x with respect to hyperplane i.

    ``rho = ((<a_i, x> - b_i) / ||a_i||^2) a_i``; subtracting it from x lands
    on the hyperplane.
    """
    _check_row(sys, i)
    x = _as_point(x, sys.n)
    r = exact_dot(sys.a[i], x) - float(sys.b[i])
    return (r / float(sys.row_norms_sq[i])) * sys.a[i]


def orthogonal_projection(sys: InequalitySystem, i: int, x) -> np.ndarray:
    """Orthogonal projection of x onto hyperplane i: ``x - rho``."""
    x = _as_point(x, sys.n)
    return x - reflection_vector(sys, i, x)


def _slice_direction(sys: InequalitySystem, i: int, x: np.ndarray):
    """Slice vector for a validated point, or None when row i is satisfied."""
    r = exact_dot(sys.a[i], x) - float(sys.b[i])
    if r > 0.0:
        return (r / float(sys.row_norms_sq[i])) * sys.a[i]
    return None


def positive_slice(sys: InequalitySystem, i: int, x) -> SliceResult:
    """Positive slice of the reflection vector: the reflection when row i is
    violated, the zero vector otherwise."""
    _check_row(sys, i)
    x = _as_point(x, sys.n)
    d = _slice_direction(sys, i, x)
    if d is None:
        return SliceResult(np.zeros(sys.n), 0)
    return SliceResult(d, 1)


def violated_slices(
    sys: InequalitySystem, x: np.ndarray, start: int = 0, stop: int | None = None
) -> list[np.ndarray]:
    """Slice vectors of the violated rows in [start, stop), ascending index.

    Internal kernel shared by the sequential solver and the worker threads;
    both must evaluate each row identically for parallel runs to reproduce
    sequential ones bit for bit.
    """
    if stop is None:
        stop = sys.m
    out = []
    for i in range(start, stop):
        d = _slice_direction(sys, i, x)
        if d is not None:
            out.append(d)
    return out


def pseudo_projection(sys: InequalitySystem, x) -> tuple[np.ndarray, int]:
    """Averaged violation direction and the count of violated rows.

    Returns ``(sum of positive slices / h, h)`` where h is the number of
    violated rows.  When every row is satisfied (h = 0) the direction is the
    zero vector by convention; callers treat that as "feasible, stop".
    """
    x = _as_point(x, sys.n)
    slices = violated_slices(sys, x)
    h = len(slices)
    if h == 0:
        return np.zeros(sys.n), 0
    acc = VectorExpansion(sys.n)
    for d in slices:
        acc.add(d)
    return acc.rounded() / h, h


def fixed_step_direction(sys: InequalitySystem, x, step_length: float) -> np.ndarray:
    """Averaged violation direction rescaled to constant length.

    Returns ``step_length * phi / ||phi||`` where phi is the pseudo-projection
    direction.  The fixed length is what keeps the iteration moving at full
    speed near the boundary of a moving feasible region.

    Raises :class:`FeasiblePointError` when x satisfies every row; check the
    violated count first.
    """
    if step_length <= 0:
        raise ValueError(f"step_length must be positive, got {step_length}")
    direction, h = pseudo_projection(sys, x)
    if h == 0:
        raise FeasiblePointError(
            "point satisfies every inequality; the fixed-length step direction "
            "is undefined"
        )
    norm = vector_norm(direction)
    return (step_length / norm) * direction


def eps_satisfies(sys: InequalitySystem, i: int, x, eps: float) -> bool:
    """True iff x satisfies row i, or violates it by less than ``eps`` in
    normalized distance ``|<a_i,x> - b_i| / ||a_i||``."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    r = residual(sys, i, x)
    return r <= 0.0 or r / float(sys.row_norms[i]) < eps


def eps_membership(sys: InequalitySystem, x, eps: float) -> bool:
    """True iff every row is satisfied or violated by less than ``eps``."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    x = _as_point(x, sys.n)
    a, b, norms = sys.a, sys.b, sys.row_norms
    for i in range(sys.m):
        r = exact_dot(a[i], x) - float(b[i])
        if r > 0.0 and r / float(norms[i]) >= eps:
            return False
    return True


def max_relative_violation(sys: InequalitySystem, x) -> float:
    """Largest normalized positive residual, 0 for a feasible point.

    Row-scale invariant: rescaling a row and its bound by the same positive
    factor leaves the value unchanged.
    """
    x = _as_point(x, sys.n)
    a, b, norms = sys.a, sys.b, sys.row_norms
    worst = 0.0
    for i in range(sys.m):
        r = exact_dot(a[i], x) - float(b[i])
        if r > 0.0:
            v = r / float(norms[i])
            if v > worst:
                worst = v
    return worst


def vector_norm(v: np.ndarray) -> float:
    """Euclidean norm via the exactly rounded self inner product."""
    return math.sqrt(exact_dot(v, v))
