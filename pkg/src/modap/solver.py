"""Sequential reference engine for the AP and ModAP iterations.

Both variants repeat: compute the positive slices of every row at the
current point (the map stage), sum them and count the violated rows (the
reduce stage), step, let the source advance, and test membership against
the updated system.  AP subtracts the averaged violation direction, which
is a Fejer-monotone move; ModAP rescales that direction to a fixed length
so steps do not decay near the boundary of a moving region.

Iteration structure: the membership check runs at the top of the loop, so a
point that is already feasible converges with zero steps, and a violated
count of zero can never reach the step computation (h = 0 implies the check
above it already passed).  From the first step onward the observable cycle
is exactly step -> advance source -> check against the updated system.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import dynamics
from .geometry import (
    InequalitySystem,
    SliceResult,
    _as_point,
    eps_membership,
    max_relative_violation,
    positive_slice,
    vector_norm,
    violated_slices,
)
from .summation import VectorExpansion, exact_dot

__all__ = [
    "VARIANT_AP",
    "VARIANT_MODAP",
    "SolverConfig",
    "SolveStatus",
    "SolveOutcome",
    "IterationRecord",
    "ap_step",
    "modap_step",
    "map_stage",
    "reduce_stage",
    "solve",
]

VARIANT_AP = "ap"
VARIANT_MODAP = "modap"


@dataclass
class SolverConfig:
    """Iteration parameters.

    ``step_length`` is the fixed step length used by the modap variant only.
    ``initial_point`` overrides the default zero starting point (a test and
    experiment hook).
    """

    eps: float = 1e-7
    step_length: float = 1.0
    variant: str = VARIANT_MODAP
    max_iterations: int = 100_000
    record_trace: bool = False
    record_iterates: bool = False
    initial_point: np.ndarray | None = None

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if not self.step_length > 0:
            raise ValueError(f"step_length must be positive, got {self.step_length}")
        if self.variant not in (VARIANT_AP, VARIANT_MODAP):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")


class SolveStatus(str, Enum):
    CONVERGED = "converged"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass
class IterationRecord:
    """Per-iteration trace row.

    ``max_violation`` is measured against the system state after the
    iteration's source update, i.e. the state the convergence test sees.
    """

    k: int
    h: int
    step_norm: float
    max_violation: float
    virtual_time: float
    wall_time: float


@dataclass
class SolveOutcome:
    status: SolveStatus
    solution: np.ndarray
    iterations: int
    trace: list[IterationRecord] | None = None
    iterates: list[np.ndarray] | None = None

    @property
    def converged(self) -> bool:
        return self.status is SolveStatus.CONVERGED


def partial_reduction(
    sys: InequalitySystem, x: np.ndarray, start: int = 0, stop: int | None = None
) -> tuple[VectorExpansion, int]:
    """Exact sum of the violated rows' slices in [start, stop) plus the count.

    Shared by the sequential reduce and the engine workers: a full-range call
    and any set of covering partial calls accumulate the same addends, so
    their merged, rounded results are bit-identical.
    """
    acc = VectorExpansion(sys.n)
    slices = violated_slices(sys, x, start, stop)
    for d in slices:
        acc.add(d)
    return acc, len(slices)


def map_stage(sys: InequalitySystem, x) -> list[SliceResult]:
    """Positive slice of every row at x, in row order (length m)."""
    x = _as_point(x, sys.n)
    return [positive_slice(sys, i, x) for i in range(sys.m)]


def reduce_stage(slices: list[SliceResult]) -> tuple[np.ndarray, int]:
    """Sum of the slice directions and of the violation flags.

    The sum is exactly rounded, so it matches any partitioned evaluation of
    the same list.
    """
    if not slices:
        raise ValueError("reduce_stage needs a non-empty slice list")
    n = slices[0].direction.shape[0]
    acc = VectorExpansion(n)
    h = 0
    for s in slices:
        if s.direction.shape != (n,):
            raise ValueError(
                f"dimension mismatch among slices: {s.direction.shape} vs ({n},)"
            )
        if s.violated:
            acc.add(s.direction)
            h += 1
    return acc.rounded(), h


def _apply_step(
    x: np.ndarray, y: np.ndarray, h: int, variant: str, step_length: float
) -> np.ndarray:
    """Next iterate from the reduced slice sum y with h > 0 violated rows."""
    if variant == VARIANT_AP:
        return x - y / h
    norm = math.sqrt(exact_dot(y, y))
    if norm == 0.0:
        raise ValueError(
            "violation direction vanished although rows are violated; "
            "the system looks infeasible"
        )
    return x - (step_length / norm) * y


def ap_step(sys: InequalitySystem, x) -> tuple[np.ndarray, int]:
    """One averaged-projection step: ``x - phi(x)``; identity when feasible."""
    x = _as_point(x, sys.n)
    acc, h = partial_reduction(sys, x)
    if h == 0:
        return x.copy(), 0
    return _apply_step(x, acc.rounded(), h, VARIANT_AP, 0.0), h


def modap_step(sys: InequalitySystem, x, step_length: float) -> tuple[np.ndarray, int]:
    """One fixed-length step of size ``step_length``; identity when feasible."""
    if not step_length > 0:
        raise ValueError(f"step_length must be positive, got {step_length}")
    x = _as_point(x, sys.n)
    acc, h = partial_reduction(sys, x)
    if h == 0:
        return x.copy(), 0
    return _apply_step(x, acc.rounded(), h, VARIANT_MODAP, step_length), h


def _run_loop(src, config: SolverConfig, reduction) -> SolveOutcome:
    """Shared iteration skeleton for the sequential and parallel engines.

    ``reduction(sys, x, dt) -> (y, h)`` supplies the reduced slice sum;
    everything else (membership test, step, source updates, bookkeeping) is
    identical between engines, which is what the bit-level equivalence
    contract rests on.
    """
    n = src.snapshot().n
    if config.initial_point is None:
        x = np.zeros(n)
    else:
        x = np.array(config.initial_point, dtype=np.float64)
        if x.shape != (n,):
            raise ValueError(
                f"initial point has shape {x.shape}, expected ({n},)"
            )
    trace: list[IterationRecord] | None = [] if config.record_trace else None
    iterates: list[np.ndarray] | None = (
        [x.copy()] if config.record_iterates else None
    )
    t_start = time.perf_counter()
    iterations = 0
    while True:
        sys = src.snapshot()
        if eps_membership(sys, x, config.eps):
            status = SolveStatus.CONVERGED
            break
        if iterations >= config.max_iterations:
            status = SolveStatus.BUDGET_EXHAUSTED
            break
        dt = src.next_elapsed()
        y, h = reduction(sys, x, dt)
        x_next = _apply_step(x, y, h, config.variant, config.step_length)
        step_vec = x_next - x
        x = x_next
        iterations += 1
        src.advance(dt)
        if trace is not None:
            trace.append(
                IterationRecord(
                    k=iterations,
                    h=h,
                    step_norm=vector_norm(step_vec),
                    max_violation=max_relative_violation(src.snapshot(), x),
                    virtual_time=src.current_time,
                    wall_time=time.perf_counter() - t_start,
                )
            )
        if iterates is not None:
            iterates.append(x.copy())
    return SolveOutcome(
        status=status,
        solution=x.copy(),
        iterations=iterations,
        trace=trace,
        iterates=iterates,
    )


def solve(source, config: SolverConfig | None = None) -> SolveOutcome:
    """Run the configured variant until membership at precision eps or budget.

    ``source`` may be a bare :class:`InequalitySystem` (treated as
    stationary) or a :class:`~modap.dynamics.DynamicSystemSource`, whose
    clock is consumed as the run progresses.
    """
    if config is None:
        config = SolverConfig()
    src = dynamics.as_source(source)

    def reduction(sys, x, dt):
        acc, h = partial_reduction(sys, x)
        return acc.rounded(), h

    return _run_loop(src, config, reduction)
