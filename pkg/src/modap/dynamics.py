"""Time dependence of an inequality system: translation at a fixed rate.

The moving-system model is a rigid translation of the feasible region.
Translating the region by v maps ``{x : Ax <= b}`` to ``{x : Ax <= b + Av}``,
so only the right-hand side changes; the coefficient rows and their cached
norms are shared across every snapshot.

Two clock modes drive the motion: a virtual clock that advances a fixed
quantum per solver iteration (deterministic, machine-independent, the
default) and a wall clock that reproduces a real-time race against the
moving region but is excluded from reproducibility assertions.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .geometry import InequalitySystem
from .summation import exact_dot

__all__ = [
    "STATIONARY",
    "TRANSLATION",
    "CLOCK_VIRTUAL",
    "CLOCK_WALL",
    "DynamicsSpec",
    "DynamicSystemSource",
    "translate",
    "as_source",
]

STATIONARY = "stationary"
TRANSLATION = "translation"
CLOCK_VIRTUAL = "virtual"
CLOCK_WALL = "wall"


@dataclass
class DynamicsSpec:
    """How (and whether) the system moves.

    ``rate`` is the per-coordinate displacement in units per second: by
    default every coordinate gains ``rate * elapsed``, so the total
    displacement speed is ``sqrt(n) * rate``.  An optional ``direction``
    replaces the all-ones displacement with ``rate * sqrt(n)`` along the
    normalized direction, preserving the total speed for a given rate.
    """

    mode: str = STATIONARY
    rate: float = 0.0
    clock: str = CLOCK_VIRTUAL
    seconds_per_iteration: float = 0.01
    direction: np.ndarray | None = None

    def __post_init__(self):
        if self.mode not in (STATIONARY, TRANSLATION):
            raise ValueError(f"unknown dynamics mode {self.mode!r}")
        if self.clock not in (CLOCK_VIRTUAL, CLOCK_WALL):
            raise ValueError(f"unknown clock mode {self.clock!r}")
        if not self.seconds_per_iteration > 0:
            raise ValueError(
                f"seconds_per_iteration must be positive, got {self.seconds_per_iteration}"
            )
        if self.direction is not None:
            d = np.asarray(self.direction, dtype=np.float64)
            if d.ndim != 1 or not np.linalg.norm(d) > 0:
                raise ValueError("direction must be a non-zero 1-D vector")
            self.direction = d


def translate(sys: InequalitySystem, v) -> InequalitySystem:
    """System whose feasible region is the original's translated by v.

    Rows are unchanged; ``b' = b + A v`` so that ``x`` is feasible for the
    original iff ``x + v`` is feasible for the result.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (sys.n,):
        raise ValueError(
            f"dimension mismatch: displacement has shape {v.shape}, expected ({sys.n},)"
        )
    new_b = np.fromiter(
        (float(sys.b[i]) + exact_dot(sys.a[i], v) for i in range(sys.m)),
        dtype=np.float64,
        count=sys.m,
    )
    return sys.with_rhs(new_b)


class DynamicSystemSource:
    """Owns the current state of a (possibly moving) inequality system.

    The right-hand side is always recomputed from the base system and the
    cumulative displacement, so advancing in two half-steps matches one full
    step to the last bit of the displacement accumulation.

    A source is confined to one owner.  The engine hands each worker a
    :meth:`clone`; replicas stay in lockstep because every replica applies
    the same elapsed time per iteration, decided once by the master.
    """

    def __init__(self, base: InequalitySystem, spec: DynamicsSpec | None = None):
        self.base = base
        self.spec = spec if spec is not None else DynamicsSpec()
        self.current_time = 0.0
        self.cumulative_displacement = np.zeros(base.n)
        if self.spec.mode == TRANSLATION:
            if self.spec.direction is None:
                self._velocity = self.spec.rate * np.ones(base.n)
            else:
                d = self.spec.direction
                if d.shape != (base.n,):
                    raise ValueError(
                        f"direction has shape {d.shape}, expected ({base.n},)"
                    )
                unit = d / np.linalg.norm(d)
                self._velocity = (self.spec.rate * np.sqrt(base.n)) * unit
        else:
            self._velocity = np.zeros(base.n)
        self._current = base
        self._last_wall = time.perf_counter()

    def snapshot(self) -> InequalitySystem:
        """Current system; unchanged until the next :meth:`advance`."""
        return self._current

    def advance(self, elapsed: float) -> None:
        """Move the system forward by ``elapsed`` seconds."""
        if elapsed < 0:
            raise ValueError(f"elapsed must be non-negative, got {elapsed}")
        self.current_time += elapsed
        if self.spec.mode == TRANSLATION:
            self.cumulative_displacement = (
                self.cumulative_displacement + self._velocity * elapsed
            )
            self._current = translate(self.base, self.cumulative_displacement)

    def next_elapsed(self) -> float:
        """Elapsed seconds to charge to the iteration that is about to run."""
        if self.spec.clock == CLOCK_VIRTUAL:
            return self.spec.seconds_per_iteration
        now = time.perf_counter()
        dt = now - self._last_wall
        self._last_wall = now
        return dt

    def clone(self) -> "DynamicSystemSource":
        """Independent source with identical state (base system shared,
        displacement state copied)."""
        c = DynamicSystemSource(self.base, self.spec)
        c.current_time = self.current_time
        c.cumulative_displacement = self.cumulative_displacement.copy()
        if self.spec.mode == TRANSLATION:
            c._current = translate(c.base, c.cumulative_displacement)
        return c


def as_source(obj) -> DynamicSystemSource:
    """Coerce a bare system into a stationary source; pass sources through."""
    if isinstance(obj, DynamicSystemSource):
        return obj
    if isinstance(obj, InequalitySystem):
        return DynamicSystemSource(obj, DynamicsSpec())
    raise TypeError(f"expected InequalitySystem or DynamicSystemSource, got {type(obj)!r}")
