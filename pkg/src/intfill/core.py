"""Primitives for optimization over integer boxes.

This module owns everything the rest of the package assumes about the
search space: the box domain, the rounding map from real vectors to
lattice points, unit-step neighborhoods, discrete paths, and the
evaluation accounting used to enforce budgets.

Conventions:

* Lattice points are 1-d ``numpy`` arrays of dtype ``int64``.
* A box is the set of integer vectors ``x`` with
  ``lower[i] <= x[i] <= upper[i]`` in every coordinate.
* The neighborhood of ``x`` is ``x`` plus/minus one unit vector per
  axis, intersected with the box, together with ``x`` itself.
"""
from __future__ import annotations

import dataclasses
from typing import Callable, Iterator, Sequence

import numpy as np

IntPoint = np.ndarray
RealPoint = np.ndarray


class DomainError(ValueError):
    """A point lies outside the domain (off-lattice or out of bounds)."""


class ParameterError(ValueError):
    """A configuration value is malformed or out of range."""


class BudgetExhausted(RuntimeError):
    """Raised before an evaluation that would exceed the budget."""


def as_int_point(x: Sequence[int] | np.ndarray) -> IntPoint:
    """Coerce ``x`` to an int64 lattice point.

    Float inputs are accepted only when every entry is integral.
    """
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise DomainError(f"expected a 1-d point, got shape {arr.shape}")
    if arr.dtype.kind == "f":
        if not np.all(np.isfinite(arr)) or not np.all(arr == np.floor(arr)):
            raise DomainError(f"non-integral coordinates in {arr!r}")
    elif arr.dtype.kind not in "iu":
        raise DomainError(f"cannot interpret dtype {arr.dtype} as lattice point")
    return arr.astype(np.int64)


def as_real_point(x: Sequence[float] | np.ndarray) -> RealPoint:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise DomainError(f"expected a 1-d point, got shape {arr.shape}")
    return arr


def point_key(x: np.ndarray) -> tuple[int, ...]:
    """Hashable identity of a lattice point, for visit sets and dicts."""
    return tuple(int(v) for v in x)


def axis_directions(n: int) -> list[IntPoint]:
    """Unit step directions in the fixed scan order used everywhere.

    Order is -e1, +e1, -e2, +e2, ... and every deterministic tie-break
    in the package follows it.
    """
    dirs: list[IntPoint] = []
    for i in range(n):
        minus = np.zeros(n, dtype=np.int64)
        minus[i] = -1
        plus = np.zeros(n, dtype=np.int64)
        plus[i] = 1
        dirs.append(minus)
        dirs.append(plus)
    return dirs


@dataclasses.dataclass(frozen=True)
class BoxDomain:
    """Integer box ``{x in Z^n : lower <= x <= upper}``."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lo = as_int_point(self.lower)
        hi = as_int_point(self.upper)
        if lo.shape != hi.shape:
            raise ParameterError(f"bound shapes differ: {lo.shape} vs {hi.shape}")
        if np.any(lo > hi):
            raise ParameterError("lower bound exceeds upper bound")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dimension(self) -> int:
        return int(self.lower.shape[0])

    def contains(self, x: np.ndarray) -> bool:
        """Exact lattice membership. Non-integral or non-finite is False."""
        arr = np.asarray(x)
        if arr.ndim != 1 or arr.shape != self.lower.shape:
            return False
        if arr.dtype.kind == "f":
            if not np.all(np.isfinite(arr)) or not np.all(arr == np.floor(arr)):
                return False
        return bool(np.all(arr >= self.lower) and np.all(arr <= self.upper))

    def contains_real(self, x: np.ndarray) -> bool:
        """Bounds-only membership for real vectors."""
        arr = np.asarray(x, dtype=float)
        if arr.shape != self.lower.shape or not np.all(np.isfinite(arr)):
            return False
        return bool(np.all(arr >= self.lower) and np.all(arr <= self.upper))

    def clamp(self, x: np.ndarray) -> np.ndarray:
        """Project onto the box, preserving integer or float dtype."""
        arr = np.asarray(x)
        if arr.dtype.kind == "f":
            return np.clip(arr, self.lower.astype(float), self.upper.astype(float))
        return np.clip(arr.astype(np.int64), self.lower, self.upper)

    def feasible_size(self) -> int:
        # Python ints: side products overflow int64 already at n ~ 10.
        size = 1
        for lo, hi in zip(self.lower, self.upper):
            size *= int(hi) - int(lo) + 1
        return size

    def random_point(self, rng: np.random.Generator) -> IntPoint:
        return rng.integers(self.lower, self.upper, endpoint=True, dtype=np.int64)

    def iter_points(self) -> Iterator[IntPoint]:
        """Lexicographic enumeration of every lattice point in the box."""
        ranges = [range(int(lo), int(hi) + 1) for lo, hi in zip(self.lower, self.upper)]
        idx = [r.start for r in ranges]
        n = self.dimension
        while True:
            yield np.array(idx, dtype=np.int64)
            k = n - 1
            while k >= 0:
                idx[k] += 1
                if idx[k] <= ranges[k].stop - 1:
                    break
                idx[k] = ranges[k].start
                k -= 1
            if k < 0:
                return


def round_point(x: np.ndarray) -> IntPoint:
    """Round a real vector to the lattice, coordinate by coordinate.

    Integral coordinates pass through. A non-integral coordinate ``t``
    maps to ``floor(t + t / (2|t|))``. For positive ``t`` this is
    round-half-away-from-zero; for negative ``t`` the floor always
    steps down, so magnitudes grow: -0.4 -> -1 and -2.6 -> -4.

    The result can leave a box even when ``x`` was inside it: with
    lower bound -5, the in-bounds value -4.6 rounds to -6. Clamping is
    the caller's responsibility and is deliberately a separate
    operation.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"cannot round non-finite vector {arr!r}")
    shifted = np.floor(arr + np.where(arr > 0.0, 0.5, -0.5))
    out = np.where(arr == np.floor(arr), arr, shifted)
    return out.astype(np.int64)


def neighborhood(x: IntPoint, box: BoxDomain) -> list[IntPoint]:
    """Feasible unit-step neighbors of ``x`` in scan order, then ``x``."""
    pts: list[IntPoint] = []
    for d in axis_directions(box.dimension):
        y = x + d
        if box.contains(y):
            pts.append(y)
    pts.append(np.array(x, dtype=np.int64, copy=True))
    return pts


def neighborhood_argmin(
    f: Callable[[IntPoint], float], x: IntPoint, box: BoxDomain
) -> tuple[IntPoint, float]:
    """Minimizer of ``f`` over the neighborhood of ``x`` (including ``x``).

    Ties keep the earliest point in scan order; the center is scanned
    last, so a neighbor matching the center's value wins the tie.
    """
    best: IntPoint | None = None
    best_val = np.inf
    for p in neighborhood(x, box):
        v = float(f(p))
        if v < best_val:
            best, best_val = p, v
    assert best is not None
    return best, best_val


def argmin_over_neighborhood(
    f: Callable[[IntPoint], float], x: IntPoint, box: BoxDomain
) -> IntPoint:
    """Point form of ``neighborhood_argmin`` (same tie-break rule)."""
    best, _ = neighborhood_argmin(f, x, box)
    return best


def is_discrete_local_min(
    f: Callable[[IntPoint], float], x: IntPoint, box: BoxDomain
) -> bool:
    """True when no feasible unit step strictly improves ``f``."""
    fx = float(f(x))
    for p in neighborhood(x, box)[:-1]:
        if float(f(p)) < fx:
            return False
    return True


def discrete_path(start: IntPoint, end: IntPoint, box: BoxDomain) -> list[IntPoint]:
    """A feasible unit-step path from ``start`` to ``end``.

    Coordinates are swept in index order, one unit per step. Every
    intermediate point mixes finished coordinates of ``end`` with
    untouched coordinates of ``start``, so it stays inside the box, and
    no point repeats.
    """
    a = as_int_point(start)
    b = as_int_point(end)
    if not box.contains(a) or not box.contains(b):
        raise DomainError("path endpoints must be feasible")
    path = [a.copy()]
    cur = a.copy()
    for i in range(box.dimension):
        step = 1 if b[i] > cur[i] else -1
        while cur[i] != b[i]:
            cur[i] += step
            path.append(cur.copy())
    return path


@dataclasses.dataclass
class EvalCounter:
    """Tallies objective and filled-function evaluations against a budget.

    ``limit`` bounds the *total* count. The check runs before the
    increment: an evaluation that would start at or past the limit
    raises ``BudgetExhausted`` and is not performed, which keeps runs
    deterministic under any budget.
    """

    n_fu: int = 0
    n_fill: int = 0
    limit: int | None = None

    def total(self) -> int:
        return self.n_fu + self.n_fill

    def _check(self) -> None:
        if self.limit is not None and self.total() >= self.limit:
            raise BudgetExhausted(
                f"evaluation budget of {self.limit} reached "
                f"(n_fu={self.n_fu}, n_fill={self.n_fill})"
            )

    def charge_objective(self) -> None:
        self._check()
        self.n_fu += 1

    def charge_filled(self) -> None:
        self._check()
        self.n_fill += 1


class ObjectiveFunction:
    """Counted, domain-checked view of a raw objective.

    Calling it evaluates the objective at a lattice point, validating
    membership and charging ``counter.n_fu``. ``embedded`` is the
    relaxed evaluation used inside filled-function values: it accepts
    real vectors, skips domain checks (callers keep iterates inside the
    box), and charges the objective counter only when
    ``count_in_filled`` is set.
    """

    def __init__(
        self,
        func: Callable[[np.ndarray], float],
        box: BoxDomain,
        counter: EvalCounter,
        count_in_filled: bool = True,
    ) -> None:
        self.func = func
        self.box = box
        self.counter = counter
        self.count_in_filled = count_in_filled

    def __call__(self, x: IntPoint) -> float:
        if not self.box.contains(x):
            raise DomainError(f"{np.asarray(x)!r} is not a feasible lattice point")
        self.counter.charge_objective()
        return float(self.func(np.asarray(x, dtype=np.int64)))

    def relaxed(self, x: np.ndarray) -> float:
        """Continuous-relaxation evaluation; always charged."""
        self.counter.charge_objective()
        return float(self.func(np.asarray(x, dtype=float)))

    def embedded(self, x: np.ndarray) -> float:
        if self.count_in_filled:
            self.counter.charge_objective()
        return float(self.func(np.asarray(x, dtype=float)))
