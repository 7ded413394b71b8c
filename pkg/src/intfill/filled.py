"""Filled-function construction over integer boxes.

A filled function reshapes the landscape around the best lattice point
found so far (the *anchor*) so that a continuous local minimizer walks
away from the anchor's basin and into a region where the original
objective is lower. The construction here multiplies two ingredients:

* an inverse-square distance envelope ``1/(||x - anchor||^2 + 1) + 1``,
  which peaks at the anchor and decays toward 1, and
* a gate ``smoothed_step(smoothed_ramp(f(x) - f(anchor), r))`` that is
  1 where the objective is no better than the anchor, fades through a
  cubic blend as the objective drops below the anchor's value, and cuts
  to 0 once the improvement reaches the margin ``r``.

The product is 2 at the anchor, at most 1.5 at lattice neighbors of the
anchor, and 0 anywhere the objective improves on the anchor by ``r`` or
more, so minimizing it drains trajectories into improving regions.

For searches run in the continuous relaxation, ``AugmentedFilled`` adds
``|F(x)| * sum_i sin^2(pi x_i)``, a penalty that vanishes exactly on
the lattice and pushes minimizers toward integer coordinates.
"""
from __future__ import annotations

import dataclasses
from typing import Callable, Protocol

import numpy as np

from .core import IntPoint, ObjectiveFunction, ParameterError, as_real_point


def smoothed_ramp(t: float, r: float) -> float:
    """Cubic blend from 0 (at and below ``-r``) into the line ``t + 1``.

    Zero for ``t <= -r``; equal to ``t + 1`` for ``t > 0``; in between a
    cubic with value/slope 0 at ``-r`` and value 1, slope 1 at 0, so the
    whole map is continuously differentiable. The blend is monotone only
    for ``r <= 3``: beyond that the cubic overshoots and dips below zero
    inside ``(-r, 0)``, with an interior critical point at
    ``-r^2 / (3 (r - 2))``.
    """
    if r <= 0:
        raise ParameterError(f"ramp margin must be positive, got {r}")
    if t <= -r:
        return 0.0
    if t > 0.0:
        return t + 1.0
    a = (r - 2.0) / r**3
    b = (2.0 * r - 3.0) / r**2
    return ((a * t + b) * t + 1.0) * t + 1.0


def smoothed_step(t: float) -> float:
    """Cubic step: 0 for ``t <= 1/2``, 1 for ``t > 1``, C^1 blend between.

    The interior cubic ``-16 t^3 + 36 t^2 - 24 t + 5`` hits 0 at 1/2 and
    1 at 1 exactly (in floats too, via Horner evaluation) with zero slope
    at both seams.
    """
    if t <= 0.5:
        return 0.0
    if t > 1.0:
        return 1.0
    return ((-16.0 * t + 36.0) * t - 24.0) * t + 5.0


def lattice_penalty(x: np.ndarray) -> float:
    """``sum_i sin^2(pi x_i)``, computed to vanish exactly at integers.

    Evaluating ``sin(pi * (x - nearest integer))`` instead of
    ``sin(pi * x)`` gives the same value (the square kills the sign) but
    returns exact 0.0 on lattice points instead of float dust like
    ``sin(pi * 3) ~ 4e-16``.
    """
    arr = as_real_point(x)
    frac = arr - np.rint(arr)
    s = np.sin(np.pi * frac)
    return float(np.sum(s * s))


def filled_value(
    x: np.ndarray, anchor: np.ndarray, anchor_value: float, value_at_x: float, r: float
) -> float:
    """Envelope-times-gate filled value; pure function of its inputs."""
    diff = as_real_point(x) - np.asarray(anchor, dtype=float)
    envelope = 1.0 / (float(diff @ diff) + 1.0) + 1.0
    gate = smoothed_step(smoothed_ramp(value_at_x - anchor_value, r))
    return envelope * gate


@dataclasses.dataclass(frozen=True)
class FilledParams:
    """Margin schedule for the gate.

    ``r`` starts each candidate pass at ``r_max``, multiplies by
    ``shrink_factor`` whenever a pass fails to improve, and the pass
    gives up once ``r`` drops below ``r_min``.
    """

    r_max: float = 1.0
    r_min: float = 1e-4
    shrink_factor: float = 0.1

    def __post_init__(self) -> None:
        if not (0.0 < self.r_min <= self.r_max):
            raise ParameterError(
                f"need 0 < r_min <= r_max, got r_min={self.r_min} r_max={self.r_max}"
            )
        if not (0.0 < self.shrink_factor < 1.0):
            raise ParameterError(
                f"shrink factor must lie in (0, 1), got {self.shrink_factor}"
            )


class InverseSquareFilled:
    """Counted filled function around a fixed anchor.

    ``raw`` charges one filled evaluation plus the embedded objective
    evaluation it performs. The anchor's own filled value is a constant
    of the construction (envelope 2, gate 1) and is exposed without
    charging anything.
    """

    name = "inverse-square"

    def __init__(
        self,
        objective: ObjectiveFunction,
        anchor: IntPoint,
        anchor_value: float,
        r: float,
    ) -> None:
        if r <= 0:
            raise ParameterError(f"ramp margin must be positive, got {r}")
        self.objective = objective
        self.anchor = np.asarray(anchor, dtype=np.int64)
        self.anchor_value = float(anchor_value)
        self.r = float(r)
        self.min_excess = np.inf

    def anchor_filled_value(self) -> float:
        return 2.0

    def reset_excess(self) -> None:
        """Restart tracking of the lowest ``f(x) - f(anchor)`` seen.

        While the excess stays >= 0 the gate is saturated at 1 at every
        evaluated point, which makes the value independent of ``r``; the
        solver uses that to skip retries that would replay an identical
        trajectory under a smaller margin.
        """
        self.min_excess = np.inf

    def raw(self, x: np.ndarray) -> float:
        self.objective.counter.charge_filled()
        fx = self.objective.embedded(x)
        excess = fx - self.anchor_value
        if excess < self.min_excess:
            self.min_excess = excess
        return filled_value(x, self.anchor, self.anchor_value, fx, self.r)


class AugmentedFilled:
    """Filled value plus the lattice-attracting penalty.

    On lattice points the penalty term is exactly 0.0, so augmented and
    raw values agree bit for bit there.
    """

    def __init__(self, base: InverseSquareFilled) -> None:
        self.base = base

    def __call__(self, x: np.ndarray) -> float:
        raw = self.base.raw(x)
        return raw + abs(raw) * lattice_penalty(x)


class FilledFactory(Protocol):
    def __call__(
        self,
        objective: ObjectiveFunction,
        anchor: IntPoint,
        anchor_value: float,
        r: float,
    ) -> InverseSquareFilled: ...


FILLED_FUNCTIONS: dict[str, FilledFactory] = {
    "inverse-square": InverseSquareFilled,
}


def register_filled_function(name: str, factory: FilledFactory) -> None:
    """Add a construction to the registry (used by tests and extensions)."""
    if name in FILLED_FUNCTIONS:
        raise ParameterError(f"filled function {name!r} already registered")
    FILLED_FUNCTIONS[name] = factory


def make_filled(
    name: str,
    objective: ObjectiveFunction,
    anchor: IntPoint,
    anchor_value: float,
    r: float,
) -> InverseSquareFilled:
    try:
        factory = FILLED_FUNCTIONS[name]
    except KeyError:
        known = ", ".join(sorted(FILLED_FUNCTIONS))
        raise ParameterError(f"unknown filled function {name!r}; known: {known}")
    return factory(objective, anchor, anchor_value, r)


@dataclasses.dataclass(frozen=True)
class BoundCheck:
    """Outcome of the rounding-error safeguard after a continuous descent.

    When the filled value at the continuous minimizer ``x_c`` is
    nonzero, the squared distance from ``x_c`` to its nearest lattice
    point must stay below ``(F(anchor) - F(x_c)) / (4 |F(x_c)|)`` for
    rounding to be trustworthy. A zero filled value makes the bound
    vacuous and the check is skipped.
    """

    status: str  # "passed" | "failed" | "skipped"
    offset_sq: float
    limit: float
    anchor_filled: float
    point_filled: float


def rounding_error_check(
    anchor_filled: float, point_filled: float, x: np.ndarray
) -> BoundCheck:
    arr = as_real_point(x)
    delta = arr - np.rint(arr)
    offset_sq = float(delta @ delta)
    if point_filled == 0.0:
        return BoundCheck("skipped", offset_sq, np.inf, anchor_filled, point_filled)
    limit = (anchor_filled - point_filled) / (4.0 * abs(point_filled))
    status = "passed" if offset_sq < limit else "failed"
    return BoundCheck(status, offset_sq, limit, anchor_filled, point_filled)
