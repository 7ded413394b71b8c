"""Global search: filled-function escape loop plus restart wrapper.

The inner search alternates two phases around a current *anchor* (the
best discrete local minimizer of the current pass):

1. descend the objective (continuous minimizer, then rounding, then
   discrete steepest descent) to obtain the anchor, and
2. from each unit neighbor of the anchor, minimize the augmented filled
   function; round the endpoint and take the best objective value over
   its neighborhood. Any strict improvement restarts phase 1 from the
   improving point. Otherwise the gate margin ``r`` shrinks and the
   neighbor is retried until ``r`` bottoms out or the endpoint lands on
   a box vertex, and then the next neighbor starts with ``r`` reset.

The outer loop restarts the inner search up to ``max_outer_iterations``
times: from the incumbent after an improvement, else from the
lowest-value neighbor of the last result that has not been exhausted by
revisits. A result point reached more than ``revisit_limit`` times ends
the run early.

Evaluation accounting: every objective evaluation (including candidate
ordering, neighborhood argmins, and the objective evaluation embedded
in each filled value unless configured off) charges ``n_fu``, and every
filled evaluation (including the per-escape bound check and the
optional condition instrumentation) charges ``n_fill``. When the
combined budget runs out mid-search the run is cut deterministically;
the best feasible point seen is then polished to a discrete local
minimizer with the budget lifted, so reported counters may slightly
exceed the budget on truncated runs. The reported point is a discrete
local minimizer on every path.
"""
from __future__ import annotations

import dataclasses
import time
from typing import Any

import numpy as np

from .benchmarks import BenchmarkProblem
from .core import (
    BoxDomain,
    BudgetExhausted,
    DomainError,
    EvalCounter,
    IntPoint,
    ObjectiveFunction,
    ParameterError,
    as_int_point,
    is_discrete_local_min,
    neighborhood,
    neighborhood_argmin,
    point_key,
    round_point,
)
from .filled import (
    AugmentedFilled,
    BoundCheck,
    FilledParams,
    make_filled,
    rounding_error_check,
)
from .local_search import minimize_continuous, steepest_descent_discrete


@dataclasses.dataclass
class SolverConfig:
    """Tunables for one solve. Defaults match the acceptance setup."""

    max_outer_iterations: int = 3
    revisit_limit: int = 2
    filled_function: str = "inverse-square"
    filled_params: FilledParams = dataclasses.field(default_factory=FilledParams)
    objective_minimizer: str = "quasi-newton"
    objective_minimizer_options: dict = dataclasses.field(default_factory=dict)
    filled_minimizer: str = "compass"
    filled_minimizer_options: dict = dataclasses.field(default_factory=dict)
    max_evaluations: int = 10_000_000
    count_objective_in_filled: bool = True
    check_filled_conditions: bool = True

    def __post_init__(self) -> None:
        if self.max_outer_iterations < 1:
            raise ParameterError("max_outer_iterations must be >= 1")
        if self.revisit_limit < 1:
            raise ParameterError("revisit_limit must be >= 1")
        if self.max_evaluations < 1:
            raise ParameterError("max_evaluations must be >= 1")


@dataclasses.dataclass
class SolveReport:
    x_best: tuple[int, ...]
    f_best: float
    n_fu: int
    n_fill: int
    termination: str
    outer_iterations: int
    events: list[dict]
    bound_checks: list[BoundCheck]
    d1_checks: list[dict]
    dc2_checks: list[dict]
    wall_time: float

    def columns(self) -> tuple[float, int, int]:
        """The deterministic result columns (excludes wall time)."""
        return (self.f_best, self.n_fu, self.n_fill)


def vertex_check(x: IntPoint, box: BoxDomain) -> bool:
    """True when every coordinate sits on a bound of the box."""
    arr = np.asarray(x)
    return bool(np.all((arr == box.lower) | (arr == box.upper)))


@dataclasses.dataclass
class _RunRecord:
    events: list[dict] = dataclasses.field(default_factory=list)
    bound_checks: list[BoundCheck] = dataclasses.field(default_factory=list)
    d1_checks: list[dict] = dataclasses.field(default_factory=list)
    dc2_checks: list[dict] = dataclasses.field(default_factory=list)
    # Best discrete local minimizer reached (anchors always are) and the
    # best raw lattice value seen, for budget-cut recovery.
    best_anchor: tuple[IntPoint, float] | None = None
    best_seen: tuple[IntPoint, float] | None = None

    def note_anchor(self, x: IntPoint, v: float) -> None:
        if self.best_anchor is None or v < self.best_anchor[1]:
            self.best_anchor = (np.array(x), v)
        self.note_seen(x, v)

    def note_seen(self, x: IntPoint, v: float) -> None:
        if self.best_seen is None or v < self.best_seen[1]:
            self.best_seen = (np.array(x), v)

    def log(self, counter: EvalCounter, kind: str, **fields: Any) -> None:
        event = {"kind": kind}
        event.update(fields)
        event["n_fu"] = counter.n_fu
        event["n_fill"] = counter.n_fill
        self.events.append(event)


def _check_d1(
    obj: ObjectiveFunction,
    target: AugmentedFilled,
    anchor: IntPoint,
    anchor_filled: float,
    rec: _RunRecord,
) -> None:
    # The anchor's own filled value is a constant of the construction;
    # every neighbor must fall strictly below it.
    worst = -np.inf
    for nb in neighborhood(anchor, obj.box)[:-1]:
        v = target(nb.astype(float))
        worst = max(worst, v)
    rec.d1_checks.append(
        {
            "anchor": point_key(anchor),
            "passed": bool(worst < anchor_filled),
            "anchor_filled": anchor_filled,
            "max_neighbor_filled": worst,
        }
    )


def _generic(
    obj: ObjectiveFunction, x0: IntPoint, cfg: SolverConfig, rec: _RunRecord, outer: int
) -> tuple[IntPoint, float]:
    """One inner search from ``x0``; returns the final anchor."""
    box = obj.box
    params = cfg.filled_params
    x_start = np.asarray(x0, dtype=np.int64)
    pending_dc2: float | None = None
    while True:
        # Phase 1: continuous descent of f, rounding, lattice descent.
        x_cont, obj_trace = minimize_continuous(
            obj.relaxed,
            x_start.astype(float),
            box,
            cfg.objective_minimizer,
            cfg.objective_minimizer_options,
        )
        x_rounded = box.clamp(round_point(x_cont))
        x_star, f_star = steepest_descent_discrete(obj, x_rounded, box)
        rec.note_anchor(x_star, f_star)
        rec.log(
            obj.counter,
            "anchor",
            outer=outer,
            point=point_key(x_star),
            value=f_star,
            descent_termination=obj_trace.termination,
        )
        if pending_dc2 is not None:
            if obj_trace.termination == "converged":
                status = "passed" if f_star <= pending_dc2 else "failed"
            else:
                status = "skipped_unconverged"
            rec.dc2_checks.append(
                {
                    "status": status,
                    "previous_anchor_value": pending_dc2,
                    "new_anchor_value": f_star,
                }
            )
            pending_dc2 = None

        filled = make_filled(cfg.filled_function, obj, x_star, f_star, params.r_max)
        target = AugmentedFilled(filled)
        anchor_filled = filled.anchor_filled_value()
        if cfg.check_filled_conditions:
            _check_d1(obj, target, x_star, anchor_filled, rec)

        # Phase 2: escape attempts from each neighbor, cheapest first.
        scored = [(obj(nb), nb) for nb in neighborhood(x_star, box)[:-1]]
        scored.sort(key=lambda t: t[0])
        escaped = False
        for f_cand, candidate in scored:
            rec.note_seen(candidate, f_cand)
            r = params.r_max
            while True:
                filled.r = r
                filled.reset_excess()
                x_esc, _ = minimize_continuous(
                    target,
                    candidate.astype(float),
                    box,
                    cfg.filled_minimizer,
                    cfg.filled_minimizer_options,
                )
                point_filled = filled.raw(x_esc)
                check = rounding_error_check(anchor_filled, point_filled, x_esc)
                rec.bound_checks.append(check)
                x_landed = box.clamp(round_point(x_esc))
                x_prime, f_prime = neighborhood_argmin(obj, x_landed, box)
                rec.note_seen(x_prime, f_prime)
                escaped = f_prime < f_star
                rec.log(
                    obj.counter,
                    "escape",
                    outer=outer,
                    candidate=point_key(candidate),
                    r=r,
                    landed=point_key(x_landed),
                    point=point_key(x_prime),
                    value=f_prime,
                    improved=escaped,
                    bound=check.status,
                )
                if escaped:
                    if cfg.check_filled_conditions and is_discrete_local_min(
                        lambda p: target(p.astype(float)), x_landed, box
                    ):
                        pending_dc2 = f_star
                    x_start = x_prime
                    break
                if filled.min_excess >= 0.0:
                    # Every evaluated point sat at or above the anchor value,
                    # so the gate term was saturated at 1 along the whole
                    # trajectory and shrinking r would replay it verbatim.
                    # Advance to the next candidate directly.
                    break
                r *= params.shrink_factor
                if r < params.r_min:
                    break
                if vertex_check(x_prime, box):
                    break
            if escaped:
                break
        if not escaped:
            return x_star, f_star
        # An improvement restarts phase 1 from the improving point.


def _recover_best(
    obj: ObjectiveFunction, rec: _RunRecord, x0: IntPoint
) -> tuple[IntPoint, float, bool]:
    """Best point after a budget cut, as a discrete local minimizer.

    Returns (point, value, polished). Lifts the counter limit when a
    final descent (or a first evaluation) is still required; the report
    keeps the extra charges so counters stay truthful.
    """
    candidates: list[tuple[IntPoint, float, bool]] = []
    if rec.best_anchor is not None:
        candidates.append((rec.best_anchor[0], rec.best_anchor[1], True))
    if rec.best_seen is not None:
        candidates.append((rec.best_seen[0], rec.best_seen[1], False))
    if not candidates:
        obj.counter.limit = None
        f0 = obj(x0)
        candidates.append((np.array(x0), f0, False))
    point, value, is_min = min(candidates, key=lambda t: (t[1], not t[2]))
    if is_min:
        return point, value, False
    obj.counter.limit = None
    x_fin, f_fin = steepest_descent_discrete(obj, point, obj.box)
    return x_fin, f_fin, True


def generic_filled_search(
    obj: ObjectiveFunction, x0: IntPoint, cfg: SolverConfig | None = None
) -> IntPoint:
    """Run one inner search and return its final anchor point.

    On budget exhaustion the best point reached so far is returned,
    polished to a discrete local minimizer if it was not an anchor yet.
    """
    cfg = cfg or SolverConfig()
    start = as_int_point(x0)
    if not obj.box.contains(start):
        raise DomainError(f"start {start!r} outside the box")
    rec = _RunRecord()
    try:
        x_star, _ = _generic(obj, start, cfg, rec, outer=1)
        return x_star
    except BudgetExhausted:
        x_best, _, _ = _recover_best(obj, rec, start)
        return x_best


def solve(
    obj: ObjectiveFunction, x0: IntPoint, cfg: SolverConfig | None = None
) -> SolveReport:
    """Full restart search from ``x0``; always returns a report.

    The objective's ``count_in_filled`` flag is overwritten from the
    config so that one config object fully determines counting
    semantics. A limit already present on the counter is respected when
    it is tighter than the configured budget.
    """
    cfg = cfg or SolverConfig()
    box = obj.box
    start = as_int_point(x0)
    if not box.contains(start):
        raise DomainError(f"start {start!r} outside the box")
    obj.count_in_filled = cfg.count_objective_in_filled
    counter = obj.counter
    saved_limit = counter.limit
    budget = counter.total() + cfg.max_evaluations
    counter.limit = budget if saved_limit is None else min(budget, saved_limit)
    rec = _RunRecord()
    t0 = time.perf_counter()
    termination = "max_iterations"
    outer_done = 0
    x_g: IntPoint = np.array(start)
    f_g = np.inf
    incumbent_is_minimizer = False
    try:
        f_g = obj(start)
        rec.note_seen(start, f_g)
        rec.log(counter, "start", point=point_key(start), value=f_g)
        visits: dict[tuple[int, ...], int] = {}
        current = np.array(start)
        for i in range(cfg.max_outer_iterations):
            outer_done = i + 1
            x_res, f_res = _generic(obj, current, cfg, rec, outer=outer_done)
            key = point_key(x_res)
            visits[key] = visits.get(key, 0) + 1
            improved = f_res < f_g
            if improved:
                x_g, f_g = np.array(x_res), f_res
                current = np.array(x_g)
                incumbent_is_minimizer = True
            rec.log(
                counter,
                "outer_result",
                outer=outer_done,
                point=key,
                value=f_res,
                improved=improved,
                visits=visits[key],
            )
            if visits[key] > cfg.revisit_limit:
                termination = "revisit_limit"
                break
            if not improved:
                chosen: IntPoint | None = None
                chosen_val = np.inf
                for nb in neighborhood(x_res, box)[:-1]:
                    if visits.get(point_key(nb), 0) >= cfg.revisit_limit:
                        continue
                    v = obj(nb)
                    rec.note_seen(nb, v)
                    if v < chosen_val:
                        chosen, chosen_val = nb, v
                if chosen is None:
                    termination = "neighbors_exhausted"
                    break
                current = chosen
                rec.log(
                    counter,
                    "restart_neighbor",
                    point=point_key(chosen),
                    value=chosen_val,
                )
        if not incumbent_is_minimizer:
            # No inner result beat f(x0): descend the start so the
            # reported point is a discrete local minimizer too.
            x_g, f_g = steepest_descent_discrete(obj, x_g, box)
            rec.log(counter, "finalize_descent", point=point_key(x_g), value=f_g)
    except BudgetExhausted:
        termination = "budget"
        x_g, f_g, polished = _recover_best(obj, rec, start)
        if polished:
            rec.log(counter, "finalize_descent", point=point_key(x_g), value=f_g)
    finally:
        counter.limit = saved_limit
    wall = time.perf_counter() - t0
    return SolveReport(
        x_best=point_key(x_g),
        f_best=float(f_g),
        n_fu=counter.n_fu,
        n_fill=counter.n_fill,
        termination=termination,
        outer_iterations=outer_done,
        events=rec.events,
        bound_checks=rec.bound_checks,
        d1_checks=rec.d1_checks,
        dc2_checks=rec.dc2_checks,
        wall_time=wall,
    )


def solve_problem(
    problem: BenchmarkProblem,
    x0: IntPoint | tuple[int, ...] | None = None,
    cfg: SolverConfig | None = None,
    counter: EvalCounter | None = None,
) -> SolveReport:
    """Wire a benchmark problem into a counted solve."""
    cfg = cfg or SolverConfig()
    counter = counter if counter is not None else EvalCounter()
    obj = ObjectiveFunction(
        problem.func, problem.box, counter, cfg.count_objective_in_filled
    )
    start = as_int_point(problem.default_start if x0 is None else x0)
    return solve(obj, start, cfg)
