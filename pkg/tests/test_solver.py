"""Tests for the escape loop, restart wrapper, and accounting."""
import numpy as np
import pytest

from intfill.benchmarks import get_problem
from intfill.core import (
    BoxDomain,
    DomainError,
    EvalCounter,
    ObjectiveFunction,
    ParameterError,
    is_discrete_local_min,
)
from intfill.solver import (
    SolverConfig,
    SolveReport,
    generic_filled_search,
    solve,
    solve_problem,
    vertex_check,
)

EVENT_KINDS = {
    "start",
    "anchor",
    "escape",
    "outer_result",
    "restart_neighbor",
    "finalize_descent",
}


def booth_fn(x):
    return float((x[0] + 2 * x[1] - 7) ** 2 + (2 * x[0] + x[1] - 5) ** 2)


def booth_objective(limit=None):
    box = BoxDomain(np.array([-10, -10]), np.array([10, 10]))
    return ObjectiveFunction(booth_fn, box, EvalCounter(limit=limit))


# ---------------------------------------------------------------- vertex


def test_vertex_check():
    box = BoxDomain(np.array([-5, -5]), np.array([5, 5]))
    assert vertex_check(np.array([5, 5]), box)
    assert vertex_check(np.array([-5, 5]), box)
    assert not vertex_check(np.array([5, 0]), box)
    assert not vertex_check(np.array([0, 0]), box)
    line = BoxDomain(np.array([0]), np.array([10]))
    assert vertex_check(np.array([0]), line)
    assert vertex_check(np.array([10]), line)
    assert not vertex_check(np.array([7]), line)


# ---------------------------------------------------------------- config


def test_config_validation():
    with pytest.raises(ParameterError):
        SolverConfig(max_outer_iterations=0)
    with pytest.raises(ParameterError):
        SolverConfig(revisit_limit=0)
    with pytest.raises(ParameterError):
        SolverConfig(max_evaluations=0)


def test_config_defaults():
    cfg = SolverConfig()
    assert cfg.objective_minimizer == "quasi-newton"
    assert cfg.filled_minimizer == "compass"
    assert cfg.filled_function == "inverse-square"
    assert cfg.max_outer_iterations == 3
    assert cfg.revisit_limit == 2
    assert cfg.max_evaluations == 10_000_000
    assert cfg.count_objective_in_filled
    assert cfg.check_filled_conditions


# ---------------------------------------------------------------- basic solves


def test_solve_booth_finds_global():
    rep = solve(booth_objective(), np.array([0, 0]))
    assert isinstance(rep, SolveReport)
    assert rep.x_best == (1, 3)
    assert rep.f_best == 0.0
    assert rep.termination == "revisit_limit"
    assert rep.n_fu > 0 and rep.n_fill > 0
    assert rep.columns() == (0.0, rep.n_fu, rep.n_fill)


def test_solve_rejects_infeasible_start():
    with pytest.raises(DomainError):
        solve(booth_objective(), np.array([40, 0]))


def test_solve_problem_uses_default_start():
    rep = solve_problem(get_problem("booth"))
    explicit = solve_problem(get_problem("booth"), x0=(0, 0))
    assert rep.x_best == explicit.x_best == (1, 3)
    assert rep.columns() == explicit.columns()


def test_generic_search_reaches_booth_minimum():
    obj = booth_objective()
    out = generic_filled_search(obj, np.array([0, 0]))
    assert tuple(out) == (1, 3)


def test_single_outer_iteration_matches_generic_endpoint():
    obj1 = booth_objective()
    rep = solve(obj1, np.array([0, 0]), SolverConfig(max_outer_iterations=1))
    obj2 = booth_objective()
    out = generic_filled_search(obj2, np.array([0, 0]))
    assert rep.x_best == tuple(out)
    assert rep.termination == "max_iterations"


def test_double_well_escape_and_dc2_record():
    # f = (x+3)^2 (x-3)^2 - x has local minima near -3 and 3 with
    # f(-3) = 3 and f(3) = -3; the filled phase must cross the barrier.
    well = lambda x: float((x[0] + 3.0) ** 2 * (x[0] - 3.0) ** 2 - x[0])
    box = BoxDomain(np.array([-5]), np.array([5]))
    rep = solve(ObjectiveFunction(well, box, EvalCounter()), np.array([-3]))
    assert rep.x_best == (3,)
    assert rep.f_best == -3.0
    assert len(rep.dc2_checks) >= 1
    for check in rep.dc2_checks:
        assert check["status"] in {"passed", "failed", "skipped_unconverged"}
        assert check["new_anchor_value"] < check["previous_anchor_value"]
    assert all(c["status"] == "passed" for c in rep.dc2_checks)


def test_d1_checks_recorded_and_passing():
    rep = solve_problem(get_problem("colville"))
    assert len(rep.d1_checks) >= 1
    for check in rep.d1_checks:
        assert check["passed"]
        assert check["anchor_filled"] == 2.0
        assert check["max_neighbor_filled"] < 2.0


def test_condition_instrumentation_can_be_disabled():
    base = solve_problem(get_problem("booth"))
    off = solve_problem(
        get_problem("booth"), cfg=SolverConfig(check_filled_conditions=False)
    )
    assert off.d1_checks == [] and off.dc2_checks == []
    assert off.f_best == base.f_best
    assert off.n_fill < base.n_fill


# ---------------------------------------------------------------- events


def test_event_stream_shape():
    rep = solve_problem(get_problem("booth"))
    kinds = [ev["kind"] for ev in rep.events]
    assert kinds[0] == "start"
    assert "anchor" in kinds and "outer_result" in kinds
    assert set(kinds) <= EVENT_KINDS
    counters = [(ev["n_fu"], ev["n_fill"]) for ev in rep.events]
    for (a1, b1), (a2, b2) in zip(counters, counters[1:]):
        assert a2 >= a1 and b2 >= b1
    assert rep.n_fu >= counters[-1][0]
    assert rep.n_fill >= counters[-1][1]


def test_outer_results_never_worsen_the_incumbent():
    rep = solve_problem(get_problem("rastrigin", 2), x0=(-5, 5))
    best = np.inf
    for ev in rep.events:
        if ev["kind"] == "outer_result":
            best = min(best, ev["value"])
    assert rep.f_best <= best


def test_bound_checks_logged_with_valid_statuses():
    rep = solve_problem(get_problem("booth"))
    assert rep.bound_checks
    for check in rep.bound_checks:
        assert check.status in {"passed", "failed", "skipped"}
        assert check.offset_sq >= 0.0


# ---------------------------------------------------------------- determinism


@pytest.mark.parametrize("name,n,start", [
    ("booth", None, None),
    ("rastrigin", 5, None),
    ("three-hump-camel", None, (2, 2)),
])
def test_repeated_solves_are_bitwise_identical(name, n, start):
    a = solve_problem(get_problem(name, n), x0=start)
    b = solve_problem(get_problem(name, n), x0=start)
    assert a.columns() == b.columns()
    assert a.x_best == b.x_best
    assert a.termination == b.termination
    assert a.events == b.events


# ---------------------------------------------------------------- budgets


def test_budget_cut_still_reports_local_minimizer():
    obj = booth_objective()
    rep = solve(obj, np.array([0, 0]), SolverConfig(max_evaluations=200))
    assert rep.termination == "budget"
    assert rep.f_best == booth_fn(np.array(rep.x_best))
    assert is_discrete_local_min(booth_fn, np.array(rep.x_best), obj.box)
    # The final polish may charge past the cut, but not before it.
    assert rep.n_fu + rep.n_fill >= 200


def test_budget_of_one_is_survivable():
    rep = solve(booth_objective(), np.array([0, 0]), SolverConfig(max_evaluations=1))
    assert rep.termination == "budget"
    assert is_discrete_local_min(booth_fn, np.array(rep.x_best),
                                 booth_objective().box)


def test_budget_cut_deterministic():
    r1 = solve(booth_objective(), np.array([0, 0]), SolverConfig(max_evaluations=350))
    r2 = solve(booth_objective(), np.array([0, 0]), SolverConfig(max_evaluations=350))
    assert r1.columns() == r2.columns()
    assert r1.x_best == r2.x_best


def test_external_counter_limit_respected_and_restored():
    counter = EvalCounter(limit=100)
    box = BoxDomain(np.array([-5, -5]), np.array([5, 5]))
    obj = ObjectiveFunction(lambda x: float(x @ x), box, counter)
    rep = solve(obj, np.array([3, 3]))
    assert rep.termination == "budget"
    assert counter.limit == 100
    assert rep.x_best == (0, 0)


# ---------------------------------------------------------------- counting flags


def test_embedded_objective_counting_flag():
    on = solve_problem(get_problem("booth"))
    off = solve_problem(
        get_problem("booth"), cfg=SolverConfig(count_objective_in_filled=False)
    )
    assert off.f_best == on.f_best == 0.0
    # Every filled evaluation embeds one objective evaluation; with the
    # flag off those no longer hit n_fu.
    assert off.n_fu == on.n_fu - on.n_fill


def test_solve_overwrites_objective_counting_flag():
    obj = booth_objective()
    assert obj.count_in_filled
    solve(obj, np.array([0, 0]), SolverConfig(count_objective_in_filled=False))
    assert not obj.count_in_filled
