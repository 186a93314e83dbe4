import dataclasses
import json

import numpy as np
import pytest

from helpers import random_scenario

from uavplace import (
    InfeasibleDemandError,
    Point3,
    RadioConfig,
    Scenario,
    SearchBounds,
    UserEquipment,
    default_mcs_table,
)
from uavplace.scenario import EvalParams
from uavplace.solver import (
    GridTooLargeError,
    InfeasiblePositionError,
    build_context,
    feasible_mask,
    grid_points,
    is_feasible,
    min_power_bruteforce,
    sample_feasible_region,
    solution_to_dict,
    solve_position,
    sweep_powers,
)

REFERENCE_OPTIMUM = Point3(0.0, -1.48, 29.44)


def _single_ue_scenario():
    return Scenario(
        ues=(UserEquipment(id="u", position=Point3(0.0, 0.0, 1.0), demand_bps=58.5e6),),
        obstacles=(),
        bounds=SearchBounds(Point3(-10.0, -10.0, 0.0), Point3(10.0, 10.0, 12.0)),
        radio=RadioConfig(frequency_hz=5.25e9, noise_floor_dbm=-85.0, max_tx_power_dbm=20.0),
        mcs_table=default_mcs_table(),
        eval_params=EvalParams(),
    )


def test_build_context_scenario_a(scenario_a):
    ctx = build_context(scenario_a, 6.0)
    assert ctx.per_ue[0].mcs.index == 1
    assert ctx.per_ue[1].mcs.index == 0
    assert ctx.per_ue[0].d_max_m == pytest.approx(32.17003515546155, abs=1e-9)
    assert ctx.per_ue[1].d_max_m == pytest.approx(45.44138246892333, abs=1e-9)
    ctx0 = build_context(scenario_a, 0.0)
    assert ctx0.per_ue[0].d_max_m == pytest.approx(16.12321092525787, abs=1e-9)


def test_build_context_swap_symmetry(scenario_a):
    swapped = dataclasses.replace(
        scenario_a,
        ues=(
            dataclasses.replace(scenario_a.ues[0], demand_bps=scenario_a.ues[1].demand_bps),
            dataclasses.replace(scenario_a.ues[1], demand_bps=scenario_a.ues[0].demand_bps),
        ),
    )
    ctx = build_context(scenario_a, 6.0)
    ctx_swapped = build_context(swapped, 6.0)
    assert ctx_swapped.per_ue[0].d_max_m == ctx.per_ue[1].d_max_m
    assert ctx_swapped.per_ue[1].d_max_m == ctx.per_ue[0].d_max_m


def test_build_context_power_range(scenario_a):
    with pytest.raises(ValueError):
        build_context(scenario_a, -1.0)
    with pytest.raises(ValueError):
        build_context(scenario_a, 21.0)


def test_sweep_powers(scenario_a):
    powers = sweep_powers(scenario_a)
    assert powers[0] == 0.0
    assert powers[-1] == scenario_a.radio.max_tx_power_dbm
    assert len(powers) == 21


def test_is_feasible_reference_optimum(scenario_a):
    assert is_feasible(REFERENCE_OPTIMUM, build_context(scenario_a, 6.0), scenario_a)
    assert not is_feasible(REFERENCE_OPTIMUM, build_context(scenario_a, 0.0), scenario_a)


def test_is_feasible_rejects_inside_building_and_out_of_bounds(scenario_a):
    ctx = build_context(scenario_a, 6.0)
    assert not is_feasible(Point3(0.0, 0.0, 10.0), ctx, scenario_a)
    assert not is_feasible(Point3(0.0, -26.0, 10.0), ctx, scenario_a)


def test_sample_feasible_region_scenario_a(scenario_a):
    ctx = build_context(scenario_a, 6.0)
    region = sample_feasible_region(ctx, scenario_a, 0.5)
    assert region
    assert all(is_feasible(p, ctx, scenario_a) for p in region)
    # Deterministic x-major, then y, then z ordering.
    keys = [(p.x, p.y, p.z) for p in region]
    assert keys == sorted(keys)

    assert sample_feasible_region(build_context(scenario_a, 0.0), scenario_a, 0.5) == []


def test_sample_feasible_region_unconstrained_counts_all():
    s = _single_ue_scenario()
    ctx = build_context(s, 20.0)  # d_max ~ 161 m covers the whole bounds box
    region = sample_feasible_region(ctx, s, 2.0)
    assert len(region) == 11 * 11 * 7


def test_grid_too_large(scenario_a):
    with pytest.raises(GridTooLargeError):
        grid_points(scenario_a, 0.001)


def test_solve_scenario_a(scenario_a):
    sol = solve_position(scenario_a)
    assert sol.tx_power_dbm == 6.0
    ctx = build_context(scenario_a, 6.0)
    assert is_feasible(sol.position, ctx, scenario_a)
    for diag, uc in zip(sol.per_ue, ctx.per_ue):
        assert diag.los
        assert diag.snr_margin_db >= 0
        assert diag.distance_m <= uc.d_max_m
    assert sol.objective_bps == pytest.approx(175.5e6)


def test_solve_tie_break_not_worse_than_coarse(scenario_a):
    sol = solve_position(scenario_a)
    ctx = build_context(scenario_a, sol.tx_power_dbm)
    region = sample_feasible_region(ctx, scenario_a, 1.0)
    ues = [ue.position for ue in scenario_a.ues]

    def objective(p):
        return sum(p.distance_to(u) ** 2 for u in ues)

    best_coarse = min(objective(p) for p in region)
    assert objective(sol.position) <= best_coarse + 1e-9


def test_solve_single_ue_zero_power():
    sol = solve_position(_single_ue_scenario())
    assert sol.tx_power_dbm == 0.0


def test_solve_infeasible_demand_before_sweep(scenario_a):
    bad = dataclasses.replace(
        scenario_a, ues=(dataclasses.replace(scenario_a.ues[0], demand_bps=10e9),)
    )
    with pytest.raises(InfeasibleDemandError):
        solve_position(bad)


def test_solve_reports_stats_when_infeasible(scenario_a):
    boxed = dataclasses.replace(
        scenario_a, bounds=SearchBounds(Point3(-4.0, -4.0, 1.0), Point3(4.0, 4.0, 19.0))
    )
    with pytest.raises(InfeasiblePositionError) as err:
        solve_position(boxed)
    stats = err.value.stats
    assert len(stats) == len(sweep_powers(scenario_a))
    # Every candidate point is inside the building, so LoS can never hold.
    assert all(st.ues_los_blocked >= 1 or st.ues_unreachable >= 1 for st in stats)


def test_min_power_bruteforce_scenario_a(scenario_a):
    assert min_power_bruteforce(scenario_a, 0.5) == 6.0


def test_min_power_bruteforce_obstacle_removed_helps(scenario_a):
    cleared = dataclasses.replace(scenario_a, obstacles=())
    assert min_power_bruteforce(cleared, 0.5) < 6.0


def test_min_power_bruteforce_none_when_boxed_in(scenario_a):
    boxed = dataclasses.replace(
        scenario_a, bounds=SearchBounds(Point3(-4.0, -4.0, 1.0), Point3(4.0, 4.0, 19.0))
    )
    assert min_power_bruteforce(boxed, 1.0) is None


def test_power_monotonicity_on_random_scenarios():
    rng = np.random.default_rng(314)
    for _ in range(10):
        s = random_scenario(rng)
        points = grid_points(s, 2.0)
        powers = sweep_powers(s)
        prev = None
        for p_t in powers[:8]:
            mask = feasible_mask(points, build_context(s, p_t), s)
            if prev is not None:
                assert not (prev & ~mask).any()
            prev = mask


def test_solver_matches_bruteforce_on_shipped_and_random(scenario_a, scenario_b):
    for s in (scenario_a, scenario_b):
        assert solve_position(s).tx_power_dbm == min_power_bruteforce(s, 1.0)
    rng = np.random.default_rng(2718)
    solved = 0
    for _ in range(50):
        s = random_scenario(rng)
        expected = min_power_bruteforce(s, 2.0)
        if expected is None:
            with pytest.raises(InfeasiblePositionError):
                solve_position(s, coarse_resolution_m=2.0)
        else:
            assert solve_position(s, coarse_resolution_m=2.0).tx_power_dbm == expected
            solved += 1
    assert solved >= 25


def test_translation_invariance(scenario_a):
    # Integer offsets keep all coordinate arithmetic exact.
    offset = (7.0, -3.0, 2.0)
    moved = Scenario(
        ues=tuple(
            dataclasses.replace(ue, position=ue.position.translate(*offset))
            for ue in scenario_a.ues
        ),
        obstacles=tuple(box.translate(*offset) for box in scenario_a.obstacles),
        bounds=SearchBounds(
            scenario_a.bounds.min.translate(*offset), scenario_a.bounds.max.translate(*offset)
        ),
        radio=scenario_a.radio,
        mcs_table=scenario_a.mcs_table,
        eval_params=scenario_a.eval_params,
    )
    points = grid_points(scenario_a, 1.0)
    mask = feasible_mask(points, build_context(scenario_a, 6.0), scenario_a)
    moved_mask = feasible_mask(points + np.array(offset), build_context(moved, 6.0), moved)
    assert (mask == moved_mask).all()


def test_solution_serialization(scenario_a):
    sol = solve_position(scenario_a)
    doc = solution_to_dict(sol)
    text = json.dumps(doc)
    again = json.loads(text)
    assert again["tx_power_dbm"] == 6.0
    assert len(again["ues"]) == 2
    assert set(again["ues"][0]) == {"id", "distance_m", "snr_db", "snr_margin_db", "los"}
    assert again["solver"]["grid_resolution_m"] == 1.0
