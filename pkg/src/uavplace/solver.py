"""Minimal-power UAV placement: feasibility predicate, region sampling, power sweep."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Point3, los_mask
from .radio import McsEntry, max_distance_m, required_mcs, snr_db
from .scenario import Scenario, UserEquipment

GRID_POINT_LIMIT = 100_000_000

DEFAULT_COARSE_RESOLUTION_M = 1.0
REFINE_START_STEP_M = 0.5
REFINE_MIN_STEP_M = 1e-3


class GridTooLargeError(ValueError):
    """The requested grid resolution would enumerate too many points."""


@dataclass(frozen=True)
class UeContext:
    """Per-UE quantities fixed once a transmit power is chosen."""

    ue: UserEquipment
    mcs: McsEntry
    min_snr_db: float
    d_max_m: float


@dataclass(frozen=True)
class FeasibilityContext:
    tx_power_dbm: float
    per_ue: tuple[UeContext, ...]


@dataclass(frozen=True)
class UeLinkDiagnostic:
    ue_id: str
    distance_m: float
    snr_db: float
    snr_margin_db: float
    los: bool


@dataclass(frozen=True)
class Solution:
    tx_power_dbm: float
    position: Point3
    per_ue: tuple[UeLinkDiagnostic, ...]
    objective_bps: float
    grid_resolution_m: float
    refinement_iterations: int


@dataclass(frozen=True)
class PowerLevelStats:
    tx_power_dbm: float
    ues_unreachable: int
    ues_los_blocked: int


class InfeasiblePositionError(Exception):
    """No position satisfied all constraints at any allowed transmit power."""

    def __init__(self, stats: list[PowerLevelStats]):
        lines = ", ".join(
            f"{st.tx_power_dbm:g} dBm ({st.ues_unreachable} unreachable, "
            f"{st.ues_los_blocked} LoS-blocked)"
            for st in stats
        )
        super().__init__(f"no feasible UAV position at any power level: {lines}")
        self.stats = stats


def sweep_powers(scenario: Scenario) -> list[float]:
    """Transmit powers tried in order: 0, step, 2*step, ... up to the allowed maximum."""
    radio = scenario.radio
    powers: list[float] = []
    k = 0
    while True:
        p = k * radio.tx_power_step_db
        if p > radio.max_tx_power_dbm + 1e-9:
            break
        powers.append(min(p, radio.max_tx_power_dbm))
        k += 1
    return powers


def build_context(scenario: Scenario, tx_power_dbm: float) -> FeasibilityContext:
    """Per-UE required MCS, minimum SNR, and demand-sphere radius at one power."""
    if not 0 <= tx_power_dbm <= scenario.radio.max_tx_power_dbm:
        raise ValueError(
            f"tx power {tx_power_dbm} dBm outside [0, {scenario.radio.max_tx_power_dbm}]"
        )
    per_ue = []
    for ue in scenario.ues:
        mcs = required_mcs(ue.demand_bps, scenario.mcs_table, ue_id=ue.id)
        per_ue.append(
            UeContext(
                ue=ue,
                mcs=mcs,
                min_snr_db=mcs.min_snr_db,
                d_max_m=max_distance_m(tx_power_dbm, mcs.min_snr_db, scenario.radio),
            )
        )
    return FeasibilityContext(tx_power_dbm=tx_power_dbm, per_ue=tuple(per_ue))


def is_feasible(p: Point3, ctx: FeasibilityContext, scenario: Scenario) -> bool:
    """True iff p is in bounds, inside every demand sphere, and in LoS with every UE."""
    return bool(feasible_mask(p.as_array().reshape(1, 3), ctx, scenario)[0])


def feasible_mask(points: np.ndarray, ctx: FeasibilityContext, scenario: Scenario) -> np.ndarray:
    """Vectorized feasibility over an (n, 3) array of candidate positions."""
    lo = scenario.bounds.min.as_array()
    hi = scenario.bounds.max.as_array()
    mask = np.all((points >= lo) & (points <= hi), axis=1)
    for uc in ctx.per_ue:
        if not mask.any():
            return mask
        origin = uc.ue.position.as_array()
        d2 = ((points - origin) ** 2).sum(axis=1)
        # A zero-length link has no defined SNR; the UAV cannot sit on a UE.
        mask &= (d2 <= uc.d_max_m * uc.d_max_m) & (d2 > 0.0)
    # LoS is the expensive test; run it only on survivors.
    for uc in ctx.per_ue:
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            return mask
        origin = uc.ue.position.as_array()
        mask[idx] &= los_mask(origin, points[idx], scenario.obstacles)
    return mask


def _axis_coords(lo: float, hi: float, resolution: float) -> np.ndarray:
    n = int(math.floor((hi - lo) / resolution + 1e-9)) + 1
    coords = lo + resolution * np.arange(n)
    # Float noise may push the last coordinate past hi; keep every point in bounds.
    return np.minimum(coords, hi)


def grid_points(scenario: Scenario, resolution_m: float) -> np.ndarray:
    """All bounds-box grid points at the given spacing, x-major then y then z."""
    if resolution_m <= 0:
        raise ValueError("resolution must be positive")
    b = scenario.bounds
    xs = _axis_coords(b.min.x, b.max.x, resolution_m)
    ys = _axis_coords(b.min.y, b.max.y, resolution_m)
    zs = _axis_coords(b.min.z, b.max.z, resolution_m)
    total = xs.size * ys.size * zs.size
    if total > GRID_POINT_LIMIT:
        raise GridTooLargeError(
            f"{total} grid points at {resolution_m} m spacing exceeds the "
            f"{GRID_POINT_LIMIT} limit; use a coarser resolution"
        )
    gx, gy, gz = np.meshgrid(xs, ys, zs, indexing="ij")
    return np.stack([gx.ravel(), gy.ravel(), gz.ravel()], axis=1)


def sample_feasible_region(
    ctx: FeasibilityContext, scenario: Scenario, resolution_m: float
) -> list[Point3]:
    """Feasible grid points at the given spacing, in deterministic x-major order."""
    points = grid_points(scenario, resolution_m)
    mask = feasible_mask(points, ctx, scenario)
    return [Point3(float(x), float(y), float(z)) for x, y, z in points[mask]]


def min_power_bruteforce(scenario: Scenario, resolution_m: float) -> float | None:
    """Smallest swept power whose feasible grid set is non-empty; None if all empty.

    Exhaustive-grid reference for the solver; shares only the feasibility
    predicate with it, not the search strategy.
    """
    points = grid_points(scenario, resolution_m)
    for p_t in sweep_powers(scenario):
        ctx = build_context(scenario, p_t)
        if feasible_mask(points, ctx, scenario).any():
            return p_t
    return None


def _tie_break(points: np.ndarray, ue_positions: np.ndarray) -> np.ndarray:
    """Sum of squared link distances, the within-power selection objective."""
    diff = points[:, None, :] - ue_positions[None, :, :]
    return (diff**2).sum(axis=(1, 2))


def _refine(
    start: np.ndarray,
    ctx: FeasibilityContext,
    scenario: Scenario,
    ue_positions: np.ndarray,
) -> tuple[np.ndarray, int]:
    """Compass pattern search on the tie-break objective, rejecting infeasible moves."""
    p = start.copy()
    best = float(_tie_break(p.reshape(1, 3), ue_positions)[0])
    step = REFINE_START_STEP_M
    iterations = 0
    while step >= REFINE_MIN_STEP_M:
        improved = False
        for axis in range(3):
            for sign in (1.0, -1.0):
                cand = p.copy()
                cand[axis] += sign * step
                val = float(_tie_break(cand.reshape(1, 3), ue_positions)[0])
                if val < best and feasible_mask(cand.reshape(1, 3), ctx, scenario)[0]:
                    p, best = cand, val
                    improved = True
        iterations += 1
        if not improved:
            step /= 2.0
    return p, iterations


def _diagnostics(
    p: Point3, ctx: FeasibilityContext, scenario: Scenario
) -> tuple[UeLinkDiagnostic, ...]:
    out = []
    for uc in ctx.per_ue:
        d = p.distance_to(uc.ue.position)
        s = snr_db(ctx.tx_power_dbm, d, scenario.radio)
        out.append(
            UeLinkDiagnostic(
                ue_id=uc.ue.id,
                distance_m=d,
                snr_db=s,
                snr_margin_db=s - uc.min_snr_db,
                los=True,
            )
        )
    return tuple(out)


def solve_position(
    scenario: Scenario, coarse_resolution_m: float = DEFAULT_COARSE_RESOLUTION_M
) -> Solution:
    """Sweep transmit power upward until some position serves every UE, then pick one.

    At each power the bounds box is scanned on a coarse grid; the first power
    with a feasible point wins. Among feasible grid points the sum of squared
    link distances breaks the tie, and a pattern search shrinks that objective
    further while staying feasible. Raises InfeasiblePositionError with
    per-power constraint statistics when the sweep is exhausted.
    """
    points = grid_points(scenario, coarse_resolution_m)
    # LoS does not depend on power; compute one mask per UE up front.
    ue_los = [
        los_mask(ue.position.as_array(), points, scenario.obstacles) for ue in scenario.ues
    ]
    ue_positions = np.stack([ue.position.as_array() for ue in scenario.ues])
    stats: list[PowerLevelStats] = []
    for p_t in sweep_powers(scenario):
        ctx = build_context(scenario, p_t)
        mask = np.ones(points.shape[0], dtype=bool)
        reach = []
        for uc, blos in zip(ctx.per_ue, ue_los):
            origin = uc.ue.position.as_array()
            d2 = ((points - origin) ** 2).sum(axis=1)
            within = (d2 <= uc.d_max_m * uc.d_max_m) & (d2 > 0.0)
            reach.append(within)
            mask &= within & blos
        if not mask.any():
            unreachable = sum(1 for within in reach if not within.any())
            blocked = sum(
                1
                for within, blos in zip(reach, ue_los)
                if within.any() and not (within & blos).any()
            )
            stats.append(PowerLevelStats(p_t, unreachable, blocked))
            continue
        candidates = points[mask]
        objectives = _tie_break(candidates, ue_positions)
        start = candidates[int(np.argmin(objectives))]
        refined, iterations = _refine(start, ctx, scenario, ue_positions)
        position = Point3(float(refined[0]), float(refined[1]), float(refined[2]))
        return Solution(
            tx_power_dbm=p_t,
            position=position,
            per_ue=_diagnostics(position, ctx, scenario),
            objective_bps=float(sum(uc.mcs.phy_rate_bps for uc in ctx.per_ue)),
            grid_resolution_m=coarse_resolution_m,
            refinement_iterations=iterations,
        )
    raise InfeasiblePositionError(stats)


def solution_to_dict(sol: Solution) -> dict:
    return {
        "tx_power_dbm": sol.tx_power_dbm,
        "position": [sol.position.x, sol.position.y, sol.position.z],
        "objective_bps": sol.objective_bps,
        "ues": [
            {
                "id": d.ue_id,
                "distance_m": d.distance_m,
                "snr_db": d.snr_db,
                "snr_margin_db": d.snr_margin_db,
                "los": d.los,
            }
            for d in sol.per_ue
        ],
        "solver": {
            "grid_resolution_m": sol.grid_resolution_m,
            "refinement_iterations": sol.refinement_iterations,
        },
    }
