"""Throughput evaluation: per-link capacity, airtime-fair sharing, traces, CCDF."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import Point3, has_los
from .radio import McsEntry, mcs_from_snr, nlos_snr_db, snr_db
from .scenario import Scenario

PROPORTIONAL = "proportional"
EQUAL_AIRTIME = "equal-airtime"


@dataclass(frozen=True)
class LinkReport:
    ue_id: str
    distance_m: float
    los: bool
    snr_db: float
    mcs: McsEntry | None
    capacity_bps: float
    served_bps: float

    @property
    def airtime_share(self) -> float:
        return self.served_bps / self.capacity_bps if self.capacity_bps > 0 else 0.0


@dataclass(frozen=True)
class PositionReport:
    label: str
    position: Point3
    links: tuple[LinkReport, ...]
    aggregate_bps: float
    airtime_used: float


def link_report(ue, uav_pos: Point3, scenario: Scenario) -> LinkReport:
    """Physical link state at the evaluator transmit power, before channel sharing.

    served_bps is what the link would carry alone on the channel:
    min(demand, capacity).
    """
    distance = ue.position.distance_to(uav_pos)
    if distance == 0:
        raise ValueError(f"UAV position coincides with {ue.id}")
    params = scenario.eval_params
    los = has_los(ue.position, uav_pos, scenario.obstacles)
    if los:
        snr = snr_db(params.tx_power_dbm, distance, scenario.radio)
    else:
        snr = nlos_snr_db(params.tx_power_dbm, distance, scenario.radio, params.nlos_penalty_db)
    mcs = mcs_from_snr(snr, scenario.mcs_table)
    capacity = params.mac_efficiency * mcs.phy_rate_bps if mcs else 0.0
    return LinkReport(
        ue_id=ue.id,
        distance_m=distance,
        los=los,
        snr_db=snr,
        mcs=mcs,
        capacity_bps=capacity,
        served_bps=min(ue.demand_bps, capacity),
    )


def _share_proportional(demands: list[float], capacities: list[float]) -> list[float]:
    """Either everyone gets their demand, or all demands scale by the same factor."""
    airtimes = [d / c if c > 0 else 0.0 for d, c in zip(demands, capacities)]
    total = sum(airtimes)
    if total <= 1.0:
        return [d if c > 0 else 0.0 for d, c in zip(demands, capacities)]
    return [d / total if c > 0 else 0.0 for d, c in zip(demands, capacities)]


def _share_equal_airtime(demands: list[float], capacities: list[float]) -> list[float]:
    """Max-min fair airtime: unused share from satisfied links is redistributed."""
    served = [0.0] * len(demands)
    pending = [i for i, c in enumerate(capacities) if c > 0]
    remaining = 1.0
    while pending:
        share = remaining / len(pending)
        satisfied = [i for i in pending if demands[i] / capacities[i] <= share + 1e-15]
        if not satisfied:
            for i in pending:
                served[i] = capacities[i] * share
            break
        for i in satisfied:
            served[i] = demands[i]
            remaining -= demands[i] / capacities[i]
        pending = [i for i in pending if i not in satisfied]
    return served


def aggregate_throughput(
    uav_pos: Point3,
    scenario: Scenario,
    demands_bps: dict[str, float] | None = None,
    sharing: str = PROPORTIONAL,
    label: str = "",
) -> PositionReport:
    """Evaluate one candidate position under shared-channel airtime constraints.

    Each live link needs airtime demand/capacity; when the total exceeds one
    channel, the default policy scales every demand by the same factor so
    served-rate ratios stay equal to demand ratios. `sharing="equal-airtime"`
    switches to max-min fair airtime instead. `demands_bps` overrides scenario
    demands per UE id.
    """
    links = [link_report(ue, uav_pos, scenario) for ue in scenario.ues]
    demands = [
        demands_bps.get(ue.id, ue.demand_bps) if demands_bps else ue.demand_bps
        for ue in scenario.ues
    ]
    capacities = [lr.capacity_bps for lr in links]
    if sharing == PROPORTIONAL:
        served = _share_proportional(demands, capacities)
    elif sharing == EQUAL_AIRTIME:
        served = _share_equal_airtime(demands, capacities)
    else:
        raise ValueError(f"unknown sharing policy {sharing!r}")
    links = tuple(
        LinkReport(
            ue_id=lr.ue_id,
            distance_m=lr.distance_m,
            los=lr.los,
            snr_db=lr.snr_db,
            mcs=lr.mcs,
            capacity_bps=lr.capacity_bps,
            served_bps=rate,
        )
        for lr, rate in zip(links, served)
    )
    return PositionReport(
        label=label,
        position=uav_pos,
        links=links,
        aggregate_bps=sum(lr.served_bps for lr in links),
        airtime_used=sum(lr.airtime_share for lr in links),
    )


def compare_positions(
    positions: list[tuple[str, Point3]], scenario: Scenario, sharing: str = PROPORTIONAL
) -> list[PositionReport]:
    """One report per named candidate position, input order preserved."""
    if not positions:
        raise ValueError("at least one candidate position is required")
    return [
        aggregate_throughput(pos, scenario, sharing=sharing, label=name)
        for name, pos in positions
    ]


@dataclass(frozen=True)
class ThroughputTrace:
    """Per-second aggregate throughput plus its empirical CCDF."""

    label: str
    seconds: tuple[int, ...]
    aggregate_bps: tuple[float, ...]
    ccdf: tuple[tuple[float, float], ...]  # (throughput_bps, fraction of samples >=)


def ccdf_points(values) -> tuple[tuple[float, float], ...]:
    """Sorted (value, fraction-of-samples >= value) pairs, one per distinct value."""
    arr = np.sort(np.asarray(values, dtype=float))
    n = arr.size
    out = []
    for v in np.unique(arr):
        first = int(np.searchsorted(arr, v, side="left"))
        out.append((float(v), (n - first) / n))
    return tuple(out)


def throughput_trace(
    uav_pos: Point3,
    scenario: Scenario,
    duration_s: int,
    jitter: float = 0.0,
    seed: int = 0,
    sharing: str = PROPORTIONAL,
    label: str = "",
) -> ThroughputTrace:
    """Second-by-second evaluation under multiplicative demand noise.

    Every UE's demand is scaled each second by an independent factor drawn
    uniformly from [1 - jitter, 1 + jitter] using a seeded generator, so equal
    (seed, scenario, position) inputs reproduce the trace exactly.
    """
    if duration_s < 1:
        raise ValueError("duration must be at least 1 second")
    if not 0 <= jitter < 1:
        raise ValueError("jitter must be in [0, 1)")
    if sharing not in (PROPORTIONAL, EQUAL_AIRTIME):
        raise ValueError(f"unknown sharing policy {sharing!r}")
    links = [link_report(ue, uav_pos, scenario) for ue in scenario.ues]
    capacities = [lr.capacity_bps for lr in links]
    base = [ue.demand_bps for ue in scenario.ues]
    rng = np.random.default_rng(seed)
    factors = rng.uniform(1.0 - jitter, 1.0 + jitter, size=(duration_s, len(base)))
    share = _share_proportional if sharing == PROPORTIONAL else _share_equal_airtime
    aggregates = []
    for t in range(duration_s):
        demands = [b * factors[t, i] for i, b in enumerate(base)]
        aggregates.append(sum(share(demands, capacities)))
    return ThroughputTrace(
        label=label,
        seconds=tuple(range(1, duration_s + 1)),
        aggregate_bps=tuple(aggregates),
        ccdf=ccdf_points(aggregates),
    )


def write_comparison_csv(reports: list[PositionReport], scenario: Scenario, path: str | Path) -> None:
    """Per-position summary: coordinates, per-UE served rate, aggregate, airtime."""
    ue_ids = [ue.id for ue in scenario.ues]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["position", "x_m", "y_m", "z_m"]
            + [f"served_{ue_id}_mbps" for ue_id in ue_ids]
            + ["aggregate_mbps", "airtime_used"]
        )
        for rep in reports:
            served = {lr.ue_id: lr.served_bps for lr in rep.links}
            writer.writerow(
                [
                    rep.label,
                    f"{rep.position.x:.3f}",
                    f"{rep.position.y:.3f}",
                    f"{rep.position.z:.3f}",
                ]
                + [f"{served[ue_id] / 1e6:.6f}" for ue_id in ue_ids]
                + [f"{rep.aggregate_bps / 1e6:.6f}", f"{rep.airtime_used:.6f}"]
            )


def write_trace_csv(trace: ThroughputTrace, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "aggregate_mbps"])
        for t, agg in zip(trace.seconds, trace.aggregate_bps):
            writer.writerow([t, f"{agg / 1e6:.6f}"])


def write_ccdf_csv(trace: ThroughputTrace, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["throughput_mbps", "ccdf"])
        for value, frac in trace.ccdf:
            writer.writerow([f"{value / 1e6:.6f}", f"{frac:.6f}"])
