"""Figure rendering for evaluation reports and feasible-region point clouds."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .evaluation import PositionReport, ThroughputTrace
from .scenario import Scenario

DPI = 150


def save_comparison_figure(
    reports: list[PositionReport], scenario: Scenario, path: str | Path
) -> None:
    """Stacked bars of served rate per UE for each candidate position."""
    labels = [rep.label for rep in reports]
    x = np.arange(len(reports))
    fig, ax = plt.subplots(figsize=(max(6.0, 1.2 * len(reports)), 4.0))
    bottom = np.zeros(len(reports))
    for ue in scenario.ues:
        served = np.array(
            [next(lr.served_bps for lr in rep.links if lr.ue_id == ue.id) for rep in reports]
        ) / 1e6
        ax.bar(x, served, bottom=bottom, label=ue.id)
        bottom += served
    ax.set_xticks(x)
    ax.set_xticklabels(labels, rotation=20, ha="right")
    ax.set_ylabel("served throughput (Mbit/s)")
    ax.set_title("Aggregate throughput by candidate position")
    ax.legend(fontsize=8)
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def save_trace_figure(traces: list[ThroughputTrace], path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    for trace in traces:
        ax.plot(trace.seconds, np.array(trace.aggregate_bps) / 1e6, label=trace.label)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("aggregate throughput (Mbit/s)")
    ax.set_title("Aggregate throughput over time")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def save_ccdf_figure(traces: list[ThroughputTrace], path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    for trace in traces:
        values = np.array([v for v, _ in trace.ccdf]) / 1e6
        fracs = np.array([f for _, f in trace.ccdf])
        ax.step(values, fracs, where="post", label=trace.label)
    ax.set_xlabel("aggregate throughput (Mbit/s)")
    ax.set_ylabel("fraction of samples >= x")
    ax.set_ylim(0.0, 1.05)
    ax.set_title("Throughput CCDF")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def _draw_obstacles_xy(ax, scenario: Scenario) -> None:
    for box in scenario.obstacles:
        lo, hi = box.min_corner, box.max_corner
        ax.add_patch(
            plt.Rectangle(
                (lo.x, lo.y), hi.x - lo.x, hi.y - lo.y, fill=True, alpha=0.35, color="gray"
            )
        )


def save_region_figure(points: np.ndarray, scenario: Scenario, path: str | Path) -> None:
    """Feasible-point cloud as top (x-y) and side (y-z) projections."""
    fig, (ax_top, ax_side) = plt.subplots(1, 2, figsize=(10.0, 4.5))
    if points.size:
        ax_top.scatter(points[:, 0], points[:, 1], s=4, c=points[:, 2], cmap="viridis")
        ax_side.scatter(points[:, 1], points[:, 2], s=4, c=points[:, 0], cmap="viridis")
    _draw_obstacles_xy(ax_top, scenario)
    for box in scenario.obstacles:
        lo, hi = box.min_corner, box.max_corner
        ax_side.add_patch(
            plt.Rectangle((lo.y, lo.z), hi.y - lo.y, hi.z - lo.z, fill=True, alpha=0.35, color="gray")
        )
    for ue in scenario.ues:
        ax_top.plot(ue.position.x, ue.position.y, "r^", markersize=7)
        ax_top.annotate(ue.id, (ue.position.x, ue.position.y), fontsize=7)
        ax_side.plot(ue.position.y, ue.position.z, "r^", markersize=7)
    b = scenario.bounds
    ax_top.set_xlim(b.min.x - 2, b.max.x + 2)
    ax_top.set_ylim(b.min.y - 2, b.max.y + 2)
    ax_side.set_xlim(b.min.y - 2, b.max.y + 2)
    ax_side.set_ylim(0, b.max.z + 2)
    ax_top.set_xlabel("x (m)")
    ax_top.set_ylabel("y (m)")
    ax_top.set_title("feasible region, top view")
    ax_side.set_xlabel("y (m)")
    ax_side.set_ylabel("z (m)")
    ax_side.set_title("feasible region, side view")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
