"""Command-line front end: solve, check-los, evaluate, region."""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import evaluation, plots, solver
from .geometry import Point3, blocking_obstacle
from .scenario import Scenario, ScenarioError, load_scenario_file

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INPUT_ERROR = 2

_STATUS = {EXIT_OK: "ok", EXIT_INFEASIBLE: "infeasible", EXIT_INPUT_ERROR: "input-error"}


@dataclass
class CommandOutcome:
    exit_code: int
    artifacts: list[Path]


def _fail(code: int, message: str) -> CommandOutcome:
    print(f"error: {message}", file=sys.stderr)
    return CommandOutcome(code, [])


def _load_scenario(path: str) -> Scenario:
    return load_scenario_file(path)


def _parse_xyz(text: str) -> Point3:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected x,y,z got {text!r}")
    return Point3(float(parts[0]), float(parts[1]), float(parts[2]))


def _load_positions(path: str) -> list[tuple[str, Point3]]:
    doc = json.loads(Path(path).read_text())
    raw = doc["positions"] if isinstance(doc, dict) else doc
    positions = []
    for i, entry in enumerate(raw):
        name = str(entry.get("id", f"position-{i + 1}"))
        x, y, z = (float(v) for v in entry["position"])
        positions.append((name, Point3(x, y, z)))
    if not positions:
        raise ValueError("positions file lists no positions")
    return positions


def _slug(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "-", label)


def cmd_solve(args) -> CommandOutcome:
    try:
        scenario = _load_scenario(args.scenario)
    except (ScenarioError, OSError) as exc:
        return _fail(EXIT_INPUT_ERROR, str(exc))
    try:
        solution = solver.solve_position(scenario, coarse_resolution_m=args.resolution)
    except solver.InfeasiblePositionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CommandOutcome(EXIT_INFEASIBLE, [])
    except (solver.GridTooLargeError, ValueError) as exc:
        return _fail(EXIT_INPUT_ERROR, str(exc))
    out = Path(args.out)
    out.write_text(json.dumps(solver.solution_to_dict(solution), indent=2) + "\n")
    p = solution.position
    print(f"tx_power_dbm={solution.tx_power_dbm:g}")
    print(f"position=({p.x:.3f}, {p.y:.3f}, {p.z:.3f})")
    for d in solution.per_ue:
        print(
            f"ue={d.ue_id} distance_m={d.distance_m:.3f} snr_db={d.snr_db:.3f} "
            f"margin_db={d.snr_margin_db:.3f} los={'yes' if d.los else 'no'}"
        )
    print(f"wrote {out}")
    return CommandOutcome(EXIT_OK, [out])


def cmd_check_los(args) -> CommandOutcome:
    try:
        scenario = _load_scenario(args.scenario)
        position = _parse_xyz(args.position)
    except (ScenarioError, OSError, ValueError) as exc:
        return _fail(EXIT_INPUT_ERROR, str(exc))
    for i, box in enumerate(scenario.obstacles):
        if box.contains(position):
            return _fail(EXIT_INPUT_ERROR, f"position lies inside obstacle {i}")
    for ue in scenario.ues:
        if ue.position == position:
            return _fail(EXIT_INPUT_ERROR, f"position coincides with {ue.id}")
    for ue in scenario.ues:
        blocker = blocking_obstacle(ue.position, position, scenario.obstacles)
        los = "yes" if blocker is None else "no"
        blocked_by = "-" if blocker is None else str(blocker)
        print(f"ue={ue.id} los={los} blocked_by={blocked_by}")
    return CommandOutcome(EXIT_OK, [])


def cmd_evaluate(args) -> CommandOutcome:
    try:
        scenario = _load_scenario(args.scenario)
        positions = _load_positions(args.positions)
    except (ScenarioError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        return _fail(EXIT_INPUT_ERROR, str(exc))
    if args.trace is not None and args.trace < 1:
        return _fail(EXIT_INPUT_ERROR, "--trace must be at least 1 second")
    try:
        reports = evaluation.compare_positions(positions, scenario)
    except ValueError as exc:
        return _fail(EXIT_INPUT_ERROR, str(exc))
    out = Path(args.out)
    artifacts = [out]
    evaluation.write_comparison_csv(reports, scenario, out)
    traces = []
    if args.trace is not None:
        for name, pos in positions:
            traces.append(
                evaluation.throughput_trace(
                    pos,
                    scenario,
                    duration_s=args.trace,
                    jitter=args.jitter,
                    seed=args.seed,
                    label=name,
                )
            )
        for trace in traces:
            stem = out.with_suffix("")
            trace_path = Path(f"{stem}_trace_{_slug(trace.label)}.csv")
            ccdf_path = Path(f"{stem}_ccdf_{_slug(trace.label)}.csv")
            evaluation.write_trace_csv(trace, trace_path)
            evaluation.write_ccdf_csv(trace, ccdf_path)
            artifacts += [trace_path, ccdf_path]
    if not args.no_plot:
        stem = out.with_suffix("")
        fig_path = Path(f"{stem}_aggregate.png")
        plots.save_comparison_figure(reports, scenario, fig_path)
        artifacts.append(fig_path)
        if traces:
            trace_fig = Path(f"{stem}_trace.png")
            ccdf_fig = Path(f"{stem}_ccdf.png")
            plots.save_trace_figure(traces, trace_fig)
            plots.save_ccdf_figure(traces, ccdf_fig)
            artifacts += [trace_fig, ccdf_fig]
    for rep in reports:
        print(
            f"position={rep.label} aggregate_mbps={rep.aggregate_bps / 1e6:.3f} "
            f"airtime={rep.airtime_used:.3f}"
        )
    for path in artifacts:
        print(f"wrote {path}")
    return CommandOutcome(EXIT_OK, artifacts)


def cmd_region(args) -> CommandOutcome:
    try:
        scenario = _load_scenario(args.scenario)
    except (ScenarioError, OSError) as exc:
        return _fail(EXIT_INPUT_ERROR, str(exc))
    if not 0 <= args.power <= scenario.radio.max_tx_power_dbm:
        return _fail(
            EXIT_INPUT_ERROR,
            f"power {args.power} dBm outside [0, {scenario.radio.max_tx_power_dbm}]",
        )
    try:
        ctx = solver.build_context(scenario, args.power)
        points = solver.grid_points(scenario, args.resolution)
        mask = solver.feasible_mask(points, ctx, scenario)
    except (solver.GridTooLargeError, ValueError) as exc:
        return _fail(EXIT_INPUT_ERROR, str(exc))
    feasible = points[mask]
    out = Path(args.out)
    with open(out, "w", newline="") as fh:
        fh.write("x_m,y_m,z_m\n")
        for row in feasible:
            fh.write(f"{row[0]:.3f},{row[1]:.3f},{row[2]:.3f}\n")
    artifacts = [out]
    if not args.no_plot:
        fig_path = out.with_suffix(".png")
        plots.save_region_figure(np.asarray(feasible), scenario, fig_path)
        artifacts.append(fig_path)
    print(f"feasible_points={feasible.shape[0]}")
    for path in artifacts:
        print(f"wrote {path}")
    return CommandOutcome(EXIT_OK, artifacts)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uavplace",
        description="UAV access-point placement with obstacle-aware line-of-sight "
        "and traffic constraints.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="find the minimal transmit power and a serving position")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--out", required=True, help="solution JSON output path")
    p.add_argument("--resolution", type=float, default=solver.DEFAULT_COARSE_RESOLUTION_M,
                   help="coarse search grid spacing in meters (default 1.0)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check-los", help="report per-UE line-of-sight at a position")
    p.add_argument("--scenario", required=True)
    p.add_argument("--position", required=True, help="UAV position as x,y,z in meters")
    p.set_defaults(func=cmd_check_los)

    p = sub.add_parser("evaluate", help="compare candidate positions by achievable throughput")
    p.add_argument("--scenario", required=True)
    p.add_argument("--positions", required=True, help="candidate positions JSON file")
    p.add_argument("--out", required=True, help="comparison CSV output path")
    p.add_argument("--trace", type=int, default=None, metavar="SECONDS",
                   help="also emit a per-second trace and CCDF of this length")
    p.add_argument("--jitter", type=float, default=0.0,
                   help="demand noise amplitude in [0, 1) (default 0)")
    p.add_argument("--seed", type=int, default=0, help="trace random seed (default 0)")
    p.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("region", help="emit the feasible position cloud at a fixed power")
    p.add_argument("--scenario", required=True)
    p.add_argument("--power", type=float, required=True, help="transmit power in dBm")
    p.add_argument("--resolution", type=float, required=True, help="grid spacing in meters")
    p.add_argument("--out", required=True, help="point-cloud CSV output path")
    p.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p.set_defaults(func=cmd_region)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        outcome = args.func(args)
    except Exception as exc:  # noqa: BLE001 - surface anything unexpected as input error
        print(f"error: {exc}", file=sys.stderr)
        outcome = CommandOutcome(EXIT_INPUT_ERROR, [])
    print(f"status={_STATUS[outcome.exit_code]}")
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
