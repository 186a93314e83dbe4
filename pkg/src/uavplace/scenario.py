"""Problem-instance model: users, obstacles, search bounds, radio and evaluator settings."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from .geometry import BoxObstacle, Point3
from .radio import (
    McsTable,
    RadioConfig,
    default_mcs_table,
    mcs_table_to_dict,
    parse_mcs_table,
)

# Stable diagnostic codes; tests and callers match on these strings.
NO_UES = "NO_UES"
DUPLICATE_UE_ID = "DUPLICATE_UE_ID"
DEMAND_NOT_POSITIVE = "DEMAND_NOT_POSITIVE"
UE_BELOW_GROUND = "UE_BELOW_GROUND"
UE_INSIDE_OBSTACLE = "UE_INSIDE_OBSTACLE"
DEMAND_EXCEEDS_MAX_MCS = "DEMAND_EXCEEDS_MAX_MCS"


class ScenarioError(ValueError):
    """Base class for scenario ingestion failures."""


class ScenarioFormatError(ScenarioError):
    """The document is not well-formed against the scenario schema."""


class ScenarioValidationError(ScenarioError):
    """The document parsed but violates scenario invariants."""

    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(str(d) for d in diagnostics))
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class Diagnostic:
    code: str
    entity: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.entity}: {self.message}"


@dataclass(frozen=True)
class UserEquipment:
    id: str
    position: Point3
    demand_bps: float


@dataclass(frozen=True)
class SearchBounds:
    min: Point3
    max: Point3

    def __post_init__(self):
        lo, hi = self.min, self.max
        if not (lo.x < hi.x and lo.y < hi.y and lo.z < hi.z):
            raise ValueError("bounds min must lie strictly below max on every axis")
        if lo.z < 0:
            raise ValueError("bounds must not extend below ground (min.z >= 0)")

    def contains(self, p: Point3) -> bool:
        return (
            self.min.x <= p.x <= self.max.x
            and self.min.y <= p.y <= self.max.y
            and self.min.z <= p.z <= self.max.z
        )


@dataclass(frozen=True)
class EvalParams:
    tx_power_dbm: float = 20.0
    nlos_penalty_db: float = 15.0
    mac_efficiency: float = 0.65
    packet_size_bytes: int = 1024

    def __post_init__(self):
        if not 0 < self.mac_efficiency <= 1:
            raise ValueError("mac_efficiency must be in (0, 1]")
        if self.nlos_penalty_db < 0:
            raise ValueError("nlos_penalty_db must be >= 0")
        if self.packet_size_bytes <= 0:
            raise ValueError("packet_size_bytes must be positive")


@dataclass(frozen=True)
class Scenario:
    ues: tuple[UserEquipment, ...]
    obstacles: tuple[BoxObstacle, ...]
    bounds: SearchBounds
    radio: RadioConfig
    mcs_table: McsTable
    eval_params: EvalParams

    def ue_by_id(self, ue_id: str) -> UserEquipment:
        for ue in self.ues:
            if ue.id == ue_id:
                return ue
        raise KeyError(ue_id)


def validate(s: Scenario) -> list[Diagnostic]:
    """All invariant violations in the scenario; empty when it is solvable input."""
    out: list[Diagnostic] = []
    if not s.ues:
        out.append(Diagnostic(NO_UES, "scenario", "at least one UE is required"))
    seen: set[str] = set()
    for ue in s.ues:
        if ue.id in seen:
            out.append(Diagnostic(DUPLICATE_UE_ID, ue.id, "UE id appears more than once"))
        seen.add(ue.id)
        if ue.demand_bps <= 0:
            out.append(Diagnostic(DEMAND_NOT_POSITIVE, ue.id, "traffic demand must be positive"))
        elif ue.demand_bps > s.mcs_table.max_rate_bps:
            out.append(
                Diagnostic(
                    DEMAND_EXCEEDS_MAX_MCS,
                    ue.id,
                    f"demand {ue.demand_bps / 1e6:.3f} Mbit/s exceeds the table maximum "
                    f"{s.mcs_table.max_rate_bps / 1e6:.3f} Mbit/s",
                )
            )
        if ue.position.z < 0:
            out.append(Diagnostic(UE_BELOW_GROUND, ue.id, "UE altitude must be >= 0"))
        for i, box in enumerate(s.obstacles):
            if box.contains(ue.position):
                out.append(
                    Diagnostic(UE_INSIDE_OBSTACLE, ue.id, f"UE sits inside obstacle {i}")
                )
    return out


def with_demands(s: Scenario, demands_bps: dict[str, float]) -> Scenario:
    """Copy of the scenario with some UE demands replaced (values in bit/s)."""
    unknown = set(demands_bps) - {ue.id for ue in s.ues}
    if unknown:
        raise KeyError(f"unknown UE ids: {sorted(unknown)}")
    ues = tuple(
        dataclasses.replace(ue, demand_bps=demands_bps.get(ue.id, ue.demand_bps)) for ue in s.ues
    )
    return dataclasses.replace(s, ues=ues)


def _point(raw, where: str) -> Point3:
    if not isinstance(raw, (list, tuple)) or len(raw) != 3:
        raise ScenarioFormatError(f"{where}: expected [x, y, z], got {raw!r}")
    try:
        return Point3(float(raw[0]), float(raw[1]), float(raw[2]))
    except (TypeError, ValueError) as exc:
        raise ScenarioFormatError(f"{where}: {exc}") from exc


def _obstacle(raw: dict, where: str) -> BoxObstacle:
    try:
        if "center" in raw:
            cx, cy = (float(v) for v in raw["center"])
            length, width, height = (float(v) for v in raw["size"])
            return BoxObstacle.from_footprint(cx, cy, length, width, height)
        # Corner form for boxes that do not rest on the ground.
        return BoxObstacle(
            _point(raw["min_corner"], where), _point(raw["max_corner"], where)
        )
    except ScenarioFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioFormatError(f"{where}: {exc}") from exc


def parse_scenario(doc: dict, base_dir: Path | None = None) -> Scenario:
    """Build a Scenario from a decoded JSON document and raise on any invariant violation."""
    if not isinstance(doc, dict):
        raise ScenarioFormatError("scenario document must be a JSON object")
    try:
        ues = tuple(
            UserEquipment(
                id=str(raw["id"]),
                position=_point(raw["position"], f"ues[{i}].position"),
                demand_bps=float(raw["demand_mbps"]) * 1e6,
            )
            for i, raw in enumerate(doc.get("ues", []))
        )
        obstacles = tuple(
            _obstacle(raw, f"obstacles[{i}]") for i, raw in enumerate(doc.get("obstacles", []))
        )
        bounds_raw = doc["bounds"]
        bounds = SearchBounds(
            _point(bounds_raw["min"], "bounds.min"), _point(bounds_raw["max"], "bounds.max")
        )
        radio_raw = doc["radio"]
        radio = RadioConfig(
            frequency_hz=float(radio_raw["frequency_mhz"]) * 1e6,
            noise_floor_dbm=float(radio_raw["noise_floor_dbm"]),
            max_tx_power_dbm=float(radio_raw["max_tx_power_dbm"]),
            tx_power_step_db=float(radio_raw.get("tx_power_step_db", 1.0)),
        )
        table_raw = doc.get("mcs_table")
        if table_raw is None:
            table = default_mcs_table()
        elif isinstance(table_raw, str):
            path = Path(table_raw)
            if not path.is_absolute():
                path = (base_dir or Path.cwd()) / path
            table = parse_mcs_table(json.loads(path.read_text()))
        else:
            table = parse_mcs_table(table_raw)
        eval_raw = doc.get("eval", {})
        eval_params = EvalParams(
            tx_power_dbm=float(eval_raw.get("tx_power_dbm", 20.0)),
            nlos_penalty_db=float(eval_raw.get("nlos_penalty_db", 15.0)),
            mac_efficiency=float(eval_raw.get("mac_efficiency", 0.65)),
            packet_size_bytes=int(eval_raw.get("packet_size_bytes", 1024)),
        )
    except ScenarioFormatError:
        raise
    except (KeyError, TypeError, ValueError, OSError, json.JSONDecodeError) as exc:
        raise ScenarioFormatError(f"malformed scenario document: {exc}") from exc

    scenario = Scenario(
        ues=ues,
        obstacles=obstacles,
        bounds=bounds,
        radio=radio,
        mcs_table=table,
        eval_params=eval_params,
    )
    diagnostics = validate(scenario)
    if diagnostics:
        raise ScenarioValidationError(diagnostics)
    return scenario


def load_scenario(text: str, base_dir: Path | None = None) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"invalid JSON: {exc}") from exc
    return parse_scenario(doc, base_dir=base_dir)


def load_scenario_file(path: str | Path) -> Scenario:
    path = Path(path)
    return load_scenario(path.read_text(), base_dir=path.parent)


def _box_dict(box: BoxObstacle) -> dict:
    lo, hi = box.min_corner, box.max_corner
    if lo.z == 0.0:
        return {
            "center": [(lo.x + hi.x) / 2.0, (lo.y + hi.y) / 2.0],
            "size": [hi.x - lo.x, hi.y - lo.y, hi.z],
        }
    return {"min_corner": [lo.x, lo.y, lo.z], "max_corner": [hi.x, hi.y, hi.z]}


def scenario_to_dict(s: Scenario) -> dict:
    """Canonical document form; load(dumps(s)) reproduces an equal Scenario."""
    return {
        "ues": [
            {
                "id": ue.id,
                "position": [ue.position.x, ue.position.y, ue.position.z],
                "demand_mbps": ue.demand_bps / 1e6,
            }
            for ue in s.ues
        ],
        "obstacles": [_box_dict(box) for box in s.obstacles],
        "bounds": {
            "min": [s.bounds.min.x, s.bounds.min.y, s.bounds.min.z],
            "max": [s.bounds.max.x, s.bounds.max.y, s.bounds.max.z],
        },
        "radio": {
            "frequency_mhz": s.radio.frequency_hz / 1e6,
            "noise_floor_dbm": s.radio.noise_floor_dbm,
            "max_tx_power_dbm": s.radio.max_tx_power_dbm,
            "tx_power_step_db": s.radio.tx_power_step_db,
        },
        "mcs_table": mcs_table_to_dict(s.mcs_table),
        "eval": {
            "tx_power_dbm": s.eval_params.tx_power_dbm,
            "nlos_penalty_db": s.eval_params.nlos_penalty_db,
            "mac_efficiency": s.eval_params.mac_efficiency,
            "packet_size_bytes": s.eval_params.packet_size_bytes,
        },
    }


def dumps_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2) + "\n"
