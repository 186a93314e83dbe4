"""Link-budget math: free-space SNR, range inversion, and MCS selection."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

SPEED_OF_LIGHT_M_S = 299_792_458.0

DEFAULT_MCS_TABLE_FILE = "mcs_vht160_gi800_1ss.json"


class InfeasibleDemandError(ValueError):
    """Demand exceeds the highest PHY rate the MCS table offers."""

    def __init__(self, demand_bps: float, max_rate_bps: float, ue_id: str | None = None):
        who = f" for {ue_id}" if ue_id else ""
        super().__init__(
            f"demand{who} of {demand_bps / 1e6:.3f} Mbit/s exceeds the table maximum "
            f"of {max_rate_bps / 1e6:.3f} Mbit/s"
        )
        self.demand_bps = demand_bps
        self.max_rate_bps = max_rate_bps
        self.ue_id = ue_id


@dataclass(frozen=True)
class RadioConfig:
    frequency_hz: float
    noise_floor_dbm: float
    max_tx_power_dbm: float
    tx_power_step_db: float = 1.0

    def __post_init__(self):
        if not 1e8 <= self.frequency_hz <= 1e11:
            raise ValueError(f"carrier frequency {self.frequency_hz} Hz outside [1e8, 1e11]")
        if self.tx_power_step_db <= 0:
            raise ValueError("tx_power_step_db must be positive")
        if self.max_tx_power_dbm < 0:
            raise ValueError("max_tx_power_dbm must be non-negative")


@dataclass(frozen=True)
class McsEntry:
    index: int
    phy_rate_bps: float
    min_snr_db: float

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("MCS index must be >= 0")
        if self.phy_rate_bps <= 0:
            raise ValueError("PHY rate must be positive")


@dataclass(frozen=True)
class McsTable:
    """Ordered MCS ladder for one PHY configuration."""

    description: str
    entries: tuple[McsEntry, ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("MCS table must have at least one entry")
        for prev, cur in zip(self.entries, self.entries[1:]):
            if cur.index <= prev.index:
                raise ValueError("MCS indexes must be strictly increasing")
            if cur.phy_rate_bps <= prev.phy_rate_bps or cur.min_snr_db <= prev.min_snr_db:
                raise ValueError(
                    f"PHY rate and min SNR must increase with index (MCS {prev.index} -> {cur.index})"
                )

    @property
    def max_rate_bps(self) -> float:
        return self.entries[-1].phy_rate_bps

    @property
    def min_snr_floor_db(self) -> float:
        return self.entries[0].min_snr_db


def k_constant(cfg: RadioConfig) -> float:
    """Scenario constant folding carrier frequency and noise floor into one dB term.

    snr = tx_power + k - 20*log10(distance); uses the exact vacuum light speed.
    """
    return (
        -20.0 * math.log10(cfg.frequency_hz)
        - 20.0 * math.log10(4.0 * math.pi / SPEED_OF_LIGHT_M_S)
        - cfg.noise_floor_dbm
    )


def snr_db(tx_power_dbm: float, distance_m: float, cfg: RadioConfig) -> float:
    """Free-space SNR in dB at the given link distance."""
    if distance_m <= 0:
        raise ValueError(f"link distance must be positive, got {distance_m}")
    return tx_power_dbm + k_constant(cfg) - 20.0 * math.log10(distance_m)


def nlos_snr_db(tx_power_dbm: float, distance_m: float, cfg: RadioConfig, penalty_db: float) -> float:
    """Free-space SNR minus a fixed obstruction penalty."""
    if penalty_db < 0:
        raise ValueError("NLoS penalty must be >= 0 dB")
    return snr_db(tx_power_dbm, distance_m, cfg) - penalty_db


def max_distance_m(tx_power_dbm: float, min_snr_db: float, cfg: RadioConfig) -> float:
    """Largest distance at which the link still meets `min_snr_db`."""
    return 10.0 ** ((k_constant(cfg) + tx_power_dbm - min_snr_db) / 20.0)


def required_mcs(demand_bps: float, table: McsTable, ue_id: str | None = None) -> McsEntry:
    """Lowest-rate entry whose PHY rate carries the demand."""
    if demand_bps <= 0:
        raise ValueError("demand must be positive")
    for entry in table.entries:
        if entry.phy_rate_bps >= demand_bps:
            return entry
    raise InfeasibleDemandError(demand_bps, table.max_rate_bps, ue_id)


def mcs_from_snr(snr_db_value: float, table: McsTable) -> McsEntry | None:
    """Highest entry usable at the measured SNR; None when the link is down."""
    chosen = None
    for entry in table.entries:
        if entry.min_snr_db <= snr_db_value:
            chosen = entry
        else:
            break
    return chosen


def parse_mcs_table(obj: dict) -> McsTable:
    """Build a table from the JSON object form (rates in Mbit/s)."""
    try:
        entries = tuple(
            McsEntry(
                index=int(row["index"]),
                phy_rate_bps=float(row["phy_rate_mbps"]) * 1e6,
                min_snr_db=float(row["min_snr_db"]),
            )
            for row in obj["entries"]
        )
        return McsTable(description=str(obj.get("description", "")), entries=entries)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed MCS table: {exc}") from exc


def mcs_table_to_dict(table: McsTable) -> dict:
    return {
        "description": table.description,
        "entries": [
            {
                "index": e.index,
                "phy_rate_mbps": e.phy_rate_bps / 1e6,
                "min_snr_db": e.min_snr_db,
            }
            for e in table.entries
        ],
    }


def load_mcs_table(text: str) -> McsTable:
    return parse_mcs_table(json.loads(text))


@lru_cache(maxsize=1)
def default_mcs_table() -> McsTable:
    """Bundled 802.11ac ladder: 160 MHz, 800 ns guard interval, one spatial stream."""
    text = resources.files("uavplace.data").joinpath(DEFAULT_MCS_TABLE_FILE).read_text()
    return load_mcs_table(text)
