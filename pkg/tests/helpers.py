"""Shared test utilities: random scenario generation and sampling oracles."""

import numpy as np

from uavplace import (
    BoxObstacle,
    Point3,
    RadioConfig,
    Scenario,
    SearchBounds,
    UserEquipment,
    default_mcs_table,
)
from uavplace.scenario import EvalParams


def random_scenario(rng, max_ues=4, max_obstacles=2, max_tx_power_dbm=20.0):
    """A valid random instance: UEs outside obstacles, demands within the table."""
    obstacles = []
    for _ in range(int(rng.integers(0, max_obstacles + 1))):
        cx, cy = rng.uniform(-10.0, 10.0, size=2)
        length, width = rng.uniform(4.0, 12.0, size=2)
        height = rng.uniform(5.0, 25.0)
        obstacles.append(BoxObstacle.from_footprint(cx, cy, length, width, height))
    ues = []
    for i in range(int(rng.integers(1, max_ues + 1))):
        while True:
            x, y = rng.uniform(-18.0, 18.0, size=2)
            p = Point3(float(x), float(y), float(rng.uniform(0.5, 2.0)))
            if not any(box.contains(p) for box in obstacles):
                break
        ues.append(
            UserEquipment(id=f"ue-{i}", position=p, demand_bps=float(rng.uniform(30e6, 700e6)))
        )
    return Scenario(
        ues=tuple(ues),
        obstacles=tuple(obstacles),
        bounds=SearchBounds(Point3(-20.0, -20.0, 0.0), Point3(20.0, 20.0, 40.0)),
        radio=RadioConfig(
            frequency_hz=5.25e9, noise_floor_dbm=-85.0, max_tx_power_dbm=max_tx_power_dbm
        ),
        mcs_table=default_mcs_table(),
        eval_params=EvalParams(),
    )


def segment_min_signed_distance(a, b, box, samples=10_000):
    """Smallest signed distance from open-segment samples to the box (negative inside).

    Membership oracle independent of the slab test: the segment crosses the
    interior iff some sample has negative signed distance.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    t = (np.arange(samples) + 0.5) / samples
    pts = a[None, :] + t[:, None] * (b - a)[None, :]
    lo, hi = box.lo_array(), box.hi_array()
    clamped = np.clip(pts, lo, hi)
    outside = np.linalg.norm(pts - clamped, axis=1)
    penetration = np.min(np.minimum(pts - lo, hi - pts), axis=1)
    signed = np.where(outside > 0, outside, -penetration)
    return float(signed.min())


def oracle_blocked(a, b, box, samples=10_000):
    return segment_min_signed_distance(a, b, box, samples=samples) < 0.0


def random_box(rng):
    cx, cy = rng.uniform(-8.0, 8.0, size=2)
    length, width = rng.uniform(2.0, 15.0, size=2)
    height = rng.uniform(3.0, 25.0)
    return BoxObstacle.from_footprint(float(cx), float(cy), float(length), float(width), float(height))


def random_point_outside(rng, box, span=30.0, z_max=40.0):
    while True:
        p = Point3(
            float(rng.uniform(-span, span)),
            float(rng.uniform(-span, span)),
            float(rng.uniform(0.0, z_max)),
        )
        if not box.contains(p):
            return p
