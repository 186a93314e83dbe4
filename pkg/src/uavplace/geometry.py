"""3D geometry: points, axis-aligned box obstacles, and line-of-sight tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Absolute slab tolerance in meters. A segment that comes closer than this to a
# box face is treated as grazing, and grazing does not block line of sight.
GRAZE_TOL = 1e-9


class DegenerateSegmentError(ValueError):
    """A link segment with coincident endpoints has no direction."""


@dataclass(frozen=True)
class Point3:
    """A position in meters, z up."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.z)):
            raise ValueError(f"non-finite coordinate: ({self.x}, {self.y}, {self.z})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def distance_to(self, other: Point3) -> float:
        return math.dist((self.x, self.y, self.z), (other.x, other.y, other.z))

    def horizontal_distance_to(self, other: Point3) -> float:
        return math.hypot(other.x - self.x, other.y - self.y)

    def translate(self, dx: float, dy: float, dz: float) -> Point3:
        return Point3(self.x + dx, self.y + dy, self.z + dz)


@dataclass(frozen=True)
class BoxObstacle:
    """Axis-aligned box resting on or above the ground."""

    min_corner: Point3
    max_corner: Point3

    def __post_init__(self):
        lo, hi = self.min_corner, self.max_corner
        if not (lo.x < hi.x and lo.y < hi.y and lo.z < hi.z):
            raise ValueError("box min_corner must lie strictly below max_corner on every axis")
        if lo.z < 0:
            raise ValueError("box must not extend below ground (min_corner.z >= 0)")

    @classmethod
    def from_footprint(
        cls, center_x: float, center_y: float, length: float, width: float, height: float
    ) -> BoxObstacle:
        """Ground-standing box from a footprint center and (length, width, height)."""
        return cls(
            Point3(center_x - length / 2.0, center_y - width / 2.0, 0.0),
            Point3(center_x + length / 2.0, center_y + width / 2.0, float(height)),
        )

    @property
    def top_z(self) -> float:
        return self.max_corner.z

    def lo_array(self) -> np.ndarray:
        return self.min_corner.as_array()

    def hi_array(self) -> np.ndarray:
        return self.max_corner.as_array()

    def contains(self, p: Point3) -> bool:
        """Closed-box membership."""
        lo, hi = self.min_corner, self.max_corner
        return lo.x <= p.x <= hi.x and lo.y <= p.y <= hi.y and lo.z <= p.z <= hi.z

    def footprint_contains(self, x: float, y: float) -> bool:
        lo, hi = self.min_corner, self.max_corner
        return lo.x <= x <= hi.x and lo.y <= y <= hi.y

    def translate(self, dx: float, dy: float, dz: float) -> BoxObstacle:
        return BoxObstacle(self.min_corner.translate(dx, dy, dz), self.max_corner.translate(dx, dy, dz))


def segment_intersects_box(a: Point3, b: Point3, box: BoxObstacle, tol: float = GRAZE_TOL) -> bool:
    """True iff the open segment a-b passes through the box interior.

    Slab test against the box shrunk by `tol` on every face, so contact with a
    face or edge (within `tol`) counts as clear.
    """
    if a == b:
        raise DegenerateSegmentError(f"segment endpoints coincide at ({a.x}, {a.y}, {a.z})")
    origin = a.as_array()
    mask = _segment_blocked_mask(origin, b.as_array().reshape(1, 3), box, tol)
    return bool(mask[0])


def has_los(ue: Point3, uav: Point3, obstacles: list[BoxObstacle] | tuple[BoxObstacle, ...]) -> bool:
    """True iff no obstacle blocks the straight segment between ue and uav."""
    return all(not segment_intersects_box(ue, uav, box) for box in obstacles)


def blocking_obstacle(ue: Point3, uav: Point3, obstacles) -> int | None:
    """Index of the first obstacle blocking the link, or None when clear."""
    for i, box in enumerate(obstacles):
        if segment_intersects_box(ue, uav, box):
            return i
    return None


def uav_elevation_angle(ue: Point3, uav: Point3) -> float:
    """Elevation angle in radians of the ue-to-uav line above horizontal."""
    dh = ue.horizontal_distance_to(uav)
    return math.atan2(uav.z - ue.z, dh)


def corner_elevation_angle(ue: Point3, box: BoxObstacle, toward: Point3) -> float:
    """Elevation angle from `ue` to the roof edge crossed on the bearing toward `toward`.

    The smallest elevation at which a ray leaving `ue` toward `toward` clears
    the roof; 0 when the box does not occlude that bearing or the ue is at or
    above roof height.
    """
    if box.footprint_contains(ue.x, ue.y):
        raise ValueError("ue lies within the obstacle footprint; no occlusion edge defined")
    top = box.top_z
    if ue.z >= top:
        return 0.0
    d_h = _footprint_entry_distance(ue, box, toward.x - ue.x, toward.y - ue.y)
    if d_h is None:
        return 0.0
    return math.atan2(top - ue.z, d_h)


def _footprint_entry_distance(ue: Point3, box: BoxObstacle, dx: float, dy: float) -> float | None:
    """Horizontal distance from ue to where its bearing ray enters the footprint."""
    lo, hi = box.min_corner, box.max_corner
    norm = math.hypot(dx, dy)
    if norm < 1e-12:
        # No bearing (target overhead): fall back to the nearest footprint point.
        nx = min(max(ue.x, lo.x), hi.x)
        ny = min(max(ue.y, lo.y), hi.y)
        return math.hypot(nx - ue.x, ny - ue.y)
    t_entry, t_exit = 0.0, math.inf
    for u, d, lo_v, hi_v in ((ue.x, dx, lo.x, hi.x), (ue.y, dy, lo.y, hi.y)):
        if abs(d) < 1e-12:
            if u < lo_v or u > hi_v:
                return None
            continue
        t1, t2 = (lo_v - u) / d, (hi_v - u) / d
        if t1 > t2:
            t1, t2 = t2, t1
        t_entry, t_exit = max(t_entry, t1), min(t_exit, t2)
    if t_entry > t_exit or t_exit < 0:
        return None
    return t_entry * norm


def _segment_blocked_mask(
    origin: np.ndarray, ends: np.ndarray, box: BoxObstacle, tol: float = GRAZE_TOL
) -> np.ndarray:
    """Vectorized slab test: for each end point, does origin-end cross the box interior?

    Rows where end == origin yield False (an empty segment crosses nothing).
    """
    lo = box.lo_array() + tol
    hi = box.hi_array() - tol
    d = ends - origin  # (n, 3)
    n = ends.shape[0]
    t_entry = np.zeros(n)
    t_exit = np.ones(n)
    alive = np.ones(n, dtype=bool)
    for axis in range(3):
        da = d[:, axis]
        oa = origin[axis]
        parallel = np.abs(da) < 1e-300
        # Parallel rows are blocked on this axis only if the fixed coordinate
        # sits inside the shrunk slab; otherwise they can never intersect.
        alive &= ~(parallel & ((oa < lo[axis]) | (oa > hi[axis])))
        with np.errstate(divide="ignore", invalid="ignore"):
            t1 = (lo[axis] - oa) / da
            t2 = (hi[axis] - oa) / da
        swap = t1 > t2
        t1s = np.where(swap, t2, t1)
        t2s = np.where(swap, t1, t2)
        np.maximum(t_entry, np.where(parallel, t_entry, t1s), out=t_entry)
        np.minimum(t_exit, np.where(parallel, t_exit, t2s), out=t_exit)
    zero_len = np.all(np.abs(d) < 1e-300, axis=1)
    return alive & ~zero_len & (t_entry <= t_exit) & (t_entry < 1.0) & (t_exit > 0.0)


def los_mask(origin: np.ndarray, ends: np.ndarray, obstacles) -> np.ndarray:
    """Boolean mask over `ends`: True where the segment from origin is unobstructed."""
    mask = np.ones(ends.shape[0], dtype=bool)
    for box in obstacles:
        if not mask.any():
            break
        mask &= ~_segment_blocked_mask(origin, ends, box)
    return mask
