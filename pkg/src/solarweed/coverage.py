"""Blanket-coverage analytics for a footprint translated at constant speed.

The footprint is a rectangle; ``along_track_m`` is its extent in the
direction of travel and ``cross_track_m`` the swath width. (The hour angle
lives only in solar_geometry.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

HECTARE_M2 = 10_000.0
DEFAULT_HOURS_PER_DAY = 3.5
DEFAULT_AREA_RANGE_M2 = (0.1 * HECTARE_M2, 0.5 * HECTARE_M2)


@dataclass(frozen=True)
class Footprint:
    along_track_m: float
    cross_track_m: float

    def __post_init__(self):
        if not (self.along_track_m > 0 and self.cross_track_m > 0):
            raise ValidationError("footprint along_track_m and cross_track_m must be > 0")

    @property
    def area_m2(self) -> float:
        return self.along_track_m * self.cross_track_m


@dataclass(frozen=True)
class CoverageQuery:
    total_area_m2: float
    speed_mps: float
    hours_per_day: float = DEFAULT_HOURS_PER_DAY

    def __post_init__(self):
        for name in ("total_area_m2", "speed_mps", "hours_per_day"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be > 0, got {getattr(self, name)}")


def swept_area(footprint: Footprint, speed_mps: float, elapsed_s: float) -> float:
    if elapsed_s < 0:
        raise ValidationError("elapsed_s must be >= 0")
    return footprint.cross_track_m * (speed_mps * elapsed_s)


def swept_area_from_footprint(footprint: Footprint, speed_mps: float, elapsed_s: float) -> float:
    """Same quantity written as A * (v t) / w."""
    if elapsed_s < 0:
        raise ValidationError("elapsed_s must be >= 0")
    return footprint.area_m2 * (speed_mps * elapsed_s) / footprint.along_track_m


def total_time_s(query: CoverageQuery, footprint: Footprint) -> float:
    return query.total_area_m2 / (footprint.cross_track_m * query.speed_mps)


def total_time(query: CoverageQuery, footprint: Footprint) -> float:
    """Hours of operation needed to sweep the whole area once."""
    return total_time_s(query, footprint) / 3600.0


def days_required(query: CoverageQuery, footprint: Footprint) -> tuple[float, int]:
    """Fractional operating days and the whole-day ceiling."""
    d = query.total_area_m2 / (footprint.cross_track_m * query.speed_mps * query.hours_per_day * 3600.0)
    # guard against 2.0000000000000004 -> 3
    whole = math.ceil(d - 1e-9)
    return d, max(whole, 0)


def coverage_verdict(query: CoverageQuery, footprint: Footprint, budget_days: float) -> dict:
    d, whole = days_required(query, footprint)
    return {
        "t_total_hours": total_time(query, footprint),
        "days_fractional": d,
        "days_whole": whole,
        "feasible_within": whole <= budget_days,
    }


def coverage_surface(
    footprint: Footprint,
    area_range: tuple[float, float] = DEFAULT_AREA_RANGE_M2,
    speed_range: tuple[float, float] = (0.01, 0.05),
    grid: int | tuple[int, int] = 9,
):
    """Total time (hours) over an (area, speed) grid, area-outer row-major."""
    na, nv = (grid, grid) if isinstance(grid, int) else grid
    if na < 2 or nv < 2:
        raise ValidationError("grid needs at least 2 points per axis")
    for lo, hi in (area_range, speed_range):
        if not 0 < lo <= hi:
            raise ValidationError(f"ranges must be positive and ordered, got ({lo}, {hi})")
    rows = []
    for a in np.linspace(*area_range, na):
        for v in np.linspace(*speed_range, nv):
            q = CoverageQuery(float(a), float(v))
            rows.append((float(a), float(v), total_time(q, footprint)))
    return rows


def simulate_sweep(
    query: CoverageQuery,
    footprint: Footprint,
    dt_s: float = 1.0,
    lane_length_m: float | None = None,
    turn_time_s: float = 0.0,
    chunk: int = 65536,
) -> float:
    """Step simulator: advance at v, accumulate swept strips until the area is covered.

    With ``lane_length_m`` set, the vehicle stops for ``turn_time_s`` at the
    end of every lane. Returns elapsed hours. The strip covered in the last
    step is counted whole, so the result overshoots by under one step.
    """
    if dt_s <= 0:
        raise ValidationError("dt_s must be > 0")
    strip = footprint.cross_track_m * query.speed_mps * dt_s
    step_len = query.speed_mps * dt_s
    covered = 0.0
    steps = 0
    while True:
        cum = covered + np.cumsum(np.full(chunk, strip))
        hit = int(np.searchsorted(cum, query.total_area_m2 * (1 - 1e-12)))
        if hit < chunk:
            steps += hit + 1
            break
        covered = float(cum[-1])
        steps += chunk
    elapsed = steps * dt_s
    if lane_length_m is not None and turn_time_s > 0:
        distance = steps * step_len
        turns = max(math.ceil(distance / lane_length_m - 1e-9) - 1, 0)
        elapsed += turns * turn_time_s
    return elapsed / 3600.0
