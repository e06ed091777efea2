"""Solar zenith angle and high-sun window computations.

All public functions take and return degrees (angles) and hours (times).
Solar time is idealized: no equation of time, no longitude correction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentBelowNegativeOne, DayOutOfRange, ValidationError

TROPIC_DEG = 23.45
MAX_DECLINATION_DEG = 23.45
DEGREES_PER_HOUR = 15.0


def _check_latitude(phi: float) -> None:
    if not -90.0 <= phi <= 90.0:
        raise ValidationError(f"latitude must satisfy |phi| <= 90, got {phi}")


def _check_declination(delta: float) -> None:
    if not -MAX_DECLINATION_DEG <= delta <= MAX_DECLINATION_DEG:
        raise ValidationError(f"declination must satisfy |delta| <= 23.45, got {delta}")


def is_tropical(phi: float) -> bool:
    _check_latitude(phi)
    return abs(phi) <= TROPIC_DEG


def hour_angle(solar_time: float) -> float:
    """Hour angle in degrees for a solar time in hours (negative before noon)."""
    return DEGREES_PER_HOUR * (solar_time - 12.0)


def solar_time_of(h: float) -> float:
    return 12.0 + h / DEGREES_PER_HOUR


@dataclass(frozen=True)
class SolarContext:
    """Latitude, declination and hour angle, all in degrees."""

    phi: float
    delta: float
    h: float = 0.0

    def __post_init__(self):
        _check_latitude(self.phi)
        _check_declination(self.delta)

    @classmethod
    def at_solar_time(cls, phi: float, delta: float, solar_time: float) -> "SolarContext":
        return cls(phi, delta, hour_angle(solar_time))

    @property
    def solar_time(self) -> float:
        return solar_time_of(self.h)

    @property
    def zenith(self) -> float:
        return zenith_angle(self.phi, self.delta, self.h)


@dataclass(frozen=True)
class SolarWindow:
    """Daily interval (solar hours) during which the zenith angle stays <= theta_max."""

    delta_t: float
    start_solar_time: float
    end_solar_time: float
    theta_max: float

    @classmethod
    def centred(cls, delta_t: float, theta_max: float) -> "SolarWindow":
        half = delta_t / 2.0
        return cls(delta_t, 12.0 - half, 12.0 + half, theta_max)

    @property
    def is_empty(self) -> bool:
        return self.delta_t <= 0.0

    def contains(self, solar_time: float, tol: float = 1e-9) -> bool:
        return self.start_solar_time - tol <= solar_time <= self.end_solar_time + tol


def zenith_angle(phi: float, delta: float, h: float) -> float:
    """Solar zenith angle in degrees.

    The cosine is clamped to [-1, 1] before the arccos to absorb rounding.
    """
    p, d, hh = math.radians(phi), math.radians(delta), math.radians(h)
    c = math.sin(p) * math.sin(d) + math.cos(p) * math.cos(d) * math.cos(hh)
    return math.degrees(math.acos(min(1.0, max(-1.0, c))))


def noon_zenith(phi: float, delta: float) -> float:
    return zenith_angle(phi, delta, 0.0)


def window_cos_argument(phi: float, delta: float, theta_max: float) -> float:
    """Cosine of the hour angle at which the zenith angle equals theta_max."""
    p, d = math.radians(phi), math.radians(delta)
    return (math.cos(math.radians(theta_max)) - math.sin(p) * math.sin(d)) / (
        math.cos(p) * math.cos(d)
    )


def _half_window_hours(phi: float, delta: float, theta: float) -> float:
    arg = window_cos_argument(phi, delta, theta)
    if arg > 1.0:
        return 0.0
    if arg < -1.0:
        raise ArgumentBelowNegativeOne(
            f"window argument {arg:.6f} < -1 at phi={phi}, delta={delta}, theta_max={theta}: "
            "sun never leaves the threshold, outside the model's validity"
        )
    return math.degrees(math.acos(arg)) / DEGREES_PER_HOUR


def solar_window(phi: float, delta: float, theta_max: float) -> SolarWindow:
    """Window of solar time during which the sun is within theta_max of zenith.

    Returns an empty window (delta_t = 0) when the noon zenith already exceeds
    theta_max. Raises ArgumentBelowNegativeOne in the unreachable regime where
    the sun would never exceed theta_max.
    """
    if not 0.0 < theta_max < 90.0:
        raise ValidationError(f"theta_max must satisfy 0 < theta_max < 90, got {theta_max}")
    if not -90.0 < phi < 90.0:
        raise ValidationError(f"latitude must satisfy |phi| < 90, got {phi}")
    _check_declination(delta)
    return SolarWindow.centred(2.0 * _half_window_hours(phi, delta, theta_max), theta_max)


def daylight(phi: float, delta: float) -> SolarWindow:
    """Geometric daylight (zenith <= 90 deg, no refraction) as a window.

    Polar day is returned as the full 24 h rather than an error.
    """
    if not -90.0 < phi < 90.0:
        raise ValidationError(f"latitude must satisfy |phi| < 90, got {phi}")
    _check_declination(delta)
    arg = window_cos_argument(phi, delta, 90.0)
    if arg < -1.0:
        return SolarWindow.centred(24.0, 90.0)
    return SolarWindow.centred(2.0 * _half_window_hours(phi, delta, 90.0), 90.0)


def grid_axis(lo: float, hi: float, step: float) -> np.ndarray:
    """Evenly spaced axis from lo to hi inclusive, step rounded to fit exactly."""
    if step <= 0:
        raise ValidationError(f"grid step must be > 0, got {step}")
    n = int(round((hi - lo) / step)) + 1
    return np.linspace(lo, hi, max(n, 2))


def window_surface(theta_max: float, grid_step: float = 0.5, n: int | None = None):
    """Window duration over the tropical (phi, delta) square.

    Returns a list of (phi, delta, delta_t) tuples in row-major, phi-outer
    order. Pass ``n`` to use an n-point axis instead of ``grid_step``.
    """
    axis = (
        np.linspace(-TROPIC_DEG, TROPIC_DEG, n)
        if n is not None
        else grid_axis(-TROPIC_DEG, TROPIC_DEG, grid_step)
    )
    rows = []
    for phi in axis:
        for delta in axis:
            rows.append((float(phi), float(delta), solar_window(phi, delta, theta_max).delta_t))
    return rows


def declination_of_day(day_of_year: int) -> float:
    """Cooper's approximation to the solar declination (about +/-0.5 deg accurate).

    A 365-day year is assumed; swap this function out for a proper ephemeris
    if sub-degree accuracy ever matters.
    """
    if isinstance(day_of_year, bool) or int(day_of_year) != day_of_year:
        raise DayOutOfRange(f"day_of_year must be an integer, got {day_of_year!r}")
    if not 1 <= day_of_year <= 365:
        raise DayOutOfRange(f"day_of_year must satisfy 1 <= n <= 365, got {day_of_year}")
    return MAX_DECLINATION_DEG * math.sin(math.radians(360.0 * (284 + day_of_year) / 365.0))


def wrap_day(day: int) -> int:
    """Map an absolute day count (1, 2, ... possibly > 365) to day of year."""
    return (int(day) - 1) % 365 + 1


def scan_window_oracle(phi: float, delta: float, theta_max: float, step_seconds: float = 60) -> float:
    """Brute-force window length: count sampled instants with zenith <= theta_max.

    Samples solar_time = k * step over [0, 24) h and returns count * step in
    hours. Independent of the closed form; used for verification only.
    """
    if step_seconds < 1:
        raise ValidationError(f"step_seconds must be >= 1, got {step_seconds}")
    n = int(round(86400.0 / step_seconds))
    t_hours = np.arange(n) * (step_seconds / 3600.0)
    h = np.radians(DEGREES_PER_HOUR * (t_hours - 12.0))
    p, d = math.radians(phi), math.radians(delta)
    c = np.clip(math.sin(p) * math.sin(d) + math.cos(p) * math.cos(d) * np.cos(h), -1.0, 1.0)
    theta = np.degrees(np.arccos(c))
    return int(np.count_nonzero(theta <= theta_max)) * step_seconds / 3600.0
