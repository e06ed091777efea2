"""Two-phase mission planning: a mapping pass outside the solar window, then
targeted treatment visits inside the per-day windows.

Conventions used throughout:

* times inside the planner are seconds of solar day; plans expose solar hours
  for arrivals and seconds for dwells;
* each treatment day the vehicle leaves ``ugv.start`` when the window opens
  and is not required to return within the window;
* transit between targets is a straight line at ``ugv.transit_speed_mps``;
* nearest-neighbour ties (distance within 1e-9 m) go to the lowest target id
  in plain string order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import optics
from .coverage import Footprint
from .errors import (
    MappingDoesNotFit,
    NoWindow,
    Untreatable,
    ValidationError,
    ZeroFlux,
)
from .solar_geometry import (
    SolarWindow,
    daylight,
    declination_of_day,
    solar_window,
    wrap_day,
    zenith_angle,
)
from .thermal_dose import (
    DEFAULT_DNI_WM2,
    DEFAULT_MAX_DWELL_S,
    IDENT,
    Stage,
    WeedSpecies,
    required_dwell,
)

TIE_TOL_M = 1e-9
TIME_TOL_S = 1e-6
DOSE_RTOL = 1e-9
EXCHANGE_LIMIT = 64  # pool size above which the exchange move and multi-start are skipped
SPARSE_FEASIBLE = "SPARSE_FEASIBLE"
DENSE_INFEASIBLE = "DENSE_INFEASIBLE"


# --------------------------------------------------------------------------
# Inputs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldMap:
    """Rectangular field with crop rows parallel to ``row_axis``."""

    width_m: float
    height_m: float
    row_spacing_m: float
    row_axis: str = "x"
    origin_x_m: float = 0.0
    origin_y_m: float = 0.0

    def __post_init__(self):
        if not (self.width_m > 0 and self.height_m > 0 and self.row_spacing_m > 0):
            raise ValidationError("field width_m, height_m and row_spacing_m must be > 0")
        if self.row_axis not in ("x", "y"):
            raise ValidationError(f"row_axis must be 'x' or 'y', got {self.row_axis!r}")

    @property
    def row_length_m(self) -> float:
        return self.width_m if self.row_axis == "x" else self.height_m

    @property
    def n_rows(self) -> int:
        across = self.height_m if self.row_axis == "x" else self.width_m
        return max(1, int(math.floor(across / self.row_spacing_m + 1e-9)))

    def contains(self, x: float, y: float) -> bool:
        return (
            self.origin_x_m <= x <= self.origin_x_m + self.width_m
            and self.origin_y_m <= y <= self.origin_y_m + self.height_m
        )

    def row_offsets(self) -> list[float]:
        """Cross-row coordinate of each row centre line."""
        base = self.origin_y_m if self.row_axis == "x" else self.origin_x_m
        return [base + (k + 0.5) * self.row_spacing_m for k in range(self.n_rows)]


@dataclass(frozen=True)
class WeedTarget:
    id: str
    x_m: float
    y_m: float
    species: str
    detected_day: int = 1

    def __post_init__(self):
        if not IDENT.match(self.id):
            raise ValidationError(f"target id {self.id!r} must match [A-Za-z0-9_-]+")


@dataclass(frozen=True)
class UgvSpec:
    transit_speed_mps: float
    turn_time_s: float = 0.0
    start_x_m: float = 0.0
    start_y_m: float = 0.0
    compensated: bool = True

    def __post_init__(self):
        if not self.transit_speed_mps > 0:
            raise ValidationError("ugv transit_speed_mps must be > 0")
        if self.turn_time_s < 0:
            raise ValidationError("ugv turn_time_s must be >= 0")

    @property
    def start(self) -> tuple[float, float]:
        return (self.start_x_m, self.start_y_m)


@dataclass(frozen=True)
class DniProfile:
    """Direct normal irradiance versus solar time, linearly interpolated."""

    solar_time_h: tuple[float, ...] = (12.0,)
    dni_wm2: tuple[float, ...] = (DEFAULT_DNI_WM2,)

    def __post_init__(self):
        if len(self.solar_time_h) != len(self.dni_wm2) or not self.dni_wm2:
            raise ValidationError("DNI profile needs matching, non-empty columns")
        if any(b <= a for a, b in zip(self.solar_time_h, self.solar_time_h[1:])):
            raise ValidationError("DNI profile solar_time_h must be strictly increasing")
        if any(v < 0 for v in self.dni_wm2):
            raise ValidationError("DNI values must be >= 0")

    @classmethod
    def constant(cls, dni_wm2: float = DEFAULT_DNI_WM2) -> "DniProfile":
        return cls((12.0,), (float(dni_wm2),))

    @property
    def is_constant(self) -> bool:
        return len(set(self.dni_wm2)) == 1

    @property
    def peak(self) -> float:
        return max(self.dni_wm2)

    def __call__(self, solar_time_h: float) -> float:
        if self.is_constant:
            return self.dni_wm2[0]
        return float(np.interp(solar_time_h, self.solar_time_h, self.dni_wm2))


@dataclass(frozen=True)
class Scenario:
    """Everything the planner and simulator need besides the target list."""

    latitude_deg: float
    field: FieldMap
    ugv: UgvSpec
    lens: optics.LensSpec
    footprint: Footprint
    species: dict
    theta_max: float = 25.0
    start_day: int = 1
    horizon_days: int = 1
    stage: Stage = Stage.SEEDLING
    dni: DniProfile = field(default_factory=DniProfile.constant)
    max_dwell_s: float = DEFAULT_MAX_DWELL_S

    def __post_init__(self):
        if self.horizon_days < 1:
            raise ValidationError("horizon_days must be >= 1")
        if not 1 <= self.start_day <= 365:
            raise ValidationError("start_day must satisfy 1 <= start_day <= 365")
        if not 0 < self.theta_max < 90:
            raise ValidationError("theta_max must satisfy 0 < theta_max < 90")
        if not self.max_dwell_s > 0:
            raise ValidationError("max_dwell_s must be > 0")

    def window(self, day: int) -> SolarWindow:
        return solar_window(self.latitude_deg, declination_of_day(wrap_day(day)), self.theta_max)

    def days(self) -> range:
        return range(self.start_day, self.start_day + self.horizon_days)


# --------------------------------------------------------------------------
# Plan types
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Visit:
    target_id: str
    arrival_h: float
    dwell_s: float


@dataclass(frozen=True)
class MappingPass:
    start_solar_time: float
    duration_h: float
    path_length_m: float
    rows: int
    turns: int

    @property
    def end_solar_time(self) -> float:
        return self.start_solar_time + self.duration_h


@dataclass
class DaySchedule:
    day: int
    window: SolarWindow
    visits: list[Visit] = field(default_factory=list)
    mapping_pass: MappingPass | None = None

    @property
    def day_of_year(self) -> int:
        return wrap_day(self.day)

    @property
    def same_day_mapping(self) -> bool:
        return self.mapping_pass is not None and bool(self.visits)


@dataclass
class MissionPlan:
    latitude_deg: float
    start_day: int
    theta_max: float
    days: list[DaySchedule]
    unserved: list[str]
    untreatable: list[str] = field(default_factory=list)

    @property
    def visits(self) -> list[Visit]:
        return [v for d in self.days for v in d.visits]

    @property
    def served(self) -> list[str]:
        return [v.target_id for v in self.visits]


# --------------------------------------------------------------------------
# Flux / dwell model shared by planner and simulator
# --------------------------------------------------------------------------


def integrate_dose(flux: Callable[[float], float], start_s: float, dwell_s: float, step_s: float = 1.0) -> float:
    """Midpoint-rule integral of flux (W/m^2) over [start, start + dwell] in J/m^2.

    Uses whole ``step_s`` sub-intervals plus one fractional remainder.
    """
    n_full = int(math.floor(dwell_s / step_s))
    dose = 0.0
    for k in range(n_full):
        dose += flux(start_s + (k + 0.5) * step_s) * step_s
    rem = dwell_s - n_full * step_s
    if rem > 0:
        dose += flux(start_s + n_full * step_s + 0.5 * rem) * rem
    return dose


class FluxModel:
    """Delivered focal flux over one day: DNI times tracked lens efficiency."""

    def __init__(self, scenario: Scenario, day: int):
        self.scenario = scenario
        self.latitude = scenario.latitude_deg
        self.declination = declination_of_day(wrap_day(day))
        self.compensated = scenario.ugv.compensated
        self._eta0 = optics.eta(0.0, scenario.lens)

    @property
    def time_invariant(self) -> bool:
        return self.compensated and self.scenario.dni.is_constant

    def eta_at(self, t_s: float) -> float:
        if self.compensated:
            return self._eta0
        theta_z = zenith_angle(self.latitude, self.declination, 15.0 * (t_s / 3600.0 - 12.0))
        if theta_z >= 90.0:
            return 0.0
        return optics.eta(optics.incidence_after_tracking(theta_z, False), self.scenario.lens)

    def __call__(self, t_s: float) -> float:
        return self.scenario.dni(t_s / 3600.0) * self.eta_at(t_s)


class DwellCalculator:
    """Dwell per (species, arrival); constant per species when flux is time-invariant."""

    def __init__(self, scenario: Scenario, flux: FluxModel):
        self.scenario = scenario
        self.flux = flux
        self._cache: dict[str, float | None] = {}

    def dwell(self, species_name: str, arrival_s: float) -> float:
        """Seconds of dwell needed from ``arrival_s``; raises Untreatable/ZeroFlux."""
        sc = self.scenario
        sp: WeedSpecies = sc.species[species_name]
        if self.flux.time_invariant:
            if species_name not in self._cache:
                try:
                    self._cache[species_name] = required_dwell(sp, self.flux(arrival_s), sc.stage, sc.max_dwell_s)
                except (Untreatable, ZeroFlux):
                    self._cache[species_name] = None
            d = self._cache[species_name]
            if d is None:
                raise Untreatable(math.inf, sc.max_dwell_s)
            return d
        d = required_dwell(sp, self.flux(arrival_s), sc.stage, sc.max_dwell_s)
        need = sp.lethal_dose_jm2(sc.stage)
        # dwell is fixed at arrival, but extended until the integrated dose suffices
        for _ in range(100):
            dose = integrate_dose(self.flux, arrival_s, d)
            if dose >= need:
                break
            f_end = self.flux(arrival_s + d)
            if f_end <= 0:
                raise Untreatable(math.inf, sc.max_dwell_s)
            d += max((need - dose) / f_end, 1e-6)
            if d > sc.max_dwell_s:
                raise Untreatable(d, sc.max_dwell_s)
        else:
            raise Untreatable(d, sc.max_dwell_s)
        return d

    def min_dwell(self) -> float:
        """Lower bound on any species' dwell (at peak DNI and normal incidence)."""
        best = self.scenario.dni.peak * optics.eta(0.0, self.scenario.lens)
        if best <= 0:
            return math.inf
        return min(sp.lethal_dose_jm2(self.scenario.stage) / best for sp in self.scenario.species.values())


# --------------------------------------------------------------------------
# Mapping pass
# --------------------------------------------------------------------------


def boustrophedon_waypoints(field_map: FieldMap) -> list[tuple[float, float]]:
    """Row endpoints of a back-and-forth sweep, alternating direction."""
    pts = []
    lo = field_map.origin_x_m if field_map.row_axis == "x" else field_map.origin_y_m
    hi = lo + field_map.row_length_m
    for k, c in enumerate(field_map.row_offsets()):
        a, b = (lo, hi) if k % 2 == 0 else (hi, lo)
        if field_map.row_axis == "x":
            pts += [(a, c), (b, c)]
        else:
            pts += [(c, a), (c, b)]
    return pts


def mapping_path(field_map: FieldMap, ugv: UgvSpec) -> tuple[float, int, float]:
    """(path length m, turns, duration s) of the boustrophedon pass.

    Length counts the rows only; the row-to-row shift is absorbed into the
    per-turn time.
    """
    rows = field_map.n_rows
    length = rows * field_map.row_length_m
    turns = rows - 1
    return length, turns, length / ugv.transit_speed_mps + turns * ugv.turn_time_s


def plan_mapping_pass(
    field_map: FieldMap, ugv: UgvSpec, day: int, latitude_deg: float, theta_max: float = 25.0
) -> MappingPass:
    """Schedule the mapping pass outside the day's solar window.

    Prefers the morning (ending early enough to drive back to the start
    point when the window opens); otherwise starts when the window closes.
    """
    length, turns, dur_s = mapping_path(field_map, ugv)
    decl = declination_of_day(wrap_day(day))
    win = solar_window(latitude_deg, decl, theta_max)
    sun = daylight(latitude_deg, decl)
    dur_h = dur_s / 3600.0
    rows = field_map.n_rows

    if win.is_empty:
        if dur_h <= sun.delta_t:
            return MappingPass(sun.start_solar_time, dur_h, length, rows, turns)
        raise MappingDoesNotFit(
            f"mapping pass needs {dur_h:.3f} h but daylight on day {day} is {sun.delta_t:.3f} h"
        )

    end_xy = boustrophedon_waypoints(field_map)[-1]
    back_h = math.dist(end_xy, ugv.start) / ugv.transit_speed_mps / 3600.0
    morning_start = win.start_solar_time - back_h - dur_h
    if morning_start >= sun.start_solar_time:
        return MappingPass(morning_start, dur_h, length, rows, turns)
    if win.end_solar_time + dur_h <= sun.end_solar_time:
        return MappingPass(win.end_solar_time, dur_h, length, rows, turns)
    outside = sun.delta_t - win.delta_t
    raise MappingDoesNotFit(
        f"mapping pass needs {dur_h:.3f} h in one stretch outside the window; day {day} offers "
        f"{win.start_solar_time - sun.start_solar_time:.3f} h before and "
        f"{sun.end_solar_time - win.end_solar_time:.3f} h after ({outside:.3f} h in total)"
    )


# --------------------------------------------------------------------------
# Routing
# --------------------------------------------------------------------------


def route_length(points: np.ndarray, route: Sequence[int], depot: tuple[float, float]) -> float:
    """Open-path length from the depot through ``route``."""
    if not route:
        return 0.0
    p = np.vstack([np.asarray(depot, float)[None, :], points[list(route)]])
    return float(np.hypot(*np.diff(p, axis=0).T).sum())


def two_opt(
    points: np.ndarray,
    route: list[int],
    depot: tuple[float, float],
    accept: Callable[[list[int]], bool] | None = None,
    max_passes: int = 50,
) -> list[int]:
    """Segment-reversal improvement of an open path that starts at the depot.

    A move is applied only if it shortens the path by more than 1e-9 m and
    ``accept`` (when given) approves the new route. Never lengthens the route.
    """
    route = list(route)
    n = len(route)
    if n < 2:
        return route
    for _ in range(max_passes):
        improved = False
        for i in range(n - 1):
            p = np.vstack([np.asarray(depot, float)[None, :], points[route]])
            # route position i is path node i + 1; its predecessor is node i
            a = p[i]
            b = p[i + 1]
            js = np.arange(i + 1, n)
            c = p[js + 1]
            d_ab = math.dist(a, b)
            gain = np.hypot(*(a - c).T) - d_ab
            has_next = js + 2 <= n
            nxt = p[np.minimum(js + 2, n)]
            old_cd = np.where(has_next, np.hypot(*(c - nxt).T), 0.0)
            new_bd = np.where(has_next, np.hypot(*(b - nxt).T), 0.0)
            delta = gain + new_bd - old_cd
            order = np.argsort(delta, kind="stable")
            for k in order:
                if delta[k] >= -1e-9:
                    break
                j = int(js[k])
                cand = route[:i] + route[i : j + 1][::-1] + route[j + 1 :]
                if accept is None or accept(cand):
                    route = cand
                    improved = True
                    break
        if not improved:
            break
    return route


class _DayRouter:
    def __init__(self, targets: Sequence[WeedTarget], points: np.ndarray, scenario: Scenario, day: int, window: SolarWindow):
        self.targets = targets
        self.points = points
        self.sc = scenario
        self.depot = np.asarray(scenario.ugv.start, float)
        self.v = scenario.ugv.transit_speed_mps
        self.start_s = window.start_solar_time * 3600.0
        self.end_s = window.end_solar_time * 3600.0
        self.flux = FluxModel(scenario, day)
        self.dwells = DwellCalculator(scenario, self.flux)
        self.min_dwell = self.dwells.min_dwell()
        best = scenario.dni.peak * optics.eta(0.0, scenario.lens)
        lb = {}
        for name, sp in scenario.species.items():
            d = sp.lethal_dose_jm2(scenario.stage) / best if best > 0 else math.inf
            lb[name] = d if d <= scenario.max_dwell_s else math.inf
        # per-target dwell lower bound; exact when the flux is time-invariant
        self.dwell_lb = np.array([lb.get(t.species, math.inf) for t in targets], float)

    def try_visit(self, t_s: float, pos: np.ndarray, idx: int):
        """(arrival, dwell) if target idx fits after being at pos at t_s, else None."""
        arrival = t_s + math.dist(pos, self.points[idx]) / self.v
        if arrival + self.min_dwell > self.end_s + TIME_TOL_S:
            return None
        try:
            dwell = self.dwells.dwell(self.targets[idx].species, arrival)
        except (Untreatable, ZeroFlux):
            return None
        if arrival + dwell > self.end_s + TIME_TOL_S:
            return None
        return arrival, dwell

    def schedule(self, route: Sequence[int]):
        """Timed visits for a route, or None when any visit breaks the window."""
        t, pos, out = self.start_s, self.depot, []
        for idx in route:
            r = self.try_visit(t, pos, idx)
            if r is None:
                return None
            out.append(r)
            t, pos = r[0] + r[1], self.points[idx]
        return out

    def end_state(self, route, sched):
        if not route:
            return self.start_s, self.depot
        a, d = sched[-1]
        return a + d, self.points[route[-1]]

    def extend(self, route: list[int], sched: list, active: np.ndarray) -> bool:
        """Greedy nearest-feasible extension; returns True if anything was added."""
        added = False
        t, pos = self.end_state(route, sched)
        while active.any():
            dist = np.where(active, np.hypot(*(self.points - pos).T), np.inf)
            key = np.round(dist, 9)
            best = int(np.argmin(key))  # first minimum = lowest id among ties
            r = self.try_visit(t, pos, best)
            chosen = best
            if r is None:
                chosen = -1
                # slow path: scan by increasing distance until one fits
                cand = np.flatnonzero(active)
                order = cand[np.lexsort((cand, key[cand]))]
                for idx in order[1:]:
                    if t + dist[idx] / self.v + self.min_dwell > self.end_s + TIME_TOL_S:
                        break
                    r = self.try_visit(t, pos, int(idx))
                    if r is not None:
                        chosen = int(idx)
                        break
                if chosen < 0:
                    break
            route.append(chosen)
            sched.append(r)
            active[chosen] = False
            t, pos = r[0] + r[1], self.points[chosen]
            added = True
        return added

    def accept(self, route):
        return self.schedule(route) is not None

    def insert(self, route: list[int], sched: list, active: np.ndarray, tries: int = 20) -> bool:
        """Cheapest-insertion repair: splice pending targets anywhere into the route
        while the day's slack allows. Returns True if anything was added."""
        added = False
        while active.any():
            t_end, _ = self.end_state(route, sched)
            slack = self.end_s + TIME_TOL_S - t_end
            cand = np.flatnonzero(active & (self.dwell_lb <= slack))
            if cand.size == 0:
                break
            path = np.vstack([self.depot[None, :], self.points[route]])
            # gap k sits between path node k and k + 1; the last gap appends at the end
            d_in = np.hypot(*(self.points[cand][:, None, :] - path[None, :, :]).transpose(2, 0, 1))
            d_out = np.concatenate([d_in[:, 1:], np.zeros((cand.size, 1))], axis=1)
            old = np.append(np.hypot(*np.diff(path, axis=0).T), 0.0)
            extra = (d_in + d_out - old[None, :]) / self.v
            gap = np.argmin(extra, axis=1)
            cost = extra[np.arange(cand.size), gap] + self.dwell_lb[cand]
            done = False
            for o in np.lexsort((cand, cost))[:tries]:
                if cost[o] > slack:
                    break
                j, k = int(cand[o]), int(gap[o])
                trial = route[:k] + [j] + route[k:]
                new_sched = self.schedule(trial)
                if new_sched is not None:
                    route[:], sched[:] = trial, new_sched
                    active[j] = False
                    done = added = True
                    break
            if not done:
                break
        return added

    def exchange(self, route: list[int], sched: list, active: np.ndarray) -> bool:
        """Drop one visit and refill by cheapest insertion; keep the first drop
        that serves more targets in total. Only for small routes and pools."""
        if not route or len(route) > EXCHANGE_LIMIT or np.count_nonzero(active) > EXCHANGE_LIMIT:
            return False
        for pos in range(len(route)):
            trial = route[:pos] + route[pos + 1 :]
            trial_sched = self.schedule(trial)
            if trial_sched is None:
                continue
            trial_active = active.copy()
            # the dropped target may come back, but only at a different position
            self.insert(trial, trial_sched, trial_active)
            if len(trial) > len(route):
                active[:] = trial_active
                active[route[pos]] = route[pos] not in trial
                route[:], sched[:] = trial, trial_sched
                return True
        return False

    def _solve(self, active: np.ndarray, improve: bool, seed: int | None = None):
        route: list[int] = []
        sched: list = []
        if seed is not None:
            first = self.try_visit(self.start_s, self.depot, seed)
            if first is None:
                return None
            route.append(seed)
            sched.append(first)
            active[seed] = False
        self.extend(route, sched, active)
        while improve:
            changed = False
            if len(route) >= 2:
                accept = None if self.flux.time_invariant else self.accept
                new = two_opt(self.points, route, tuple(self.depot), accept)
                new_sched = self.schedule(new) if new != route else None
                if new_sched is not None:
                    route[:], sched[:] = new, new_sched
                    changed = True
            changed |= self.extend(route, sched, active)
            changed |= self.insert(route, sched, active)
            if not changed:
                changed = self.exchange(route, sched, active)
            if not changed:
                break
        return route, sched, active

    def run(self, active: np.ndarray, improve: bool = True) -> list[tuple[int, float, float]]:
        """Plan one day; on small days also restart from every possible first visit
        and keep the route serving most targets (earliest finish breaks ties)."""
        best = self._solve(active.copy(), improve)
        eligible = np.flatnonzero(active)
        if improve and 1 < eligible.size <= EXCHANGE_LIMIT:
            def key(res):
                return (-len(res[0]), self.end_state(res[0], res[1])[0])

            for seed in eligible:
                res = self._solve(active.copy(), improve, int(seed))
                if res is not None and key(res) < key(best):
                    best = res
        route, sched, after = best
        active[:] = after
        return [(idx, a, d) for idx, (a, d) in zip(route, sched)]


def _sorted_targets(targets: Iterable[WeedTarget]) -> list[WeedTarget]:
    ts = sorted(targets, key=lambda t: t.id)
    for a, b in zip(ts, ts[1:]):
        if a.id == b.id:
            raise ValidationError(f"duplicate target id {a.id!r}")
    return ts


def validate_targets(targets: Sequence[WeedTarget], scenario: Scenario) -> None:
    for t in targets:
        if not scenario.field.contains(t.x_m, t.y_m):
            raise ValidationError(f"target {t.id}: position ({t.x_m}, {t.y_m}) lies outside the field boundary")
        if t.species not in scenario.species:
            raise ValidationError(f"target {t.id}: unknown species {t.species!r}")


def _check_creep_speeds(scenario: Scenario) -> None:
    best_flux = scenario.dni.peak * optics.eta(0.0, scenario.lens)
    if best_flux <= 0:
        return
    for sp in scenario.species.values():
        dwell = sp.lethal_dose_jm2(scenario.stage) / best_flux
        creep = scenario.footprint.along_track_m / dwell
        if creep > scenario.ugv.transit_speed_mps:
            raise ValidationError(
                f"transit speed {scenario.ugv.transit_speed_mps} m/s is below the creep speed "
                f"{creep:.4g} m/s needed for species {sp.name}"
            )


def plan_treatment(targets: Sequence[WeedTarget], scenario: Scenario, with_mapping: bool = True) -> MissionPlan:
    """Map-then-treat plan over the scenario horizon.

    Day by day: greedy nearest-feasible route inside the window, then 2-opt on
    transit distance, greedy re-extension, cheapest insertion and (on small
    days) a drop-one exchange, repeated until stable. Small days are also
    restarted from every possible first visit. Targets that do
    not fit anywhere in the horizon are listed in ``unserved``.
    """
    ts = _sorted_targets(targets)
    validate_targets(ts, scenario)
    _check_creep_speeds(scenario)
    windows = {day: scenario.window(day) for day in scenario.days()}
    if all(w.is_empty for w in windows.values()):
        raise NoWindow(
            f"no solar window at latitude {scenario.latitude_deg} with theta_max {scenario.theta_max} "
            f"on days {scenario.start_day}..{scenario.start_day + scenario.horizon_days - 1}"
        )

    mapping = None
    if with_mapping:
        mapping = plan_mapping_pass(
            scenario.field, scenario.ugv, scenario.start_day, scenario.latitude_deg, scenario.theta_max
        )
    points = np.array([[t.x_m, t.y_m] for t in ts], float).reshape(-1, 2)
    pending = np.ones(len(ts), bool)
    detected = np.array([t.detected_day for t in ts], int)

    days = []
    for day in scenario.days():
        win = windows[day]
        sched = DaySchedule(day, win, mapping_pass=mapping if day == scenario.start_day else None)
        # treatment never precedes the mapping pass on the same day
        blocked = (
            day == scenario.start_day
            and mapping is not None
            and mapping.start_solar_time >= win.end_solar_time - 1e-12
        )
        if not win.is_empty and not blocked and pending.any():
            active = pending & (detected <= day)
            router = _DayRouter(ts, points, scenario, day, win)
            for idx, arrival_s, dwell in router.run(active):
                sched.visits.append(Visit(ts[idx].id, arrival_s / 3600.0, dwell))
                pending[idx] = False
        days.append(sched)

    unserved = [ts[i].id for i in np.flatnonzero(pending)]
    untreatable = [tid for tid in unserved if _never_treatable(scenario, next(t for t in ts if t.id == tid))]
    return MissionPlan(scenario.latitude_deg, scenario.start_day, scenario.theta_max, days, unserved, untreatable)


def _never_treatable(scenario: Scenario, target: WeedTarget) -> bool:
    best = scenario.dni.peak * optics.eta(0.0, scenario.lens)
    if best <= 0:
        return True
    sp = scenario.species[target.species]
    return sp.lethal_dose_jm2(scenario.stage) / best > scenario.max_dwell_s


# --------------------------------------------------------------------------
# Verdict
# --------------------------------------------------------------------------


@dataclass
class Verdict:
    verdict: str
    plan: MissionPlan
    served: int
    unserved: int
    required_dwell_hours: float
    scheduled_hours: float
    available_window_hours: float
    mean_window_hours: float

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "served": self.served,
            "unserved": self.unserved,
            "required_dwell_hours": self.required_dwell_hours,
            "scheduled_hours": self.scheduled_hours,
            "available_window_hours": self.available_window_hours,
            "mean_window_hours": self.mean_window_hours,
        }


def required_dwell_hours(targets: Sequence[WeedTarget], scenario: Scenario) -> float:
    """Lower bound on treatment time: every target at peak DNI and normal incidence."""
    best = scenario.dni.peak * optics.eta(0.0, scenario.lens)
    if best <= 0:
        return math.inf
    return sum(scenario.species[t.species].lethal_dose_jm2(scenario.stage) / best for t in targets) / 3600.0


def scheduled_hours(plan: MissionPlan, targets: Sequence[WeedTarget], scenario: Scenario) -> float:
    """Dwell plus transit time actually scheduled, in hours."""
    pos = {t.id: (t.x_m, t.y_m) for t in targets}
    total = 0.0
    for d in plan.days:
        here = scenario.ugv.start
        for v in d.visits:
            total += math.dist(here, pos[v.target_id]) / scenario.ugv.transit_speed_mps + v.dwell_s
            here = pos[v.target_id]
    return total / 3600.0


def feasibility_verdict(targets: Sequence[WeedTarget], scenario: Scenario) -> Verdict:
    plan = plan_treatment(targets, scenario)
    windows = [d.window.delta_t for d in plan.days]
    available = float(sum(windows))
    return Verdict(
        SPARSE_FEASIBLE if not plan.unserved else DENSE_INFEASIBLE,
        plan,
        len(plan.served),
        len(plan.unserved),
        required_dwell_hours(targets, scenario),
        scheduled_hours(plan, targets, scenario),
        available,
        available / len(windows),
    )


# --------------------------------------------------------------------------
# Exhaustive oracle (small instances only)
# --------------------------------------------------------------------------


def exhaustive_max_served(targets: Sequence[WeedTarget], scenario: Scenario, day: int | None = None) -> int:
    """Largest number of targets servable in one day's window, by exhaustive
    search over visit orders (depth-first with prefix feasibility pruning).

    Intended for instances of at most ~8 targets.
    """
    ts = _sorted_targets(targets)
    day = scenario.start_day if day is None else day
    win = scenario.window(day)
    if win.is_empty:
        return 0
    points = np.array([[t.x_m, t.y_m] for t in ts], float).reshape(-1, 2)
    router = _DayRouter(ts, points, scenario, day, win)
    eligible = [i for i, t in enumerate(ts) if t.detected_day <= day]
    best = 0

    def dfs(t_s, pos, remaining, depth):
        nonlocal best
        best = max(best, depth)
        if depth + len(remaining) <= best:
            return
        for idx in remaining:
            r = router.try_visit(t_s, pos, idx)
            if r is not None:
                dfs(r[0] + r[1], points[idx], [j for j in remaining if j != idx], depth + 1)

    dfs(router.start_s, router.depot, eligible, 0)
    return best

