"""Replay a mission plan against the sun model at 1 s resolution.

Windows are re-derived from (site, day, theta_max) rather than trusted from
the plan. Problems are collected as violation entries, never raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

from .planner import (
    DENSE_INFEASIBLE,
    DOSE_RTOL,
    SPARSE_FEASIBLE,
    TIME_TOL_S,
    DniProfile,
    FluxModel,
    MissionPlan,
    Scenario,
    WeedTarget,
    integrate_dose,
    required_dwell_hours,
)

OUT_OF_WINDOW = "OUT_OF_WINDOW"
OVERLAP = "OVERLAP"
DUPLICATE_VISIT = "DUPLICATE_VISIT"
UNKNOWN_TARGET = "UNKNOWN_TARGET"
NOT_YET_DETECTED = "NOT_YET_DETECTED"
WINDOW_MISMATCH = "WINDOW_MISMATCH"
MAPPING_IN_WINDOW = "MAPPING_IN_WINDOW"
UNACCOUNTED_TARGET = "UNACCOUNTED_TARGET"
SERVED_AND_UNSERVED = "SERVED_AND_UNSERVED"


@dataclass
class VisitOutcome:
    target: str
    day: int
    arrival: float
    dwell_s: float
    dose_jm2: float
    required_jm2: float
    energy_j: float
    distance_m: float
    success: bool

    def as_dict(self) -> dict:
        return {
            "target": self.target,
            "day": self.day,
            "arrival": self.arrival,
            "dwell_s": self.dwell_s,
            "dose_jm2": self.dose_jm2,
            "required_jm2": self.required_jm2,
            "energy_j": self.energy_j,
            "transit_m": self.distance_m,
            "outcome": "treated" if self.success else "insufficient_dose",
        }


@dataclass
class SimulationReport:
    outcomes: list[VisitOutcome] = field(default_factory=list)
    unserved: list[str] = field(default_factory=list)
    untreatable: list[str] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)
    total_distance_m: float = 0.0
    total_energy_j: float = 0.0
    available_window_hours: float = 0.0
    required_dwell_hours: float = 0.0

    @property
    def treated(self) -> list[str]:
        return [o.target for o in self.outcomes if o.success]

    @property
    def verdict(self) -> str:
        ok = not self.unserved and all(o.success for o in self.outcomes) and not self.violations
        return SPARSE_FEASIBLE if ok else DENSE_INFEASIBLE

    def violation_codes(self) -> list[str]:
        return [v["code"] for v in self.violations]


def _violation(report: SimulationReport, code: str, day: int | None, target: str | None, detail: str):
    report.violations.append({"code": code, "day": day, "target": target, "detail": detail})


def _travel(start: tuple[float, float], goal: tuple[float, float], speed: float, dt: float = 1.0):
    """Step the vehicle toward ``goal`` at ``speed``; returns (seconds, metres)."""
    total = math.dist(start, goal)
    step = speed * dt
    if total == 0:
        return 0.0, 0.0
    n_full = int(total // step)
    travelled = n_full * step
    elapsed = n_full * dt
    rest = total - travelled
    if rest > 0:
        elapsed += rest / speed
        travelled += rest
    return elapsed, travelled


def simulate(
    plan: MissionPlan,
    targets: Sequence[WeedTarget],
    scenario: Scenario,
    dni: DniProfile | None = None,
) -> SimulationReport:
    """Replay ``plan`` and report per-visit dose outcomes and violations.

    ``dni`` overrides the scenario's profile (what-if runs).
    """
    if dni is not None:
        scenario = replace(scenario, dni=dni)
    by_id = {t.id: t for t in targets}
    report = SimulationReport(unserved=list(plan.unserved), untreatable=list(plan.untreatable))
    seen: set[str] = set()
    speed = scenario.ugv.transit_speed_mps
    area = scenario.footprint.area_m2

    for ds in plan.days:
        win = scenario.window(ds.day)
        report.available_window_hours += win.delta_t
        if abs(win.start_solar_time - ds.window.start_solar_time) > 1e-9 or abs(
            win.end_solar_time - ds.window.end_solar_time
        ) > 1e-9:
            _violation(report, WINDOW_MISMATCH, ds.day, None, "plan window differs from the re-derived window")
        mp = ds.mapping_pass
        if mp is not None and not win.is_empty:
            if mp.end_solar_time > win.start_solar_time + 1e-9 and mp.start_solar_time < win.end_solar_time - 1e-9:
                _violation(report, MAPPING_IN_WINDOW, ds.day, None, "mapping pass overlaps the solar window")

        flux = FluxModel(scenario, ds.day)
        w0, w1 = win.start_solar_time * 3600.0, win.end_solar_time * 3600.0
        t_free = w0
        pos = scenario.ugv.start
        for v in ds.visits:
            tgt = by_id.get(v.target_id)
            if tgt is None:
                _violation(report, UNKNOWN_TARGET, ds.day, v.target_id, "visit references an unknown target")
                continue
            if v.target_id in seen:
                _violation(report, DUPLICATE_VISIT, ds.day, v.target_id, "target visited more than once")
            seen.add(v.target_id)
            if tgt.detected_day > ds.day:
                _violation(report, NOT_YET_DETECTED, ds.day, v.target_id, "visit precedes detection")

            travel_s, travel_m = _travel(pos, (tgt.x_m, tgt.y_m), speed)
            earliest = t_free + travel_s
            arrival = v.arrival_h * 3600.0
            if arrival < earliest - TIME_TOL_S:
                _violation(
                    report, OVERLAP, ds.day, v.target_id,
                    f"arrival {v.arrival_h:.6f} h precedes earliest reachable {earliest / 3600.0:.6f} h",
                )
            end = arrival + v.dwell_s
            if arrival < w0 - TIME_TOL_S or end > w1 + TIME_TOL_S:
                _violation(
                    report, OUT_OF_WINDOW, ds.day, v.target_id,
                    f"visit [{arrival / 3600.0:.6f}, {end / 3600.0:.6f}] h outside window "
                    f"[{win.start_solar_time:.6f}, {win.end_solar_time:.6f}] h",
                )
            dose = integrate_dose(flux, arrival, v.dwell_s)
            need = scenario.species[tgt.species].lethal_dose_jm2(scenario.stage)
            report.outcomes.append(
                VisitOutcome(
                    v.target_id, ds.day, v.arrival_h, v.dwell_s, dose, need, dose * area, travel_m,
                    dose >= need * (1.0 - DOSE_RTOL),
                )
            )
            report.total_distance_m += travel_m
            report.total_energy_j += dose * area
            t_free = max(arrival, earliest) + v.dwell_s
            pos = (tgt.x_m, tgt.y_m)

    unserved = set(plan.unserved)
    for tid in sorted(seen & unserved):
        _violation(report, SERVED_AND_UNSERVED, None, tid, "target is both visited and listed unserved")
    for tid in sorted(set(by_id) - seen - unserved):
        _violation(report, UNACCOUNTED_TARGET, None, tid, "target neither visited nor listed unserved")
    report.required_dwell_hours = required_dwell_hours(targets, scenario)
    return report

