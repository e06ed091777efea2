"""File formats: target CSVs, plan and simulation JSON, plot-ready CSVs."""

from __future__ import annotations

import csv
import io as _io
import json
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import jsonschema

from .coverage import Footprint
from .errors import ValidationError
from .optics import EfficiencySample, LensSpec
from .planner import (
    DaySchedule,
    DniProfile,
    FieldMap,
    MappingPass,
    MissionPlan,
    Scenario,
    UgvSpec,
    Visit,
    WeedTarget,
)
from .simulate import SimulationReport
from .solar_geometry import SolarWindow, declination_of_day, wrap_day
from .thermal_dose import Stage, WeedSpecies

TARGET_HEADER = ["id", "x_m", "y_m", "species", "detected_day"]
WINDOW_HEADER = ["phi_deg", "delta_deg", "delta_t_hours"]
EFFICIENCY_HEADER = ["theta_i_deg", "transmittance", "concentration", "cosine", "eta", "eta_normalized"]
COVERAGE_HEADER = ["area_m2", "speed_mps", "total_time_hours"]
T_DAY_NOTE = (
    "Blanket-coverage estimates use a fixed operating day of {t_day:g} h; scheduling uses the "
    "per-day solar windows, which average {mean:.3f} h over this horizon."
)


def fmt6(x: float) -> str:
    """Six significant digits, as used in all CSV outputs."""
    return f"{x:.6g}"


def write_csv(header: Sequence[str], rows: Iterable[Sequence], fh=None) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt6(v) if isinstance(v, float) else v for v in row])
    text = buf.getvalue()
    if fh is not None:
        fh.write(text)
    return text


def window_csv(rows) -> str:
    return write_csv(WINDOW_HEADER, rows)


def efficiency_csv(samples: Sequence[EfficiencySample]) -> str:
    return write_csv(
        EFFICIENCY_HEADER,
        (
            (s.theta_i, s.transmittance, s.concentration, s.cosine_factor, s.eta, s.eta_normalized)
            for s in samples
        ),
    )


def coverage_csv(rows) -> str:
    return write_csv(COVERAGE_HEADER, rows)


# --------------------------------------------------------------------------
# Targets
# --------------------------------------------------------------------------


def load_targets_csv(path: str | Path) -> list[WeedTarget]:
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"targets file {path} does not exist")
    out = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != TARGET_HEADER:
            raise ValidationError(f"{path}: header must be {','.join(TARGET_HEADER)}, got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(TARGET_HEADER):
                raise ValidationError(f"{path}:{lineno}: expected {len(TARGET_HEADER)} fields, got {len(row)}")
            try:
                out.append(WeedTarget(row[0], float(row[1]), float(row[2]), row[3], int(row[4])))
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from None
    return out


def write_targets_csv(targets: Sequence[WeedTarget], path: str | Path) -> None:
    rows = [(t.id, repr(float(t.x_m)), repr(float(t.y_m)), t.species, t.detected_day) for t in targets]
    Path(path).write_text(write_csv(TARGET_HEADER, rows), encoding="utf-8")


def check_targets_in_field(targets: Sequence[WeedTarget], field_map: FieldMap, source: str = "targets") -> None:
    for lineno, t in enumerate(targets, start=2):
        if not field_map.contains(t.x_m, t.y_m):
            raise ValidationError(
                f"{source}:{lineno}: target {t.id} at ({t.x_m}, {t.y_m}) lies outside the field boundary"
            )


# --------------------------------------------------------------------------
# Plan JSON
# --------------------------------------------------------------------------


def _schema(name: str) -> dict:
    return json.loads(resources.files("solarweed").joinpath("schemas", name).read_text(encoding="utf-8"))


def validate_json(doc: dict, schema_name: str) -> None:
    try:
        jsonschema.validate(doc, _schema(schema_name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ValidationError(f"{schema_name}: {where}: {exc.message}") from None


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def scenario_to_dict(scenario: Scenario, t_day_hours: float) -> dict:
    lens, fp, ugv, fm = scenario.lens, scenario.footprint, scenario.ugv, scenario.field
    return {
        "latitude_deg": scenario.latitude_deg,
        "theta_max_deg": scenario.theta_max,
        "start_day": scenario.start_day,
        "horizon_days": scenario.horizon_days,
        "t_day_hours": t_day_hours,
        "lens": {
            "aperture_width_m": lens.aperture_width,
            "focal_length_m": lens.focal_length,
            "refractive_index": lens.refractive_index,
            "nominal_transmittance": lens.nominal_transmittance,
            "peak_concentration": lens.peak_concentration,
            "concentration_model": lens.concentration_model,
        },
        "footprint": {"along_track_m": fp.along_track_m, "cross_track_m": fp.cross_track_m},
        "ugv": {
            "transit_speed_mps": ugv.transit_speed_mps,
            "turn_time_s": ugv.turn_time_s,
            "start_x_m": ugv.start_x_m,
            "start_y_m": ugv.start_y_m,
            "compensated": ugv.compensated,
        },
        "field": {
            "width_m": fm.width_m,
            "height_m": fm.height_m,
            "row_spacing_m": fm.row_spacing_m,
            "row_axis": fm.row_axis,
            "origin_x_m": fm.origin_x_m,
            "origin_y_m": fm.origin_y_m,
        },
        "dose": {
            "stage": scenario.stage.value,
            "max_dwell_s": scenario.max_dwell_s,
            "dni_profile": [
                {"solar_time_h": t, "dni_wm2": v} for t, v in zip(scenario.dni.solar_time_h, scenario.dni.dni_wm2)
            ],
            "species": [
                {
                    "name": sp.name,
                    "reference_exposure_s": sp.reference_exposure_s,
                    "reference_flux_wm2": sp.reference_flux_wm2,
                    "stage_multiplier_established": sp.established_multiplier,
                }
                for sp in scenario.species.values()
            ],
        },
    }


def scenario_from_dict(d: dict) -> tuple[Scenario, float]:
    lens, fp, ugv, fm, dose = d["lens"], d["footprint"], d["ugv"], d["field"], d["dose"]
    species = {
        s["name"]: WeedSpecies(
            s["name"], s["reference_exposure_s"], s["reference_flux_wm2"], s["stage_multiplier_established"]
        )
        for s in dose["species"]
    }
    dni = DniProfile(
        tuple(p["solar_time_h"] for p in dose["dni_profile"]),
        tuple(p["dni_wm2"] for p in dose["dni_profile"]),
    )
    sc = Scenario(
        latitude_deg=d["latitude_deg"],
        field=FieldMap(**fm),
        ugv=UgvSpec(**ugv),
        lens=LensSpec(
            aperture_width=lens["aperture_width_m"],
            focal_length=lens["focal_length_m"],
            refractive_index=lens["refractive_index"],
            nominal_transmittance=lens["nominal_transmittance"],
            peak_concentration=lens["peak_concentration"],
            concentration_model=lens["concentration_model"],
        ),
        footprint=Footprint(**fp),
        species=species,
        theta_max=d["theta_max_deg"],
        start_day=d["start_day"],
        horizon_days=d["horizon_days"],
        stage=Stage(dose["stage"]),
        dni=dni,
        max_dwell_s=dose["max_dwell_s"],
    )
    return sc, d["t_day_hours"]


def plan_to_dict(
    plan: MissionPlan, targets: Sequence[WeedTarget], scenario: Scenario, t_day_hours: float
) -> dict:
    days = []
    for ds in plan.days:
        mp = ds.mapping_pass
        days.append(
            {
                "day": ds.day,
                "day_of_year": ds.day_of_year,
                "declination_deg": declination_of_day(ds.day_of_year),
                "window": {
                    "start": ds.window.start_solar_time,
                    "end": ds.window.end_solar_time,
                    "delta_t": ds.window.delta_t,
                },
                "visits": [{"target": v.target_id, "arrival": v.arrival_h, "dwell_s": v.dwell_s} for v in ds.visits],
                "mapping_pass": None
                if mp is None
                else {
                    "start": mp.start_solar_time,
                    "duration_h": mp.duration_h,
                    "path_length_m": mp.path_length_m,
                    "rows": mp.rows,
                    "turns": mp.turns,
                },
                "same_day_mapping_and_treatment": ds.same_day_mapping,
            }
        )
    return {
        "site": {"latitude_deg": plan.latitude_deg},
        "theta_max": plan.theta_max,
        "start_day": plan.start_day,
        "days": days,
        "unserved": list(plan.unserved),
        "untreatable": list(plan.untreatable),
        "targets": [
            {"id": t.id, "x_m": t.x_m, "y_m": t.y_m, "species": t.species, "detected_day": t.detected_day}
            for t in sorted(targets, key=lambda t: t.id)
        ],
        "scenario": scenario_to_dict(scenario, t_day_hours),
    }


def plan_from_dict(doc: dict) -> tuple[MissionPlan, list[WeedTarget], Scenario, float]:
    validate_json(doc, "plan.schema.json")
    scenario, t_day = scenario_from_dict(doc["scenario"])
    targets = [WeedTarget(t["id"], t["x_m"], t["y_m"], t["species"], t["detected_day"]) for t in doc["targets"]]
    days = []
    for d in doc["days"]:
        w = d["window"]
        mp = d["mapping_pass"]
        days.append(
            DaySchedule(
                d["day"],
                SolarWindow(w["delta_t"], w["start"], w["end"], doc["theta_max"]),
                [Visit(v["target"], v["arrival"], v["dwell_s"]) for v in d["visits"]],
                None
                if mp is None
                else MappingPass(mp["start"], mp["duration_h"], mp["path_length_m"], mp["rows"], mp["turns"]),
            )
        )
    plan = MissionPlan(
        doc["site"]["latitude_deg"], doc["start_day"], doc["theta_max"], days, list(doc["unserved"]),
        list(doc.get("untreatable", [])),
    )
    return plan, targets, scenario, t_day


# --------------------------------------------------------------------------
# Simulation report JSON
# --------------------------------------------------------------------------


def report_to_dict(report: SimulationReport, plan: MissionPlan, t_day_hours: float) -> dict:
    n_days = max(len(plan.days), 1)
    mean_window = report.available_window_hours / n_days
    same_day = [d.day for d in plan.days if d.same_day_mapping]
    return {
        "site": {"latitude_deg": plan.latitude_deg},
        "theta_max": plan.theta_max,
        "outcomes": [o.as_dict() for o in report.outcomes],
        "unserved": list(report.unserved),
        "untreatable": list(report.untreatable),
        "violations": list(report.violations),
        "summary": {
            "verdict": report.verdict,
            "targets_total": len(report.outcomes) + len(report.unserved),
            "visits": len(report.outcomes),
            "treated": len(report.treated),
            "unserved": len(report.unserved),
            "violations": len(report.violations),
            "total_distance_m": report.total_distance_m,
            "total_energy_j": report.total_energy_j,
            "required_dwell_hours": report.required_dwell_hours,
            "available_window_hours": report.available_window_hours,
            "mean_window_hours": mean_window,
            "t_day_hours": t_day_hours,
            "t_day_note": T_DAY_NOTE.format(t_day=t_day_hours, mean=mean_window),
            "same_day_mapping_days": same_day,
        },
    }


def write_json(doc: dict, path: str | Path, schema_name: str | None = None) -> None:
    if schema_name:
        validate_json(doc, schema_name)
    Path(path).write_text(dumps(doc), encoding="utf-8")


def read_json(path: str | Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"file {path} does not exist")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None
