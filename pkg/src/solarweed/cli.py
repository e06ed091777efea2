"""Command-line entry point: ``solarweed <command> ...``.

Exit codes: 0 success, 2 validation error, 3 infeasibility (no window,
mapping pass does not fit).
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from pathlib import Path

from . import __version__
from .config import MissionConfig, load_config, load_dni_csv
from .coverage import HECTARE_M2, CoverageQuery, coverage_surface, coverage_verdict
from .errors import InfeasibleError, Untreatable, ValidationError, ZeroFlux
from .io import (
    check_targets_in_field,
    coverage_csv,
    dumps,
    efficiency_csv,
    load_targets_csv,
    plan_from_dict,
    plan_to_dict,
    read_json,
    report_to_dict,
    validate_json,
    window_csv,
    write_json,
)
from .optics import efficiency_curve, eta
from .planner import plan_treatment
from .simulate import simulate
from .solar_geometry import (
    declination_of_day,
    noon_zenith,
    scan_window_oracle,
    solar_window,
    window_surface,
)
from .thermal_dose import creep_speed, required_dwell

EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _write_sidecar(out: str, argv: list[str]) -> None:
    meta = {
        "command": argv,
        "version": __version__,
        "created_utc": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    Path(out + ".meta.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")


# --------------------------------------------------------------------------
# window
# --------------------------------------------------------------------------


def cmd_window(args) -> int:
    if args.sweep:
        rows = window_surface(args.theta_max, grid_step=args.step)
        _emit(window_csv(rows), args.out)
        return 0
    if args.lat is None:
        raise ValidationError("--lat is required unless --sweep is given")
    if (args.delta is None) == (args.day is None):
        raise ValidationError("give exactly one of --delta or --day")
    delta = args.delta if args.delta is not None else declination_of_day(args.day)
    win = solar_window(args.lat, delta, args.theta_max)
    lines = [
        f"latitude_deg      {args.lat:g}",
        f"declination_deg   {delta:.6g}" + (f"  (day {args.day})" if args.day is not None else ""),
        f"theta_max_deg     {args.theta_max:g}",
        f"noon_zenith_deg   {noon_zenith(args.lat, delta):.6g}",
        f"delta_t           {win.delta_t:.3f} h",
    ]
    if win.is_empty:
        lines.append("window            empty (sun never within theta_max of zenith)")
    else:
        lines.append(f"window            {win.start_solar_time:.4f} - {win.end_solar_time:.4f} solar h")
    if args.verify:
        oracle = scan_window_oracle(args.lat, delta, args.theta_max, step_seconds=1)
        diff_s = abs(oracle - win.delta_t) * 3600.0
        lines.append(f"oracle_1s_scan    {oracle:.3f} h")
        lines.append(f"difference        {diff_s:.2f} s ({'OK' if diff_s <= 2.0 else 'MISMATCH'} at 2 s tolerance)")
    print("\n".join(lines))
    return 0 if not args.verify or diff_s <= 2.0 else 1


# --------------------------------------------------------------------------
# efficiency-curve / coverage
# --------------------------------------------------------------------------


def cmd_efficiency(args) -> int:
    cfg = load_config(args.config)
    _emit(efficiency_csv(efficiency_curve(cfg.lens, args.step)), args.out)
    return 0


def dose_speed_range(cfg: MissionConfig) -> tuple[float, float]:
    """[creep at the longest dwell, creep at the shortest dwell] over the species table.

    Shortest dwell: seedling stage; longest: established stage, capped at the
    maximum dwell. Both at peak DNI and normal incidence.
    """
    flux = cfg.dni.peak * eta(0.0, cfg.lens)
    dwells = []
    for sp in cfg.species.values():
        for stage in ("seedling", "established"):
            try:
                dwells.append(required_dwell(sp, flux, stage, cfg.max_dwell_s))
            except Untreatable:
                dwells.append(cfg.max_dwell_s)
            except ZeroFlux:
                raise ValidationError("peak delivered flux is zero; cannot derive a speed range") from None
    along = cfg.footprint.along_track_m
    return creep_speed(max(dwells), along), creep_speed(min(dwells), along)


def cmd_coverage(args) -> int:
    cfg = load_config(args.config)
    if args.surface:
        lo, hi = dose_speed_range(cfg)
        lo = args.speed_min if args.speed_min is not None else lo
        hi = args.speed_max if args.speed_max is not None else hi
        if not hi > lo:
            raise ValidationError(
                f"speed range [{lo:g}, {hi:g}] m/s is degenerate; pass --speed-min/--speed-max"
            )
        rows = coverage_surface(
            cfg.footprint,
            (args.area_min_ha * HECTARE_M2, args.area_max_ha * HECTARE_M2),
            (lo, hi),
            args.grid,
        )
        _emit(coverage_csv(rows), args.out)
        return 0
    area_ha = args.area_ha if args.area_ha is not None else cfg.area_ha
    speed = args.speed if args.speed is not None else cfg.speed_mps
    if area_ha is None or speed is None:
        raise ValidationError("area and speed are required (--area-ha/--speed or [coverage] area_ha/speed_mps)")
    if not area_ha > 0:
        raise ValidationError(f"total_area_m2 must be > 0, got area_ha={area_ha}")
    budget = args.budget_days if args.budget_days is not None else cfg.horizon_days
    verdict = coverage_verdict(CoverageQuery(area_ha * HECTARE_M2, speed, cfg.t_day_hours), cfg.footprint, budget)
    validate_json(verdict, "coverage.schema.json")
    _emit(dumps(verdict), args.out)
    return 0


# --------------------------------------------------------------------------
# plan / simulate / report
# --------------------------------------------------------------------------


def cmd_plan(args, argv) -> int:
    cfg = load_config(args.config)
    targets = load_targets_csv(args.targets)
    check_targets_in_field(targets, cfg.field, args.targets)
    plan = plan_treatment(targets, cfg.scenario(), with_mapping=not args.no_mapping)
    doc = plan_to_dict(plan, targets, cfg.scenario(), cfg.t_day_hours)
    write_json(doc, args.out, "plan.schema.json")
    _write_sidecar(args.out, argv)
    n_days = sum(1 for d in plan.days if d.visits)
    print(f"planned {len(plan.served)} visits over {n_days} day(s); unserved {len(plan.unserved)} -> {args.out}")
    return 0


def cmd_simulate(args, argv) -> int:
    plan, targets, scenario, t_day = plan_from_dict(read_json(args.plan))
    dni = load_dni_csv(args.dni) if args.dni else None
    report = simulate(plan, targets, scenario, dni)
    doc = report_to_dict(report, plan, t_day)
    write_json(doc, args.out, "simulation.schema.json")
    _write_sidecar(args.out, argv)
    s = doc["summary"]
    print(f"{s['verdict']}: treated {s['treated']}/{s['targets_total']}, violations {s['violations']} -> {args.out}")
    return 0


def format_report(doc: dict) -> str:
    s = doc["summary"]
    lines = [
        f"verdict                 {s['verdict']}",
        f"site latitude           {doc['site']['latitude_deg']:g} deg, theta_max {doc['theta_max']:g} deg",
        f"targets                 {s['targets_total']} (treated {s['treated']}, unserved {s['unserved']})",
        f"visits                  {s['visits']}",
        f"violations              {s['violations']}",
        f"transit distance        {s['total_distance_m']:.1f} m",
        f"energy on target        {s['total_energy_j'] / 1e3:.1f} kJ",
        f"required dwell (min)    {s['required_dwell_hours']:.3f} h",
        f"available window        {s['available_window_hours']:.3f} h "
        f"(mean {s['mean_window_hours']:.3f} h/day)",
        f"note                    {s['t_day_note']}",
    ]
    if s["same_day_mapping_days"]:
        lines.append(f"same-day map+treat      days {', '.join(str(d) for d in s['same_day_mapping_days'])}")
    lines.append("")
    lines.append("visits:")
    for o in doc["outcomes"]:
        lines.append(
            f"  day {o['day']:>3}  {o['target']:<12} arrive {o['arrival']:.4f} h  dwell {o['dwell_s']:7.2f} s  "
            f"dose {o['dose_jm2'] / 1e3:9.1f} kJ/m2  {o['outcome']}"
        )
    if doc["unserved"]:
        lines.append("unserved: " + ", ".join(doc["unserved"]))
    for v in doc["violations"]:
        lines.append(f"VIOLATION {v['code']} day={v['day']} target={v['target']}: {v['detail']}")
    return "\n".join(lines) + "\n"


def cmd_report(args) -> int:
    doc = read_json(args.sim)
    validate_json(doc, "simulation.schema.json")
    sys.stdout.write(format_report(doc))
    return 0


def cmd_run(args, argv) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    plan_path, sim_path = str(out / "plan.json"), str(out / "simulation.json")
    cmd_plan(argparse.Namespace(config=args.config, targets=args.targets, out=plan_path, no_mapping=False), argv)
    cmd_simulate(argparse.Namespace(plan=plan_path, out=sim_path, dni=None), argv)
    return cmd_report(argparse.Namespace(sim=sim_path))


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="solarweed", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("window", help="daily high-sun window length")
    w.add_argument("--lat", type=float, help="latitude, degrees")
    w.add_argument("--delta", type=float, help="solar declination, degrees")
    w.add_argument("--day", type=int, help="day of year (declination from Cooper's formula)")
    w.add_argument("--theta-max", type=float, default=25.0, help="zenith threshold, degrees (default 25)")
    w.add_argument("--verify", action="store_true", help="compare with a 1 s brute-force scan")
    w.add_argument("--sweep", action="store_true", help="emit the (latitude, declination) grid as CSV")
    w.add_argument("--step", type=float, default=0.5, help="sweep grid step, degrees")
    w.add_argument("--out", help="write CSV here instead of stdout")

    e = sub.add_parser("efficiency-curve", help="optical efficiency versus incidence angle (CSV)")
    e.add_argument("--config", required=True)
    e.add_argument("--step", type=float, default=1.0)
    e.add_argument("--out")

    c = sub.add_parser("coverage", help="blanket-coverage time and days")
    c.add_argument("--config", required=True)
    c.add_argument("--area-ha", type=float)
    c.add_argument("--speed", type=float, help="m/s")
    c.add_argument("--budget-days", type=float, help="defaults to [site] horizon_days")
    c.add_argument("--surface", action="store_true", help="emit the (area, speed) grid as CSV")
    c.add_argument("--area-min-ha", type=float, default=0.1)
    c.add_argument("--area-max-ha", type=float, default=0.5)
    c.add_argument("--speed-min", type=float)
    c.add_argument("--speed-max", type=float)
    c.add_argument("--grid", type=int, default=9)
    c.add_argument("--out")

    pl = sub.add_parser("plan", help="plan mapping and treatment")
    pl.add_argument("--config", required=True)
    pl.add_argument("--targets", required=True)
    pl.add_argument("--out", required=True)
    pl.add_argument("--no-mapping", action="store_true", help="skip the mapping pass")

    s = sub.add_parser("simulate", help="replay a plan at 1 s resolution")
    s.add_argument("--plan", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--dni", help="override DNI profile CSV (solar_time_h,dni_wm2)")

    r = sub.add_parser("report", help="human-readable verdict from a simulation report")
    r.add_argument("--sim", required=True)

    run = sub.add_parser("run", help="plan, simulate and report in one go")
    run.add_argument("--config", required=True)
    run.add_argument("--targets", required=True)
    run.add_argument("--out-dir", required=True)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        if args.command == "window":
            return cmd_window(args)
        if args.command == "efficiency-curve":
            return cmd_efficiency(args)
        if args.command == "coverage":
            return cmd_coverage(args)
        if args.command == "plan":
            return cmd_plan(args, argv)
        if args.command == "simulate":
            return cmd_simulate(args, argv)
        if args.command == "report":
            return cmd_report(args)
        if args.command == "run":
            return cmd_run(args, argv)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InfeasibleError as exc:
        print(f"infeasible: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
