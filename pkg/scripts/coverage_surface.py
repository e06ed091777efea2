"""Blanket-coverage time over area and speed, using a scenario's footprint and dose-derived speeds."""

import argparse
from pathlib import Path

from solarweed.cli import dose_speed_range
from solarweed.config import load_config
from solarweed.coverage import HECTARE_M2, CoverageQuery, coverage_surface, days_required
from solarweed.io import coverage_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=str(Path(__file__).resolve().parent.parent / "scenarios" / "sparse.ini"))
    ap.add_argument("--grid", type=int, default=9)
    ap.add_argument("--out", default="results/coverage_surface.csv")
    args = ap.parse_args()

    cfg = load_config(args.config)
    lo, hi = dose_speed_range(cfg)
    rows = coverage_surface(cfg.footprint, (0.1 * HECTARE_M2, 0.5 * HECTARE_M2), (lo, hi), args.grid)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(coverage_csv(rows), encoding="utf-8")
    print(f"speed range from dose model: [{lo:.4g}, {hi:.4g}] m/s; {len(rows)} cells -> {args.out}")
    for a, v, t in (min(rows, key=lambda r: r[2]), max(rows, key=lambda r: r[2])):
        d, whole = days_required(CoverageQuery(a, v, cfg.t_day_hours), cfg.footprint)
        print(f"  {a / HECTARE_M2:.1f} ha at {v:.4g} m/s: {t:8.2f} h = {d:6.2f} days of {cfg.t_day_hours:g} h ({whole} whole)")


if __name__ == "__main__":
    main()
