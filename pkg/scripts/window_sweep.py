"""Daily high-sun window over the tropical (latitude, declination) grid.

Writes results/window_surface.csv and prints, for a few latitudes, the
declination that maximizes the window next to the one closest to the latitude.
"""

import argparse
import math
from pathlib import Path

from solarweed.io import window_csv
from solarweed.solar_geometry import solar_window, window_surface


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta-max", type=float, default=25.0)
    ap.add_argument("--step", type=float, default=0.5)
    ap.add_argument("--out", default="results/window_surface.csv")
    args = ap.parse_args()

    rows = window_surface(args.theta_max, grid_step=args.step)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(window_csv(rows), encoding="utf-8")
    best = max(rows, key=lambda r: r[2])
    print(f"{len(rows)} cells -> {args.out}; grid max {best[2]:.4f} h at phi={best[0]:g}, delta={best[1]:g}")

    c = math.cos(math.radians(args.theta_max))
    print(f"{'phi':>7} {'dt(delta=phi)':>14} {'best delta':>11} {'dt(best)':>9}")
    for phi in (-23.45, -10.0, 0.0, 10.0, 23.45):
        s = math.sin(math.radians(phi)) / c
        star = max(-23.45, min(23.45, math.degrees(math.asin(max(-1.0, min(1.0, s))))))
        print(
            f"{phi:7.2f} {solar_window(phi, phi, args.theta_max).delta_t:14.4f} "
            f"{star:11.3f} {solar_window(phi, star, args.theta_max).delta_t:9.4f}"
        )


if __name__ == "__main__":
    main()
