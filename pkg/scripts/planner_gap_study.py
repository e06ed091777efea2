"""Heuristic planner versus the exhaustive optimum on small single-day instances.

Sweeps the window length (via theta_max) and target count, and prints the
distribution of (optimum - served) per setting.
"""

import argparse
import dataclasses
from collections import Counter

import numpy as np

from solarweed.coverage import Footprint
from solarweed.optics import LensSpec
from solarweed.planner import FieldMap, Scenario, UgvSpec, WeedTarget, exhaustive_max_served, plan_treatment
from solarweed.thermal_dose import WeedSpecies

SPECIES = {
    "fast": WeedSpecies("fast", 12.0, 30000.0),
    "mid": WeedSpecies("mid", 20.0, 30000.0),
    "slow": WeedSpecies("slow", 45.0, 30000.0),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    base = Scenario(
        latitude_deg=0.0, field=FieldMap(20.0, 20.0, 1.0), ugv=UgvSpec(0.1), lens=LensSpec(1.0, 1.2, 1.49, 0.9, 40.0),
        footprint=Footprint(1.0, 0.1), species=SPECIES, start_day=81,
    )
    print(f"{'theta_max':>9} {'n':>2}  gap distribution")
    for theta in (1.0, 1.5, 2.0, 3.0):
        sc = dataclasses.replace(base, theta_max=theta)
        for n in (4, 6, 8):
            gaps = Counter()
            for _ in range(args.trials):
                xs, ys = rng.uniform(0, 20, n), rng.uniform(0, 20, n)
                sp = rng.choice(sorted(SPECIES), n)
                ts = [WeedTarget(f"t{i}", float(x), float(y), str(s), 81) for i, (x, y, s) in enumerate(zip(xs, ys, sp))]
                served = len(plan_treatment(ts, sc, with_mapping=False).days[0].visits)
                gaps[exhaustive_max_served(ts, sc) - served] += 1
            print(f"{theta:9.1f} {n:2d}  " + "  ".join(f"gap {g}: {c}" for g, c in sorted(gaps.items())))


if __name__ == "__main__":
    main()
