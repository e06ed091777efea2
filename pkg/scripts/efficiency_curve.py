"""Efficiency versus incidence angle for each concentration model and two lens indices."""

import argparse
from pathlib import Path

from solarweed.io import efficiency_csv
from solarweed.optics import CONCENTRATION_MODELS, LensSpec, efficiency_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    for n in (1.49, 1.6):
        for model in sorted(CONCENTRATION_MODELS):
            lens = LensSpec(1.0, 1.2, n, 0.9, 40.0, model)
            curve = efficiency_curve(lens)
            path = out / f"efficiency_n{n:g}_{model}.csv"
            path.write_text(efficiency_csv(curve), encoding="utf-8")
            half = next((s.theta_i for s in curve if s.eta_normalized < 0.5), None)
            print(f"n={n:<4g} {model:<15} T(0)={curve[0].transmittance:.4f}  eta_norm<0.5 from {half} deg -> {path}")


if __name__ == "__main__":
    main()
