"""Regenerate the shipped target fixtures in scenarios/.

sparse_targets.csv: 10 targets scattered over the 40 m x 25 m field.
dense_targets.csv:  one amaranthus target per footprint tile
                    (1.0 m along-track x 0.1 m cross-track) over 0.1 ha.
"""

from pathlib import Path

import numpy as np

from solarweed.io import write_targets_csv
from solarweed.planner import WeedTarget

HERE = Path(__file__).resolve().parent.parent / "scenarios"
SPECIES = ["amaranthus_retroflexus", "kochia_scoparia", "setaria_viridis", "digitaria_insularis"]


def sparse(seed: int = 7, n: int = 10) -> list[WeedTarget]:
    rng = np.random.default_rng(seed)
    xs = np.round(rng.uniform(0.5, 39.5, n), 3)
    ys = np.round(rng.uniform(0.5, 24.5, n), 3)
    sp = rng.integers(0, len(SPECIES), n)
    return [WeedTarget(f"s{i:02d}", float(x), float(y), SPECIES[k], 274) for i, (x, y, k) in enumerate(zip(xs, ys, sp))]


def dense(width=40.0, height=25.0, along=1.0, cross=0.1) -> list[WeedTarget]:
    nx, ny = int(round(width / along)), int(round(height / cross))
    out = []
    for i in range(nx):
        for j in range(ny):
            x = round((i + 0.5) * along, 6)
            y = round((j + 0.5) * cross, 6)
            out.append(WeedTarget(f"d{i:03d}_{j:03d}", x, y, "amaranthus_retroflexus", 100))
    return out


if __name__ == "__main__":
    write_targets_csv(sparse(), HERE / "sparse_targets.csv")
    write_targets_csv(dense(), HERE / "dense_targets.csv")
    print("wrote", HERE / "sparse_targets.csv", HERE / "dense_targets.csv")
