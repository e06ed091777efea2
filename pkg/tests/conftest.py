from pathlib import Path

import numpy as np
import pytest

from solarweed.coverage import Footprint
from solarweed.optics import LensSpec
from solarweed.planner import FieldMap, Scenario, UgvSpec, WeedTarget
from solarweed.thermal_dose import WeedSpecies

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"

SPECIES = {
    "amaranthus": WeedSpecies("amaranthus", 20.0, 30000.0, 1.5),
    "setaria": WeedSpecies("setaria", 12.0, 30000.0, 2.0),
    "digitaria": WeedSpecies("digitaria", 45.0, 30000.0, 2.5),
}


def make_lens(**kw) -> LensSpec:
    base = dict(aperture_width=1.0, focal_length=1.2, refractive_index=1.49, nominal_transmittance=0.9,
                peak_concentration=40.0)
    base.update(kw)
    return LensSpec(**base)


def make_scenario(**kw) -> Scenario:
    base = dict(
        latitude_deg=-7.23,
        field=FieldMap(40.0, 25.0, 1.0),
        ugv=UgvSpec(0.25, 10.0),
        lens=make_lens(),
        footprint=Footprint(1.0, 0.1),
        species=SPECIES,
        start_day=274,
        horizon_days=1,
    )
    base.update(kw)
    return Scenario(**base)


def random_targets(rng: np.random.Generator, n: int, field: FieldMap, species=tuple(SPECIES), detected=1):
    xs = rng.uniform(field.origin_x_m, field.origin_x_m + field.width_m, n)
    ys = rng.uniform(field.origin_y_m, field.origin_y_m + field.height_m, n)
    sp = rng.integers(0, len(species), n)
    return [WeedTarget(f"t{i:02d}", float(x), float(y), species[k], detected) for i, (x, y, k) in enumerate(zip(xs, ys, sp))]


@pytest.fixture
def lens():
    return make_lens()


@pytest.fixture
def scenario():
    return make_scenario()
