import pytest
from hypothesis import given
from hypothesis import strategies as st

from solarweed.errors import Untreatable, ValidationError, ZeroFlux
from solarweed.thermal_dose import (
    DeliveredFlux,
    Stage,
    WeedSpecies,
    creep_speed,
    dwell_from_speed,
    load_species_csv,
    required_dwell,
)

positive = st.floats(1e-2, 1e6, allow_nan=False)


@pytest.fixture
def amaranthus():
    return WeedSpecies("amaranthus", 20.0, 30000.0, 1.5)


def test_reference_anchor_is_exact(amaranthus):
    assert required_dwell(amaranthus, 30000.0) == 20.0


def test_half_flux_doubles_dwell(amaranthus):
    assert required_dwell(amaranthus, 15000.0) == pytest.approx(40.0)


def test_delivered_flux_object(amaranthus):
    assert required_dwell(amaranthus, DeliveredFlux(900.0, 30000.0 / 900.0)) == pytest.approx(20.0)


def test_established_multiplier(amaranthus):
    assert required_dwell(amaranthus, 30000.0, Stage.ESTABLISHED) == pytest.approx(30.0)
    assert required_dwell(amaranthus, 30000.0, "established") == pytest.approx(30.0)


def test_zero_flux(amaranthus):
    with pytest.raises(ZeroFlux):
        required_dwell(amaranthus, 0.0)
    with pytest.raises(ZeroFlux):
        required_dwell(amaranthus, DeliveredFlux(0.0, 30.0))


def test_cap_raises_untreatable(amaranthus):
    with pytest.raises(Untreatable) as info:
        required_dwell(amaranthus, 3000.0)
    assert info.value.dwell_s == pytest.approx(200.0)
    assert required_dwell(amaranthus, 3000.0, max_dwell_s=None) == pytest.approx(200.0)


@given(positive, positive, st.floats(1.0, 5.0), positive, st.sampled_from(list(Stage)))
def test_dose_conservation(exposure, ref_flux, mult, flux, stage):
    sp = WeedSpecies("x", exposure, ref_flux, mult)
    dwell = required_dwell(sp, flux, stage, max_dwell_s=None)
    assert flux * dwell == pytest.approx(sp.lethal_dose_jm2(stage), rel=1e-9)


@pytest.mark.parametrize("dwell,length,speed", [(20, 0.02, 0.001), (10, 0.05, 0.005)])
def test_creep_speed(dwell, length, speed):
    assert creep_speed(dwell, length) == pytest.approx(speed)


@given(st.floats(0.1, 1000), st.floats(0.001, 10))
def test_creep_round_trip(dwell, length):
    assert dwell_from_speed(creep_speed(dwell, length), length) == pytest.approx(dwell, rel=1e-12)


def test_creep_rejects_zero():
    with pytest.raises(ValidationError):
        creep_speed(0, 1)


@pytest.mark.parametrize(
    "args",
    [("bad name", 20, 1, 1), ("ok", 0, 1, 1), ("ok", 20, -1, 1), ("ok", 20, 1, 0.5)],
)
def test_species_validation(args):
    with pytest.raises(ValidationError):
        WeedSpecies(*args)


def test_species_csv(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("name,reference_exposure_s,reference_flux_wm2,stage_multiplier_established\na,20,30000,1.5\n")
    table = load_species_csv(p)
    assert table["a"].lethal_dose_jm2() == 600000.0


@pytest.mark.parametrize(
    "body,match",
    [
        ("name,exposure\n", "header"),
        ("name,reference_exposure_s,reference_flux_wm2,stage_multiplier_established\na,20,30000\n", ":2"),
        ("name,reference_exposure_s,reference_flux_wm2,stage_multiplier_established\na,x,30000,1\n", ":2"),
        ("name,reference_exposure_s,reference_flux_wm2,stage_multiplier_established\na,1,1,1\na,1,1,1\n", "duplicate"),
        ("name,reference_exposure_s,reference_flux_wm2,stage_multiplier_established\n", "empty"),
    ],
)
def test_species_csv_errors(tmp_path, body, match):
    p = tmp_path / "s.csv"
    p.write_text(body)
    with pytest.raises(ValidationError, match=match):
        load_species_csv(p)


def test_species_csv_missing(tmp_path):
    with pytest.raises(ValidationError, match="does not exist"):
        load_species_csv(tmp_path / "nope.csv")
