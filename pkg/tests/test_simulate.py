import dataclasses

import numpy as np
import pytest

from conftest import make_scenario, random_targets
from solarweed.planner import DniProfile, MissionPlan, Visit, WeedTarget, plan_treatment
from solarweed.simulate import (
    DUPLICATE_VISIT,
    MAPPING_IN_WINDOW,
    NOT_YET_DETECTED,
    OUT_OF_WINDOW,
    OVERLAP,
    SERVED_AND_UNSERVED,
    UNACCOUNTED_TARGET,
    UNKNOWN_TARGET,
    WINDOW_MISMATCH,
    _travel,
    simulate,
)


@pytest.fixture
def case():
    sc = make_scenario(horizon_days=2)
    targets = random_targets(np.random.default_rng(8), 12, sc.field, detected=274)
    return sc, targets, plan_treatment(targets, sc)


def with_visits(plan, day_index, visits, unserved=None):
    days = [dataclasses.replace(d, visits=list(d.visits)) for d in plan.days]
    days[day_index].visits = visits
    return dataclasses.replace(plan, days=days, unserved=plan.unserved if unserved is None else unserved)


def test_planner_output_is_clean(case):
    sc, targets, plan = case
    report = simulate(plan, targets, sc)
    assert report.violations == []
    assert sorted(report.treated) == sorted(t.id for t in targets)
    assert all(o.dose_jm2 >= o.required_jm2 * (1 - 1e-9) for o in report.outcomes)


def test_visit_after_close_is_out_of_window(case):
    sc, targets, plan = case
    d0 = plan.days[0]
    late = Visit(d0.visits[0].target_id, d0.window.end_solar_time + 10 / 60, d0.visits[0].dwell_s)
    bad = with_visits(plan, 0, [late] + d0.visits[1:])
    assert OUT_OF_WINDOW in simulate(bad, targets, sc).violation_codes()


def test_teleporting_is_overlap(case):
    sc, targets, plan = case
    v = plan.days[0].visits
    squeezed = [v[0], dataclasses.replace(v[1], arrival_h=v[0].arrival_h)]
    bad = with_visits(plan, 0, squeezed + v[2:])
    assert OVERLAP in simulate(bad, targets, sc).violation_codes()


def test_duplicate_and_unknown(case):
    sc, targets, plan = case
    v = plan.days[0].visits
    extra = [Visit("ghost", v[-1].arrival_h, 1.0), dataclasses.replace(v[0], arrival_h=v[-1].arrival_h + 0.01)]
    codes = simulate(with_visits(plan, 0, v + extra), targets, sc).violation_codes()
    assert UNKNOWN_TARGET in codes and DUPLICATE_VISIT in codes


def test_unaccounted_and_double_listed(case):
    sc, targets, plan = case
    v = plan.days[0].visits
    codes = simulate(with_visits(plan, 0, v[1:], unserved=[v[1].target_id]), targets, sc).violation_codes()
    assert UNACCOUNTED_TARGET in codes and SERVED_AND_UNSERVED in codes


def test_not_yet_detected(case):
    sc, targets, plan = case
    late = [dataclasses.replace(t, detected_day=300) if t.id == plan.days[0].visits[0].target_id else t for t in targets]
    assert NOT_YET_DETECTED in simulate(plan, late, sc).violation_codes()


def test_window_mismatch_and_mapping_overlap(case):
    sc, targets, plan = case
    d0 = plan.days[0]
    shifted = dataclasses.replace(d0.window, start_solar_time=d0.window.start_solar_time - 0.5)
    mp = dataclasses.replace(d0.mapping_pass, start_solar_time=d0.window.start_solar_time)
    days = [dataclasses.replace(d0, window=shifted, mapping_pass=mp)] + plan.days[1:]
    codes = simulate(dataclasses.replace(plan, days=days), targets, sc).violation_codes()
    assert WINDOW_MISMATCH in codes and MAPPING_IN_WINDOW in codes


def test_dim_sky_gives_insufficient_dose(case):
    sc, targets, plan = case
    report = simulate(plan, targets, sc, dni=DniProfile.constant(450.0))
    assert report.outcomes and not any(o.success for o in report.outcomes)
    assert report.verdict == "DENSE_INFEASIBLE"


def test_constant_flux_dose_is_flux_times_dwell(case):
    sc, targets, plan = case
    from solarweed import optics

    flux = 900.0 * optics.eta(0.0, sc.lens)
    for o in simulate(plan, targets, sc).outcomes:
        assert o.dose_jm2 == pytest.approx(flux * o.dwell_s, rel=5e-3)
        assert o.energy_j == pytest.approx(o.dose_jm2 * sc.footprint.area_m2)


def test_deterministic(case):
    sc, targets, plan = case
    assert simulate(plan, targets, sc) == simulate(plan, targets, sc)


def test_empty_plan():
    sc = make_scenario()
    report = simulate(MissionPlan(sc.latitude_deg, sc.start_day, sc.theta_max, [], []), [], sc)
    assert report.verdict == "SPARSE_FEASIBLE" and report.violations == []


@pytest.mark.parametrize("dist,speed", [(10.0, 0.25), (10.1, 0.25), (0.0, 1.0), (3.3, 0.7)])
def test_stepped_travel_matches_closed_form(dist, speed):
    secs, metres = _travel((0.0, 0.0), (dist, 0.0), speed)
    assert metres == pytest.approx(dist)
    assert secs == pytest.approx(dist / speed)


def test_unknown_species_target_rejected_by_planner_not_simulator():
    sc = make_scenario()
    with pytest.raises(ValueError):
        plan_treatment([WeedTarget("x", 1.0, 1.0, "unknown")], sc)
