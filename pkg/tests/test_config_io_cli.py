import csv
import io
import json
import shutil

import pytest

from conftest import SCENARIOS
from solarweed.cli import dose_speed_range, main
from solarweed.config import load_config, load_dni_csv
from solarweed.errors import ValidationError
from solarweed.io import (
    COVERAGE_HEADER,
    EFFICIENCY_HEADER,
    TARGET_HEADER,
    WINDOW_HEADER,
    load_targets_csv,
    read_json,
    validate_json,
)

SPARSE_INI = str(SCENARIOS / "sparse.ini")
SPARSE_CSV = str(SCENARIOS / "sparse_targets.csv")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.reader(io.StringIO(text)))


@pytest.fixture
def ini(tmp_path):
    """Copy of the sparse scenario that a test may edit."""
    for name in ("sparse.ini", "species.csv", "dni_clear_sky.csv"):
        shutil.copy(SCENARIOS / name, tmp_path / name)
    return tmp_path / "sparse.ini"


class TestConfig:
    def test_loads_shipped_scenarios(self):
        for name in ("sparse.ini", "dense.ini"):
            cfg = load_config(SCENARIOS / name)
            assert cfg.horizon_days == 30 and cfg.t_day_hours == 3.5
            cfg.scenario()

    def test_missing_key_names_section(self, ini):
        ini.write_text(ini.read_text().replace("peak_concentration = 40", ""))
        with pytest.raises(ValidationError, match=r"\[lens\].*peak_concentration"):
            load_config(ini)

    def test_bad_value_names_section(self, ini):
        ini.write_text(ini.read_text().replace("refractive_index = 1.49", "refractive_index = 0.9"))
        with pytest.raises(ValidationError, match=r"\[lens\]"):
            load_config(ini)

    def test_bad_stage(self, ini):
        ini.write_text(ini.read_text().replace("stage = seedling", "stage = adult"))
        with pytest.raises(ValidationError, match="stage"):
            load_config(ini)

    def test_dni_profile(self, ini):
        ini.write_text(ini.read_text().replace("dni_wm2 = 900", "dni_profile_csv = dni_clear_sky.csv"))
        assert not load_config(ini).dni.is_constant

    def test_dni_header(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("t,dni\n12,900\n")
        with pytest.raises(ValidationError, match="header"):
            load_dni_csv(p)

    def test_speed_range_from_dose(self):
        lo, hi = dose_speed_range(load_config(SPARSE_INI))
        assert 0 < lo < hi


class TestTargetsCsv:
    def test_header_and_rows(self):
        ts = load_targets_csv(SPARSE_CSV)
        assert len(ts) == 10
        assert (SCENARIOS / "sparse_targets.csv").read_text().splitlines()[0] == ",".join(TARGET_HEADER)

    @pytest.mark.parametrize(
        "body,match",
        [
            ("id,x,y\n", "header"),
            ("id,x_m,y_m,species,detected_day\na,1,2,sp\n", ":2"),
            ("id,x_m,y_m,species,detected_day\na,one,2,sp,1\n", ":2"),
            ("id,x_m,y_m,species,detected_day\na b,1,2,sp,1\n", ":2"),
        ],
    )
    def test_errors_name_row(self, tmp_path, body, match):
        p = tmp_path / "t.csv"
        p.write_text(body)
        with pytest.raises(ValidationError, match=match):
            load_targets_csv(p)


class TestWindowCommand:
    def test_equator(self, capsys):
        code, out, _ = run(capsys, "window", "--lat", "0", "--delta", "0", "--theta-max", "25")
        assert code == 0 and "3.333 h" in out

    def test_empty(self, capsys):
        code, out, _ = run(capsys, "window", "--lat", "0", "--delta", "23.45", "--theta-max", "20")
        assert code == 0 and "0.000 h" in out and "empty" in out

    def test_verify(self, capsys):
        code, out, _ = run(capsys, "window", "--lat", "0", "--delta", "23.45", "--theta-max", "25", "--verify")
        diff = float(next(l for l in out.splitlines() if l.startswith("difference")).split()[1])
        assert code == 0 and diff <= 2.0

    def test_day_flag(self, capsys):
        code, out, _ = run(capsys, "window", "--lat", "0", "--day", "172")
        assert code == 0 and "day 172" in out

    def test_sweep_csv(self, capsys):
        code, out, _ = run(capsys, "window", "--sweep", "--step", "23.45")
        rows = rows_of(out)
        assert code == 0 and rows[0] == WINDOW_HEADER and len(rows) == 10

    @pytest.mark.parametrize(
        "argv",
        [
            ("window", "--lat", "0", "--delta", "30"),
            ("window", "--lat", "0", "--delta", "0", "--theta-max", "95"),
            ("window", "--lat", "0"),
            ("window", "--lat", "0", "--day", "400"),
        ],
    )
    def test_invalid_ranges_exit_2(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 2 and err.startswith("error:")

    def test_argparse_errors_exit_2(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["window", "--lat", "north"])
        assert info.value.code == 2


class TestEfficiencyAndCoverage:
    def test_efficiency_curve(self, capsys):
        code, out, _ = run(capsys, "efficiency-curve", "--config", SPARSE_INI)
        rows = rows_of(out)
        assert code == 0 and rows[0] == EFFICIENCY_HEADER and len(rows) == 87
        norm = [float(r[-1]) for r in rows[1:]]
        assert norm[0] == 1.0 and all(a > b for a, b in zip(norm, norm[1:]))

    def test_coverage_reference(self, capsys):
        code, out, _ = run(capsys, "coverage", "--config", SPARSE_INI, "--area-ha", "0.1", "--speed", "0.05")
        doc = json.loads(out)
        validate_json(doc, "coverage.schema.json")
        assert code == 0 and doc["days_whole"] == 16
        assert doc["t_total_hours"] == pytest.approx(55.56, abs=0.01)
        assert doc["days_fractional"] == pytest.approx(15.87, abs=0.01)

    def test_coverage_zero_area(self, capsys):
        code, _, err = run(capsys, "coverage", "--config", SPARSE_INI, "--area-ha", "0", "--speed", "0.05")
        assert code == 2 and "total_area_m2" in err

    def test_surface(self, capsys):
        code, out, _ = run(capsys, "coverage", "--config", SPARSE_INI, "--surface", "--grid", "3")
        rows = rows_of(out)
        assert code == 0 and rows[0] == COVERAGE_HEADER and len(rows) == 10
        vals = [tuple(map(float, r)) for r in rows[1:]]
        assert min(vals, key=lambda r: r[2])[0] == 1000 and max(vals, key=lambda r: r[2])[0] == 5000

    def test_missing_config_exit_2(self, capsys, tmp_path):
        code, _, err = run(capsys, "efficiency-curve", "--config", str(tmp_path / "none.ini"))
        assert code == 2 and "does not exist" in err


class TestPipeline:
    def test_plan_simulate_report(self, capsys, tmp_path):
        plan, sim = str(tmp_path / "plan.json"), str(tmp_path / "sim.json")
        assert run(capsys, "plan", "--config", SPARSE_INI, "--targets", SPARSE_CSV, "--out", plan)[0] == 0
        assert (tmp_path / "plan.json.meta.json").exists()
        assert run(capsys, "simulate", "--plan", plan, "--out", sim)[0] == 0
        doc = read_json(sim)
        visits = [v["target"] for d in read_json(plan)["days"] for v in d["visits"]]
        assert sorted(o["target"] for o in doc["outcomes"]) == sorted(visits)
        assert len(visits) == len(set(visits))
        code, out, _ = run(capsys, "report", "--sim", sim)
        assert code == 0 and "SPARSE_FEASIBLE" in out and "3.5 h" in out

    def test_resimulation_is_byte_identical(self, capsys, tmp_path):
        plan = str(tmp_path / "plan.json")
        run(capsys, "plan", "--config", SPARSE_INI, "--targets", SPARSE_CSV, "--out", plan)
        outs = []
        for k in range(2):
            path = tmp_path / f"sim{k}.json"
            run(capsys, "simulate", "--plan", plan, "--out", str(path))
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]

    def test_replanning_is_byte_identical(self, capsys, tmp_path):
        outs = []
        for k in range(2):
            path = tmp_path / f"plan{k}.json"
            run(capsys, "plan", "--config", SPARSE_INI, "--targets", SPARSE_CSV, "--out", str(path))
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]

    def test_no_window_exit_3(self, capsys, ini, tmp_path):
        text = ini.read_text().replace("start_day = 274", "start_day = 172").replace("horizon_days = 30", "horizon_days = 1")
        ini.write_text(text.replace("latitude_deg = -7.23", "latitude_deg = -20").replace("theta_max_deg = 25", "theta_max_deg = 10"))
        code, _, err = run(capsys, "plan", "--config", str(ini), "--targets", SPARSE_CSV, "--out", str(tmp_path / "p.json"))
        assert code == 3 and "NoWindow" in err

    def test_target_outside_field_exit_2(self, capsys, tmp_path):
        p = tmp_path / "t.csv"
        p.write_text("id,x_m,y_m,species,detected_day\nfar,100,1,amaranthus_retroflexus,274\n")
        code, _, err = run(capsys, "plan", "--config", SPARSE_INI, "--targets", str(p), "--out", str(tmp_path / "p.json"))
        assert code == 2 and "t.csv:2" in err and "far" in err

    def test_tampered_plan_exit_2(self, capsys, tmp_path):
        plan = tmp_path / "plan.json"
        run(capsys, "plan", "--config", SPARSE_INI, "--targets", SPARSE_CSV, "--out", str(plan))
        doc = json.loads(plan.read_text())
        doc["days"][0]["visits"].append({"target": "x", "arrival": 12.0})
        plan.write_text(json.dumps(doc))
        code, _, err = run(capsys, "simulate", "--plan", str(plan), "--out", str(tmp_path / "s.json"))
        assert code == 2 and "plan.schema.json" in err

    def test_run_command(self, capsys, tmp_path):
        code, out, _ = run(capsys, "run", "--config", SPARSE_INI, "--targets", SPARSE_CSV, "--out-dir", str(tmp_path))
        assert code == 0 and "SPARSE_FEASIBLE" in out
