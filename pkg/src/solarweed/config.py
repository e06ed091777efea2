"""Scenario configuration files (INI: flat key = value pairs under sections).

Units follow the key suffix: ``_deg`` degrees, ``_m`` metres, ``_s``
seconds, ``_h``/``_hours`` hours, ``_mps`` metres per second, ``_wm2``
watts per square metre, ``_ha`` hectares.
"""

from __future__ import annotations

import configparser
import csv
from dataclasses import dataclass, field
from pathlib import Path

from .coverage import DEFAULT_HOURS_PER_DAY, Footprint
from .errors import ValidationError
from .optics import LensSpec
from .planner import DniProfile, FieldMap, Scenario, UgvSpec
from .thermal_dose import DEFAULT_DNI_WM2, DEFAULT_MAX_DWELL_S, Stage, WeedSpecies, load_species_csv


@dataclass
class MissionConfig:
    latitude_deg: float
    lens: LensSpec
    footprint: Footprint
    ugv: UgvSpec
    field: FieldMap
    species: dict[str, WeedSpecies]
    theta_max_deg: float = 25.0
    start_day: int = 1
    horizon_days: int = 30
    stage: Stage = Stage.SEEDLING
    dni: DniProfile = field(default_factory=DniProfile.constant)
    max_dwell_s: float = DEFAULT_MAX_DWELL_S
    t_day_hours: float = DEFAULT_HOURS_PER_DAY
    area_ha: float | None = None
    speed_mps: float | None = None
    source: Path | None = None

    def scenario(self) -> Scenario:
        return Scenario(
            latitude_deg=self.latitude_deg,
            field=self.field,
            ugv=self.ugv,
            lens=self.lens,
            footprint=self.footprint,
            species=self.species,
            theta_max=self.theta_max_deg,
            start_day=self.start_day,
            horizon_days=self.horizon_days,
            stage=self.stage,
            dni=self.dni,
            max_dwell_s=self.max_dwell_s,
        )


class _Reader:
    def __init__(self, parser: configparser.ConfigParser, path: Path):
        self.p = parser
        self.path = path

    def _raw(self, section, key, default):
        if self.p.has_option(section, key):
            return self.p.get(section, key).strip()
        if default is _REQUIRED:
            raise ValidationError(f"{self.path}: missing [{section}] {key}")
        return default

    def num(self, section, key, default=None, cast=float):
        raw = self._raw(section, key, default)
        if raw is None or not isinstance(raw, str):
            return raw
        try:
            return cast(raw)
        except ValueError:
            raise ValidationError(f"{self.path}: [{section}] {key} = {raw!r} is not a valid number") from None

    def text(self, section, key, default=None):
        return self._raw(section, key, default)

    def flag(self, section, key, default=False):
        raw = self._raw(section, key, None)
        if raw is None:
            return default
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ValidationError(f"{self.path}: [{section}] {key} = {raw!r} is not a boolean")


_REQUIRED = object()


def _wrap(section: str, build):
    try:
        return build()
    except ValidationError as exc:
        raise ValidationError(f"[{section}] {exc}") from None


def load_dni_csv(path: str | Path) -> DniProfile:
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"file {path} does not exist")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["solar_time_h", "dni_wm2"]:
        raise ValidationError(f"{path}: header must be solar_time_h,dni_wm2")
    times, values = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            times.append(float(row[0]))
            values.append(float(row[1]))
        except (ValueError, IndexError):
            raise ValidationError(f"{path}:{lineno}: expected two numbers") from None
    try:
        return DniProfile(tuple(times), tuple(values))
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from None


def load_config(path: str | Path) -> MissionConfig:
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"config file {path} does not exist")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ValidationError(f"{path}: {exc}") from None
    r = _Reader(parser, path)
    base = path.parent
    R = _REQUIRED

    lens = _wrap("lens", lambda: LensSpec(
        aperture_width=r.num("lens", "aperture_width_m", R),
        focal_length=r.num("lens", "focal_length_m", R),
        refractive_index=r.num("lens", "refractive_index", 1.49),
        nominal_transmittance=r.num("lens", "nominal_transmittance", 1.0),
        peak_concentration=r.num("lens", "peak_concentration", R),
        concentration_model=r.text("lens", "concentration_model", "cosine"),
    ))
    footprint = _wrap("footprint", lambda: Footprint(
        r.num("footprint", "along_track_m", R), r.num("footprint", "cross_track_m", R)
    ))
    ugv = _wrap("ugv", lambda: UgvSpec(
        transit_speed_mps=r.num("ugv", "transit_speed_mps", R),
        turn_time_s=r.num("ugv", "turn_time_s", 0.0),
        start_x_m=r.num("ugv", "start_x_m", 0.0),
        start_y_m=r.num("ugv", "start_y_m", 0.0),
        compensated=r.flag("ugv", "compensated", True),
    ))
    field_map = _wrap("field", lambda: FieldMap(
        width_m=r.num("field", "width_m", R),
        height_m=r.num("field", "height_m", R),
        row_spacing_m=r.num("field", "row_spacing_m", R),
        row_axis=r.text("field", "row_axis", "x"),
        origin_x_m=r.num("field", "origin_x_m", 0.0),
        origin_y_m=r.num("field", "origin_y_m", 0.0),
    ))

    species_file = r.text("dose", "species_csv", R)
    species = load_species_csv(base / species_file)
    dni_file = r.text("dose", "dni_profile_csv", None)
    dni = load_dni_csv(base / dni_file) if dni_file else DniProfile.constant(
        r.num("dose", "dni_wm2", DEFAULT_DNI_WM2)
    )
    stage_raw = r.text("dose", "stage", "seedling")
    try:
        stage = Stage(stage_raw)
    except ValueError:
        raise ValidationError(f"{path}: [dose] stage must be seedling or established, got {stage_raw!r}") from None

    cfg = MissionConfig(
        latitude_deg=r.num("site", "latitude_deg", R),
        lens=lens,
        footprint=footprint,
        ugv=ugv,
        field=field_map,
        species=species,
        theta_max_deg=r.num("site", "theta_max_deg", 25.0),
        start_day=r.num("site", "start_day", 1, int),
        horizon_days=r.num("site", "horizon_days", 30, int),
        stage=stage,
        dni=dni,
        max_dwell_s=r.num("dose", "max_dwell_s", DEFAULT_MAX_DWELL_S),
        t_day_hours=r.num("coverage", "t_day_hours", DEFAULT_HOURS_PER_DAY),
        area_ha=r.num("coverage", "area_ha", None),
        speed_mps=r.num("coverage", "speed_mps", None),
        source=path,
    )
    if not -90 < cfg.latitude_deg < 90:
        raise ValidationError(f"{path}: [site] latitude_deg must satisfy |phi| < 90")
    if not cfg.t_day_hours > 0:
        raise ValidationError(f"{path}: [coverage] t_day_hours must be > 0")
    _wrap("site", cfg.scenario)
    return cfg
