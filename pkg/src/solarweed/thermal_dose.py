"""Linear energy-dose model: required dwell under a delivered focal flux.

A species is calibrated by one reference point (exposure seconds at a
reference flux). Required dwell scales inversely with delivered flux.
"""

from __future__ import annotations

import csv
import enum
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import Untreatable, ValidationError, ZeroFlux

DEFAULT_DNI_WM2 = 900.0
DEFAULT_MAX_DWELL_S = 120.0
SPECIES_HEADER = ["name", "reference_exposure_s", "reference_flux_wm2", "stage_multiplier_established"]
IDENT = re.compile(r"^[A-Za-z0-9_-]+$")


class Stage(str, enum.Enum):
    SEEDLING = "seedling"
    ESTABLISHED = "established"


@dataclass(frozen=True)
class WeedSpecies:
    name: str
    reference_exposure_s: float
    reference_flux_wm2: float
    established_multiplier: float = 1.0

    def __post_init__(self):
        if not IDENT.match(self.name):
            raise ValidationError(f"species name {self.name!r} must match [A-Za-z0-9_-]+")
        if not self.reference_exposure_s > 0:
            raise ValidationError(f"{self.name}: reference_exposure_s must be > 0")
        if not self.reference_flux_wm2 > 0:
            raise ValidationError(f"{self.name}: reference_flux_wm2 must be > 0")
        if not self.established_multiplier >= 1:
            raise ValidationError(f"{self.name}: stage_multiplier_established must be >= 1")

    def multiplier(self, stage: Stage | str = Stage.SEEDLING) -> float:
        return self.established_multiplier if Stage(stage) is Stage.ESTABLISHED else 1.0

    def lethal_dose_jm2(self, stage: Stage | str = Stage.SEEDLING) -> float:
        """Energy per unit area (J/m^2) that kills this species at the given stage."""
        return self.reference_flux_wm2 * self.reference_exposure_s * self.multiplier(stage)


@dataclass(frozen=True)
class DeliveredFlux:
    dni_wm2: float
    eta: float

    def __post_init__(self):
        if self.dni_wm2 < 0 or self.eta < 0:
            raise ValidationError("DNI and efficiency must be >= 0")

    @property
    def flux_wm2(self) -> float:
        return self.dni_wm2 * self.eta


def required_dwell(
    species: WeedSpecies,
    flux: DeliveredFlux | float,
    stage: Stage | str = Stage.SEEDLING,
    max_dwell_s: float | None = DEFAULT_MAX_DWELL_S,
) -> float:
    """Seconds of exposure needed to deliver the species' lethal dose.

    Raises ZeroFlux when nothing is delivered and Untreatable when the dwell
    exceeds ``max_dwell_s`` (pass None to disable the cap).
    """
    f = flux.flux_wm2 if isinstance(flux, DeliveredFlux) else float(flux)
    if not f > 0:
        raise ZeroFlux("delivered flux is zero: treatment attempted outside usable irradiance")
    dwell = species.reference_exposure_s * (species.reference_flux_wm2 / f) * species.multiplier(stage)
    if max_dwell_s is not None and dwell > max_dwell_s:
        raise Untreatable(dwell, max_dwell_s)
    return dwell


def creep_speed(dwell_s: float, footprint_along_track_m: float) -> float:
    """Speed at which a ground point stays under the footprint for ``dwell_s``."""
    if not dwell_s > 0 or not footprint_along_track_m > 0:
        raise ValidationError("dwell and footprint length must be > 0")
    return footprint_along_track_m / dwell_s


def dwell_from_speed(speed_mps: float, footprint_along_track_m: float) -> float:
    if not speed_mps > 0 or not footprint_along_track_m > 0:
        raise ValidationError("speed and footprint length must be > 0")
    return footprint_along_track_m / speed_mps


def load_species_csv(path: str | Path) -> dict[str, WeedSpecies]:
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"file {path} does not exist")
    table: dict[str, WeedSpecies] = {}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != SPECIES_HEADER:
            raise ValidationError(f"{path}: header must be {','.join(SPECIES_HEADER)}, got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(SPECIES_HEADER):
                raise ValidationError(f"{path}:{lineno}: expected {len(SPECIES_HEADER)} fields")
            try:
                sp = WeedSpecies(row[0], float(row[1]), float(row[2]), float(row[3]))
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from None
            if sp.name in table:
                raise ValidationError(f"{path}:{lineno}: duplicate species {sp.name!r}")
            table[sp.name] = sp
    if not table:
        raise ValidationError(f"{path}: species table is empty")
    return table
