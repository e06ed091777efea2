"""Angle-dependent optical efficiency of a flat linear Fresnel lens.

eta(theta) = T(theta) * Cg(theta) * cos(theta), where T comes from
two-interface unpolarized Fresnel reflectance scaled by a nominal
transmittance and Cg from a named degradation model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable

from .errors import ValidationError

MAX_CURVE_ANGLE_DEG = 85.0


@dataclass(frozen=True)
class LensSpec:
    aperture_width: float
    focal_length: float
    refractive_index: float = 1.49
    nominal_transmittance: float = 1.0
    peak_concentration: float = 1.0
    concentration_model: str = "cosine"

    def __post_init__(self):
        if self.aperture_width <= 0 or self.focal_length <= 0:
            raise ValidationError("lens aperture_width and focal_length must be > 0")
        if not self.refractive_index > 1:
            raise ValidationError(f"lens refractive_index must be > 1, got {self.refractive_index}")
        if not 0 < self.nominal_transmittance <= 1:
            raise ValidationError(
                f"lens nominal_transmittance must lie in (0, 1], got {self.nominal_transmittance}"
            )
        if not self.peak_concentration >= 1:
            raise ValidationError(
                f"lens peak_concentration must be >= 1, got {self.peak_concentration}"
            )
        if self.concentration_model not in CONCENTRATION_MODELS:
            raise ValidationError(
                f"unknown concentration_model {self.concentration_model!r}; "
                f"choose one of {sorted(CONCENTRATION_MODELS)}"
            )


@dataclass(frozen=True)
class EfficiencySample:
    theta_i: float
    transmittance: float
    concentration: float
    cosine_factor: float
    eta: float
    eta_normalized: float


def _check_incidence(theta_i: float) -> None:
    if not 0.0 <= theta_i < 90.0:
        raise ValidationError(f"incidence angle must satisfy 0 <= theta_i < 90, got {theta_i}")


def interface_reflectance(theta: float, n1: float, n2: float) -> tuple[float, float]:
    """Unpolarized reflectance at one planar interface and the refraction angle.

    ``theta`` in radians, measured in medium n1. Returns (R, theta_t) with
    R = (Rs + Rp) / 2. Total internal reflection gives R = 1.
    """
    s = n1 * math.sin(theta) / n2
    if s >= 1.0:
        return 1.0, math.pi / 2
    theta_t = math.asin(s)
    ci, ct = math.cos(theta), math.cos(theta_t)
    rs = ((n1 * ci - n2 * ct) / (n1 * ci + n2 * ct)) ** 2
    rp = ((n1 * ct - n2 * ci) / (n1 * ct + n2 * ci)) ** 2
    return 0.5 * (rs + rp), theta_t


def fresnel_transmittance(theta_i: float, lens: LensSpec) -> float:
    """Transmittance through the entry and exit faces, scaled by T0.

    The exit face is evaluated at the internal refraction angle. Bulk
    absorption is assumed to be folded into T0.
    """
    _check_incidence(theta_i)
    n = lens.refractive_index
    r_entry, theta_t = interface_reflectance(math.radians(theta_i), 1.0, n)
    r_exit, _ = interface_reflectance(theta_t, n, 1.0)
    return lens.nominal_transmittance * (1.0 - r_entry) * (1.0 - r_exit)


# Concentration degradation models: (theta_i in degrees, lens) -> Cg.
# Each must return Cg0 at normal incidence and be non-increasing and >= 0.
ConcentrationModel = Callable[[float, LensSpec], float]


def _cosine(theta_i: float, lens: LensSpec) -> float:
    return lens.peak_concentration * math.cos(math.radians(theta_i))


def _cosine_squared(theta_i: float, lens: LensSpec) -> float:
    return lens.peak_concentration * math.cos(math.radians(theta_i)) ** 2


def _flat(theta_i: float, lens: LensSpec) -> float:
    # no blur; only transmittance and projection degrade
    return lens.peak_concentration


CONCENTRATION_MODELS: "MappingProxyType[str, ConcentrationModel]" = MappingProxyType(
    {
        "cosine": _cosine,
        "cosine_squared": _cosine_squared,
        "flat": _flat,
    }
)


def concentration_ratio(theta_i: float, lens: LensSpec, model: str | None = None) -> float:
    _check_incidence(theta_i)
    name = model or lens.concentration_model
    try:
        fn = CONCENTRATION_MODELS[name]
    except KeyError:
        raise ValidationError(f"unknown concentration model {name!r}") from None
    return fn(theta_i, lens)


def _raw_eta(theta_i: float, lens: LensSpec, model: str | None):
    t = fresnel_transmittance(theta_i, lens)
    cg = concentration_ratio(theta_i, lens, model)
    c = math.cos(math.radians(theta_i))
    return t, cg, c, t * cg * c


def efficiency(theta_i: float, lens: LensSpec, model: str | None = None) -> EfficiencySample:
    """Optical efficiency at one incidence angle, with its three factors."""
    t, cg, c, eta = _raw_eta(theta_i, lens, model)
    eta0 = _raw_eta(0.0, lens, model)[3]
    return EfficiencySample(theta_i, t, cg, c, eta, eta / eta0)


def eta(theta_i: float, lens: LensSpec, model: str | None = None) -> float:
    return _raw_eta(theta_i, lens, model)[3]


def compensation_angle(theta_z: float) -> float:
    """Single-axis lens tilt that zeroes the in-plane incidence angle."""
    if not 0.0 <= theta_z < 90.0:
        raise ValidationError(f"zenith angle must satisfy 0 <= theta_z < 90, got {theta_z}")
    return theta_z


def incidence_after_tracking(theta_z: float, compensated: bool = True) -> float:
    """Effective incidence angle on the lens for a given zenith angle."""
    if compensated:
        return theta_z - compensation_angle(theta_z)
    return theta_z


def efficiency_curve(
    lens: LensSpec, step_degrees: float = 1.0, model: str | None = None
) -> list[EfficiencySample]:
    """Efficiency samples over [0, 85] deg in ascending order."""
    if step_degrees <= 0:
        raise ValidationError(f"step must be > 0, got {step_degrees}")
    n = int(math.floor(MAX_CURVE_ANGLE_DEG / step_degrees + 1e-9))
    return [efficiency(k * step_degrees, lens, model) for k in range(n + 1)]
