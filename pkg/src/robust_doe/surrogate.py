"""Single-degree-of-freedom stand-in for a vehicle/barrier crash simulation.

The barrier is an elastic spring whose stiffness grows with post and beam
section (thickness cubed), with the strain-rate-enhanced yield stress, and
shrinks with post spacing.  A vehicle of mass m hits it with the normal
component of its speed; peak acceleration and peak deflection then follow
from the closed-form undamped response.  Good enough to exercise the
pipeline, no claim of crash fidelity.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import InvalidArgument

G = 9.81
KMH_TO_MS = 1.0 / 3.6


@dataclass(frozen=True)
class SurrogateParams:
    strain_rate_C: float = 40.0
    strain_rate_P: float = 5.0
    strain_rate: float = 10.0
    impact_angle_deg: float = 20.0
    post_weight: float = 60000.0
    beam_weight: float = 40500.0
    deflection_scale: float = 1190.0

    def __post_init__(self):
        if self.strain_rate_C <= 0 or self.strain_rate_P <= 0:
            raise InvalidArgument("Cowper-Symonds C and P must be positive")
        if self.strain_rate < 0:
            raise InvalidArgument("strain rate must be nonnegative")
        if not 0 < self.impact_angle_deg < 90:
            raise InvalidArgument("impact angle must lie strictly between 0 and 90 degrees")
        if self.post_weight <= 0 or self.beam_weight <= 0 or self.deflection_scale <= 0:
            raise InvalidArgument("section weights and deflection scale must be positive")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CrashResponse:
    acceleration: float  # g
    deflection: float  # mm


def cowper_symonds(sigma0: float, strain_rate: float, C: float, P: float) -> float:
    """Dynamic yield stress ``sigma0 * (1 + (rate / C) ** (1 / P))``."""
    if C <= 0 or P <= 0:
        raise InvalidArgument("Cowper-Symonds C and P must be positive")
    if sigma0 <= 0:
        raise InvalidArgument("initial yield stress must be positive")
    if strain_rate < 0:
        raise InvalidArgument("strain rate must be nonnegative")
    return (1.0 + (strain_rate / C) ** (1.0 / P)) * sigma0


def barrier_stiffness(post_thickness, beam_thickness, post_spacing, yield_stress, params: SurrogateParams) -> float:
    sigma_d = cowper_symonds(yield_stress, params.strain_rate, params.strain_rate_C, params.strain_rate_P)
    section = params.post_weight * post_thickness**3 + params.beam_weight * beam_thickness**3
    return sigma_d * section / post_spacing


def crash_response(
    post_thickness: float,
    beam_thickness: float,
    post_spacing: float,
    velocity: float,
    mass: float,
    yield_stress: float,
    params: SurrogateParams = SurrogateParams(),
) -> CrashResponse:
    """Peak acceleration (g) and deflection (mm) of one impact.

    Thicknesses and spacing in mm, velocity in km/h, mass in kg, yield
    stress in MPa.
    """
    inputs = dict(
        post_thickness=post_thickness,
        beam_thickness=beam_thickness,
        post_spacing=post_spacing,
        velocity=velocity,
        mass=mass,
        yield_stress=yield_stress,
    )
    for name, value in inputs.items():
        if not (value > 0 and math.isfinite(value)):
            raise InvalidArgument(f"{name} must be positive and finite, got {value}")
    v_n = velocity * KMH_TO_MS * math.sin(math.radians(params.impact_angle_deg))
    k = barrier_stiffness(post_thickness, beam_thickness, post_spacing, yield_stress, params)
    omega = math.sqrt(k / mass)
    return CrashResponse(acceleration=v_n * omega / G, deflection=params.deflection_scale * v_n / omega)


INPUTS = ("post_thickness", "beam_thickness", "post_spacing", "velocity", "mass", "yield_stress")
OUTPUTS = ("acceleration", "deflection")
