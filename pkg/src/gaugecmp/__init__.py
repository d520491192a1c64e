"""Transition probabilities for hydrogen-like atoms under two light-matter
coupling conventions (minimal A.p and dipole x.E), with oscillation-aware
quadrature and a numerical gauge-invariance audit."""

from .constants import (
    ELEMENTARY_CHARGE_NATURAL,
    FINE_STRUCTURE_CONSTANT,
    HYDROGEN_REDUCED_MASS,
    PhysicalConstants,
    seconds_per_natural_time,
)
from .gaugeaudit import (
    AuditReport,
    ClassicalField,
    DipoleResidualSweep,
    GaugeFunction,
    PlaneWave,
    amplitude,
    dipole_gauge_check,
    dipole_residual_sweep,
    gauge_transform,
    invariance_report,
)
from .hydrogenic import AtomicState, energy, energy_gap, orbit_radius
from .kernels import (
    Coupling,
    ModeAmplitude,
    SwitchingProfile,
    dressed_L,
    mode_amplitude,
    switching_sinc,
)
from .matrixelements import ModeIndex, make_mode, momentum_element, position_element
from .probability import (
    CoherentGaussianPulse,
    FieldPreparation,
    ProbabilityResult,
    SpectralKernel,
    TransitionSpec,
    Vacuum,
    asymptotic_vacuum_probability,
    coherent_Pphi,
    cutoff_sweep,
    dipole_limit_probability,
    emission_probability,
    emission_rate,
    emission_rate_si,
    geometry_resonance_constant,
    transition_probability,
    vacuum_offset,
    vacuum_probability,
)

__version__ = "0.1.0"

__all__ = [
    "AtomicState",
    "AuditReport",
    "ClassicalField",
    "CoherentGaussianPulse",
    "Coupling",
    "DipoleResidualSweep",
    "ELEMENTARY_CHARGE_NATURAL",
    "FINE_STRUCTURE_CONSTANT",
    "FieldPreparation",
    "GaugeFunction",
    "HYDROGEN_REDUCED_MASS",
    "ModeAmplitude",
    "ModeIndex",
    "PhysicalConstants",
    "PlaneWave",
    "ProbabilityResult",
    "SpectralKernel",
    "SwitchingProfile",
    "TransitionSpec",
    "Vacuum",
    "amplitude",
    "asymptotic_vacuum_probability",
    "coherent_Pphi",
    "cutoff_sweep",
    "dipole_gauge_check",
    "dipole_limit_probability",
    "dipole_residual_sweep",
    "dressed_L",
    "emission_probability",
    "emission_rate",
    "emission_rate_si",
    "energy",
    "energy_gap",
    "gauge_transform",
    "geometry_resonance_constant",
    "invariance_report",
    "make_mode",
    "mode_amplitude",
    "momentum_element",
    "orbit_radius",
    "position_element",
    "seconds_per_natural_time",
    "switching_sinc",
    "transition_probability",
    "vacuum_offset",
    "vacuum_probability",
]
