"""Exact perturbation series and variational resummation for the cubic
oscillator with imaginary coupling.

The package computes the weak-coupling ground-state series of
V(x) = omega^2 x^2/2 + i g x^3 by an exact two-index recursion, the
effective potential with a background variable by a companion recursion,
and resums both with the square-root trick and the principle of minimal
sensitivity to recover the strong-coupling (purely cubic) ground-state
energy with exponentially fast convergence.
"""

from .bender_wu import (
    EnergyCoefficients,
    WaveCorrectionTable,
    dimensionful_energy,
    energy_fraction,
    ground_state_series,
)
from .convergence import ConvergenceFit, fit_convergence, relative_deviation
from .effective_potential import (
    BackgroundWaveTable,
    EffectivePotentialSeries,
    GExpansionTerm,
    LoopExpansion,
    g_expansion,
    loop_coefficients,
    loop_consistency_check,
    perturbative_extremum,
    veff_series,
)
from .exact_algebra import (
    BackgroundPoly,
    BigRational,
    GaussRational,
    QuinticSurd,
    TruncatedSeries,
    half_binomial,
)
from .verification import B0_REFERENCE, grid_pms_oracle, rs_energy_series
from .vpt import (
    NoPmsPointError,
    StrongCouplingFunction,
    TrickedVeff,
    TrickSeries,
    VeffSolverError,
    VptCandidate,
    VptSolution,
    naive_b0,
    strong_coupling_profile,
    subleading_order1,
    trick_reexpand_energy,
    veff_b0,
    veff_strong_coupling_X1,
    veff_trick,
)

__version__ = "0.1.0"

__all__ = [
    "B0_REFERENCE",
    "BackgroundPoly",
    "BackgroundWaveTable",
    "BigRational",
    "ConvergenceFit",
    "EffectivePotentialSeries",
    "EnergyCoefficients",
    "GExpansionTerm",
    "GaussRational",
    "LoopExpansion",
    "NoPmsPointError",
    "QuinticSurd",
    "StrongCouplingFunction",
    "TrickSeries",
    "TrickedVeff",
    "TruncatedSeries",
    "VeffSolverError",
    "VptCandidate",
    "VptSolution",
    "WaveCorrectionTable",
    "dimensionful_energy",
    "energy_fraction",
    "fit_convergence",
    "g_expansion",
    "grid_pms_oracle",
    "ground_state_series",
    "half_binomial",
    "loop_coefficients",
    "loop_consistency_check",
    "naive_b0",
    "perturbative_extremum",
    "relative_deviation",
    "rs_energy_series",
    "strong_coupling_profile",
    "subleading_order1",
    "trick_reexpand_energy",
    "veff_b0",
    "veff_series",
    "veff_strong_coupling_X1",
    "veff_trick",
]
