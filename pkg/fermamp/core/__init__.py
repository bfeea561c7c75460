"""Core logic - states, reduction, negativity and curve analysis."""

from .fock_basis import BasisLabel, DensityMatrix, InvalidStateError, PureState, mix, outer
from .states import phi_minus, phi_plus, phi_star, unruh_one_particle, unruh_vacuum, werner, werner_like
from .families import StateFamily, get_family
from .reduction import ReducedState, closed_form_reduced, compare_reduced, trace_out_region_II
from .entanglement import SpectrumError, eigenvalues_symmetric, inertial_negativity, negativity, partial_transpose_alice
from .analysis import (
    acceleration_of_gamma,
    amplification_report,
    amplification_threshold,
    gamma_of_acceleration,
    negativity_curve,
    variation_points,
)
from .verify import run_checks

__all__ = [
    "BasisLabel",
    "DensityMatrix",
    "InvalidStateError",
    "PureState",
    "mix",
    "outer",
    "phi_minus",
    "phi_plus",
    "phi_star",
    "unruh_one_particle",
    "unruh_vacuum",
    "werner",
    "werner_like",
    "StateFamily",
    "get_family",
    "ReducedState",
    "closed_form_reduced",
    "compare_reduced",
    "trace_out_region_II",
    "SpectrumError",
    "eigenvalues_symmetric",
    "inertial_negativity",
    "negativity",
    "partial_transpose_alice",
    "acceleration_of_gamma",
    "amplification_report",
    "amplification_threshold",
    "gamma_of_acceleration",
    "negativity_curve",
    "variation_points",
    "run_checks",
]
