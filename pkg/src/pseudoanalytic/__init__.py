"""Pseudoanalytic formal powers for the main Vekua equation and their use in
solving second-order elliptic equations by collocation."""

from .bvpsolve import BoundaryValueProblem, CollocationSolution, collocate, convergence_table, evaluate_solution
from .coords import CoordinateSystem, bipolar, cartesian, elliptic as elliptic_coords, parabolic, polar
from .elliptic import (
    CompleteSystem,
    EquationDescriptor,
    closed_form_system,
    complete_system,
    equation_residual,
    weight_from_equation,
)
from .formalpowers import FormalPowerBasis, formal_power
from .genpair import GeneratingPair, GeneratingSequence, SeparableWeight, generating_sequence, main_pair
from .numfield import FieldHandle, Grid, Path, RealFieldHandle, constant, field, real_field

__version__ = "0.1.0"

__all__ = [
    "BoundaryValueProblem",
    "CollocationSolution",
    "CompleteSystem",
    "CoordinateSystem",
    "EquationDescriptor",
    "FieldHandle",
    "FormalPowerBasis",
    "GeneratingPair",
    "GeneratingSequence",
    "Grid",
    "Path",
    "RealFieldHandle",
    "SeparableWeight",
    "bipolar",
    "cartesian",
    "closed_form_system",
    "collocate",
    "complete_system",
    "constant",
    "convergence_table",
    "elliptic_coords",
    "equation_residual",
    "evaluate_solution",
    "field",
    "formal_power",
    "generating_sequence",
    "main_pair",
    "parabolic",
    "polar",
    "real_field",
    "weight_from_equation",
]
