"""Discrete and analytic vector fields, the vector fields Gamma and the
energies and weighted norms built from them."""
from .analytic import (
    AnalyticField,
    commutator_residual,
    decomposition_residual,
    projection_commutator_residual,
    verify_scaling_identity,
)
from .grid import GAMMA, LAMBDA, Closure, FieldState, Grid3, Jet
from .io import read_snapshot, write_slice_csv, write_snapshot
from .norms import apply_vfield, energy, lambda_norm, project, weighted_X

__all__ = [
    "AnalyticField", "Closure", "FieldState", "GAMMA", "Grid3", "Jet", "LAMBDA",
    "apply_vfield", "commutator_residual", "decomposition_residual", "energy",
    "lambda_norm", "project", "projection_commutator_residual", "read_snapshot",
    "verify_scaling_identity", "weighted_X", "write_slice_csv", "write_snapshot",
]
