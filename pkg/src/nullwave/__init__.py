"""Null-condition analysis of isotropic hyperelastic materials prestressed by
a homogeneous dilation: constitutive models, coefficient tensors, vector-field
calculus on analytic and discrete fields, and a wave solver."""
__version__ = "0.1.0"

from .constitutive import (MaterialReport, StoredEnergyModel, check_material, construct_null_material,
                           load_spec, speeds, standard_materials, tau111)
from .errors import NullwaveError
from .kernels import BACKEND
from .tensors import MaterialTensors, compute_A, compute_B, material_tensors

__all__ = [
    "BACKEND", "MaterialReport", "MaterialTensors", "NullwaveError", "StoredEnergyModel",
    "check_material", "compute_A", "compute_B", "construct_null_material", "load_spec",
    "material_tensors", "speeds", "standard_materials", "tau111", "__version__",
]
