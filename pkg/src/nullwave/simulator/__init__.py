"""Time integration of the truncated elastic system and shock-time oracle."""
from .config import COLUMNS, InitialSpec, SimConfig, SimReport
from .initial import bump, make_initial_data, pulse_1d
from .oracle import characteristics_oracle, pulse_oracle
from .solver import (PlaneWaveState, box_force, closure_of, planewave_coefficients,
                     run_box3d, run_planewave_1d, step_box3d)

__all__ = [
    "COLUMNS", "InitialSpec", "SimConfig", "SimReport", "bump", "make_initial_data",
    "pulse_1d", "characteristics_oracle", "pulse_oracle", "PlaneWaveState", "box_force",
    "closure_of", "planewave_coefficients", "run_box3d", "run_planewave_1d", "step_box3d",
]
