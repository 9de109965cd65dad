"""Run configuration and the time-series report."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError

KINDS = ("longitudinal_pulse", "transverse_pulse", "dilation_perturbation")
MODES = ("planewave", "box3d")
BOX_MAX_N = 96


@dataclass(frozen=True)
class InitialSpec:
    kind: str = "longitudinal_pulse"
    eps: float = 0.05
    width: float = 1.0
    direction: tuple = (1.0, 0.0, 0.0)
    center: float = 0.0

    def validate(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown initial data {self.kind!r}; choose from {KINDS}")
        if not (self.eps >= 0 and math.isfinite(self.eps)):
            raise ConfigError("eps must be a finite number >= 0")
        if not self.width > 0:
            raise ConfigError("width must be positive")
        if not np.isclose(np.linalg.norm(self.direction), 1.0, atol=1e-12):
            raise ConfigError("direction must be a unit vector")


@dataclass(frozen=True)
class SimConfig:
    lam: float = 1.5
    mode: str = "planewave"
    n: int = 2048
    L: float = 10.0
    cfl: float = 0.4
    t_end: float = 10.0
    diagnostics_every: int = 10
    blowup_factor: float = 10.0
    blowup_threshold: float | None = None
    initial: InitialSpec = field(default_factory=InitialSpec)
    nonlinear: bool = True
    periodic: bool = False          # box3d only; the 1D lattice is always periodic
    with_x2: bool = False
    with_e2: bool = False
    guard_tol: float = 1e-4         # relative to the initial max |u|
    snapshot_every: int = 0

    def validate(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if not 0 < self.cfl < 1:
            raise ConfigError(f"cfl must lie in (0, 1), got {self.cfl}")
        if not (self.t_end > 0 and math.isfinite(self.t_end)):
            raise ConfigError("t_end must be positive")
        if not self.lam > 0:
            raise ConfigError("lambda must be positive")
        if not self.L > 0:
            raise ConfigError("L must be positive")
        if self.n < 8:
            raise ConfigError("n must be at least 8")
        if self.mode == "box3d" and self.n > BOX_MAX_N:
            raise ConfigError(f"box3d grids are capped at n = {BOX_MAX_N}")
        if self.diagnostics_every < 1:
            raise ConfigError("diagnostics_every must be >= 1")
        if not self.blowup_factor > 1:
            raise ConfigError("blowup_factor must exceed 1")
        self.initial.validate()
        return self


COLUMNS = ("t", "E1", "max_grad", "X2", "max_grad2")


@dataclass
class SimReport:
    """Diagnostics time series and the final verdict.

    ``verdict`` is ``"completed"``, ``"blowup"`` or ``"nonfinite"``; ``t_star``
    and ``location`` are set for the latter two. ``stop_reason`` tells why a
    completed run stopped (``"t_end"`` or ``"boundary"``).
    """

    mode: str
    series: dict = field(default_factory=lambda: {k: [] for k in COLUMNS})
    extra: dict = field(default_factory=dict)
    verdict: str = "completed"
    t_star: float | None = None
    location: tuple | None = None
    stop_reason: str = "t_end"
    steps: int = 0
    dt: float = 0.0
    final: object = None

    def record(self, t, E1, max_grad, X2=None, max_grad2=None, **extra):
        if self.series["t"] and t <= self.series["t"][-1]:
            raise ValueError("report times must increase")
        for k, v in zip(COLUMNS, (t, E1, max_grad, X2, max_grad2)):
            self.series[k].append(None if v is None else float(v))
        for k, v in extra.items():
            self.extra.setdefault(k, []).append(float(v))

    def column(self, name) -> np.ndarray:
        vals = self.series[name] if name in self.series else self.extra[name]
        return np.array([np.nan if v is None else v for v in vals], dtype=float)

    @property
    def exit_code(self) -> int:
        return 0 if self.verdict == "completed" else 2

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            extra = [k for k, v in self.extra.items() if len(v) == len(self.series["t"])]
            w.writerow(COLUMNS + tuple(extra))
            cols = [self.series[k] for k in COLUMNS] + [self.extra[k] for k in extra]
            for row in zip(*cols):
                w.writerow(["" if v is None else repr(v) for v in row])

    def to_dict(self) -> dict:
        t = self.series["t"]
        return {
            "mode": self.mode, "verdict": self.verdict, "t_star": self.t_star,
            "location": None if self.location is None else [float(x) for x in self.location],
            "stop_reason": self.stop_reason, "steps": self.steps, "dt": self.dt,
            "t_final": t[-1] if t else None, "records": len(t),
            "E1_initial": self.series["E1"][0] if t else None,
            "E1_final": self.series["E1"][-1] if t else None,
            "max_grad_initial": self.series["max_grad"][0] if t else None,
            "max_grad_peak": max(self.series["max_grad"]) if t else None,
        }
