"""Cell-centred grids, discrete field states and the discrete vector fields.

Time derivatives of a discrete state are carried as a *jet*: the list
``[u, d_t u, d_t^2 u, ...]`` at one instant. Operators that differentiate in
time consume one level of the jet; missing levels come from the equations of
motion when a :class:`Closure` is supplied.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .. import _kernels_py as kp
from ..errors import NeedsTimeDerivative

# modified-rotation matrices U_l: (U_l)_{ij} = eps_{lij}
LEVI = np.zeros((3, 3, 3))
for _a, _b, _c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI[_a, _b, _c] = 1.0
    LEVI[_a, _c, _b] = -1.0
U_MATS = LEVI

GAMMA = ("d0", "d1", "d2", "d3", "Omt1", "Omt2", "Omt3", "S")
LAMBDA = ("d1", "d2", "d3", "Omt1", "Omt2", "Omt3", "R")
EXTRA = ("Om1", "Om2", "Om3", "dr")
TIME_CONSUMING = ("d0", "S")


@dataclass(frozen=True)
class Grid3:
    n: int
    L: float
    periodic: bool = False

    def __post_init__(self):
        if self.n < 8:
            raise ValueError("grid needs n >= 8")
        if not self.L > 0:
            raise ValueError("grid half-width must be positive")

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.n

    @property
    def axis(self) -> np.ndarray:
        return -self.L + (np.arange(self.n) + 0.5) * self.h

    def coords(self) -> np.ndarray:
        """Node positions, shape (3, n, n, n)."""
        a = self.axis
        return np.stack(np.meshgrid(a, a, a, indexing="ij"))

    def radius(self) -> np.ndarray:
        return np.sqrt(np.sum(self.coords() ** 2, axis=0))

    def core_mask(self) -> np.ndarray:
        """False on the nodes next to the origin (r < h), excluded from
        integrals carrying 1/r or projection factors."""
        return self.radius() >= self.h

    @property
    def cell_volume(self) -> float:
        return self.h ** 3


@dataclass(frozen=True, eq=False)
class FieldState:
    u: np.ndarray
    ut: np.ndarray | None
    t: float
    grid: Grid3

    def __post_init__(self):
        shape = (3, self.grid.n, self.grid.n, self.grid.n)
        if self.u.shape != shape or (self.ut is not None and self.ut.shape != shape):
            raise ValueError(f"field arrays must have shape {shape}")
        if not np.all(np.isfinite(self.u)) or (self.ut is not None and not np.all(np.isfinite(self.ut))):
            raise ValueError("field state has non-finite entries")

    @classmethod
    def zeros(cls, grid: Grid3, t=0.0):
        z = np.zeros((3, grid.n, grid.n, grid.n))
        return cls(z, z.copy(), float(t), grid)

    def guard_max(self, width=2) -> float:
        """Largest |u| on the outer ``width``-cell shell."""
        m = np.ones((self.grid.n,) * 3, dtype=bool)
        m[width:-width, width:-width, width:-width] = False
        return float(np.max(np.abs(self.u[:, m]))) if m.any() else 0.0


@dataclass(frozen=True)
class Closure:
    """Material data needed to express time derivatives through the equation
    ``u_tt = A u + N(u, u)``. ``B27`` may be None for the linear flow."""

    c1_sq: float
    c2_sq: float
    B27: np.ndarray | None = None


class Jet:
    """Time jet ``[u, u_t, ...]`` of a discrete field at time ``t``."""

    def __init__(self, levels, t, grid: Grid3, closure: Closure | None = None):
        self.levels = list(levels)
        self.t = float(t)
        self.grid = grid
        self.closure = closure
        self._derivs = {}

    @classmethod
    def from_state(cls, state: FieldState, closure=None):
        levels = [state.u] if state.ut is None else [state.u, state.ut]
        return cls(levels, state.t, state.grid, closure)

    def depth(self):
        return len(self.levels)

    def _grad_hess(self, m):
        if m not in self._derivs:
            u, g = self.levels[m], self.grid
            self._derivs[m] = (kp.gradient(u, g.h, g.periodic), kp.hessian(u, g.h, g.periodic))
        return self._derivs[m]

    def extend(self, depth):
        """Append levels from the equations of motion up to ``depth``."""
        if depth <= len(self.levels):
            return self
        if self.closure is None or len(self.levels) < 2:
            raise NeedsTimeDerivative(
                f"{depth} time levels requested, state has {len(self.levels)} and no material closure")
        c, g = self.closure, self.grid
        while len(self.levels) < depth:
            m = len(self.levels) - 2
            # d_t^m (A u + N(u, u)) with the Leibniz rule on the bilinear term
            nxt = kp.box_rhs(self.levels[m], c.c1_sq, c.c2_sq, None, g.h, g.periodic)
            if c.B27 is not None:
                for p in range(m + 1):
                    Gu, Hu = self._grad_hess(p)
                    Gv, Hv = self._grad_hess(m - p)
                    nxt = nxt + comb(m, p) * kp.bilinear_N(c.B27, Gu, Hu, Gv, Hv)
            self.levels.append(nxt)
        return self

    def state(self) -> FieldState:
        self.extend(2)
        return FieldState(self.levels[0], self.levels[1], self.t, self.grid)


def _d1(f, axis, grid):
    return kp.d1(f, axis, grid.h, grid.periodic)


def grad(u, grid: Grid3):
    """``G[k, n] = d_n u^k``."""
    return kp.gradient(u, grid.h, grid.periodic)


def divergence(u, grid: Grid3):
    return sum(_d1(u[k], k, grid) for k in range(3))


def omega(u, l, grid: Grid3, X=None):
    """Angular momentum ``Omega_l = eps_{lab} x_a d_b`` applied componentwise."""
    X = grid.coords() if X is None else X
    a, b = (l + 1) % 3, (l + 2) % 3
    return X[a] * _d1_vec(u, b, grid) - X[b] * _d1_vec(u, a, grid)


def _d1_vec(u, axis, grid):
    """Derivative along spatial ``axis`` of a vector (3, n, n, n) or scalar field."""
    if u.ndim == 4:
        return np.stack([_d1(u[k], axis, grid) for k in range(3)])
    return _d1(u, axis, grid)


def radial_derivative(u, grid: Grid3, X=None):
    """``r d_r u = x . grad u`` (no division by r)."""
    X = grid.coords() if X is None else X
    return sum(X[a] * _d1_vec(u, a, grid) for a in range(3))


def _spatial_op(name, u, grid, X):
    if name in ("d1", "d2", "d3"):
        return _d1_vec(u, int(name[1]) - 1, grid)
    if name in ("Om1", "Om2", "Om3"):
        return omega(u, int(name[2]) - 1, grid, X)
    if name in ("Omt1", "Omt2", "Omt3"):
        l = int(name[3]) - 1
        return omega(u, l, grid, X) + np.einsum("ij,j...->i...", U_MATS[l], u)
    if name == "dr":
        r = np.sqrt(np.sum(X ** 2, axis=0))
        return radial_derivative(u, grid, X) / r
    if name == "R":
        return radial_derivative(u, grid, X) - u
    raise ValueError(f"unknown vector field {name!r}")


def apply_jet(name, jet: Jet, depth_out=1, X=None) -> Jet:
    """Apply one vector field to a jet, returning ``depth_out`` levels."""
    grid = jet.grid
    X = grid.coords() if X is None else X
    if name == "d0":
        jet.extend(depth_out + 1)
        return Jet(jet.levels[1:depth_out + 1], jet.t, grid, jet.closure)
    if name == "S":
        jet.extend(depth_out + 1)
        lv = jet.levels
        out = [jet.t * lv[m + 1] + (m - 1) * lv[m] + radial_derivative(lv[m], grid, X)
               for m in range(depth_out)]
        return Jet(out, jet.t, grid, jet.closure)
    jet.extend(depth_out)
    out = [_spatial_op(name, jet.levels[m], grid, X) for m in range(depth_out)]
    return Jet(out, jet.t, grid, jet.closure)


def apply_word(word, jet: Jet, depth_out=1, X=None) -> Jet:
    """``Gamma^a`` for the ordered word ``a`` (applied right to left)."""
    need = depth_out + sum(1 for w in word if w in TIME_CONSUMING)
    jet.extend(need)
    cur = jet
    remaining = need
    for w in reversed(word):
        if w in TIME_CONSUMING:
            remaining -= 1
        cur = apply_jet(w, cur, remaining, X)
    return cur
