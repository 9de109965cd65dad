"""Initial data: compactly supported pulses and dilation perturbations."""
from __future__ import annotations

import numpy as np

from ..fields.grid import FieldState, Grid3
from ..tensors import orthonormal_frame


def bump(s, deriv=0):
    """``G(s) = exp(1 - 1/(1 - s^2))`` on |s| < 1, zero outside (G(0) = 1),
    or its first or second derivative."""
    s = np.asarray(s, dtype=float)
    inside = np.abs(s) < 1
    si = np.where(inside, s, 0.0)
    q = 1.0 - si * si
    G = np.where(inside, np.exp(1.0 - 1.0 / q), 0.0)
    if deriv == 0:
        return G
    g1 = -2.0 * si / q ** 2          # (log G)'
    if deriv == 1:
        return G * g1
    if deriv == 2:
        g2 = -2.0 / q ** 2 - 8.0 * si * si / q ** 3
        return G * (g1 * g1 + g2)
    raise ValueError("deriv must be 0, 1 or 2")


def _pulse_vector(kind, xi):
    xi = np.asarray(xi, dtype=float)
    if kind == "longitudinal_pulse":
        return xi
    return orthonormal_frame(xi)[1]


def pulse_1d(kind, eps, width, s, speed, center=0.0, xi=(1.0, 0.0, 0.0)):
    """Right-moving pulse ``U = a eps G((s - s0)/width)``, ``U_t = -speed U_s``
    on a 1D lattice ``s``; returns arrays of shape (3, n)."""
    a = _pulse_vector(kind, xi)
    z = (np.asarray(s) - center) / width
    U = eps * np.outer(a, bump(z))
    V = -speed * eps / width * np.outer(a, bump(z, 1))
    return U, V


def make_initial_data(kind, eps, width, direction, grid: Grid3, speeds, center=0.0) -> FieldState:
    """3D initial state. Pulses are plane waves ``a eps G((<x, xi> - s0)/width)``
    moving along ``xi``; ``dilation_perturbation`` is ``eps x G(|x|/width)`` at rest."""
    c1_sq, c2_sq = speeds
    X = grid.coords()
    xi = np.asarray(direction, dtype=float)
    if kind == "dilation_perturbation":
        r = np.sqrt(np.sum(X * X, axis=0))
        u = eps * X * bump(r / width)
        return FieldState(u, np.zeros_like(u), 0.0, grid)
    speed = np.sqrt(c1_sq if kind == "longitudinal_pulse" else c2_sq)
    a = _pulse_vector(kind, xi)
    z = (np.einsum("i,i...->...", xi, X) - center) / width
    u = eps * a[:, None, None, None] * bump(z)
    ut = -speed * eps / width * a[:, None, None, None] * bump(z, 1)
    return FieldState(u, ut, 0.0, grid)
