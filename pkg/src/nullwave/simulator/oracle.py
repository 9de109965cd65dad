"""Shock-time prediction for the scalar longitudinal mode by characteristics.

For ``phi_tt - c1^2 phi_ss = kappa d_s((phi_s)^2)`` write ``w = phi_s`` and
``c(w)^2 = c1^2 + 2 kappa w``. A right-moving simple wave carries the
invariant ``R = phi_t - int_0^w c`` along ``ds/dt = c(w)``; its slope
``q = R_s`` obeys ``dq/dt = kappa q^2 / (2 c^2)`` with ``c`` frozen on each
characteristic. Blowup is the first time some ``q`` diverges.
"""
from __future__ import annotations

import numpy as np

from ..errors import NoBlowup

ORACLE_TOL = 1e-8
DIVERGENCE_FACTOR = 1e6


def _rhs(q, coef):
    return coef * q * q


def _rk4(q, coef, dt):
    k1 = _rhs(q, coef)
    k2 = _rhs(q + 0.5 * dt * k1, coef)
    k3 = _rhs(q + 0.5 * dt * k2, coef)
    k4 = _rhs(q + dt * k3, coef)
    return q + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def characteristics_oracle(c1, kappa, strain, strain_deriv, horizon=1e4, tol=ORACLE_TOL):
    """Predicted blowup time for initial strain samples ``w0 = phi_s`` and
    their derivatives ``w0'`` (right-moving data).

    Integrates all characteristics together with step-doubling RK4 and a
    shared step; raises :class:`NoBlowup` if ``kappa == 0`` or no slope
    diverges before ``horizon``.
    """
    if kappa == 0:
        raise NoBlowup("linear mode: kappa = 0")
    w0 = np.asarray(strain, dtype=float).ravel()
    dw0 = np.asarray(strain_deriv, dtype=float).ravel()
    c_sq = c1 * c1 + 2.0 * kappa * w0
    if np.any(c_sq <= 0):
        raise ValueError("initial strain makes the longitudinal speed imaginary")
    c = np.sqrt(c_sq)
    q = -2.0 * c * dw0
    # only characteristics with kappa q > 0 can steepen
    live = kappa * q > 0
    if not np.any(live):
        raise NoBlowup("no compressive characteristic")
    q, coef = q[live], kappa / (2.0 * c_sq[live])
    limit = DIVERGENCE_FACTOR * np.max(np.abs(q))
    t = 0.0
    dt = 0.01 / np.max(np.abs(coef * q))
    while t < horizon:
        dt = min(dt, horizon - t)
        full = _rk4(q, coef, dt)
        half = _rk4(_rk4(q, coef, 0.5 * dt), coef, 0.5 * dt)
        err = np.max(np.abs(half - full) / (1.0 + np.abs(half))) / 15.0
        if not np.isfinite(err) or err > tol:
            dt *= 0.5
            if dt < 1e-14 * max(t, 1.0):
                return t
            continue
        t += dt
        q = half + (half - full) / 15.0
        if np.max(np.abs(q)) > limit:
            return t
        dt *= min(2.0, 0.9 * (tol / max(err, 1e-300)) ** 0.2)
    raise NoBlowup(f"slopes stay bounded up to t = {horizon}")


def pulse_oracle(c1, kappa, eps, width, n=4001, horizon=1e4):
    """Oracle applied to the bump pulse ``phi = eps G(s / width)``."""
    from .initial import bump

    z = np.linspace(-1.0, 1.0, n)[1:-1]
    w0 = eps / width * bump(z, 1)
    dw0 = eps / width ** 2 * bump(z, 2)
    return characteristics_oracle(c1, kappa, w0, dw0, horizon)
