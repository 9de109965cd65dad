"""Leapfrog integration of ``u_tt = A u + N(u, u)`` in a 3D box and in the
plane-wave reduction ``U_tt = A(xi) U_ss + bhat d_s(U_s (x) U_s)``.

The leapfrog is written in kick-drift-kick form, which keeps ``u_t`` at the
same time level as ``u`` for the diagnostics; it is algebraically the
three-level scheme ``u^{n+1} = 2u^n - u^{n-1} + dt^2 F(u^n)``.
"""
from __future__ import annotations

import numpy as np

from .. import kernels
from .._kernels_py import d1, d2
from ..errors import NonFinite
from ..fields.grid import Closure, FieldState, Grid3, grad
from ..fields.norms import energy_e1, weighted_X
from ..tensors import MaterialTensors
from .config import SimConfig, SimReport
from .initial import make_initial_data, pulse_1d

# a 1D front resolved by fewer cells than this counts as a shock
SHOCK_CELLS = 2.0


def closure_of(tensors: MaterialTensors, nonlinear=True) -> Closure:
    return Closure(tensors.c1_sq, tensors.c2_sq, tensors.B.as_matrix27() if nonlinear else None)


def box_force(u, closure: Closure, grid: Grid3, backend=None):
    k = kernels if backend is None else kernels.get_backend(backend)
    return k.box_rhs(np.ascontiguousarray(u), closure.c1_sq, closure.c2_sq, closure.B27, grid.h, grid.periodic)


def _check_finite(arr, t):
    if not np.all(np.isfinite(arr)):
        raise NonFinite(f"non-finite values at t = {t:.6g}", t)


def step_box3d(state: FieldState, closure: Closure, dt: float, force=None, backend=None):
    """One leapfrog step. Returns ``(new_state, force_at_new_state)``; pass the
    returned force back in to avoid recomputing it."""
    g = state.grid
    a = box_force(state.u, closure, g, backend) if force is None else force
    v_half = state.ut + 0.5 * dt * a
    u_new = state.u + dt * v_half
    t_new = state.t + dt
    _check_finite(u_new, t_new)
    a_new = box_force(u_new, closure, g, backend)
    v_new = v_half + 0.5 * dt * a_new
    _check_finite(v_new, t_new)
    return FieldState(u_new, v_new, t_new, g), a_new


def stable_dt(cfl, h, c_max):
    return cfl * h / c_max


def _steps(t_end, dt):
    nsteps = int(np.ceil(t_end / dt - 1e-9))
    return nsteps, t_end / nsteps


def run_box3d(config: SimConfig, tensors: MaterialTensors, state: FieldState | None = None,
              backend=None, snapshot_dir=None) -> SimReport:
    """Integrate in the box ``[-L, L]^3`` until ``t_end``, blowup of
    ``max |grad u|`` or (zero-padded boxes) data reaching the guard cells."""
    config.validate()
    grid = Grid3(config.n, config.L, config.periodic)
    closure = closure_of(tensors, config.nonlinear)
    if state is None:
        ini = config.initial
        state = make_initial_data(ini.kind, ini.eps, ini.width, ini.direction, grid,
                                  (tensors.c1_sq, tensors.c2_sq), ini.center)
    c1 = np.sqrt(max(tensors.c1_sq, tensors.c2_sq))
    nsteps, dt = _steps(config.t_end, stable_dt(config.cfl, grid.h, c1))
    rep = SimReport("box3d", dt=dt)
    X = grid.coords()

    def diagnose(st):
        G = grad(st.u, grid)
        gmag = np.sqrt(np.sum(G * G, axis=(0, 1)))
        imax = np.unravel_index(np.argmax(gmag), gmag.shape)
        E1 = energy_e1(st.u, st.ut, grid, tensors.c1_sq, tensors.c2_sq)
        X2 = weighted_X(st, (tensors.c1_sq, tensors.c2_sq), 2) if config.with_x2 else None
        extra = {}
        if config.with_e2:
            from ..fields.norms import energy

            extra["E2"] = energy(st, closure, 2)
        rep.record(st.t, E1, gmag[imax], X2, None, **extra)
        return float(gmag[imax]), tuple(X[:, imax[0], imax[1], imax[2]])

    g0, _ = diagnose(state)
    threshold = config.blowup_threshold or config.blowup_factor * max(g0, 1e-300)
    # stencil tails run ahead of the waves, so the guard test is relative
    guard = config.guard_tol * float(np.max(np.abs(state.u)))
    if snapshot_dir is not None:
        _snapshot(snapshot_dir, state, 0)
    force = None
    step = 0
    try:
        for step in range(1, nsteps + 1):
            state, force = step_box3d(state, closure, dt, force, backend)
            if step % config.diagnostics_every == 0 or step == nsteps:
                gmax, loc = diagnose(state)
                if g0 > 0 and gmax >= threshold:
                    rep.verdict, rep.t_star, rep.location = "blowup", state.t, loc
                    break
                if step < nsteps and not grid.periodic and state.guard_max() > guard:
                    rep.stop_reason = "boundary"
                    break
            if snapshot_dir is not None and config.snapshot_every and step % config.snapshot_every == 0:
                _snapshot(snapshot_dir, state, step)
    except NonFinite as exc:
        rep.verdict, rep.t_star = "nonfinite", exc.t
    rep.steps = step
    rep.final = state
    if snapshot_dir is not None:
        _snapshot(snapshot_dir, state, step)
    return rep


def _snapshot(directory, state, step):
    from pathlib import Path

    from ..fields.io import write_snapshot

    Path(directory).mkdir(parents=True, exist_ok=True)
    write_snapshot(Path(directory) / f"state_{step:06d}", state, {"step": step})


# ---------------------------------------------------------------- 1D reduction

class PlaneWaveState:
    """``U`` and ``U_t`` (shape (3, n)) on the periodic lattice over [-L, L]."""

    def __init__(self, U, V, t, L):
        self.U, self.V, self.t, self.L = U, V, float(t), float(L)

    @property
    def n(self):
        return self.U.shape[1]

    @property
    def h(self):
        return 2.0 * self.L / self.n

    @property
    def s(self):
        return -self.L + (np.arange(self.n) + 0.5) * self.h


def lattice(n, L):
    h = 2.0 * L / n
    return -L + (np.arange(n) + 0.5) * h


def planewave_coefficients(tensors: MaterialTensors, xi, nonlinear=True):
    xi = np.asarray(xi, dtype=float)
    Axi = tensors.A.symbol(xi)
    bhat = tensors.B.contract_dirs(xi) if nonlinear else None
    return Axi, bhat


def planewave_energy(st: PlaneWaveState, Axi):
    Us = d1(st.U, 1, st.h, True)
    return 0.5 * st.h * float(np.sum(st.V * st.V) + np.einsum("ip,ij,jp->", Us, Axi, Us))


def run_planewave_1d(config: SimConfig, tensors: MaterialTensors, direction=None,
                     state: PlaneWaveState | None = None, backend=None) -> SimReport:
    """Integrate the plane-wave reduction along ``direction`` on a periodic
    lattice. Blowup is declared when ``max |U_ss|`` reaches ``blowup_factor``
    times its initial value (the strain ``U_s`` itself stays bounded when a
    shock forms; its slope does not), or earlier once the steepest front spans
    fewer than ``SHOCK_CELLS`` cells, where the lattice stops following the
    steepening. The grid cap is never below twice the initial slope."""
    config.validate()
    xi = np.asarray(config.initial.direction if direction is None else direction, dtype=float)
    xi = xi / np.linalg.norm(xi)
    Axi, bhat = planewave_coefficients(tensors, xi, config.nonlinear)
    k = kernels if backend is None else kernels.get_backend(backend)
    n, L = config.n, config.L
    h = 2.0 * L / n
    if state is None:
        ini = config.initial
        if ini.kind == "dilation_perturbation":
            raise ValueError("dilation perturbations have no plane-wave reduction")
        speed = np.sqrt(tensors.c1_sq if ini.kind == "longitudinal_pulse" else tensors.c2_sq)
        U, V = pulse_1d(ini.kind, ini.eps, ini.width, lattice(n, L), speed, ini.center, xi)
        state = PlaneWaveState(U, V, 0.0, L)
    c_max = np.sqrt(np.max(np.linalg.eigvalsh(Axi)))
    nsteps, dt = _steps(config.t_end, stable_dt(config.cfl, h, c_max))
    rep = SimReport("planewave", dt=dt)
    along = xi

    def measures(st):
        Us = d1(st.U, 1, h, True)
        Uss = d2(st.U, 1, h, True)
        g = np.sqrt(np.sum(Us * Us, axis=0))
        g2 = np.sqrt(np.sum(Uss * Uss, axis=0))
        ul = along @ Us
        ut = Us - np.outer(along, ul)
        return (float(np.max(g)), float(np.max(g2)), int(np.argmax(g2)),
                float(np.max(np.abs(ul))), float(np.max(np.sqrt(np.sum(ut * ut, axis=0)))))

    def record(st, m):
        rep.record(st.t, planewave_energy(st, Axi), m[0], None, m[1],
                   max_grad_long=m[3], max_grad_trans=m[4])

    m0 = measures(state)
    record(state, m0)
    threshold = config.blowup_threshold or config.blowup_factor * max(m0[1], 1e-300)
    floor = min(threshold, 2.0 * m0[1])
    U, V = state.U.copy(), state.V.copy()
    a = k.planewave_rhs(U, Axi, bhat, h)
    step = 0
    t = state.t
    try:
        for step in range(1, nsteps + 1):
            V += 0.5 * dt * a
            U += dt * V
            t = state.t + step * dt
            _check_finite(U, t)
            a = k.planewave_rhs(U, Axi, bhat, h)
            V += 0.5 * dt * a
            _check_finite(V, t)
            st = PlaneWaveState(U, V, t, L)
            m = measures(st)
            limit = threshold
            if config.blowup_threshold is None:
                limit = min(threshold, max(floor, m[0] / (SHOCK_CELLS * h)))
            if m0[1] > 0 and m[1] >= limit:
                record(st, m)
                rep.verdict, rep.t_star = "blowup", t
                rep.location = (float(lattice(n, L)[m[2]]),)
                break
            if step % config.diagnostics_every == 0 or step == nsteps:
                record(st, m)
    except NonFinite as exc:
        rep.verdict, rep.t_star = "nonfinite", exc.t
    rep.steps = step
    rep.final = PlaneWaveState(U.copy(), V.copy(), t, L)
    return rep
