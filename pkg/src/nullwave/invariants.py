"""Principal invariants of 3x3 matrices and the changes of variables between
strain (``i``, ``j``) and stretch (``r``, ``s``) invariant systems.

Systems, for a deformation gradient ``F`` and prestress ``lam``::

    i = I(F^T F)            j = I(F^T F - lam^2 I)
    r = I(sqrt(F^T F))      s = I(sqrt(F^T F) - lam I)

All functions broadcast over leading axes, so a triple may hold arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotSPD, SingularJacobian

SYSTEMS = ("i", "j", "r", "s")

NEWTON_TOL = 1e-12
NEWTON_MAXITER = 50


@dataclass(frozen=True)
class InvariantTriple:
    k1: float | np.ndarray
    k2: float | np.ndarray
    k3: float | np.ndarray
    system: str | None = None

    def __post_init__(self):
        if self.system is not None and self.system not in SYSTEMS:
            raise ValueError(f"unknown invariant system {self.system!r}")

    def as_array(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(self.k1, self.k2, self.k3), axis=-1).astype(float)

    @classmethod
    def from_array(cls, a, system=None) -> "InvariantTriple":
        a = np.asarray(a, dtype=float)
        k1, k2, k3 = a[..., 0], a[..., 1], a[..., 2]
        if a.ndim == 1:
            k1, k2, k3 = float(k1), float(k2), float(k3)
        return cls(k1, k2, k3, system)

    def __iter__(self):
        return iter((self.k1, self.k2, self.k3))


@dataclass(frozen=True)
class DistortionalVars:
    """Dilational strain ``z1`` and the invariants ``z2``, ``z3`` of the
    trace-free part of the stretch."""

    z1: float | np.ndarray
    z2: float | np.ndarray
    z3: float | np.ndarray


def _require(inv: InvariantTriple, system: str):
    if inv.system != system:
        raise ValueError(f"expected a {system!r}-system triple, got {inv.system!r}")


def invariants3(C, system: str | None = None) -> InvariantTriple:
    """Trace, second elementary symmetric function and determinant of ``C``."""
    C = np.asarray(C, dtype=float)
    tr = np.trace(C, axis1=-2, axis2=-1)
    tr2 = np.einsum("...ij,...ji->...", C, C)
    k2 = 0.5 * (tr * tr - tr2)
    k3 = np.linalg.det(C)
    if C.ndim == 2:
        return InvariantTriple(float(tr), float(k2), float(k3), system)
    return InvariantTriple(tr, k2, k3, system)


def shift_invariants(z, inv: InvariantTriple, system: str | None = None) -> InvariantTriple:
    """Invariants of ``z I + C`` from the invariants of ``C``."""
    a1, a2, a3 = inv.k1, inv.k2, inv.k3
    b1 = 3 * z + a1
    b2 = 3 * z * z + 2 * z * a1 + a2
    b3 = z ** 3 + z * z * a1 + z * a2 + a3
    return InvariantTriple(b1, b2, b3, inv.system if system is None else system)


def stretch_to_strain_inv(r: InvariantTriple) -> InvariantTriple:
    _require(r, "r")
    r1, r2, r3 = r.k1, r.k2, r.k3
    return InvariantTriple(r1 * r1 - 2 * r2, r2 * r2 - 2 * r1 * r3, r3 * r3, "i")


def _newton(residual, jacobian, x0, scale, what):
    x = np.array(x0, dtype=float)
    tol = NEWTON_TOL * max(1.0, scale)
    for _ in range(NEWTON_MAXITER):
        res = residual(x)
        if np.max(np.abs(res)) <= tol:
            return x
        J = jacobian(x)
        if abs(np.linalg.det(J)) < 1e-14 * max(1.0, np.max(np.abs(J))) ** 3:
            raise SingularJacobian(f"{what}: degenerate Jacobian at {x}")
        x = x - np.linalg.solve(J, res)
        if not np.all(np.isfinite(x)):
            break
    res = residual(x) if np.all(np.isfinite(x)) else np.full(3, np.inf)
    if np.max(np.abs(res)) <= tol:
        return x
    raise NoConvergence(f"{what}: Newton failed after {NEWTON_MAXITER} iterations")


def strain_to_stretch_inv(i: InvariantTriple, guess_lambda: float = 1.0) -> InvariantTriple:
    """Invert ``stretch_to_strain_inv`` by Newton's method from the dilation
    ``guess_lambda * I``."""
    _require(i, "i")
    target = np.array([i.k1, i.k2, i.k3], dtype=float)
    lam = float(guess_lambda)

    def residual(r):
        r1, r2, r3 = r
        return np.array([r1 * r1 - 2 * r2, r2 * r2 - 2 * r1 * r3, r3 * r3]) - target

    def jacobian(r):
        r1, r2, r3 = r
        return np.array([[2 * r1, -2.0, 0.0], [-2 * r3, 2 * r2, -2 * r1], [0.0, 0.0, 2 * r3]])

    x = _newton(residual, jacobian, [3 * lam, 3 * lam ** 2, lam ** 3],
                float(np.max(np.abs(target))), "strain_to_stretch_inv")
    return InvariantTriple(*map(float, x), "r")


def s_to_j(s: InvariantTriple, lam: float) -> InvariantTriple:
    _require(s, "s")
    s1, s2, s3 = s.k1, s.k2, s.k3
    j1 = 2 * lam * s1 + s1 * s1 - 2 * s2
    j2 = 4 * lam ** 2 * s2 + 2 * lam * s1 * s2 - 6 * lam * s3 + s2 * s2 - 2 * s1 * s3
    j3 = 8 * lam ** 3 * s3 + 4 * lam ** 2 * s1 * s3 + 2 * lam * s2 * s3 + s3 * s3
    return InvariantTriple(j1, j2, j3, "j")


def j_to_s(j: InvariantTriple, lam: float) -> InvariantTriple:
    """Local inverse of ``s_to_j`` near the origin."""
    _require(j, "j")
    target = np.array([j.k1, j.k2, j.k3], dtype=float)

    def residual(s):
        return s_to_j(InvariantTriple(*s, "s"), lam).as_array() - target

    def jacobian(s):
        s1, s2, s3 = s
        return np.array([
            [2 * lam + 2 * s1, -2.0, 0.0],
            [2 * lam * s2 - 2 * s3, 4 * lam ** 2 + 2 * lam * s1 + 2 * s2, -6 * lam - 2 * s1],
            [4 * lam ** 2 * s3, 2 * lam * s3, 8 * lam ** 3 + 4 * lam ** 2 * s1 + 2 * lam * s2 + 2 * s3],
        ])

    x = _newton(residual, jacobian, [0.0, 0.0, 0.0], float(np.max(np.abs(target))), "j_to_s")
    return InvariantTriple(*map(float, x), "s")


def distortional_vars(s: InvariantTriple, lam) -> DistortionalVars:
    _require(s, "s")
    s1, s2, s3 = s.k1, s.k2, s.k3
    z1 = lam + s1 / 3.0
    z2 = s2 - s1 * s1 / 3.0
    z3 = s3 - s1 * s2 / 3.0 + 2.0 * s1 ** 3 / 27.0
    return DistortionalVars(z1, z2, z3)


def sqrt_spd(M, sym_tol: float = 1e-12) -> np.ndarray:
    """Symmetric positive definite square root via symmetric eigendecomposition.

    Works on a single matrix or a stack ``(..., 3, 3)``.
    """
    M = np.asarray(M, dtype=float)
    if not np.all(np.isfinite(M)):
        raise NotSPD("matrix has non-finite entries")
    scale = np.max(np.abs(M), axis=(-2, -1), keepdims=True)
    asym = np.abs(M - np.swapaxes(M, -1, -2))
    if np.any(asym > sym_tol * np.maximum(scale, 1.0)):
        raise NotSPD("matrix is not symmetric")
    w, V = np.linalg.eigh(0.5 * (M + np.swapaxes(M, -1, -2)))
    if np.any(w <= 0):
        raise NotSPD(f"matrix has non-positive eigenvalue {np.min(w):.3e}")
    return np.einsum("...ik,...k,...jk->...ij", V, np.sqrt(w), V)


def stretch_invariants(F, lam) -> InvariantTriple:
    """``s``-invariants of ``sqrt(F^T F) - lam I`` for one or many ``F``."""
    F = np.asarray(F, dtype=float)
    FtF = np.einsum("...ki,...kj->...ij", F, F)
    U = sqrt_spd(FtF)
    return invariants3(U - lam * np.eye(3), "s")
