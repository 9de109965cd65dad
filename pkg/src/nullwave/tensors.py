"""Coefficient tensors of the quadratic elastodynamics system at a dilation.

Index conventions (``F[i, l] = d_l phi^i``)::

    A[i, j, l, m]        = d^2 sigma / dF[i,l] dF[j,m]           at F = lam I
    B[i, j, k, l, m, n]  = d^3 sigma / dF[i,l] dF[j,m] dF[k,n]   at F = lam I

``A`` has a closed form in the wave speeds; ``B`` is extracted by finite
differences of the stored energy as a function of ``F``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from .constitutive import StoredEnergyModel, eval_tau, speeds
from .errors import AsymmetryTooLarge, DirectionMismatch, RouteMismatch
from .invariants import InvariantTriple, stretch_invariants

A_STEP = 1e-4
B_STEP = 5e-3
ROUTE_TOL = 1e-4
ASYM_TOL = 1e-4

_PAIR_PERMS = list(itertools.permutations(range(3)))


@dataclass(frozen=True)
class TensorA:
    lam: float
    entries: np.ndarray  # (3, 3, 3, 3), order (i, j, l, m)

    def symbol(self, xi) -> np.ndarray:
        """``A(xi)[i, j] = A[i, j, l, m] xi_l xi_m``."""
        xi = np.asarray(xi, dtype=float)
        return np.einsum("ijlm,l,m->ij", self.entries, xi, xi)

    def pair_asymmetry(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.transpose(1, 0, 3, 2))))


@dataclass(frozen=True)
class TensorB:
    lam: float
    entries: np.ndarray  # (3,)*6, order (i, j, k, l, m, n)
    raw_asymmetry: float = 0.0

    def orbit_asymmetry(self) -> float:
        return _orbit_asymmetry(self.entries)

    def contract_dirs(self, xi) -> np.ndarray:
        """``bhat[i, j, k] = B[i, j, k, l, m, n] xi_l xi_m xi_n``."""
        xi = np.asarray(xi, dtype=float)
        return np.einsum("ijklmn,l,m,n->ijk", self.entries, xi, xi, xi)

    def as_matrix27(self) -> np.ndarray:
        """``M[(i,k,n), (j,l,m)] = B[i,j,k,l,m,n]``, the layout used by the stencil kernels."""
        return np.ascontiguousarray(self.entries.transpose(0, 2, 5, 1, 3, 4).reshape(27, 27))


@dataclass(frozen=True)
class PlaneWave:
    """Real coefficients of ``a exp(i beta (<xi, x> - c t))``."""

    family: int
    direction: np.ndarray
    amplitude: np.ndarray
    frequency: float
    speed: float

    def __post_init__(self):
        xi = np.asarray(self.direction, dtype=float)
        a = np.asarray(self.amplitude, dtype=float)
        if self.family not in (1, 2):
            raise ValueError("family must be 1 or 2")
        if abs(np.linalg.norm(xi) - 1.0) > 1e-12:
            raise ValueError("direction must be a unit vector")
        if self.family == 1:
            off = np.linalg.norm(a - np.dot(a, xi) * xi)
        else:
            off = abs(np.dot(a, xi))
        if off > 1e-12 * max(1.0, np.linalg.norm(a)):
            raise ValueError(f"amplitude does not fit family {self.family}")
        object.__setattr__(self, "direction", xi)
        object.__setattr__(self, "amplitude", a)


def plane_wave(family, xi, amplitude, frequency, c1_sq, c2_sq) -> PlaneWave:
    """Plane wave of a family; a scalar ``amplitude`` along ``xi`` (family 1)
    or along a fixed unit vector orthogonal to ``xi`` (family 2)."""
    xi = np.asarray(xi, dtype=float)
    xi = xi / np.linalg.norm(xi)
    if np.ndim(amplitude) == 0:
        if family == 1:
            amplitude = amplitude * xi
        else:
            amplitude = amplitude * orthonormal_frame(xi)[1]
    speed = np.sqrt(c1_sq if family == 1 else c2_sq)
    return PlaneWave(family, xi, np.asarray(amplitude, float), float(frequency), float(speed))


def orthonormal_frame(xi) -> np.ndarray:
    """Rows ``xi, eta1, eta2`` of a right-handed orthonormal frame."""
    xi = np.asarray(xi, dtype=float)
    xi = xi / np.linalg.norm(xi)
    helper = np.eye(3)[np.argmin(np.abs(xi))]
    e1 = np.cross(xi, helper)
    e1 /= np.linalg.norm(e1)
    return np.array([xi, e1, np.cross(xi, e1)])


def random_unit(rng, n=None):
    v = rng.standard_normal((3,) if n is None else (n, 3))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def random_rotations(rng, n):
    return Rotation.random(n, random_state=rng).as_matrix()


# ---------------------------------------------------------------- sigma(F)

def sigma_of_F(model: StoredEnergyModel, lam_ref, F):
    """Stored energy of the deformation gradient(s) ``F`` (shape (..., 3, 3))."""
    s = stretch_invariants(F, lam_ref)
    return eval_tau(model, lam_ref, s)


def closed_form_A(model: StoredEnergyModel, lam) -> TensorA:
    c1_sq, c2_sq = speeds(model, lam)
    tau2 = float(model.g(lam))
    d = np.eye(3)
    A = (c2_sq * np.einsum("ij,lm->ijlm", d, d)
         + (c1_sq + tau2) * np.einsum("il,jm->ijlm", d, d)
         - (c2_sq + tau2) * np.einsum("im,jl->ijlm", d, d))
    return TensorA(float(lam), A)


def fd_A(model: StoredEnergyModel, lam, step=A_STEP) -> TensorA:
    """Central second differences of ``sigma_of_F`` in the nine entries of F."""
    h = step * (1.0 + lam)
    E = np.eye(9).reshape(9, 3, 3)
    base = lam * np.eye(3)
    signs = np.array([(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)], dtype=float)
    a_idx, b_idx = np.triu_indices(9)
    pts = (base + h * (signs[:, 0, None, None, None] * E[a_idx][None]
                       + signs[:, 1, None, None, None] * E[b_idx][None]))
    vals = sigma_of_F(model, lam, pts.reshape(-1, 3, 3)).reshape(4, -1)
    D = np.einsum("s,sp->p", signs[:, 2], vals) / (4 * h * h)
    H = np.zeros((9, 9))
    H[a_idx, b_idx] = D
    H[b_idx, a_idx] = D
    # H[(i,l), (j,m)] -> A[i, j, l, m]
    return TensorA(float(lam), H.reshape(3, 3, 3, 3).transpose(0, 2, 1, 3).copy())


def compute_A(model: StoredEnergyModel, lam, step=A_STEP, tol=ROUTE_TOL, check=True) -> TensorA:
    """Closed-form tensor, cross-checked against finite differences of sigma."""
    A = closed_form_A(model, lam)
    if check:
        diff = np.max(np.abs(fd_A(model, lam, step).entries - A.entries))
        if diff > tol:
            raise RouteMismatch(f"closed-form and finite-difference A differ by {diff:.3e}")
    return A


def _third_differences(model, lam, h):
    """All 9^3 ordered mixed third differences, D[a, b, c]."""
    E = np.eye(9).reshape(9, 3, 3)
    S = np.array(list(itertools.product((1.0, -1.0), repeat=3)))  # (8, 3)
    weight = S.prod(axis=1)
    a, b, c = np.meshgrid(np.arange(9), np.arange(9), np.arange(9), indexing="ij")
    a, b, c = a.ravel(), b.ravel(), c.ravel()
    disp = (S[:, 0, None, None, None] * E[a][None] + S[:, 1, None, None, None] * E[b][None]
            + S[:, 2, None, None, None] * E[c][None])
    pts = lam * np.eye(3) + h * disp
    vals = sigma_of_F(model, lam, pts.reshape(-1, 3, 3)).reshape(8, -1)
    return (weight @ vals).reshape(9, 9, 9) / (8 * h ** 3)


def _orbit_average(D):
    return sum(D.transpose(p) for p in _PAIR_PERMS) / len(_PAIR_PERMS)


def _orbit_asymmetry(B):
    D = _to_pairs(B)
    return float(max(np.max(np.abs(D - D.transpose(p))) for p in _PAIR_PERMS))


def _to_pairs(B):
    # B[i,j,k,l,m,n] -> D[(i,l), (j,m), (k,n)]
    return B.transpose(0, 3, 1, 4, 2, 5).reshape(9, 9, 9)


def _from_pairs(D):
    return D.reshape(3, 3, 3, 3, 3, 3).transpose(0, 2, 4, 1, 3, 5).copy()


def compute_B(model: StoredEnergyModel, lam, step=B_STEP, tol=ASYM_TOL) -> TensorB:
    """Third derivatives of sigma at ``lam I``: central differences, one
    Richardson extrapolation, then averaging over the pair permutations."""
    h = step * (1.0 + lam)
    D = (4.0 * _third_differences(model, lam, h / 2) - _third_differences(model, lam, h)) / 3.0
    asym = float(max(np.max(np.abs(D - D.transpose(p))) for p in _PAIR_PERMS))
    if asym > tol:
        raise AsymmetryTooLarge(f"pair-permutation asymmetry {asym:.3e} exceeds {tol:.1e}")
    return TensorB(float(lam), _from_pairs(_orbit_average(D)), asym)


# ---------------------------------------------------------------- contractions

def longitudinal_contraction(B: TensorB, xi) -> float:
    xi = np.asarray(xi, dtype=float)
    return float(np.einsum("ijk,i,j,k->", B.contract_dirs(xi), xi, xi, xi))


def null_contractions(B: TensorB, trials: int = 100, rng=None) -> tuple[float, float]:
    """Largest |longitudinal| and |transverse| six-fold contractions over
    random directions (transverse vectors drawn in the plane orthogonal to xi)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(0) if rng is None else rng
    long_max = trans_max = 0.0
    for _ in range(trials):
        xi = random_unit(rng)
        frame = orthonormal_frame(xi)
        b = B.contract_dirs(xi)
        etas = rng.standard_normal((3, 2)) @ frame[1:]
        etas /= np.linalg.norm(etas, axis=1, keepdims=True)
        long_max = max(long_max, abs(np.einsum("ijk,i,j,k->", b, xi, xi, xi)))
        trans_max = max(trans_max, abs(np.einsum("ijk,i,j,k->", b, *etas)))
    return float(long_max), float(trans_max)


def apply_N(B: TensorB, du, d2v, dv, d2u):
    """``B[i,j,k,l,m,n] (d_l d_m u^j d_n v^k + d_m u^j d_l d_n v^k)``.

    ``du[j, m] = d_m u^j`` and ``d2u[j, l, m] = d_l d_m u^j``; extra trailing
    axes (grid points) broadcast.
    """
    Bt = B.entries
    return (np.einsum("ijklmn,jlm...,kn...->i...", Bt, d2u, dv)
            + np.einsum("ijklmn,jm...,kln...->i...", Bt, du, d2v))


def resonance_bracket(u: PlaneWave, v: PlaneWave, w: PlaneWave, B: TensorB) -> float:
    """Amplitude coefficient of ``<u, N(v, w)>`` for three plane waves.

    With ``v = a_v e^{i beta_v phase}`` and likewise ``w``, the derivative
    pattern of N gives ``-i beta_v beta_w (beta_v + beta_w)`` times the
    contraction; the returned real scalar drops the factor ``-i``.
    """
    xi = u.direction
    for other in (v, w):
        if np.max(np.abs(other.direction - xi)) > 1e-12:
            raise DirectionMismatch("plane waves must share their direction")
    bv, bw = v.frequency, w.frequency
    c = np.einsum("ijk,i,j,k->", B.contract_dirs(xi), u.amplitude, v.amplitude, w.amplitude)
    return float(bv * bw * (bv + bw) * c)


def rotate_A(A, Q):
    return np.einsum("ia,jb,lc,md,abcd->ijlm", Q, Q, Q, Q, A)


def rotate_B(B, Q):
    out = B
    # rotate one index at a time: cheaper than a single 12-index einsum
    for ax in range(6):
        out = np.moveaxis(np.tensordot(Q, out, axes=([1], [ax])), 0, ax)
    return out


def check_isotropy(A: TensorA, B: TensorB, trials: int = 20, rng=None) -> tuple[float, float]:
    """Largest entrywise change of A and B under random rotations."""
    rng = np.random.default_rng(0) if rng is None else rng
    resA = resB = 0.0
    for Q in random_rotations(rng, trials):
        if A is not None:
            resA = max(resA, float(np.max(np.abs(rotate_A(A.entries, Q) - A.entries))))
        if B is not None:
            resB = max(resB, float(np.max(np.abs(rotate_B(B.entries, Q) - B.entries))))
    return resA, resB


@dataclass(frozen=True)
class MaterialTensors:
    lam: float
    c1_sq: float
    c2_sq: float
    A: TensorA
    B: TensorB


def material_tensors(model: StoredEnergyModel, lam, check=True) -> MaterialTensors:
    c1_sq, c2_sq = speeds(model, lam)
    return MaterialTensors(float(lam), float(c1_sq), float(c2_sq),
                           compute_A(model, lam, check=check), compute_B(model, lam))
