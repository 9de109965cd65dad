"""Closed-form space-time vector fields and the exact operator identities.

Fields are sympy 3-vectors in ``(t, x1, x2, x3)``; operators act symbolically
and residuals are evaluated numerically at sample points, so they measure
roundoff only.
"""
from __future__ import annotations

import numpy as np
import sympy as sp

from ..errors import SingularPoint
from .grid import LEVI, U_MATS, FieldState, Grid3

T, X1, X2, X3 = sp.symbols("t x1 x2 x3", real=True)
XS = (X1, X2, X3)
VARS = (T, X1, X2, X3)
R = sp.sqrt(X1 ** 2 + X2 ** 2 + X3 ** 2)


class AnalyticField:
    """A 3-vector field given by sympy expressions in t, x1, x2, x3."""

    def __init__(self, components):
        comps = list(components)
        if len(comps) != 3:
            raise ValueError("analytic fields have three components")
        self.expr = sp.Matrix([sp.sympify(c) for c in comps])
        self._fn = None

    @classmethod
    def from_scalar(cls, phi, direction):
        return cls([sp.sympify(phi) * d for d in direction])

    def __getitem__(self, i):
        return self.expr[i]

    def __add__(self, other):
        return AnalyticField(self.expr + _mat(other))

    def __sub__(self, other):
        return AnalyticField(self.expr - _mat(other))

    def __mul__(self, k):
        return AnalyticField(self.expr * sp.sympify(k))

    __rmul__ = __mul__

    def __neg__(self):
        return AnalyticField(-self.expr)

    def __call__(self, t, x):
        """Evaluate at times ``t`` (broadcast) and points ``x`` (..., 3)."""
        if self._fn is None:
            self._fn = sp.lambdify(VARS, list(self.expr), modules="numpy", cse=True)
        x = np.asarray(x, dtype=float)
        vals = self._fn(t, x[..., 0], x[..., 1], x[..., 2])
        shape = np.broadcast_shapes(np.shape(t), x.shape[:-1])
        return np.stack([np.broadcast_to(v, shape) for v in vals], axis=-1).astype(float)

    def sample(self, grid: Grid3, t=0.0) -> FieldState:
        """Discrete state with ``u`` and ``u_t`` sampled on the grid nodes."""
        X = np.moveaxis(grid.coords(), 0, -1)
        u = np.moveaxis(self(t, X), -1, 0)
        ut = np.moveaxis(d(0, self)(t, X), -1, 0)
        return FieldState(np.ascontiguousarray(u), np.ascontiguousarray(ut), float(t), grid)


def _mat(v):
    return v.expr if isinstance(v, AnalyticField) else sp.Matrix(v)


def _field(m):
    return AnalyticField(list(m))


def _mdiff(m, var, n=1):
    """Elementwise derivative of a column matrix."""
    return sp.Matrix([e.diff(var, n) for e in m])


# ---------------------------------------------------------------- operators

def d(k, u: AnalyticField) -> AnalyticField:
    """``d_k``: k = 0 is time, 1..3 space."""
    return _field(_mdiff(u.expr, VARS[k]))


def omega(l, u: AnalyticField) -> AnalyticField:
    """``Omega_l = eps_{lab} x_a d_b`` (l = 0, 1, 2) componentwise."""
    a, b = (l + 1) % 3, (l + 2) % 3
    return _field(XS[a] * _mdiff(u.expr, XS[b]) - XS[b] * _mdiff(u.expr, XS[a]))


def omega_t(l, u: AnalyticField) -> AnalyticField:
    return _field(omega(l, u).expr + sp.Matrix(U_MATS[l].astype(int)) * u.expr)


def scaling(u: AnalyticField) -> AnalyticField:
    """``S~ = t d_t + r d_r - 1``."""
    e = u.expr
    return _field(T * _mdiff(e, T) + sum((XS[a] * _mdiff(e, XS[a]) for a in range(3)), sp.zeros(3, 1)) - e)


def d_r(u: AnalyticField) -> AnalyticField:
    e = u.expr
    return _field(sum((XS[a] / R * _mdiff(e, XS[a]) for a in range(3)), sp.zeros(3, 1)))


def radial_scaling(u: AnalyticField) -> AnalyticField:
    """``r d_r - 1`` (time-independent scaling)."""
    e = u.expr
    return _field(sum((XS[a] * _mdiff(e, XS[a]) for a in range(3)), sp.zeros(3, 1)) - e)


def apply_A(u: AnalyticField, c1_sq, c2_sq) -> AnalyticField:
    """``c2^2 Lap u + (c1^2 - c2^2) grad div u``."""
    e = u.expr
    lap = sum((_mdiff(e, x, 2) for x in XS), sp.zeros(3, 1))
    div = sum(e[i].diff(XS[i]) for i in range(3))
    gd = sp.Matrix([div.diff(x) for x in XS])
    return _field(c2_sq * lap + (c1_sq - c2_sq) * gd)


def apply_L(u: AnalyticField, c1_sq, c2_sq) -> AnalyticField:
    return _field(_mdiff(u.expr, T, 2) - apply_A(u, c1_sq, c2_sq).expr)


def project(u: AnalyticField, alpha: int) -> AnalyticField:
    """``P_1 u = (x/r) <x/r, u>``, ``P_2 = I - P_1``."""
    xv = sp.Matrix(XS)
    p1 = xv * (xv.dot(u.expr)) / R ** 2
    return _field(p1 if alpha == 1 else u.expr - p1)


def apply_named(name: str, u: AnalyticField, speeds=None) -> AnalyticField:
    if name == "d0":
        return d(0, u)
    if name in ("d1", "d2", "d3"):
        return d(int(name[1]), u)
    if name in ("Om1", "Om2", "Om3"):
        return omega(int(name[2]) - 1, u)
    if name in ("Omt1", "Omt2", "Omt3"):
        return omega_t(int(name[3]) - 1, u)
    if name == "S":
        return scaling(u)
    if name == "R":
        return radial_scaling(u)
    if name == "dr":
        return d_r(u)
    if name in ("A", "L"):
        if speeds is None:
            raise ValueError(f"operator {name} needs the wave speeds")
        return (apply_A if name == "A" else apply_L)(u, *speeds)
    raise ValueError(f"unknown vector field {name!r}")


def apply_word(word, u: AnalyticField, speeds=None) -> AnalyticField:
    for w in reversed(tuple(word)):
        u = apply_named(w, u, speeds)
    return u


# ---------------------------------------------------------------- residuals

def _points(points):
    p = np.atleast_2d(np.asarray(points, dtype=float))
    if p.shape[-1] != 4:
        raise ValueError("sample points are rows (t, x1, x2, x3)")
    return p


def max_difference(a: AnalyticField, b: AnalyticField, points) -> float:
    p = _points(points)
    diff = a - b
    return float(np.max(np.abs(diff(p[:, 0], p[:, 1:]))))


def scaling_identity_sides(u: AnalyticField, speeds, alpha: int, which: str = "a", term_speed=None):
    """Both sides of the exact identities used for the weighted estimates.

    ``which="a"``:
        (c^2 t^2 - r^2) A u = c^2 (t d_t - r d_r) S~u - r^2 [A u - c^2 d_r^2 u] - c^2 t^2 L u
    ``which="b"``:
        (c t - r) d_t d_r u = (c d_r - d_t) S~u + ((c t - r)/c) A u
                              + (r/c) [A u - c^2 d_r^2 u] + t L u

    ``c = c_alpha``; ``term_speed`` replaces ``c`` in the last term only,
    which breaks the identity (used to check the detector).
    """
    c1_sq, c2_sq = speeds
    csq = sp.sympify(c1_sq if alpha == 1 else c2_sq)
    c = sp.sqrt(csq)
    cl = c if term_speed is None else term_speed
    parts = _identity_parts(u, c1_sq, c2_sq)
    Au, Lu, drr = parts["Au"], parts["Lu"], parts["drr"]
    if which == "a":
        lhs = (csq * T ** 2 - R ** 2) * Au
        tdt_rdr = parts["dtSu"] * T - parts["drSu"] * R
        rhs = csq * tdt_rdr - R ** 2 * (Au - csq * drr) - cl ** 2 * T ** 2 * Lu
    elif which == "b":
        lhs = (c * T - R) * parts["drdtu"]
        rhs = (c * parts["drSu"] - parts["dtSu"] + (c * T - R) / c * Au
               + R / c * (Au - csq * drr) + T * cl / c * Lu)
    else:
        raise ValueError("which must be 'a' or 'b'")
    return _field(lhs), _field(rhs)


def _identity_parts(u: AnalyticField, c1_sq, c2_sq):
    """Derivatives shared by both identities and both families, cached on ``u``."""
    cache = u.__dict__.setdefault("_parts", {})
    key = (sp.sympify(c1_sq), sp.sympify(c2_sq))
    if key not in cache:
        Su = scaling(u)
        Au = apply_A(u, c1_sq, c2_sq).expr
        cache[key] = {
            "Au": Au, "Lu": _mdiff(u.expr, T, 2) - Au, "drr": d_r(d_r(u)).expr,
            "dtSu": d(0, Su).expr, "drSu": d_r(Su).expr, "drdtu": d_r(d(0, u)).expr,
        }
    return cache[key]


def verify_scaling_identity(u: AnalyticField, speeds, alpha: int, points, which="both", term_speed=None) -> float:
    p = _points(points)
    if np.any(np.linalg.norm(p[:, 1:], axis=1) < 1e-12):
        raise SingularPoint("identity involves d_r, undefined at r = 0")
    parts = ("a", "b") if which == "both" else (which,)
    res = 0.0
    for w in parts:
        lhs, rhs = scaling_identity_sides(u, speeds, alpha, w, term_speed)
        res = max(res, max_difference(lhs, rhs, p))
    return res


def decomposition_residual(u: AnalyticField, points) -> float:
    """``grad u^j - [(x/r) d_r u^j - (x/r^2) ^ Omega u^j]`` for every component."""
    p = _points(points)
    xv = sp.Matrix(XS)
    res = 0.0
    for j in range(3):
        uj = u.expr[j]
        g = sp.Matrix([uj.diff(x) for x in XS])
        drj = sum(XS[a] / R * uj.diff(XS[a]) for a in range(3))
        om = sp.Matrix([omega(l, AnalyticField([uj, 0, 0])).expr[0] for l in range(3)])
        rest = g - xv / R * drj + (xv / R ** 2).cross(om)
        res = max(res, max_difference(_field(rest), _field(sp.zeros(3, 1)), p))
    return res


def expected_commutator(a: str, b: str, u: AnalyticField, speeds=None) -> AnalyticField:
    """``[a, b] u`` from the structure constants of the vector fields:

    [d_0, S~] = d_0, [d_k, S~] = d_k, [d_k, Om~_l] = eps_{lkb} d_b,
    [Om~_i, Om~_j] = -eps_{ijk} Om~_k, [S~, L] = -2 L, everything else 0.
    """
    def sign_swap(x, y):
        out = expected_commutator(y, x, u, speeds)
        return -out

    zero = _field(sp.zeros(3, 1))
    spatial = ("d1", "d2", "d3")
    rots = ("Omt1", "Omt2", "Omt3")
    if a in ("d0",) + spatial and b == "S":
        return apply_named(a, u)
    if b in ("d0",) + spatial and a == "S":
        return sign_swap(a, b)
    if a in spatial and b in rots:
        k, l = int(a[1]) - 1, int(b[3]) - 1
        out = zero
        for m in range(3):
            if LEVI[l, k, m]:
                out = out + apply_named(f"d{m + 1}", u) * int(LEVI[l, k, m])
        return out
    if a in rots and b in spatial:
        return sign_swap(a, b)
    if a in rots and b in rots:
        i, j = int(a[3]) - 1, int(b[3]) - 1
        out = zero
        for k in range(3):
            if LEVI[i, j, k]:
                out = out + omega_t(k, u) * int(-LEVI[i, j, k])
        return out
    if a == "S" and b == "L":
        return apply_L(u, *speeds) * -2
    if a == "L" and b == "S":
        return sign_swap(a, b)
    return zero


def commutator(a: str, b: str, u: AnalyticField, speeds=None) -> AnalyticField:
    return apply_named(a, apply_named(b, u, speeds), speeds) - apply_named(b, apply_named(a, u, speeds), speeds)


def commutator_residual(pair, u: AnalyticField, points, speeds=None) -> float:
    """Largest deviation of ``[a, b] u`` from its structure-constant value.

    ``pair`` names two operators from ``d0..d3, Omt1..3, S, A, L``; pairs
    with ``A`` check that the modified rotations commute with it.
    """
    a, b = pair
    return max_difference(commutator(a, b, u, speeds), expected_commutator(a, b, u, speeds), points)


def projection_commutator_residual(op: str, alpha: int, u: AnalyticField, points) -> float:
    """``|op P_alpha u - P_alpha op u|`` at the sample points."""
    lhs = apply_named(op, project(u, alpha))
    rhs = project(apply_named(op, u), alpha)
    return max_difference(lhs, rhs, points)


# ---------------------------------------------------------------- quadrature

def box_quadrature(values_fn, L, nq=64, panels=4):
    """Composite Gauss-Legendre integral of ``values_fn(X)`` over [-L, L]^3,
    where ``X`` has shape (m, m, m, 3)."""
    g, w = np.polynomial.legendre.leggauss(nq)
    edges = np.linspace(-L, L, panels + 1)
    half = (edges[1] - edges[0]) / 2
    x = np.concatenate([(a + b) / 2 + half * g for a, b in zip(edges[:-1], edges[1:])])
    wx = np.tile(w * half, panels)
    X = np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1)
    vals = values_fn(X)
    return float(np.einsum("ijk...,i,j,k->...", vals, wx, wx, wx))


def analytic_energy(u: AnalyticField, speeds, t, L, nq=24, panels=4) -> float:
    """``E_1`` of an analytic field by quadrature over the box."""
    c1_sq, c2_sq = speeds
    ut = d(0, u)
    grads = [d(k, u) for k in (1, 2, 3)]

    def dens(X):
        e = np.sum(ut(t, X) ** 2, axis=-1)
        G = [g(t, X) for g in grads]
        e = e + c2_sq * sum(np.sum(gk ** 2, axis=-1) for gk in G)
        div = sum(G[k][..., k] for k in range(3))
        return 0.5 * (e + (c1_sq - c2_sq) * div ** 2)

    return box_quadrature(dens, L, nq, panels)


def random_points(rng, n, t_range=(0.0, 2.0), radius=2.0, min_radius=0.2):
    """``n`` sample rows (t, x) with ``min_radius <= |x| <= radius``."""
    t = rng.uniform(*t_range, n)
    v = rng.standard_normal((n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    r = rng.uniform(min_radius, radius, n)
    return np.column_stack([t, v * r[:, None]])


def gaussian_fixture(seed=0, degree=2) -> AnalyticField:
    """Random polynomial times a space-time Gaussian, reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    monos = [T ** a * X1 ** b * X2 ** c * X3 ** e
             for a in range(degree + 1) for b in range(degree + 1)
             for c in range(degree + 1) for e in range(degree + 1) if a + b + c + e <= degree]
    env = sp.exp(-(X1 ** 2 + X2 ** 2 + X3 ** 2) / 2 - T ** 2 / 4)
    comps = []
    for _ in range(3):
        coef = [sp.Rational(int(k), 4) for k in rng.integers(-4, 5, len(monos))]
        comps.append(sum(cf * m for cf, m in zip(coef, monos)) * env)
    return AnalyticField(comps)


def polynomial_fixture(seed=0, degree=3) -> AnalyticField:
    """Random space-time polynomial of total degree ``degree``; cheap to
    differentiate, and rich enough for identities among first and second
    order operators."""
    rng = np.random.default_rng(seed)
    monos = [T ** a * X1 ** b * X2 ** c * X3 ** e
             for a in range(degree + 1) for b in range(degree + 1)
             for c in range(degree + 1) for e in range(degree + 1) if a + b + c + e <= degree]
    comps = []
    for _ in range(3):
        coef = [sp.Rational(int(k), 4) for k in rng.integers(-4, 5, len(monos))]
        comps.append(sum(cf * m for cf, m in zip(coef, monos)))
    return AnalyticField(comps)
