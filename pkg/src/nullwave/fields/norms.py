"""Energies, weighted norms and projections of discrete fields."""
from __future__ import annotations

import itertools
from collections import Counter

import numpy as np

from .._kernels_py import d1
from ..errors import NeedsTimeDerivative
from . import analytic as an
from .grid import GAMMA, LAMBDA, TIME_CONSUMING, Closure, FieldState, Grid3, Jet, apply_jet

TRANSLATIONS = ("d0", "d1", "d2", "d3")
MAX_DISCRETE_ORDER = 3


def _speeds(material):
    if isinstance(material, Closure):
        return material.c1_sq, material.c2_sq
    c1_sq, c2_sq = material[0], material[1]
    return float(c1_sq), float(c2_sq)


def _closure(material):
    return material if isinstance(material, Closure) else None


def canonical_word(word):
    """Sort runs of adjacent translations, which commute exactly (also for
    the difference stencils); every other order is kept."""
    out, run = [], []
    for w in word:
        if w in TRANSLATIONS:
            run.append(w)
        else:
            out.extend(sorted(run))
            run = []
            out.append(w)
    out.extend(sorted(run))
    return tuple(out)


def words(alphabet, max_len):
    """Ordered words of length <= max_len as a Counter of canonical
    representatives with their multiplicities."""
    cnt = Counter()
    for k in range(max_len + 1):
        for w in itertools.product(alphabet, repeat=k):
            cnt[canonical_word(w)] += 1
    return cnt


class _WordCache:
    """Memoised ``Gamma^a`` applied to one base jet."""

    def __init__(self, jet: Jet):
        self.base = jet
        self.X = jet.grid.coords()
        self.cache = {}

    def get(self, word, depth) -> Jet:
        word = tuple(word)
        key = (word, depth)
        if key in self.cache:
            return self.cache[key]
        if not word:
            self.base.extend(depth)
            res = Jet(self.base.levels[:depth], self.base.t, self.base.grid, self.base.closure)
        else:
            head, tail = word[0], word[1:]
            inner = self.get(tail, depth + (1 if head in TIME_CONSUMING else 0))
            res = apply_jet(head, inner, depth, self.X)
        self.cache[key] = res
        return res


def l2(f, grid: Grid3, mask=None) -> float:
    sq = np.sum(f * f, axis=0) if f.ndim == 4 else f * f
    if mask is not None:
        sq = sq[mask]
    return float(np.sqrt(grid.cell_volume * np.sum(sq)))


def project(field, alpha: int, grid: Grid3 | None = None):
    """Radial (alpha=1) or transverse (alpha=2) part, pointwise."""
    if alpha not in (1, 2):
        raise ValueError("alpha must be 1 or 2")
    if isinstance(field, an.AnalyticField):
        return an.project(field, alpha)
    if isinstance(field, FieldState):
        ut = None if field.ut is None else project(field.ut, alpha, field.grid)
        return FieldState(project(field.u, alpha, field.grid), ut, field.t, field.grid)
    X = grid.coords()
    r2 = np.sum(X * X, axis=0)
    p1 = X * (np.sum(X * field, axis=0) / r2)
    return p1 if alpha == 1 else field - p1


def _e1_density(u, ut, grid, c1_sq, c2_sq):
    G = np.stack([np.stack([_d(u[k], a, grid) for a in range(3)]) for k in range(3)])
    div = G[0, 0] + G[1, 1] + G[2, 2]
    return 0.5 * (np.sum(ut * ut, axis=0) + c2_sq * np.sum(G * G, axis=(0, 1)) + (c1_sq - c2_sq) * div * div)


def _d(f, axis, grid):
    return d1(f, axis, grid.h, grid.periodic)


def energy_e1(u, ut, grid: Grid3, c1_sq, c2_sq) -> float:
    return float(grid.cell_volume * np.sum(_e1_density(u, ut, grid, c1_sq, c2_sq)))


def energy(state, material, kappa: int = 1, L=None, t=None) -> float:
    """``E_kappa``: sum of ``E_1(Gamma^a u)`` over ordered words ``|a| <= kappa - 1``.

    ``material`` is ``(c1_sq, c2_sq)`` or a :class:`Closure`; time derivatives
    beyond ``u_t`` need the closure. Analytic fields are integrated by
    quadrature over ``[-L, L]^3`` at time ``t``.
    """
    c1_sq, c2_sq = _speeds(material)
    if kappa < 1:
        raise ValueError("kappa >= 1")
    if isinstance(state, an.AnalyticField):
        total = 0.0
        for w, mult in words(GAMMA, kappa - 1).items():
            total += mult * an.analytic_energy(an.apply_word(w, state), (c1_sq, c2_sq), t, L)
        return total
    if kappa > MAX_DISCRETE_ORDER:
        raise ValueError(f"discrete energies are limited to kappa <= {MAX_DISCRETE_ORDER}")
    if state.ut is None:
        raise NeedsTimeDerivative("energy needs u_t")
    if kappa >= 2 and _closure(material) is None:
        raise NeedsTimeDerivative("higher energies of discrete states need a material closure")
    cache = _WordCache(Jet.from_state(state, _closure(material)))
    total = 0.0
    for w, mult in words(GAMMA, kappa - 1).items():
        j = cache.get(w, 2)
        total += mult * energy_e1(j.levels[0], j.levels[1], state.grid, c1_sq, c2_sq)
    return total


def weighted_X(state: FieldState, material, kappa: int = 2) -> float:
    """``X_kappa``: sum over alpha, beta = 0..3, l = 1..3 and ``|a| <= kappa - 2``
    of ``|| <c_alpha t - r> P_alpha d_beta d_l Gamma^a u ||``; nodes with
    r < h are left out."""
    if kappa < 2:
        raise ValueError("weighted norms need kappa >= 2")
    if kappa > MAX_DISCRETE_ORDER:
        raise ValueError(f"discrete weighted norms are limited to kappa <= {MAX_DISCRETE_ORDER}")
    c1_sq, c2_sq = _speeds(material)
    grid = state.grid
    mask = grid.core_mask()
    r = grid.radius()
    cache = _WordCache(Jet.from_state(state, _closure(material)))
    total = 0.0
    for w, mult in words(GAMMA, kappa - 2).items():
        for beta in range(4):
            for l in range(1, 4):
                f = cache.get(canonical_word((f"d{beta}", f"d{l}") + w), 1).levels[0]
                for alpha, csq in ((1, c1_sq), (2, c2_sq)):
                    weight = np.sqrt(1.0 + (np.sqrt(csq) * state.t - r) ** 2)
                    total += mult * l2(weight * project(f, alpha, grid), grid, mask)
    return total


def lambda_norm(f, grid: Grid3, kappa: int) -> float:
    """``(sum_{|a| <= kappa} ||Lambda^a f||^2)^(1/2)`` with
    ``Lambda = (grad, Omega~, r d_r - 1)`` for a time-independent field."""
    if kappa > MAX_DISCRETE_ORDER:
        raise ValueError(f"discrete Lambda norms are limited to kappa <= {MAX_DISCRETE_ORDER}")
    cache = _WordCache(Jet([np.asarray(f, dtype=float)], 0.0, grid))
    total = 0.0
    for w, mult in words(LAMBDA, kappa).items():
        total += mult * l2(cache.get(w, 1).levels[0], grid) ** 2
    return float(np.sqrt(total))


def apply_vfield(which: str, field, material=None):
    """Apply one vector field. Analytic fields are handled symbolically;
    discrete states return a new state. Its ``ut`` is filled when the input
    has one and, for ``d0`` and ``S``, a material closure supplies ``u_tt``."""
    if isinstance(field, an.AnalyticField):
        return an.apply_named(which, field, None if material is None else _speeds(material))
    if isinstance(field, Jet):
        return apply_jet(which, field, 1)
    closure = _closure(material)
    jet = Jet.from_state(field, closure)
    # the time derivative of the result is returned only when it is available
    # without differencing in time
    depth = 2 if field.ut is not None and (closure is not None or which not in TIME_CONSUMING) else 1
    out = apply_jet(which, jet, depth)
    return FieldState(out.levels[0], out.levels[1] if len(out.levels) > 1 else None, field.t, field.grid)
