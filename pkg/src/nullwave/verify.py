"""Property suites shared by the ``verify`` command and the acceptance tests.

Each suite returns a :class:`SuiteResult` holding named residuals, the
tolerance each is compared against and the overall verdict.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from . import invariants as inv
from .constitutive import StoredEnergyModel, check_material, standard_materials, tau111
from .fields import analytic as an
from .tensors import (check_isotropy, closed_form_A, compute_B, fd_A, longitudinal_contraction,
                      null_contractions, random_rotations, random_unit)

DEFAULT_TRIALS = 100
SUITES = ("identities", "invariants", "symmetry", "isotropy", "null")


@dataclass
class Check:
    name: str
    residual: float
    tol: float
    # "max": residual must not exceed tol; "min": residual must reach tol
    kind: str = "max"

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.residual):
            return False
        return self.residual <= self.tol if self.kind == "max" else self.residual >= self.tol

    def to_dict(self):
        return {"name": self.name, "residual": self.residual, "tol": self.tol,
                "kind": self.kind, "passed": self.passed}


@dataclass
class SuiteResult:
    suite: str
    checks: list = field(default_factory=list)
    seconds: float = 0.0

    def add(self, name, residual, tol, kind="max"):
        self.checks.append(Check(name, float(residual), float(tol), kind))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        vals = [c.residual for c in self.checks if c.kind == "max"]
        return max(vals) if vals else 0.0

    def to_dict(self):
        return {"suite": self.suite, "passed": self.passed, "max_residual": self.max_residual,
                "seconds": round(self.seconds, 3), "checks": [c.to_dict() for c in self.checks]}


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# ---------------------------------------------------------------- invariants

def random_spd(rng, n, spread=0.3, lam=1.0):
    """``n`` SPD matrices ``Q diag(lam + e) Q^T`` with random rotations ``Q``
    and ``|e| < spread``."""
    Q = random_rotations(rng, n)
    ev = lam + rng.uniform(-spread, spread, (n, 3))
    return np.einsum("nik,nk,njk->nij", Q, ev, Q)


@_timed
def invariants_suite(trials=200, seed=0, tol=1e-10) -> SuiteResult:
    """Round trips and matrix-level oracles of the invariant algebra on
    random SPD stretches."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("invariants")
    lams = rng.uniform(0.5, 3.0, trials)
    rot, shift, fwd, back, sj, js, sq, z2 = (0.0,) * 8
    for lam, Q in zip(lams, random_rotations(rng, trials)):
        U = random_spd(rng, 1, 0.3, lam)[0]              # stretch near lam I
        C = rng.standard_normal((3, 3))
        a = inv.invariants3(C).as_array()
        rot = max(rot, np.max(np.abs(inv.invariants3(Q.T @ C @ Q).as_array() - a)) / max(1, np.max(np.abs(a))))
        z = rng.uniform(-2, 2)
        b = inv.invariants3(z * np.eye(3) + C).as_array()
        shift = max(shift, np.max(np.abs(inv.shift_invariants(z, inv.invariants3(C)).as_array() - b))
                    / max(1, np.max(np.abs(b))))
        # r -> i against the matrix square
        r = inv.invariants3(U, "r")
        i_mat = inv.invariants3(U @ U, "i").as_array()
        i_alg = inv.stretch_to_strain_inv(r)
        fwd = max(fwd, np.max(np.abs(i_alg.as_array() - i_mat)) / max(1, np.max(np.abs(i_mat))))
        back = max(back, np.max(np.abs(inv.strain_to_stretch_inv(i_alg, lam).as_array() - r.as_array())))
        # s -> j against invariants of U^2 - lam^2 I
        s = inv.invariants3(U - lam * np.eye(3), "s")
        j_mat = inv.invariants3(U @ U - lam ** 2 * np.eye(3)).as_array()
        j_alg = inv.s_to_j(s, lam)
        sj = max(sj, np.max(np.abs(j_alg.as_array() - j_mat)) / max(1, np.max(np.abs(j_mat))))
        js = max(js, np.max(np.abs(inv.j_to_s(j_alg, lam).as_array() - s.as_array())))
        # square root of the strain tensor
        M = U @ U
        R = inv.sqrt_spd(M)
        sq = max(sq, np.max(np.abs(R @ R - M)) / np.max(np.abs(M)))
        z2 = max(z2, float(inv.distortional_vars(s, lam).z2))
    res.add("rotation_invariance", rot, tol)
    res.add("shift_formula", shift, tol)
    res.add("stretch_to_strain_vs_matrix", fwd, tol)
    res.add("strain_to_stretch_round_trip", back, tol)
    res.add("s_to_j_vs_matrix", sj, tol)
    res.add("j_to_s_round_trip", js, tol)
    res.add("sqrt_spd_square", sq, tol)
    # z2 is minus half the trace of the squared trace-free stretch
    res.add("distortional_z2_nonpositive", max(z2, 0.0), tol)
    return res


# ---------------------------------------------------------------- tensors

def _material(model):
    if model is None:
        return standard_materials()["null_unit"]
    if isinstance(model, str):
        return standard_materials()[model]
    return model


@_timed
def symmetry_suite(model: StoredEnergyModel | str | None = None, lam=1.5, tol=1e-5) -> SuiteResult:
    """Agreement of the two routes to A, the pair symmetries of A and the
    index symmetries of B (before and after orbit averaging)."""
    model = _material(model)
    res = SuiteResult("symmetry")
    A = closed_form_A(model, lam)
    res.add("A_routes", np.max(np.abs(A.entries - fd_A(model, lam).entries)), tol)
    res.add("A_pair_symmetry", A.pair_asymmetry(), tol)
    B = compute_B(model, lam)
    res.add("B_raw_asymmetry", B.raw_asymmetry, tol)
    res.add("B_orbit_asymmetry", B.orbit_asymmetry(), tol)
    return res


@_timed
def isotropy_suite(model=None, lam=1.5, trials=DEFAULT_TRIALS, seed=0, tol=1e-5, eig_tol=1e-8) -> SuiteResult:
    """Rotation invariance of A and B and the spectrum of the acoustic
    tensor ``A(xi)`` over random directions."""
    from .constitutive import speeds

    model = _material(model)
    rng = np.random.default_rng(seed)
    res = SuiteResult("isotropy")
    A = closed_form_A(model, lam)
    B = compute_B(model, lam)
    rA, rB = check_isotropy(A, B, min(trials, 20), rng)
    res.add("A_rotation", rA, tol)
    res.add("B_rotation", rB, tol)
    c1_sq, c2_sq = speeds(model, lam)
    expect = np.sort([c2_sq, c2_sq, c1_sq])
    worst = 0.0
    for xi in random_unit(rng, trials):
        worst = max(worst, np.max(np.abs(np.linalg.eigvalsh(A.symbol(xi)) - expect)))
    res.add("symbol_eigenvalues", worst, eig_tol)
    return res


@_timed
def null_suite(models=None, lam=1.5, trials=DEFAULT_TRIALS, seed=0, tol=1e-5, trans_tol=1e-6) -> SuiteResult:
    """Longitudinal contraction against the closed-form ``tau_111``,
    vanishing transverse contraction, and the null flag of each material."""
    if models is None:
        models = list(standard_materials().values())
    rng = np.random.default_rng(seed)
    res = SuiteResult("null")
    for model in models:
        B = compute_B(model, lam)
        xi = random_unit(rng)
        t111 = float(tau111(model, lam))
        tag = model.name or "material"
        res.add(f"{tag}:contraction_vs_tau111", abs(longitudinal_contraction(B, xi) - t111), tol)
        long_max, trans_max = null_contractions(B, trials, rng)
        res.add(f"{tag}:direction_independence", abs(long_max - abs(t111)), tol)
        res.add(f"{tag}:transverse", trans_max, trans_tol)
        rep = check_material(model, lam)
        if rep.null:
            res.add(f"{tag}:null_longitudinal", long_max, tol)
    return res


# ---------------------------------------------------------------- identities

PAIR_OPS = ("d0", "d1", "d2", "d3", "Omt1", "Omt2", "Omt3", "S")


@_timed
def identities_suite(points=100, seed=0, tol=1e-8, speeds=(7.0 / 3.0, 1.0), degree=2) -> SuiteResult:
    """Operator identities on analytic fixtures (a Gaussian-enveloped field
    and, for the commutators, a cubic polynomial) at random space-time
    points: the two forms of ``d_t d_r`` through the scaling field, the
    decomposition of the gradient, the commutator table, modified rotations
    against ``A`` and the projections."""
    rng = np.random.default_rng(seed)
    u = an.gaussian_fixture(seed, degree)
    poly = an.polynomial_fixture(seed, 3)
    pts = an.random_points(rng, points)
    res = SuiteResult("identities")
    for alpha in (1, 2):
        res.add(f"scaling_identity_a[{alpha}]", an.verify_scaling_identity(u, speeds, alpha, pts, "a"), tol)
        res.add(f"scaling_identity_b[{alpha}]", an.verify_scaling_identity(u, speeds, alpha, pts, "b"), tol)
    res.add("gradient_decomposition", an.decomposition_residual(u, pts), tol)
    worst = 0.0
    for a, b in itertools.combinations(PAIR_OPS, 2):
        worst = max(worst, an.commutator_residual((a, b), poly, pts, speeds))
    res.add("commutator_table", worst, tol)
    res.add("scaling_vs_L", an.commutator_residual(("S", "L"), poly, pts, speeds), tol)
    rot_A = max(an.commutator_residual((f"Omt{l}", "A"), poly, pts, speeds) for l in (1, 2, 3))
    res.add("rotations_commute_with_A", rot_A, tol)
    proj = 0.0
    for op in ("Omt1", "Omt2", "Omt3", "dr"):
        for alpha in (1, 2):
            proj = max(proj, an.projection_commutator_residual(op, alpha, u, pts))
    res.add("projections_commute", proj, tol)
    # the gradient does not commute with the projections; this must be visible
    res.add("gradient_projection_witness", an.projection_commutator_residual("d1", 1, u, pts), 1e-2, "min")
    return res


def run_suite(name: str, model=None, lam=1.5, trials=DEFAULT_TRIALS, seed=0) -> SuiteResult:
    if name == "identities":
        return identities_suite(seed=seed)
    if name == "invariants":
        return invariants_suite(max(trials, 1) * 2, seed)
    if name == "symmetry":
        return symmetry_suite(model, lam)
    if name == "isotropy":
        return isotropy_suite(model, lam, trials, seed)
    if name == "null":
        return null_suite(None if model is None else [_material(model)], lam, trials, seed)
    raise KeyError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")


def run_suites(names, model=None, lam=1.5, trials=DEFAULT_TRIALS, seed=0) -> list[SuiteResult]:
    if isinstance(names, str):
        names = [names]
    expanded = []
    for n in names:
        if n == "all":
            expanded.extend(SUITES)
        elif n in SUITES:
            expanded.append(n)
        else:
            raise KeyError(f"unknown suite {n!r}; choose from {SUITES + ('all',)}")
    return [run_suite(n, model, lam, trials, seed) for n in expanded]
