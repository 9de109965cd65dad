"""End-to-end acceptance criteria, one test per criterion.

Each test prints a single ``criterion N ... PASS/FAIL`` line with the
measured quantities, then asserts at the stated tolerance.
"""
import time

import numpy as np
import pytest

from nullwave.constitutive import check_material, construct_null_material, standard_materials, tau111
from nullwave.simulator import InitialSpec, SimConfig, run_box3d, run_planewave_1d
from nullwave.simulator.oracle import pulse_oracle
from nullwave.tensors import (compute_A, compute_B, longitudinal_contraction, material_tensors, null_contractions,
                              orthonormal_frame, plane_wave, random_unit, resonance_bracket)
from nullwave.verify import identities_suite, invariants_suite, isotropy_suite, symmetry_suite

MATERIALS = ("null_unit", "witness_h0", "null_growth", "null_exp", "generic")


@pytest.fixture
def report(capsys):
    def emit(label, ok, detail):
        with capsys.disabled():
            print(f"\n{label:<44} {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return emit


@pytest.fixture(scope="module")
def B15():
    m = standard_materials()
    return {n: compute_B(m[n], 1.5) for n in MATERIALS}


def test_criterion_1_null_construction(report):
    t0 = time.perf_counter()
    model = construct_null_material("1", "1")
    lam = np.linspace(0.5, 3.0, 20)
    f_err = float(np.max(np.abs(model.f(lam) - 3 * (lam ** 3 - 1.5 * lam ** 2 + 0.5))))
    tau = max(abs(float(tau111(model, x))) for x in np.linspace(0.5, 3.0, 50))
    x = np.linspace(0.5, 3.0, 50)
    ode = float(np.max(np.abs(model.f.diff(2)(x) - 2 / x * model.f.diff(1)(x) - 9.0)))
    secs = time.perf_counter() - t0
    ok = f_err <= 1e-8 and tau <= 1e-8 and ode <= 1e-8 and secs < 1.0
    report("criterion 1  null-material construction", ok,
           f"f err {f_err:.1e}, max|tau111| {tau:.1e}, ODE residual {ode:.1e}, {secs:.2f}s")
    assert ok


def test_criterion_2_tensor_extraction(report):
    t0 = time.perf_counter()
    worst = {}
    for name in MATERIALS:
        for res in (symmetry_suite(name, 1.5), isotropy_suite(name, 1.5, 100, seed=0)):
            for c in res.checks:
                worst[c.name] = max(worst.get(c.name, 0.0), c.residual)
    secs = time.perf_counter() - t0
    ok = (worst["A_routes"] <= 1e-5 and worst["symbol_eigenvalues"] <= 1e-8
          and max(worst["B_raw_asymmetry"], worst["B_orbit_asymmetry"]) <= 1e-5
          and max(worst["A_rotation"], worst["B_rotation"]) <= 1e-5 and secs < 30)
    report("criterion 2  tensor extraction", ok,
           f"routes {worst['A_routes']:.1e}, eigenvalues {worst['symbol_eigenvalues']:.1e}, "
           f"B symmetry {max(worst['B_raw_asymmetry'], worst['B_orbit_asymmetry']):.1e}, "
           f"isotropy {max(worst['A_rotation'], worst['B_rotation']):.1e}, {secs:.1f}s")
    assert ok


def test_criterion_3a_contraction_equals_tau111(report, B15, materials):
    t0 = time.perf_counter()
    rng = np.random.default_rng(0)
    dev, trans = 0.0, 0.0
    for name in MATERIALS:
        t = float(tau111(materials[name], 1.5))
        for xi in random_unit(rng, 20):
            dev = max(dev, abs(longitudinal_contraction(B15[name], xi) - t))
        trans = max(trans, null_contractions(B15[name], 100, rng)[1])
    secs = time.perf_counter() - t0
    ok = dev <= 1e-5 and trans <= 1e-6 and secs < 10
    report("criterion 3a contraction = tau111, transverse", ok,
           f"max dev {dev:.1e}, transverse {trans:.1e}, {secs:.2f}s")
    assert ok


def test_criterion_3b_witness_value(report, B15):
    """The criterion quotes -2/3 for the h = 0 witness with b = 1. The
    contraction of the tensor extracted from the stored energy, and the
    closed form it agrees with, give -4/3; this check is kept literal."""
    val = longitudinal_contraction(B15["witness_h0"], [0.0, 0.0, 1.0])
    ok = abs(val - (-2.0 / 3.0)) <= 1e-5
    report("criterion 3b witness contraction = -2/3", ok, f"measured {val:.6f} (expected -0.666667)")
    assert ok


def test_criterion_4_resonance(report, B15):
    rng = np.random.default_rng(1)
    same, match, smallest = 0.0, 0.0, np.inf
    for xi in random_unit(rng, 20):
        b = rng.uniform(0.5, 2.0, 3)
        a = rng.uniform(0.5, 2.0, 3) * rng.choice([-1, 1], 3)
        _, e1, e2 = orthonormal_frame(xi)
        f1 = [plane_wave(1, xi, a[i], b[i], 1.0, 1.0) for i in range(3)]
        f2 = [plane_wave(2, xi, a[i] * (np.cos(b[i]) * e1 + np.sin(b[i]) * e2), b[i], 1.0, 1.0) for i in range(3)]
        same = max(same, abs(resonance_bracket(*f1, B15["null_unit"])), abs(resonance_bracket(*f2, B15["null_unit"])))
        for name in MATERIALS:
            same = max(same, abs(resonance_bracket(*f2, B15[name])))
        val = resonance_bracket(*f1, B15["witness_h0"])
        oracle = b[1] * b[2] * (b[1] + b[2]) * np.prod(a) * longitudinal_contraction(B15["witness_h0"], xi)
        match = max(match, abs(val - oracle))
        smallest = min(smallest, abs(val))
    ok = same <= 1e-6 and match <= 1e-5 and smallest > 1e-3
    report("criterion 4  resonance bracket", ok,
           f"same-family max {same:.1e}, witness vs oracle {match:.1e}, min |witness| {smallest:.2f}")
    assert ok


def test_criterion_5_operator_identities(report):
    res = identities_suite(points=100, seed=0, tol=1e-8)
    ok = res.passed and res.seconds < 10
    report("criterion 5  operator identities", ok, f"max residual {res.max_residual:.1e}, {res.seconds:.1f}s")
    assert ok


def test_criterion_6_invariant_algebra(report):
    res = invariants_suite(trials=200, seed=0, tol=1e-10)
    ok = res.passed
    report("criterion 6  invariant algebra", ok, f"max residual {res.max_residual:.1e} over 200 inputs")
    assert ok


# ---------------------------------------------------------------- solver convergence

DRIFT_L = 4.0


@pytest.fixture(scope="module")
def drift(tensors_cache):
    """Linear E1 drift over one box crossing in the periodic box, n = 48 and 64."""
    T = tensors_cache("null_unit", 1.5)
    out = {}
    for n in (48, 64):
        t0 = time.perf_counter()
        cfg = SimConfig(mode="box3d", n=n, L=DRIFT_L, periodic=True, nonlinear=False,
                        t_end=2 * DRIFT_L / np.sqrt(T.c1_sq), diagnostics_every=5,
                        initial=InitialSpec("dilation_perturbation", 0.1, 3.0))
        E = run_box3d(cfg, T).column("E1")
        out[n] = (float(np.max(np.abs(E - E[0])) / E[0]), time.perf_counter() - t0)
    return out


@pytest.mark.slow
def test_criterion_7a_energy_drift(report, drift):
    d48, s48 = drift[48]
    ok = d48 <= 5e-3
    report("criterion 7a linear energy drift n=48", ok, f"drift {100 * d48:.3f}% ({s48:.1f}s)")
    assert ok


@pytest.mark.slow
def test_criterion_7b_drift_refinement(report, drift):
    """Second order in dt ~ h predicts (64/48)^2 = 1.78, well short of 3.5;
    the check is kept at the stated factor."""
    ratio = drift[48][0] / drift[64][0]
    ok = ratio >= 3.5
    report("criterion 7b drift shrink 48 -> 64 >= 3.5x", ok,
           f"ratio {ratio:.2f} (drift {100 * drift[64][0]:.3f}% at n=64, {drift[64][1]:.1f}s)")
    assert ok


@pytest.mark.slow
def test_criterion_7c_planewave_consistency(report, tensors_cache):
    T = tensors_cache("witness_h0", 1.5)
    n, L = 48, 6.0
    rel = 0.0
    t0 = time.perf_counter()
    for axis in range(3):
        xi = np.eye(3)[axis]
        ini = InitialSpec("longitudinal_pulse", 0.05, 2.0, tuple(xi), 0.0)
        box = run_box3d(SimConfig(mode="box3d", n=n, L=L, periodic=True, t_end=2.0, initial=ini), T).final
        line = run_planewave_1d(SimConfig(n=n, L=L, t_end=2.0, initial=ini), T).final
        idx = [n // 2] * 3
        idx[axis] = slice(None)
        along = box.u[(slice(None),) + tuple(idx)]
        rel = max(rel, float(np.max(np.abs(along - line.U)) / np.max(np.abs(line.U))))
    ok = rel <= 1e-2
    report("criterion 7c 1D/3D plane-wave consistency", ok,
           f"max relative difference {rel:.1e} ({time.perf_counter() - t0:.1f}s)")
    assert ok


# ---------------------------------------------------------------- dichotomy

@pytest.mark.slow
def test_criterion_8_null_dichotomy(report, tensors_cache):
    t0 = time.perf_counter()
    Tn, Tw = tensors_cache("null_unit", 1.5), tensors_cache("witness_h0", 1.5)
    c1 = np.sqrt(Tw.c1_sq)
    kappa = float(Tw.B.contract_dirs([1.0, 0.0, 0.0])[0, 0, 0])
    predicted = pulse_oracle(c1, kappa, 0.05, 1.0)
    parts, ok = [], True
    for n in (2048, 4096):
        ini = InitialSpec("longitudinal_pulse", 0.05, 1.0)
        null = run_planewave_1d(SimConfig(n=n, L=10.0, t_end=40.0 / np.sqrt(Tn.c1_sq), initial=ini), Tn)
        g = null.column("max_grad")
        growth = float(np.max(g) / g[0])
        wit = run_planewave_1d(SimConfig(n=n, L=10.0, t_end=40.0 / c1, initial=ini), Tw)
        err = abs(wit.t_star - predicted) / predicted if wit.t_star is not None else np.inf
        ok &= null.verdict == "completed" and growth <= 3.0 and wit.verdict == "blowup" and err <= 0.2
        parts.append(f"n={n}: null {null.verdict} growth {growth:.3f}, witness {wit.verdict} "
                     f"t*={wit.t_star if wit.t_star is None else round(wit.t_star, 4)}")
    secs = time.perf_counter() - t0
    ok &= secs < 120
    report("criterion 8  null dichotomy", ok, f"oracle t*={predicted:.4f}; " + "; ".join(parts) + f"; {secs:.1f}s")
    assert ok


@pytest.mark.slow
def test_criterion_9_quadratic_scaling(report, tensors_cache):
    ratios = {}
    for name in ("null_unit", "generic"):
        T = tensors_cache(name, 1.5)
        diffs = []
        for eps in (1e-4, 5e-5):
            finals = []
            for nl in (True, False):
                cfg = SimConfig(mode="box3d", n=32, L=4.0, t_end=1.0, nonlinear=nl,
                                initial=InitialSpec("dilation_perturbation", eps, 2.0))
                finals.append(run_box3d(cfg, T).final.u)
            diffs.append(float(np.max(np.abs(finals[0] - finals[1]))))
        ratios[name] = diffs[0] / diffs[1]
    ok = all(abs(r - 4.0) <= 1.2 for r in ratios.values())
    report("criterion 9  quadratic-nonlinearity scaling", ok,
           ", ".join(f"{k} ratio {v:.3f}" for k, v in ratios.items()))
    assert ok
