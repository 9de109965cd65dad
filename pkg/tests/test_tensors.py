import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from nullwave.constitutive import speeds, tau111
from nullwave.errors import DirectionMismatch, RouteMismatch
from nullwave.tensors import (PlaneWave, TensorB, check_isotropy, closed_form_A, compute_A, compute_B, fd_A,
                              longitudinal_contraction, null_contractions, orthonormal_frame, plane_wave,
                              random_unit, resonance_bracket, rotate_B, sigma_of_F, apply_N)

NAMES = ["null_unit", "witness_h0", "null_growth", "null_exp", "generic"]


def test_sigma_of_dilations(null_model):
    assert sigma_of_F(null_model, 1.5, 1.5 * np.eye(3)) == pytest.approx(null_model.f(1.5))
    for lam_ref in (0.8, 1.2, 2.0):
        assert sigma_of_F(null_model, lam_ref, 1.7 * np.eye(3)) == pytest.approx(null_model.f(1.7), rel=1e-12)


def test_sigma_frame_indifference(materials, rng):
    model = materials["generic"]
    for _ in range(10):
        F = 1.3 * np.eye(3) + 0.1 * rng.standard_normal((3, 3))
        Q1, Q2 = Rotation.random(2, random_state=rng).as_matrix()
        assert sigma_of_F(model, 1.3, Q1 @ F @ Q2.T) == pytest.approx(sigma_of_F(model, 1.3, F), abs=1e-10)


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("lam", [0.6, 1.0, 1.5, 2.2, 3.0])
def test_A_routes_agree(materials, name, lam):
    model = materials[name]
    diff = np.max(np.abs(closed_form_A(model, lam).entries - fd_A(model, lam).entries))
    assert diff <= 1e-5


def test_A_route_mismatch_is_reported(materials, monkeypatch):
    import nullwave.tensors as T

    model = materials["generic"]
    bad = closed_form_A(model, 1.5)
    monkeypatch.setattr(T, "closed_form_A", lambda m, lam: T.TensorA(lam, bad.entries + 1e-3))
    with pytest.raises(RouteMismatch):
        T.compute_A(model, 1.5)


def test_A_symbol_spectral_form(materials, rng):
    model = materials["generic"]
    A = compute_A(model, 1.5)
    c1, c2 = speeds(model, 1.5)
    for xi in random_unit(rng, 100):
        S = A.symbol(xi)
        eta = orthonormal_frame(xi)[1]
        assert np.allclose(S @ xi, c1 * xi, atol=1e-12)
        assert np.allclose(S @ eta, c2 * eta, atol=1e-12)
        x = rng.standard_normal(3)
        assert x @ S @ x > 0
    assert A.pair_asymmetry() <= 1e-9


def test_A_eigenvalues_constant_b(null_model, rng):
    A = compute_A(null_model, 2.0)
    for xi in random_unit(rng, 20):
        assert np.allclose(np.linalg.eigvalsh(A.symbol(xi)), [1, 1, 7 / 3], atol=1e-12)


@pytest.fixture(scope="module")
def B_all(materials):
    return {n: compute_B(materials[n], 1.5) for n in NAMES}


@pytest.mark.parametrize("name", NAMES)
def test_B_contraction_is_tau111(materials, B_all, name, rng):
    B = B_all[name]
    t = tau111(materials[name], 1.5)
    vals = [longitudinal_contraction(B, xi) for xi in random_unit(rng, 100)]
    assert np.max(np.abs(np.array(vals) - t)) <= 1e-5
    assert np.std(vals) <= 1e-7
    assert B.raw_asymmetry <= 1e-5
    assert B.orbit_asymmetry() <= 1e-12


def test_witness_contraction_value(B_all):
    assert longitudinal_contraction(B_all["witness_h0"], [0, 0, 1]) == pytest.approx(-4 / 3, abs=1e-5)


def test_null_contractions(B_all):
    lo, tr = null_contractions(B_all["null_unit"], 50)
    assert lo <= 1e-6 and tr <= 1e-6
    lo, tr = null_contractions(B_all["witness_h0"], 50)
    assert lo == pytest.approx(4 / 3, abs=1e-4) and tr <= 1e-6
    for name in NAMES:
        assert null_contractions(B_all[name], 20)[1] <= 1e-6
    assert null_contractions(TensorB(1.0, np.zeros((3,) * 6)), 5) == (0.0, 0.0)
    with pytest.raises(ValueError):
        null_contractions(B_all["generic"], 0)


def test_isotropy(materials, B_all):
    model = materials["generic"]
    rA, rB = check_isotropy(closed_form_A(model, 1.5), B_all["generic"], 10)
    assert rA <= 1e-10 and rB <= 1e-7
    bumped = B_all["generic"].entries.copy()
    bumped[0, 1, 2, 0, 1, 2] += 1e-3
    _, rbad = check_isotropy(None, TensorB(1.5, bumped), 5)
    assert rbad >= 1e-4


def test_rotate_B_matches_full_einsum(rng):
    Bt = rng.standard_normal((3,) * 6)
    Q = Rotation.random(random_state=rng).as_matrix()
    full = np.einsum("ia,jb,kc,ld,me,nf,abcdef->ijklmn", Q, Q, Q, Q, Q, Q, Bt, optimize=True)
    assert np.allclose(rotate_B(Bt, Q), full)


# ---------------------------------------------------------------- N

def _rand_derivs(rng, pts=()):
    du = rng.standard_normal((3, 3) + pts)
    d2 = rng.standard_normal((3, 3, 3) + pts)
    return du, d2 + d2.swapaxes(1, 2)


def test_apply_N_trivial_cases(B_all, rng):
    B = B_all["generic"]
    z1, z2 = np.zeros((3, 3)), np.zeros((3, 3, 3))
    du, d2 = _rand_derivs(rng)
    assert np.allclose(apply_N(B, z1, z2, z1, z2), 0)
    assert np.allclose(apply_N(B, du, z2, du, z2), 0)


@given(st.integers(0, 10 ** 6))
def test_apply_N_symmetric(B_generic, seed):
    rng = np.random.default_rng(seed)
    du, d2u = _rand_derivs(rng)
    dv, d2v = _rand_derivs(rng)
    assert np.allclose(apply_N(B_generic, du, d2v, dv, d2u), apply_N(B_generic, dv, d2u, du, d2v), atol=1e-12)


@pytest.fixture(scope="module")
def B_generic(materials):
    return compute_B(materials["generic"], 1.5)


def test_apply_N_matches_divergence_form(B_generic):
    """B[i,j,k,l,m,n] d_l (d_m u^j d_n v^k) by symbolic differentiation."""
    x = sp.symbols("x1:4")
    u = [x[0] ** 2 * x[1], sp.sin(x[2]) * x[0], x[1] * x[2] ** 2]
    v = [sp.cos(x[0]) + x[1] ** 3, x[0] * x[1] * x[2], sp.exp(x[2] / 2)]
    p = {x[0]: 0.3, x[1]: -0.7, x[2]: 1.1}
    ev = lambda e: float(e.subs(p))
    oracle = np.zeros(3)
    Bt = B_generic.entries
    prod = [[[[sp.diff(sp.diff(u[j], x[m]) * sp.diff(v[k], x[n]), x[l]) for l in range(3)]
              for n in range(3)] for m in range(3)] for j, k in np.ndindex(3, 3)]
    for idx, (j, k) in enumerate(np.ndindex(3, 3)):
        for m, n, l in np.ndindex(3, 3, 3):
            val = ev(prod[idx][m][n][l])
            oracle += Bt[:, j, k, l, m, n] * val
    du = np.array([[ev(sp.diff(u[j], x[m])) for m in range(3)] for j in range(3)])
    dv = np.array([[ev(sp.diff(v[k], x[n])) for n in range(3)] for k in range(3)])
    d2u = np.array([[[ev(sp.diff(u[j], x[l], x[m])) for m in range(3)] for l in range(3)] for j in range(3)])
    d2v = np.array([[[ev(sp.diff(v[k], x[l], x[n])) for n in range(3)] for l in range(3)] for k in range(3)])
    assert np.allclose(apply_N(B_generic, du, d2v, dv, d2u), oracle, atol=1e-10)


# ---------------------------------------------------------------- resonance

def test_plane_wave_validation():
    with pytest.raises(ValueError):
        PlaneWave(1, np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), 1.0, 1.0)
    with pytest.raises(ValueError):
        PlaneWave(2, np.array([1.0, 0, 0]), np.array([1.0, 0, 0]), 1.0, 1.0)
    with pytest.raises(ValueError):
        PlaneWave(3, np.array([1.0, 0, 0]), np.array([1.0, 0, 0]), 1.0, 1.0)
    w = plane_wave(2, [0, 0, 2.0], 0.5, 2.0, 3.0, 1.0)
    assert abs(w.amplitude @ w.direction) < 1e-15 and w.speed == 1.0


def test_resonance_brackets(B_all, rng):
    for _ in range(10):
        xi = random_unit(rng)
        b = rng.uniform(0.5, 2.0, 3)
        a = rng.uniform(-2, 2, 3)
        fam1 = [plane_wave(1, xi, a[i], b[i], 7 / 3, 1) for i in range(3)]
        fam2 = [plane_wave(2, xi, a[i] * (orthonormal_frame(xi)[1] * np.cos(b[i]) + orthonormal_frame(xi)[2]
                                          * np.sin(b[i])), b[i], 7 / 3, 1) for i in range(3)]
        assert abs(resonance_bracket(*fam1, B_all["null_unit"])) <= 1e-6
        for name in NAMES:
            assert abs(resonance_bracket(*fam2, B_all[name])) <= 1e-6
        val = resonance_bracket(*fam1, B_all["witness_h0"])
        expect = b[1] * b[2] * (b[1] + b[2]) * np.prod(a) * (-4 / 3)
        assert val == pytest.approx(expect, rel=1e-5, abs=1e-6)
        assert resonance_bracket(fam1[0], fam1[2], fam1[1], B_all["generic"]) == pytest.approx(
            resonance_bracket(*fam1, B_all["generic"]), rel=1e-10, abs=1e-14)


def test_resonance_direction_mismatch(B_all):
    u = plane_wave(1, [1, 0, 0], 1, 1, 2, 1)
    v = plane_wave(1, [0, 1, 0], 1, 1, 2, 1)
    with pytest.raises(DirectionMismatch):
        resonance_bracket(u, v, u, B_all["generic"])


def test_longitudinal_forcing_of_transverse_components(B_all, rng):
    """Null material: longitudinal self-interaction vanishes while it still
    forces the transverse family."""
    B = B_all["null_unit"]
    xi = random_unit(rng)
    l1 = plane_wave(1, xi, 1.0, 1.0, 7 / 3, 1)
    t = plane_wave(2, xi, 1.0, 1.0, 7 / 3, 1)
    assert abs(resonance_bracket(l1, l1, l1, B)) <= 1e-6
    # <eta, N(l, l)> is zero by the transverse redundancy; mixed pairs are not
    assert abs(resonance_bracket(l1, t, t, B)) > 1e-2
