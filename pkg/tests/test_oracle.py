import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nullwave.errors import NoBlowup
from nullwave.simulator import InitialSpec, SimConfig, run_planewave_1d
from nullwave.simulator.initial import bump
from nullwave.simulator.oracle import characteristics_oracle, pulse_oracle

C1 = np.sqrt(7.0 / 3.0)


def test_linear_mode_has_no_blowup():
    with pytest.raises(NoBlowup):
        pulse_oracle(C1, 0.0, 0.05, 1.0)


def test_no_compressive_characteristic():
    with pytest.raises(NoBlowup):
        characteristics_oracle(C1, 1.0, np.zeros(5), np.zeros(5))


def test_imaginary_speed_rejected():
    with pytest.raises(ValueError):
        characteristics_oracle(1.0, 1.0, [-1.0], [1.0])


@given(st.floats(0.1, 5.0), st.floats(-3.0, 3.0).filter(lambda k: abs(k) > 0.05), st.floats(0.01, 2.0))
def test_single_characteristic_closed_form(c1, kappa, slope):
    """One characteristic at zero strain: q0 = -2 c1 w0', t* = 2 c1^2 / (kappa q0)."""
    dw = -np.sign(kappa) * slope
    q0 = -2.0 * c1 * dw
    t = characteristics_oracle(c1, kappa, [0.0], [dw])
    assert t == pytest.approx(2 * c1 * c1 / (kappa * q0), rel=1e-5)


def test_inverse_amplitude_scaling():
    t1 = pulse_oracle(C1, -4.0 / 3.0, 0.05, 1.0)
    t2 = pulse_oracle(C1, -4.0 / 3.0, 0.10, 1.0)
    assert t1 / t2 == pytest.approx(2.0, rel=0.05)


def test_sign_of_kappa_selects_the_flank():
    """The bump's central slope is steeper than its shoulders, so the sign
    that compresses the centre blows up first."""
    tp = pulse_oracle(C1, 4.0 / 3.0, 0.05, 1.0)
    tm = pulse_oracle(C1, -4.0 / 3.0, 0.05, 1.0)
    assert tm < tp < np.inf


def test_oracle_matches_small_amplitude_estimate():
    """For small eps the strain correction to c is negligible and the first
    blowup is governed by the largest kappa-signed slope."""
    eps, kappa = 1e-3, -4.0 / 3.0
    z = np.linspace(-1, 1, 20001)[1:-1]
    q0 = -2 * C1 * eps * bump(z, 2)
    est = 2 * C1 ** 2 / np.max(kappa * q0)
    assert pulse_oracle(C1, kappa, eps, 1.0) == pytest.approx(est, rel=2e-2)


@pytest.mark.slow
@pytest.mark.parametrize("eps", [0.02, 0.05])
def test_pde_blowup_time_matches_oracle(tensors_cache, eps):
    T = tensors_cache("witness_h0", 1.5)
    kappa = float(T.B.contract_dirs([1.0, 0.0, 0.0])[0, 0, 0])
    c1 = np.sqrt(T.c1_sq)
    predicted = pulse_oracle(c1, kappa, eps, 1.0)
    cfg = SimConfig(n=2048, L=10.0, t_end=3 * predicted, initial=InitialSpec(eps=eps))
    rep = run_planewave_1d(cfg, T)
    assert rep.verdict == "blowup"
    assert abs(rep.t_star - predicted) / predicted <= 0.2
