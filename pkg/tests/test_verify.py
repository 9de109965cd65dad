import numpy as np
import pytest

from nullwave import verify
from nullwave.constitutive import construct_null_material


def test_check_kinds():
    assert verify.Check("a", 1e-9, 1e-8).passed
    assert not verify.Check("a", 1e-7, 1e-8).passed
    assert verify.Check("w", 0.5, 1e-2, "min").passed
    assert not verify.Check("w", 1e-3, 1e-2, "min").passed
    assert not verify.Check("a", float("nan"), 1.0).passed


def test_random_spd(rng):
    M = verify.random_spd(rng, 20, 0.3, 2.0)
    assert np.allclose(M, M.transpose(0, 2, 1))
    ev = np.linalg.eigvalsh(M)
    assert np.all(ev > 1.69) and np.all(ev < 2.31)


def test_identities_suite():
    res = verify.identities_suite()
    assert res.passed, res.to_dict()
    assert res.max_residual <= 1e-8
    witness = [c for c in res.checks if c.kind == "min"]
    assert witness and witness[0].residual >= 1e-2


def test_invariants_suite():
    res = verify.invariants_suite(200, 3)
    assert res.passed, res.to_dict()


def test_symmetry_suite_on_constructed_material():
    model = construct_null_material("1/x^3", "1 + x/4")
    res = verify.symmetry_suite(model, 1.2)
    assert res.passed, res.to_dict()


def test_isotropy_and_null_suites():
    assert verify.isotropy_suite("generic", 1.5, 30).passed
    res = verify.null_suite(trials=20)
    assert res.passed, res.to_dict()
    names = {c.name.split(":")[0] for c in res.checks}
    assert {"null_unit", "witness_h0", "generic"} <= names


def test_run_suites_selection():
    out = verify.run_suites(["symmetry", "isotropy"], None, 1.5, 10, 0)
    assert [r.suite for r in out] == ["symmetry", "isotropy"]
    with pytest.raises(KeyError):
        verify.run_suites("nonsense")
    d = out[0].to_dict()
    assert set(d) == {"suite", "passed", "max_residual", "seconds", "checks"}


def test_suites_deterministic():
    a = verify.isotropy_suite(None, 1.5, 20, seed=5).to_dict()["checks"]
    b = verify.isotropy_suite(None, 1.5, 20, seed=5).to_dict()["checks"]
    assert a == b
