"""Isotropic stored-energy models written as

    tau(lam, s) = f(z1) + g(z1) z2 + h(z1) z3 [+ r(z1, z2, z3)]

with ``z`` the distortional variables of the stretch invariants ``s``.
Provides wave speeds, the hyperbolicity / null checks and the construction of
null materials from a prescribed bulk modulus and shear speed.
"""
from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
import sympy as sp

from .errors import DomainError, NonPositiveModulus, ParseError
from .invariants import InvariantTriple, distortional_vars
from .scalarfn import DEFAULT_INTERVAL, X, ScalarFn, as_scalarfn, primitive

NULL_TOL = 1e-8
STRESS_FREE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class StoredEnergyModel:
    f: ScalarFn
    g: ScalarFn
    h: ScalarFn
    remainder: Callable | None = None
    interval: tuple = DEFAULT_INTERVAL
    name: str = ""
    # construction inputs, kept so the material file can record them
    source: dict | None = field(default=None, repr=False)

    @property
    def remainder_enabled(self) -> bool:
        return self.remainder is not None

    @functools.cached_property
    def _derivs(self):
        f, g = self.f, self.g
        return {"f1": f.diff(1), "f2": f.diff(2), "f3": f.diff(3), "g1": g.diff(1)}

    def df(self, order):
        return self.f if order == 0 else self._derivs[f"f{order}"]

    def dg(self):
        return self._derivs["g1"]


@dataclass(frozen=True)
class MaterialReport:
    lam: float
    c1_sq: float
    c2_sq: float
    bulk_modulus: float
    hyperbolic: bool
    stress_free_at_1: bool
    null: bool
    tau111: float
    null_tol: float = NULL_TOL

    def to_dict(self):
        return {
            "lambda": self.lam, "c1_sq": self.c1_sq, "c2_sq": self.c2_sq,
            "bulk_modulus": self.bulk_modulus, "hyperbolic": self.hyperbolic,
            "stress_free_at_1": self.stress_free_at_1, "null": self.null,
            "tau111": self.tau111, "null_tol": self.null_tol,
        }


def eval_tau(model: StoredEnergyModel, lam, s: InvariantTriple):
    if s.system not in (None, "s"):
        raise ValueError(f"eval_tau needs s-invariants, got {s.system!r}")
    z = distortional_vars(InvariantTriple(s.k1, s.k2, s.k3, "s"), lam)
    tau = model.f(z.z1) + model.g(z.z1) * z.z2 + model.h(z.z1) * z.z3
    if model.remainder is not None:
        tau = tau + model.remainder(z.z1, z.z2, z.z3)
    return tau


def speeds(model: StoredEnergyModel, lam) -> tuple[float, float]:
    """Squared longitudinal and transverse speeds at the dilation ``lam``."""
    g = model.g(lam)
    c1_sq = model.df(2)(lam) / 9.0 - 2.0 * g / 3.0
    c2_sq = (model.df(1)(lam) / 3.0 - lam * g) / (2.0 * lam)
    return c1_sq, c2_sq


def tau111(model: StoredEnergyModel, lam):
    """Third derivative of tau in s1 at s = 0.

    Along s = (e, 0, 0): z1 = lam + e/3, z2 = -e^2/3, z3 = 2e^3/27, so
    d^3/de^3 gives f'''/27 - (2/3) g' + (4/9) h.
    """
    return model.df(3)(lam) / 27.0 - 2.0 * model.dg()(lam) / 3.0 + 4.0 * model.h(lam) / 9.0


def check_material(model: StoredEnergyModel, lam: float, null_tol: float = NULL_TOL) -> MaterialReport:
    lam = float(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    c1_sq, c2_sq = speeds(model, lam)
    bulk = c1_sq - 4.0 * c2_sq / 3.0
    t111 = float(tau111(model, lam))
    try:
        stress_free = abs(model.df(1)(1.0)) <= STRESS_FREE_TOL
    except DomainError:
        stress_free = False
    return MaterialReport(
        lam=lam, c1_sq=float(c1_sq), c2_sq=float(c2_sq), bulk_modulus=float(bulk),
        hyperbolic=bool(bulk > 0 and c2_sq > 0), stress_free_at_1=bool(stress_free),
        null=bool(abs(t111) <= null_tol), tau111=t111, null_tol=null_tol,
    )


def pressure(model: StoredEnergyModel, lam):
    """Pressure on a sphere dilated by ``lam``: ``-f'(lam) / lam^2``."""
    return -model.df(1)(lam) / (lam * lam)


def _check_positive(fn: ScalarFn, interval, what):
    grid = np.linspace(interval[0], interval[1], 401)
    try:
        vals = np.broadcast_to(fn(grid), grid.shape)
    except DomainError as exc:
        raise NonPositiveModulus(f"{what} is undefined on {interval}: {exc}") from exc
    if np.any(vals <= 0):
        bad = grid[np.argmax(vals <= 0)]
        raise NonPositiveModulus(f"{what} = {fn.to_text()} is not positive at x={bad:.4g}")


def construct_null_material(b, c2sq, interval=DEFAULT_INTERVAL, name="") -> StoredEnergyModel:
    """Null material with bulk modulus ``b`` and squared shear speed ``c2sq``.

    f solves f'' - (2/x) f' = 9 b with f(1) = f'(1) = 0, i.e.
    f = 3 x^3 J - 3 K with J = int_1^x b/y^2 and K = int_1^x y b.
    g makes the shear speed equal c2sq, and h makes tau111 vanish.
    """
    b = as_scalarfn(b, interval)
    c2sq = as_scalarfn(c2sq, interval)
    _check_positive(b, interval, "bulk modulus")
    _check_positive(c2sq, interval, "c2sq")
    J = primitive(b.expr / X ** 2)
    K = primitive(X * b.expr)
    f = ScalarFn(sp.expand(3 * X ** 3 * J - 3 * K), interval)
    f1 = f.diff(1)
    g = ScalarFn(sp.expand(sp.cancel((f1.expr / 3 - 2 * X * c2sq.expr) / X)), interval)
    h = ScalarFn(sp.expand(sp.Rational(3, 2) * g.diff(1).expr - f.diff(3).expr / 12), interval)
    model = StoredEnergyModel(f, g, h, interval=interval, name=name,
                              source={"bulk": b.to_text(), "c2sq": c2sq.to_text()})
    for lam in np.linspace(interval[0], interval[1], 9):
        rep = check_material(model, lam)
        if not rep.null:
            raise ArithmeticError(f"constructed material is not null at {lam}: {rep.tau111}")
    return model


def with_h(model: StoredEnergyModel, h, name="") -> StoredEnergyModel:
    """Same f and g with a different cubic coefficient h."""
    return StoredEnergyModel(model.f, model.g, as_scalarfn(h, model.interval), model.remainder,
                             model.interval, name or model.name, model.source)


def with_remainder(model: StoredEnergyModel, remainder, samples=None, tol=1e-7) -> StoredEnergyModel:
    """Attach a remainder ``r(z1, z2, z3)``; it must vanish with its first
    z2, z3 derivatives on the dilation line, checked by central differences."""
    zs = np.linspace(*model.interval, 7) if samples is None else np.asarray(samples, float)
    e = 1e-5
    for z1 in zs:
        r0 = remainder(z1, 0.0, 0.0)
        r2 = (remainder(z1, e, 0.0) - remainder(z1, -e, 0.0)) / (2 * e)
        r3 = (remainder(z1, 0.0, e) - remainder(z1, 0.0, -e)) / (2 * e)
        if max(abs(r0), abs(r2), abs(r3)) > tol:
            raise ValueError(f"remainder does not vanish to first order at z1={z1:.4g}")
    return StoredEnergyModel(model.f, model.g, model.h, remainder, model.interval,
                             model.name, model.source)


# ---------------------------------------------------------------- spec files

def _fn_from_spec(value, interval, what):
    try:
        return as_scalarfn(value, interval)
    except (ParseError, TypeError, ValueError) as exc:
        raise ParseError(f"bad expression for {what}: {exc}") from exc


def model_from_spec(spec: dict) -> StoredEnergyModel:
    """Build a model from the material-file mapping.

    ``f`` is either an expression or ``{"construct": {"bulk": ..., "c2sq": ...}}``.
    With a construct block, ``g`` and ``h`` are optional overrides of the
    constructed coefficients (``"h": "0"`` gives the non-null twin).
    """
    if not isinstance(spec, dict) or "f" not in spec:
        raise ParseError("material spec needs an 'f' entry")
    interval = tuple(float(v) for v in spec.get("lambda_range", DEFAULT_INTERVAL))
    if len(interval) != 2 or not 0 < interval[0] < interval[1]:
        raise ParseError(f"bad lambda_range {interval}")
    name = str(spec.get("name", ""))
    fspec = spec["f"]
    if isinstance(fspec, dict):
        if set(fspec) != {"construct"} or not isinstance(fspec["construct"], dict):
            raise ParseError("f must be an expression or {'construct': {...}}")
        c = fspec["construct"]
        try:
            bulk, c2sq = c["bulk"], c["c2sq"]
        except KeyError as exc:
            raise ParseError(f"construct block misses {exc}") from exc
        model = construct_null_material(_fn_from_spec(bulk, interval, "bulk"),
                                        _fn_from_spec(c2sq, interval, "c2sq"), interval, name)
        g = _fn_from_spec(spec["g"], interval, "g") if "g" in spec else model.g
        h = _fn_from_spec(spec["h"], interval, "h") if "h" in spec else model.h
        return StoredEnergyModel(model.f, g, h, None, interval, name, model.source)
    missing = [k for k in ("g", "h") if k not in spec]
    if missing:
        raise ParseError(f"material spec misses {missing}")
    return StoredEnergyModel(_fn_from_spec(fspec, interval, "f"), _fn_from_spec(spec["g"], interval, "g"),
                             _fn_from_spec(spec["h"], interval, "h"), None, interval, name)


def model_to_spec(model: StoredEnergyModel) -> dict:
    spec = {}
    if model.name:
        spec["name"] = model.name
    spec.update({"f": model.f.to_text(), "g": model.g.to_text(), "h": model.h.to_text(),
                 "lambda_range": [model.interval[0], model.interval[1]]})
    return spec


def load_spec(path) -> StoredEnergyModel:
    try:
        spec = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from exc
    return model_from_spec(spec)


def dump_spec(model: StoredEnergyModel, path=None) -> str:
    text = json.dumps(model_to_spec(model), indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


# ---------------------------------------------------------------- fixtures

def standard_materials() -> dict[str, StoredEnergyModel]:
    """Named materials used by the verification suites and tests."""
    null_unit = construct_null_material("1", "1", name="null_unit")
    out = {
        "null_unit": null_unit,
        "witness_h0": with_h(null_unit, "0", name="witness_h0"),
        "null_growth": construct_null_material("x^-3", "1", name="null_growth"),
        "null_exp": construct_null_material("exp(x - 1)", "1/2 + x/4", name="null_exp"),
        "generic": StoredEnergyModel(
            ScalarFn.parse("3*x^3 - 9*x^2/2 + 3/2 + (x - 1)^4"), ScalarFn.parse("3*x - 5 + (x-1)^2/2"),
            ScalarFn.parse("1 + x/3"), name="generic"),
    }
    return out
