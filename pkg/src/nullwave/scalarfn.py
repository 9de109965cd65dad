"""Real functions of one variable used as material coefficients.

Two kinds are provided:

``ScalarFn``
    A sympy expression in ``x``. Derivatives are exact. The expression may
    contain primitives ``Integral(e(y), (y, 1, x))``; their derivative is the
    integrand (Leibniz rule), and their values come from a Chebyshev
    interpolant of the antiderivative on a working interval.

``TabulatedFn``
    A bare Chebyshev table. Derivatives use fourth-order central differences.

Expression grammar (the text form used in material files)
--------------------------------------------------------
Python/sympy syntax in the single variable ``x``: numbers, ``+ - * /``,
``**`` or ``^`` for powers, parentheses, the functions ``exp log sqrt sin cos
tanh``, the constants ``pi`` and ``E``, and ``Integral(expr_in_y, (y, 1, x))``.
Decimal literals are converted to exact rationals, so printing a parsed
expression and parsing it again reproduces it exactly.
"""
from __future__ import annotations

import functools
import math
import warnings

import numpy as np
import sympy as sp
from numpy.polynomial import Chebyshev
from scipy import integrate
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    rationalize,
    standard_transformations,
)

from .errors import DomainError, ParseError

X = sp.Symbol("x")
Y = sp.Symbol("y")

DEFAULT_INTERVAL = (0.25, 4.0)

_TRANSFORMS = standard_transformations + (convert_xor, rationalize)
_ALLOWED = {
    "exp": sp.exp, "log": sp.log, "sqrt": sp.sqrt, "sin": sp.sin, "cos": sp.cos,
    "tanh": sp.tanh, "pi": sp.pi, "E": sp.E, "Integral": sp.Integral,
    "Integer": sp.Integer, "Rational": sp.Rational, "Float": sp.Float,
    "Symbol": sp.Symbol,
}


def parse(text: str) -> sp.Expr:
    """Parse the expression grammar into a sympy expression in ``x``."""
    if not isinstance(text, str):
        text = str(text)
    try:
        expr = parse_expr(text, local_dict={"x": X, "y": Y}, global_dict=dict(_ALLOWED),
                          transformations=_TRANSFORMS)
    except Exception as exc:  # sympy raises a zoo of types here
        raise ParseError(f"cannot parse {text!r}: {exc}") from exc
    expr = sp.sympify(expr)
    if not isinstance(expr, sp.Expr):
        raise ParseError(f"{text!r} is not a scalar expression")
    extra = expr.free_symbols - {X}
    if extra:
        raise ParseError(f"unknown symbols {sorted(map(str, extra))} in {text!r}")
    return expr


def _as_expr(value) -> sp.Expr:
    if isinstance(value, ScalarFn):
        return value.expr
    if isinstance(value, sp.Basic):
        return value
    if isinstance(value, str):
        return parse(value)
    return sp.nsimplify(value, rational=True)


class ChebPrimitive:
    """Chebyshev interpolant of ``P(x) = int_1^x q(y) dy`` on ``[a, b]``.

    The integrand is interpolated with increasing degree until the trailing
    coefficients fall below roundoff, integrated exactly, and checked against
    adaptive quadrature at sample points to relative tolerance ``rtol``.
    """

    def __init__(self, integrand: sp.Expr, interval, rtol=1e-10, max_degree=2048):
        a, b = float(min(interval[0], 1.0)), float(max(interval[1], 1.0))
        self.domain = (a, b)
        self.integrand = integrand
        q = sp.lambdify(X, integrand, "numpy")
        qv = lambda v: np.broadcast_to(np.asarray(q(v), dtype=float), np.shape(v))

        deg = 16
        while True:
            with np.errstate(all="ignore"):
                cheb = Chebyshev.interpolate(qv, deg, domain=[a, b])
            c = cheb.coef
            if not np.all(np.isfinite(c)):
                raise DomainError(f"integrand {integrand} is not finite on [{a}, {b}]")
            tail = np.max(np.abs(c[-4:]))
            if tail <= 1e-15 * max(np.max(np.abs(c)), 1e-300) or deg >= max_degree:
                break
            deg *= 2
        prim = cheb.integ(lbnd=1.0)
        self.cheb = prim
        self.degree = deg

        # independent check against adaptive quadrature
        probe = np.linspace(a, b, 9)
        for xv in probe:
            ref, _ = integrate.quad(lambda y: float(qv(y)), 1.0, xv, epsabs=0.0,
                                    epsrel=rtol * 1e-2, limit=500)
            got = float(prim(xv))
            if abs(got - ref) > rtol * max(abs(ref), 1.0):
                raise DomainError(
                    f"tabulated primitive of {integrand} misses quadrature at x={xv}: "
                    f"{got!r} vs {ref!r}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.domain
        if np.any((x < a - 1e-12 * (1 + abs(a))) | (x > b + 1e-12 * (1 + abs(b)))):
            raise DomainError(f"primitive evaluated outside its table [{a}, {b}]")
        return self.cheb(x)


@functools.lru_cache(maxsize=256)
def _primitive_table(integrand: sp.Expr, interval: tuple) -> ChebPrimitive:
    return ChebPrimitive(integrand, interval)


def _laurent_antiderivative(q: sp.Expr):
    """Closed form of int_1^x q when ``q`` is a sum of ``c * x**p`` terms."""
    q = sp.expand(q)
    total = sp.Integer(0)
    for term in sp.Add.make_args(q):
        coeff, rest = term.as_independent(X, as_Add=False)
        if rest == 1:
            p = sp.Integer(0)
        elif rest == X:
            p = sp.Integer(1)
        elif rest.is_Pow and rest.base == X and rest.exp.is_number:
            p = rest.exp
        else:
            return None
        if not coeff.is_number:
            return None
        if p == -1:
            total += coeff * sp.log(X)
        else:
            total += coeff * (X ** (p + 1) - 1) / (p + 1)
    return total


def primitive(integrand) -> sp.Expr:
    """``int_1^x integrand(y) dy`` in closed form when the integrand is a
    Laurent polynomial, otherwise as an unevaluated ``Integral`` node."""
    q = _as_expr(integrand)
    closed = _laurent_antiderivative(q)
    if closed is not None:
        return sp.expand(closed)
    return sp.Integral(q.subs(X, Y), (Y, 1, X))


class ScalarFn:
    """Exact-derivative scalar function backed by a sympy expression."""

    kind = "expr"

    def __init__(self, expr, interval=DEFAULT_INTERVAL):
        self.expr = _as_expr(expr)
        self.interval = (float(interval[0]), float(interval[1]))
        self._fn = None

    @classmethod
    def parse(cls, text, interval=DEFAULT_INTERVAL) -> "ScalarFn":
        return cls(parse(text), interval)

    @classmethod
    def const(cls, value, interval=DEFAULT_INTERVAL) -> "ScalarFn":
        return cls(sp.nsimplify(value, rational=True), interval)

    def to_text(self) -> str:
        return str(self.expr)

    def __repr__(self):
        return f"ScalarFn({self.to_text()!r})"

    def __eq__(self, other):
        return isinstance(other, ScalarFn) and self.expr == other.expr

    def __hash__(self):
        return hash(self.expr)

    @property
    def is_tabulated(self) -> bool:
        return bool(self.expr.atoms(sp.Integral))

    def _compile(self):
        expr = self.expr
        tables = {}
        for k, node in enumerate(sorted(expr.atoms(sp.Integral), key=str)):
            (var, lo, hi), = node.limits
            if var != Y or lo != 1 or hi != X:
                raise DomainError(f"unsupported integral {node}")
            name = f"_prim{k}"
            tables[name] = _primitive_table(node.function.subs(Y, X), self.interval)
            expr = expr.xreplace({node: sp.Function(name)(X)})
        return sp.lambdify(X, expr, modules=[tables, "numpy"])

    def __call__(self, x):
        if self._fn is None:
            self._fn = self._compile()
        xa = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"), warnings.catch_warnings():
            warnings.simplefilter("ignore")
            val = np.asarray(self._fn(xa), dtype=float)
        val = np.broadcast_to(val, xa.shape)
        if not np.all(np.isfinite(val)):
            bad = xa[~np.isfinite(val)] if xa.ndim else xa
            raise DomainError(f"{self.to_text()} is not finite at x={np.ravel(bad)[:3]}")
        return float(val) if val.ndim == 0 else np.array(val)

    def diff(self, order: int = 1) -> "ScalarFn":
        if order == 0:
            return self
        return ScalarFn(sp.diff(self.expr, X, order), self.interval)

    # arithmetic used when assembling material coefficients
    def _wrap(self, expr):
        return ScalarFn(expr, self.interval)

    def __add__(self, other):
        return self._wrap(self.expr + _as_expr(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.expr - _as_expr(other))

    def __rsub__(self, other):
        return self._wrap(_as_expr(other) - self.expr)

    def __mul__(self, other):
        return self._wrap(self.expr * _as_expr(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._wrap(self.expr / _as_expr(other))

    def __neg__(self):
        return self._wrap(-self.expr)

    def simplified(self) -> "ScalarFn":
        if self.is_tabulated:
            return self._wrap(sp.expand(self.expr))
        return self._wrap(sp.expand(sp.cancel(self.expr)))


# fourth-order central stencils: offsets and weights, divided by denom * h**order
_FD = {
    1: ((-2, -1, 1, 2), (1.0, -8.0, 8.0, -1.0), 12.0),
    2: ((-2, -1, 0, 1, 2), (-1.0, 16.0, -30.0, 16.0, -1.0), 12.0),
    3: ((-3, -2, -1, 1, 2, 3), (1.0, -8.0, 13.0, -13.0, 8.0, -1.0), 8.0),
}


def fd_step(x, order: int):
    eps = np.finfo(float).eps
    return eps ** (1.0 / (order + 2)) * (np.abs(x) + 1.0)


class TabulatedFn:
    """Chebyshev table of sampled values; derivatives by finite differences."""

    kind = "table"

    def __init__(self, cheb: Chebyshev, order: int = 0, base: "TabulatedFn | None" = None):
        self.cheb = cheb
        self.order = order
        self._base = base if base is not None else self

    @classmethod
    def from_callable(cls, func, interval=DEFAULT_INTERVAL, tol=1e-10, max_degree=1024):
        """Adaptive-degree interpolant, refined until the max residual on a
        dense probe set is below ``tol`` (relative to the function scale)."""
        a, b = interval
        probe = np.linspace(a, b, 1001)
        ref = np.asarray(func(probe), dtype=float)
        scale = max(np.max(np.abs(ref)), 1.0)
        deg = 8
        while True:
            cheb = Chebyshev.interpolate(func, deg, domain=[a, b])
            if np.max(np.abs(cheb(probe) - ref)) <= tol * scale or deg >= max_degree:
                return cls(cheb)
            deg *= 2

    @property
    def interval(self):
        return tuple(self._base.cheb.domain)

    def _eval0(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self._base.cheb.domain
        if np.any((x < a) | (x > b)):
            raise DomainError(f"table evaluated outside [{a}, {b}]")
        return self._base.cheb(x)

    def __call__(self, x):
        if self.order == 0:
            v = self._eval0(x)
        else:
            offs, w, denom = _FD[self.order]
            x = np.asarray(x, dtype=float)
            h = fd_step(x, self.order)
            v = sum(wk * self._eval0(x + o * h) for o, wk in zip(offs, w)) / (denom * h ** self.order)
        v = np.asarray(v, dtype=float)
        return float(v) if v.ndim == 0 else v

    def diff(self, order: int = 1) -> "TabulatedFn":
        total = self.order + order
        if total > 3:
            raise ValueError("tabulated functions support derivatives up to order 3")
        return TabulatedFn(self._base.cheb, total, self._base)

    def to_text(self) -> str:
        raise TypeError("tabulated functions have no expression form")


def diff_scalar(fn, order: int):
    """Derivative of order 1..3: symbolic for expressions, finite differences
    for tables."""
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    return fn.diff(order)


def as_scalarfn(value, interval=DEFAULT_INTERVAL):
    if isinstance(value, (ScalarFn, TabulatedFn)):
        return value
    if isinstance(value, str):
        return ScalarFn.parse(value, interval)
    if isinstance(value, (int, float)) and math.isfinite(value):
        return ScalarFn.const(value, interval)
    return ScalarFn(value, interval)
