"""Kernel backend selection.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``NULLWAVE_PURE=1`` is set, the numpy kernels are used.
"""
import os

from . import _kernels_py

try:
    if os.environ.get("NULLWAVE_PURE") == "1":
        raise ImportError("pure backend requested")
    from . import _kernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _kernels_py
    BACKEND = "python"


def get_backend(name=None):
    """Module implementing the kernels: ``"cython"``, ``"python"`` or the active one."""
    if name is None:
        return _impl
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")


def available_backends():
    names = ["python"]
    try:
        from . import _kernels  # noqa: F401

        names.append("cython")
    except ImportError:
        pass
    return names


box_rhs = _impl.box_rhs
box_step = _impl.box_step
planewave_rhs = _impl.planewave_rhs
planewave_step = _impl.planewave_step
