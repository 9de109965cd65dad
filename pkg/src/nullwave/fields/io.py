"""Snapshot files for discrete states.

Binary layout (little-endian): header ``int64 n, float64 L, float64 t``, then
``u`` and ``u_t`` as row-major arrays indexed ``[i1, i2, i3, component]`` of
float64. A JSON sidecar with the same stem records the layout and metadata.
"""
from __future__ import annotations

import csv
import json
import struct
from pathlib import Path

import numpy as np

from .grid import FieldState, Grid3

HEADER = struct.Struct("<qdd")


def _paths(path):
    p = Path(path)
    base = p.with_suffix("") if p.suffix in (".bin", ".json") else p
    return base.with_suffix(".bin"), base.with_suffix(".json")


def write_snapshot(path, state: FieldState, meta=None):
    """Write ``<stem>.bin`` and ``<stem>.json``; returns the two paths."""
    binp, jsonp = _paths(path)
    g = state.grid
    ut = np.zeros_like(state.u) if state.ut is None else state.ut
    with open(binp, "wb") as fh:
        fh.write(HEADER.pack(g.n, g.L, state.t))
        for arr in (state.u, ut):
            fh.write(np.ascontiguousarray(np.moveaxis(arr, 0, -1), dtype="<f8").tobytes())
    side = {
        "n": g.n, "L": g.L, "t": state.t, "periodic": g.periodic,
        "layout": "header <qdd (n, L, t); then u, ut as [i1, i2, i3, component] float64 LE",
        "has_ut": state.ut is not None,
        "meta": meta or {},
    }
    jsonp.write_text(json.dumps(side, indent=2) + "\n")
    return binp, jsonp


def read_snapshot(path) -> tuple[FieldState, dict]:
    binp, jsonp = _paths(path)
    side = json.loads(jsonp.read_text()) if jsonp.exists() else {}
    raw = binp.read_bytes()
    n, L, t = HEADER.unpack_from(raw, 0)
    count = 3 * n ** 3
    data = np.frombuffer(raw, dtype="<f8", offset=HEADER.size)
    if data.size != 2 * count:
        raise ValueError(f"{binp}: expected {2 * count} values, found {data.size}")
    u = np.moveaxis(data[:count].reshape(n, n, n, 3), -1, 0).astype(float)
    ut = np.moveaxis(data[count:].reshape(n, n, n, 3), -1, 0).astype(float)
    grid = Grid3(int(n), float(L), bool(side.get("periodic", False)))
    state = FieldState(np.ascontiguousarray(u), np.ascontiguousarray(ut) if side.get("has_ut", True) else None,
                       float(t), grid)
    return state, side.get("meta", {})


def write_slice_csv(path, state: FieldState, axis: int = 0):
    """Values along the grid line through the centre parallel to ``axis``."""
    g = state.grid
    idx = [g.n // 2] * 3
    idx[axis] = slice(None)
    ut = np.zeros_like(state.u) if state.ut is None else state.ut
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "u1", "u2", "u3", "ut1", "ut2", "ut3"])
        for i, x in enumerate(g.axis):
            sel = list(idx)
            sel[axis] = i
            sel = tuple(sel)
            w.writerow([repr(float(x))] + [repr(float(state.u[(c,) + sel])) for c in range(3)]
                       + [repr(float(ut[(c,) + sel])) for c in range(3)])
