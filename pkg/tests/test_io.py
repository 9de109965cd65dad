import csv
import json

import numpy as np
import pytest

from nullwave.fields import FieldState, Grid3, read_snapshot, write_slice_csv, write_snapshot
from nullwave.fields.io import HEADER


@pytest.fixture
def state(rng):
    g = Grid3(8, 1.5, periodic=True)
    return FieldState(rng.standard_normal((3, 8, 8, 8)), rng.standard_normal((3, 8, 8, 8)), 0.75, g)


def test_snapshot_round_trip(state, tmp_path):
    binp, jsonp = write_snapshot(tmp_path / "snap", state, {"step": 3})
    assert binp.suffix == ".bin" and jsonp.exists()
    back, meta = read_snapshot(tmp_path / "snap.bin")
    assert meta == {"step": 3}
    assert np.array_equal(back.u, state.u) and np.array_equal(back.ut, state.ut)
    assert back.t == state.t and back.grid == state.grid


def test_snapshot_layout(state, tmp_path):
    binp, jsonp = write_snapshot(tmp_path / "s", state)
    raw = binp.read_bytes()
    assert HEADER.unpack_from(raw, 0) == (8, 1.5, 0.75)
    first = np.frombuffer(raw, "<f8", count=3, offset=HEADER.size)
    # row-major with the component index last
    assert np.array_equal(first, state.u[:, 0, 0, 0])
    side = json.loads(jsonp.read_text())
    assert side["n"] == 8 and side["periodic"] is True


def test_snapshot_without_ut(state, tmp_path):
    st = FieldState(state.u, None, 0.0, state.grid)
    write_snapshot(tmp_path / "a", st)
    back, _ = read_snapshot(tmp_path / "a")
    assert back.ut is None


def test_truncated_snapshot(state, tmp_path):
    binp, _ = write_snapshot(tmp_path / "t", state)
    binp.write_bytes(binp.read_bytes()[:-8])
    with pytest.raises(ValueError):
        read_snapshot(binp)


def test_slice_csv(state, tmp_path):
    path = tmp_path / "line.csv"
    write_slice_csv(path, state, axis=1)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["x", "u1", "u2", "u3", "ut1", "ut2", "ut3"]
    assert len(rows) == 9
    x = [float(r[0]) for r in rows[1:]]
    assert np.allclose(x, state.grid.axis)
    assert float(rows[3][2]) == state.u[1, 4, 2, 4]
