"""Compare the compiled and numpy stencil kernels.

    python3 benchmarks/bench_kernels.py --n 32 48 64 --repeat 5
"""
import argparse
import json
import timeit

import numpy as np

from nullwave.constitutive import standard_materials
from nullwave.kernels import available_backends, get_backend
from nullwave.tensors import material_tensors


def bench_box(backend, n, B27, c1_sq, c2_sq, repeat):
    rng = np.random.default_rng(0)
    u = rng.standard_normal((3, n, n, n))
    k = get_backend(backend)
    h = 2.0 / n
    t = timeit.repeat(lambda: k.box_rhs(u, c1_sq, c2_sq, B27, h, False), number=1, repeat=repeat)
    return min(t), k.box_rhs(u, c1_sq, c2_sq, B27, h, False)


def bench_planewave(backend, n, Axi, bhat, repeat):
    rng = np.random.default_rng(0)
    U = rng.standard_normal((3, n))
    k = get_backend(backend)
    t = timeit.repeat(lambda: k.planewave_rhs(U, Axi, bhat, 0.01), number=20, repeat=repeat)
    return min(t) / 20, k.planewave_rhs(U, Axi, bhat, 0.01)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, nargs="+", default=[32, 48, 64])
    p.add_argument("--n1d", type=int, nargs="+", default=[2048, 4096])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--json", help="also write the rows to this file")
    args = p.parse_args(argv)

    T = material_tensors(standard_materials()["generic"], 1.5)
    B27 = T.B.as_matrix27()
    xi = np.array([1.0, 0.0, 0.0])
    Axi, bhat = T.A.symbol(xi), T.B.contract_dirs(xi)
    backends = available_backends()
    rows = []
    for n in args.n:
        res = {b: bench_box(b, n, B27, T.c1_sq, T.c2_sq, args.repeat) for b in backends}
        rows.append(_row("box_rhs", n, res))
    for n in args.n1d:
        res = {b: bench_planewave(b, n, Axi, bhat, args.repeat) for b in backends}
        rows.append(_row("planewave_rhs", n, res))
    for r in rows:
        speed = f"  speedup {r['speedup']:.2f}x" if "speedup" in r else ""
        times = "  ".join(f"{b} {r[b] * 1e3:8.2f} ms" for b in backends)
        print(f"{r['kernel']:<14} n={r['n']:<5} {times}{speed}  rel diff {r['max_diff']:.1e}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return rows


def _row(kernel, n, res):
    row = {"kernel": kernel, "n": n}
    for b, (t, _) in res.items():
        row[b] = t
    outs = [o for _, o in res.values()]
    scale = max(np.max(np.abs(outs[0])), 1e-300)
    row["max_diff"] = float(max(np.max(np.abs(o - outs[0])) for o in outs) / scale)
    if "cython" in res:
        row["speedup"] = res["python"][0] / res["cython"][0]
    return row


if __name__ == "__main__":
    main()
