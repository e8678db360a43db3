"""Compare the numba and numpy kernel backends.

Usage::

    python3 benchmarks/bench_kernels.py [--sizes 10 24 48] [--fields 2 3 9 11] [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from dualarc import _kernels as K
from dualarc.gf import field_of_order


def _time(fn, repeat: int) -> float:
    fn()  # warm up, includes JIT compilation
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def run(sizes, fields, repeat: int) -> list[tuple]:
    """Time rref, rank and matmul on random matrices for each backend.

    Returns:
        Rows ``(q, size, op, numpy_seconds, numba_seconds)``; the numba entry is
        ``None`` when numba is unavailable.
    """
    rng = np.random.default_rng(0)
    rows = []
    for q in fields:
        F = field_of_order(q)
        for n in sizes:
            A = rng.integers(0, q, size=(n, n + 1), dtype=np.int64)
            B = rng.integers(0, q, size=(n + 1, n), dtype=np.int64)
            ops = {
                "rref": lambda: K.rref(A, F),
                "rank": lambda: K.rank(A, F),
                "matmul": lambda: K.matmul(A, B, F),
            }
            for name, fn in ops.items():
                timings = {}
                for backend in ("numpy", "numba"):
                    if backend == "numba" and not K.HAVE_NUMBA:
                        timings[backend] = None
                        continue
                    with K.use_backend(backend):
                        timings[backend] = _time(fn, repeat)
                rows.append((q, n, name, timings["numpy"], timings["numba"]))
    return rows


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 24, 48])
    ap.add_argument("--fields", type=int, nargs="+", default=[2, 3, 9, 11])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    print(f"{'q':>4} {'size':>5} {'op':>7} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for q, n, op, t_np, t_nb in run(args.sizes, args.fields, args.repeat):
        nb = f"{t_nb * 1e3:10.3f}" if t_nb is not None else f"{'n/a':>10}"
        sp = f"{t_np / t_nb:8.1f}" if t_nb else f"{'n/a':>8}"
        print(f"{q:>4} {n:>5} {op:>7} {t_np * 1e3:10.3f} {nb} {sp}")


if __name__ == "__main__":
    main()
