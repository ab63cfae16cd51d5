"""Compare the numba kernels with their pure-numpy twins.

    python benchmarks/bench_kernels.py [--quick]

Kernel timings are taken in-process (both implementations are importable
when numba is present).  The end-to-end rows run one CLI command twice in
subprocesses, with and without FROBFORGE_NO_NUMBA; at desk scale they are
dominated by numba's import and cache-load cost.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from frobforge import _kernels as K

ROOT = Path(__file__).resolve().parent.parent


def best_of(fn, repeat: int = 3) -> float:
    out = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        out = min(out, time.perf_counter() - t0)
    return out


def kernel_rows(n: int, p: int, rng) -> list[tuple]:
    A = rng.integers(0, p, size=(n, n)).astype(np.int64)
    B = rng.integers(0, p, size=(n, n)).astype(np.int64)
    P = rng.integers(0, p, size=(4 * n, 64)).astype(np.int64)
    S = (A * (rng.random(A.shape) < 0.05)).astype(np.int64)  # sparse, as in Hom systems
    rows = []
    pairs = [
        ("rref", lambda f: f(A.copy(), p), K.rref_numpy, getattr(K, "rref_numba", None)),
        ("matmul", lambda f: f(A, B, p), K.matmul_numpy, getattr(K, "matmul_numba", None)),
        ("matmul sparse", lambda f: f(S, B, p), K.matmul_numpy, getattr(K, "matmul_numba", None)),
        ("panel_basis", lambda f: f(P, p), K.panel_basis_numpy, getattr(K, "panel_basis_numba", None)),
    ]
    for name, call, f_np, f_nb in pairs:
        t_np = best_of(lambda: call(f_np))
        if f_nb is not None:
            call(f_nb)  # compile
            t_nb = best_of(lambda: call(f_nb))
        else:
            t_nb = float("nan")
        rows.append((f"{name} {n}x{n} p={p}", t_np, t_nb))
    return rows


def end_to_end(fixture: str, command: list[str]) -> tuple:
    times = []
    for flag in ("1", ""):
        env = dict(os.environ, FROBFORGE_NO_NUMBA=flag)
        t0 = time.perf_counter()
        subprocess.run(
            [sys.executable, "-m", "frobforge.cli", *command, str(ROOT / "fixtures" / f"{fixture}.ring"), "--no-cache", "--format", "json"],
            env=env, check=True, capture_output=True,
        )
        times.append(time.perf_counter() - t0)
    return (f"cli {' '.join(command)} {fixture}", times[0], times[1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="small sizes, no end-to-end run")
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    sizes = [40] if args.quick else [100, 300]
    rows = []
    for n in sizes:
        rows += kernel_rows(n, 7, rng)
    if not args.quick:
        rows.append(end_to_end("quadric_p3", ["witness", "--e-max", "2"]))
        rows.append(end_to_end("cusp_p5", ["minop", "--e-max", "2", "--domain"]))
    print(f"backend in this process: {K.backend()}")
    print(f"{'case':40s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s}")
    for name, t_np, t_nb in rows:
        print(f"{name:40s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}x")
    return rows


if __name__ == "__main__":
    main()
