"""Compare the numba and numpy GF(2) kernels.

    python3 benchmarks/bench_kernels.py [--sizes 64 128 256] [--repeat 5]

The numba functions are compiled once before timing.  Both backends must
return identical results; the script aborts otherwise.
"""

import argparse
import time

import numpy as np

from enmorse import _kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256, 512])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(args.seed)
    warm = rng.integers(0, 2, size=(4, 4), dtype=np.uint8)
    _kernels.rref_numba(warm)
    _kernels.matmul_numba(warm, warm)

    print(f"{'kernel':<8}{'n':>6}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for n in args.sizes:
        a = rng.integers(0, 2, size=(n, n), dtype=np.uint8)
        b = rng.integers(0, 2, size=(n, n), dtype=np.uint8)
        ra, pa = _kernels.rref_numpy(a)
        rb, pb = _kernels.rref_numba(a)
        assert np.array_equal(ra, rb) and np.array_equal(pa, pb)
        assert np.array_equal(_kernels.matmul_numpy(a, b), _kernels.matmul_numba(a, b))
        for name, f_np, f_nb in (
            ("rref", lambda: _kernels.rref_numpy(a), lambda: _kernels.rref_numba(a)),
            ("matmul", lambda: _kernels.matmul_numpy(a, b), lambda: _kernels.matmul_numba(a, b)),
        ):
            t_np = best_of(f_np, args.repeat) * 1e3
            t_nb = best_of(f_nb, args.repeat) * 1e3
            print(f"{name:<8}{n:>6}{t_np:>12.3f}{t_nb:>12.3f}{t_np / t_nb:>10.1f}x")


if __name__ == "__main__":
    main()
