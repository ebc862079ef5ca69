"""Timing comparison of the compiled bit kernels against the pure fallback.

Run from the repository root:

  python bench/benchmark_kernels.py [--quick]

Each kernel runs on a representative workload for both implementations and
the table reports wall time plus the compiled speedup. The pure fallback is
imported directly, so results are valid regardless of MTJRNG_PURE.
"""

import argparse
import time

import numpy as np

from mtjrng._kernels import _pykernels

try:
    from mtjrng._kernels import _ckernels
except ImportError:
    _ckernels = None


def _time(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def benchmark(quick: bool) -> list:
    scale = 10 if quick else 1
    n_lfsr = 2 * 10**7 // scale
    n_words = 10**6 // scale
    lc_blocks = 200 // scale
    n_mats = 4 * 10**4 // scale

    rng = np.random.default_rng(1)
    lc_bits = rng.integers(0, 2, 500 * lc_blocks, dtype=np.uint8)
    mats = rng.integers(0, 2**32, (n_mats, 32), dtype=np.uint64).astype(np.uint32)
    tap_mask = (1 << 0) | (1 << 10) | (1 << 30) | (1 << 31)

    cases = [
        (f"lfsr_fill {n_lfsr:.0e} bits",
         lambda impl: impl.lfsr_fill(0xACE1, tap_mask, 32, n_lfsr)),
        (f"xoroshiro_fill {n_words:.0e} words",
         lambda impl: impl.xoroshiro_fill(0x123456789ABCDEF, 0x243F6A8885A308D3,
                                          n_words)),
        (f"linear_complexity {lc_blocks} x 500",
         lambda impl: impl.linear_complexity_blocks(lc_bits, 500)),
        (f"rank32_batch {n_mats} matrices",
         lambda impl: impl.rank32_batch(mats)),
    ]

    rows = []
    for name, call in cases:
        t_py = _time(lambda: call(_pykernels))
        t_c = _time(lambda: call(_ckernels)) if _ckernels else None
        rows.append((name, t_py, t_c))
    return rows


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--quick", action="store_true",
                        help="1/10th workloads for a fast sanity run")
    args = parser.parse_args()

    if _ckernels is None:
        print("compiled kernels unavailable; timing pure fallback only")
    rows = benchmark(args.quick)
    width = max(len(r[0]) for r in rows)
    header = f"{'kernel':<{width}}  {'pure (s)':>10}  {'compiled (s)':>12}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, t_py, t_c in rows:
        if t_c is None:
            print(f"{name:<{width}}  {t_py:>10.4f}  {'n/a':>12}  {'n/a':>8}")
        else:
            print(f"{name:<{width}}  {t_py:>10.4f}  {t_c:>12.4f}  "
                  f"{t_py / t_c:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
