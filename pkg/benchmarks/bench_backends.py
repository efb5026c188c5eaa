"""Time the numba kernels against the pure-numpy fallbacks.

Runs each hot kernel under both backends on identical inputs, checks the
outputs agree bit for bit, and prints per-call times plus the speedup.

Usage:
    python3 benchmarks/bench_backends.py [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from redundarith._kernels import (
    HAS_NUMBA,
    acc_stream1,
    active_backend,
    pp_unsigned_digits,
    popcount_batch,
    reduce_to_two_digits,
    use_backend,
)


def _bench_reduce(rng):
    digits = rng.integers(0, 2, size=(127, 256), dtype=np.int64)

    def run():
        out, _ = reduce_to_two_digits(digits.copy(), 2)
        return out

    return run


def _bench_acc_stream(rng):
    width = 16
    ops = rng.integers(0, 2, size=(100_000, width), dtype=np.int64)

    def run():
        s = np.zeros(width + 1, dtype=np.int64)
        c = np.zeros(width + 1, dtype=np.int64)
        overflow = acc_stream1(ops, s, c, False)
        return np.concatenate([s, c, [overflow]])

    return run


def _bench_popcount(rng):
    bits = rng.integers(0, 2, size=(4096, 63), dtype=np.int64)

    def run():
        return popcount_batch(bits)

    return run


def _bench_partial_products(rng):
    a = rng.integers(0, 2, size=64, dtype=np.int64)
    b = rng.integers(0, 2, size=64, dtype=np.int64)

    def run():
        out = pp_unsigned_digits(a, b)
        for _ in range(199):
            out = pp_unsigned_digits(a, b)
        return out

    return run


BENCHES = [
    ("reduce_to_two 127x256", _bench_reduce),
    ("acc_stream1 1e5 steps", _bench_acc_stream),
    ("popcount_batch 4096x63", _bench_popcount),
    ("pp_unsigned 64x64 x200", _bench_partial_products),
]


def _time(run, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = run()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if not HAS_NUMBA:
        print("numba not installed; only the numpy backend will run")

    initial = active_backend()
    print(f"{'kernel':<26} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for name, make in BENCHES:
        rng = np.random.default_rng(2024)
        run = make(rng)

        use_backend("numpy")
        t_np, out_np = _time(run, args.repeats)

        if HAS_NUMBA:
            use_backend("numba")
            run()  # warm-up triggers JIT compilation
            t_nb, out_nb = _time(run, args.repeats)
            assert np.array_equal(out_np, out_nb), f"{name}: backends disagree"
            ratio = t_np / t_nb if t_nb > 0 else float("inf")
            print(f"{name:<26} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms {ratio:>7.1f}x")
        else:
            print(f"{name:<26} {t_np * 1e3:>8.2f}ms {'-':>10} {'-':>8}")

    use_backend(initial)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
