"""Compare the Cython and pure-Python Jacobi kernels.

    python benchmarks/bench_eigh.py [--count 2000] [--repeat 3]

numpy.linalg.eigh (LAPACK) is timed alongside as a reference point.
"""
import argparse
import time

import numpy as np

from kerr4ls.extensions import jacobi_slow

try:
    from kerr4ls.extensions import jacobi_fast
except ImportError:
    jacobi_fast = None


def random_hermitian(count, n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(count, n, n)) + 1j * rng.normal(size=(count, n, n))
    return a + np.conj(np.swapaxes(a, 1, 2))


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=2000)
    parser.add_argument("--size", type=int, default=4)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    stack = random_hermitian(args.count, args.size, args.seed)
    cases = [
        ("python  loop", lambda: [jacobi_slow.jacobi_eigh(h) for h in stack]),
        ("python  batch", lambda: jacobi_slow.jacobi_eigh_batch(stack)),
    ]
    if jacobi_fast is not None:
        cases += [
            ("cython  loop", lambda: [jacobi_fast.jacobi_eigh(h) for h in stack]),
            ("cython  batch", lambda: jacobi_fast.jacobi_eigh_batch(stack)),
        ]
    cases.append(("numpy   eigh", lambda: np.linalg.eigh(stack)))

    print(f"{args.count} random {args.size}x{args.size} Hermitian matrices, best of {args.repeat}")
    baseline = None
    for name, fn in cases:
        t = best_of(fn, args.repeat)
        baseline = baseline or t
        print(f"  {name:14s} {t * 1e3:9.2f} ms  {t / args.count * 1e6:8.2f} us/matrix  x{baseline / t:6.1f}")

    if jacobi_fast is not None:
        w_fast, _, _, _ = jacobi_fast.jacobi_eigh_batch(stack)
        w_slow, _, _, _ = jacobi_slow.jacobi_eigh_batch(stack)
        diff = np.abs(np.sort(w_fast, axis=1) - np.sort(w_slow, axis=1)).max()
        print(f"  max |eigenvalue difference| cython vs python: {diff:.2e}")
    else:
        print("  Cython kernel not built; only the fallback was timed")


if __name__ == "__main__":
    main()
