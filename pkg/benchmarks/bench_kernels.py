"""Time the twisted-class kernels: numba against the numpy fallback.

    python3 benchmarks/bench_kernels.py [group ...]
"""
import sys
import timeit

import numpy as np

from rinfty.twisted import kernels
from rinfty.twisted.groups import by_name, enumerate_automorphisms

NAMES = sys.argv[1:] or ["C2^4", "C2xQ8", "D8", "A4", "S4"]


def bench(fn, *args, number=20):
    fn(*args)                     # warm-up (compiles numba code)
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=3)) / number


def main():
    print(f"{'group':8} {'kernel':15} {'numba_us':>10} {'numpy_us':>10} {'speedup':>8}")
    for name in NAMES:
        try:
            G = by_name(name)
        except KeyError:
            print(f"{name}: not in catalog")
            continue
        phi = enumerate_automorphisms(G)[-1].values.astype(np.int64)
        T, inv = G.table.astype(np.int64), G.inverse.astype(np.int64)
        targets = np.arange(G.order, dtype=np.int64)
        pairs = [
            ("twisted_labels", kernels._twisted_labels_nb, kernels.twisted_labels_np, (T, inv, phi)),
            ("fixed_counts", kernels._fixed_counts_nb, kernels.fixed_counts_np, (T, inv, phi)),
            ("conjugators", kernels._conjugators_nb, kernels.conjugators_np, (T, inv, phi, 1, targets)),
        ]
        for label, nb, npy, args in pairs:
            assert np.array_equal(nb(*args), npy(*args))
            a, b = bench(nb, *args), bench(npy, *args)
            print(f"{name:8} {label:15} {a * 1e6:10.1f} {b * 1e6:10.1f} {b / a:8.2f}")


if __name__ == "__main__":
    main()
