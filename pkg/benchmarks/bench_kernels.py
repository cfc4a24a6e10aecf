"""Time the compiled kernels against the pure-Python twins.

    python benchmarks/bench_kernels.py [--repeat N]

Each row runs the same inputs through both backends, checks the outputs
match, and reports the best-of-N wall time.
"""

import argparse
import random
import timeit

import numpy as np

from semik import kernels
from semik.lattice import direct_sum, free_bool, q_chain
from semik.tables import named_table


def cases():
    m2b = named_table("M2B")
    big = named_table("BxBxBxBxBxB")  # 64 elements
    lat = direct_sum(direct_sum(q_chain(4), q_chain(4)), free_bool(2))  # 64 elements
    meet = np.array(lat.meet, dtype=np.int64)
    rng = random.Random(1)
    pairs = [(rng.randrange(16), rng.randrange(16)) for _ in range(50)]
    grid_mat = [[0, -1, -2, 0], [0, 0, -1, -3], [-1, 0, 0, -2]]
    grid_vals = [0, -1, -2, -3, -4, -5, -6, kernels.NEG]
    # identity on zero, one and the six coordinate idempotents; the rest is propagated
    seed = [-1] * 64
    for x in (big.zero, big.one, 1, 2, 4, 8, 16, 32):
        seed[x] = x

    return [
        ("table axioms, order 64",
         lambda b: b.table_axiom_violation(big.add_array, big.mul_array, big.zero, big.one)),
        ("congruence closure x50, M2(B)",
         lambda b: [b.congruence_closure(m2b.add_array, m2b.mul_array, list(range(16)), [p]) for p in pairs]),
        ("join laws, 64-element lattice", lambda b: b.join_violation(lat.join_array, lat.bottom)),
        ("distributivity, 64-element lattice", lambda b: b.distributive_violation(lat.join_array, meet)),
        ("max-plus grid, 8^4 points", lambda b: b.maxplus_grid_images(grid_mat, grid_vals, 0, 8 ** 4)),
        ("morphism extension, B^6 to itself",
         lambda b: b.extend_morphism(big.add_array, big.mul_array, big.add_array, big.mul_array, seed)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    names = kernels.available_backends()
    if "cython" not in names:
        print("compiled kernels not built; only the Python backend is available")
    backends = {n: kernels.backend(n) for n in names}
    print(f"{'kernel':38} " + " ".join(f"{n:>10}" for n in names) + ("   speedup" if len(names) == 2 else ""))
    for title, fn in cases():
        outs = {n: fn(b) for n, b in backends.items()}
        if len(set(map(repr, outs.values()))) != 1:
            raise SystemExit(f"backends disagree on {title}")
        times = {n: min(timeit.repeat(lambda: fn(b), number=1, repeat=args.repeat)) for n, b in backends.items()}
        row = f"{title:38} " + " ".join(f"{times[n] * 1e3:8.2f}ms" for n in names)
        if len(names) == 2:
            row += f"   {times['python'] / times['cython']:6.1f}x"
        print(row)


if __name__ == "__main__":
    main()
