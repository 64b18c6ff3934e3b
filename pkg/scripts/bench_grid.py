#!/usr/bin/env python3
"""Time measurement and recovery over a grid of matrix sizes.

Plants a random rank <= r matrix per size, measures it with the diagonal
family at 2r, recovers it, verifies exactness, and prints per-size timings
plus the recover-time growth ratio across consecutive doublings (the
interesting quantity: roughly linear-per-entry growth means the ratio stays
near 4 when n doubles).
"""

import argparse
import random
import time

from tensorhit.field import make_prime_field
from tensorhit.lrr import measure_D, recover_from_D
from tensorhit.tensor import DenseTensor


def random_low_rank(ctx, rng, n, r):
    out = DenseTensor.zeros(ctx, (n, n))
    for _ in range(r):
        u = [ctx.from_index(rng.randrange(ctx.size)) for _ in range(n)]
        v = [ctx.from_index(rng.randrange(ctx.size)) for _ in range(n)]
        term = [ctx.mul(a, b) for a in u for b in v]
        out.entries = [ctx.add(a, b) for a, b in zip(out.entries, term)]
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=257, help="prime field size")
    ap.add_argument("--sizes", default="16,32,64,128")
    ap.add_argument("--r", type=int, default=2)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    ctx = make_prime_field(args.p)
    rng = random.Random(args.seed)
    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"field GF({args.p}), rank budget r={args.r}, best of {args.repeats}")
    print(f"{'n':>6} {'#meas':>7} {'measure_s':>11} {'recover_s':>11} {'growth':>8}")
    prev = None
    for n in sizes:
        mat = random_low_rank(ctx, rng, n, args.r)
        best_meas = best_rec = float("inf")
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            synd = measure_D(mat, args.r)
            t1 = time.perf_counter()
            rec = recover_from_D(ctx, n, n, args.r, synd)
            t2 = time.perf_counter()
            assert rec.entries == mat.entries, "recovery mismatch"
            best_meas = min(best_meas, t1 - t0)
            best_rec = min(best_rec, t2 - t1)
        growth = f"{best_rec / prev:.2f}x" if prev else "-"
        print(f"{n:>6} {len(synd):>7} {best_meas:>11.4f} {best_rec:>11.4f} {growth:>8}")
        prev = best_rec


if __name__ == "__main__":
    main()
