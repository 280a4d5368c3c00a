#!/usr/bin/env python3
"""Deviation-profile sweep: sampled mass vs the exponential bound.

For the fair-coin product with growing n, estimate the mass of
{|coordinate mean - median| > EPS} and compare with 2*exp(-EPS^2 n).
"""

from levylab import DiscreteBase, HammingProduct, fraction_differing, lipschitz_profile, talagrand_bound

EPS = 0.3
NS = [5, 10, 20, 50, 100, 200]
SAMPLES = 100_000
SEED = 42

if __name__ == "__main__":
    base = DiscreteBase.uniform((0, 1))
    f = fraction_differing(0)
    print(f"eps={EPS}  samples={SAMPLES}  seed={SEED}")
    print(f"{'n':>5} {'estimate':>10} {'stderr':>9} {'bound':>10}")
    for n in NS:
        res = lipschitz_profile(
            HammingProduct(base, n), f, bound=1.0, lipschitz=1.0,
            eps=EPS, mode="sampled", samples=SAMPLES, seed=SEED,
        )
        print(f"{n:>5} {res.estimate:>10.6f} {res.stderr:>9.6f} {talagrand_bound(EPS, n):>10.6f}")
