#!/usr/bin/env python3
"""Contrast almost-invariance: box measures on Z vs ball measures on F2.

On Z the defect of the box measure against a generator decays like
1/(2k+1); on the free group the ball-uniform defect against the clamped
word length stays pinned near 1/2 no matter how large the ball grows.
"""

from levylab import FreeGroup2, ZdGroup, ball_uniform, folner_measure, invariance_defect, wordlen_clamp_family

K_MAX_Z = 10
K_MAX_F2 = 6

if __name__ == "__main__":
    Z = ZdGroup(1)
    F2 = FreeGroup2()
    clamp = wordlen_clamp_family(Z, [5])

    print("Z, uniform boxes [-k, k], family min(|x|,5)/5, g = 1")
    print(f"{'k':>3} {'defect':>9} {'2/(2k+1)':>9}")
    for k in range(1, K_MAX_Z + 1):
        d = invariance_defect(folner_measure(Z, k), (1,), clamp)
        print(f"{k:>3} {d:>9.5f} {2 / (2 * k + 1):>9.5f}")

    print()
    print("F2, uniform balls B_k, family min(wl, k+1), g = a")
    print(f"{'k':>3} {'|B_k|':>6} {'defect':>9}")
    for k in range(1, K_MAX_F2 + 1):
        mu = ball_uniform(F2, k)
        fam = wordlen_clamp_family(F2, [k + 1], normalize=False)
        print(f"{k:>3} {len(mu.support):>6} {invariance_defect(mu, 'a', fam):>9.5f}")
