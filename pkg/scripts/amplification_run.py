#!/usr/bin/env python3
"""Run the box-measure amplification schedule on Z and print the report.

Boxes [-k_i, k_i] with k_i = 4i^2 are pushed forward onto step maps with
grid n_i = i.  Against a fixed 3-piece target and a 20-member
distance-to-reference family, defects and bounds should shrink along the
schedule while the expectation-median gaps collapse.
"""

from levylab import PiecewiseMap, Schedule, ZdGroup, disagreement_family, folner_measure, run_schedule

STAGES = 8
EPS = 0.2
SAMPLES = 20_000
SEED = 42
FAMILY_SEED = 123

if __name__ == "__main__":
    Z = ZdGroup(1)
    entries = tuple((i, folner_measure(Z, 4 * i * i)) for i in range(1, STAGES + 1))
    schedule = Schedule(entries, target_eps=0.1)
    target = PiecewiseMap(Z, (0.3, 0.65), ((5,), (-7,), (3,)))
    family = disagreement_family(Z, 20, seed=FAMILY_SEED, max_pieces=3, radius=4)

    report = run_schedule(schedule, target, family, eps=EPS, samples=SAMPLES, seed=SEED)
    print(f"{'i':>3} {'n':>3} {'mode':>8} {'defect':>10} {'bound':>10} {'conc':>9} {'med_gap':>9}")
    for row, mode in zip(report.rows, report.entry_modes):
        print(
            f"{row.i:>3} {row.n:>3} {mode:>8} {row.defect:>10.6f} {row.bound:>10.6f}"
            f" {row.conc_mass:>9.6f} {row.median_gap:>9.6f}"
        )
    print("flags:", {k: v for k, v in report.flags.items()})
