"""Predicates, distance matrix and clusters over the bundled 34-market reference table."""
import argparse

from qtriplet.qcore import is_nonextensive
from qtriplet.report import reference_nonextensive_labels, reference_triplets
from qtriplet.triplets import (distance_matrix, is_nonextensive_with_uncertainty, mean_distance,
                               mean_within_cluster_distance, spectral_block_cluster)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=4)
    args = ap.parse_args()
    ts = reference_triplets()
    flagged = reference_nonextensive_labels()
    print(f"{'market':9s} {'flag':>4s} {'literal':>7s} {'strict':>6s}")
    for t in ts:
        print(f"{t.label:9s} {int(t.label in flagged):4d} {int(is_nonextensive(t)):7d} "
              f"{int(is_nonextensive_with_uncertainty(t)):6d}")
    lit = {t.label for t in ts if is_nonextensive(t)}
    print(f"\nliteral: {len(lit)}; beyond the flagged set: {sorted(lit - flagged)}")
    print(f"strict:  {sum(is_nonextensive_with_uncertainty(t) for t in ts)}; flagged but not strict: "
          f"{sorted(flagged - {t.label for t in ts if is_nonextensive_with_uncertainty(t)})}")
    dm = distance_matrix([t for t in ts if t.label in flagged])
    ca = spectral_block_cluster(dm, args.k)
    print(f"\nAEX-SPX distance {dm.entry('AEX', 'SPX'):.4f}")
    for c in range(args.k):
        print(f"cluster {c}: {' '.join(ca.members(c))}")
    print(f"mean within-cluster {mean_within_cluster_distance(dm, ca):.3f}, overall {mean_distance(dm):.3f}")


if __name__ == "__main__":
    main()
