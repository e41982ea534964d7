#!/usr/bin/env python3
"""Replicate a base game and watch the nucleolus collapse onto the
normalized weight vector; prints the guaranteed replication threshold next
to the replication at which coincidence is first observed.
"""

import argparse

from nucleo.experiments import RatioPair, SequenceSpec, run_sequence
from nucleo.gameio import parse_game
from nucleo.theory import replica_threshold


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--base", default="5; 4 3 2", help="base game")
    ap.add_argument("--max-rho", type=int, default=6)
    args = ap.parse_args()

    base = parse_game(args.base)
    spec = SequenceSpec(family="replica", values=tuple(range(1, args.max_rho + 1)),
                        base=base)
    heavy = max(base.original_weights)
    light = min(w for w in base.original_weights if w > 0)
    pairs = [RatioPair(kind="weight", a=heavy, b=light)] if heavy != light else []
    rows = run_sequence(spec, pairs)

    print(f"base: {args.base}   guaranteed threshold: {replica_threshold(base.to_integer())}")
    print(f"{'rho':>4} {'players':>8} {'gap':>12} {'bound':>12}")
    onset = None
    for row in rows:
        print(f"{row.param:>4} {row.n:>8} {str(row.l1_gap):>12} {str(row.bound):>12}")
        if onset is None and row.l1_gap == 0:
            onset = row.param
    if onset is not None:
        print(f"coincidence observed from rho = {onset}")
    else:
        print("no coincidence within the tested range")


if __name__ == "__main__":
    main()
