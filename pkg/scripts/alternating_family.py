#!/usr/bin/env python3
"""Solve the alternating family [(2n-1)/2; 1, 2, ..., 2] and print how the
light/heavy payoff ratio flips between 0 and 1 while the total gap to the
normalized weights shrinks.
"""

import argparse

from nucleo.experiments import RatioPair, SequenceSpec, emit_report, run_sequence


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=12)
    ap.add_argument("--csv", default=None, help="also write the report here")
    args = ap.parse_args()

    spec = SequenceSpec(family="eq3", values=tuple(range(2, args.max_n + 1)))
    rows = run_sequence(spec, [RatioPair(kind="index", a=1, b=2)])
    print(f"{'n':>3} {'gap':>10} {'bound':>10} {'x1/x2':>10} {'target':>8}")
    for row in rows:
        cell = row.ratios[0]
        ratio = "undef" if cell.ratio is None else str(cell.ratio)
        print(f"{row.n:>3} {str(row.l1_gap):>10} {str(row.bound):>10} "
              f"{ratio:>10} {str(cell.target):>8}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(emit_report(rows, "csv"))
        print(f"wrote {args.csv}")


if __name__ == "__main__":
    main()
