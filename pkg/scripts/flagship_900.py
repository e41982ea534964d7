#!/usr/bin/env python3
"""The 900-player showcase: [1500; 4 x300, 3 x300, 2 x300].

The coincidence condition holds (400/3 > 96), so the nucleolus equals the
normalized weights even though the representation admits no homogeneous
form; the typed engine solves the game in well under a second.
"""

import time

from nucleo.games import representation
from nucleo.nucleolus import nucleolus
from nucleo.theory import coincidence_report, is_homogeneous_rep, permits_homogeneous_rep


def main() -> None:
    rep = representation(1500, [4] * 300 + [3] * 300 + [2] * 300)

    t0 = time.perf_counter()
    res = nucleolus(rep, engine="typed")
    dt = time.perf_counter() - t0
    wbar = rep.normalize().to_input_order()
    print(f"players: {rep.n}, solve time: {dt:.2f}s, stages: {res.stages}")
    print(f"payoffs by weight: 4 -> {res.x_star[0]}, 3 -> {res.x_star[300]}, "
          f"2 -> {res.x_star[600]}")
    print(f"x* equals normalized weights: {tuple(res.x_star) == tuple(wbar)}")

    report = coincidence_report(rep)
    print(f"condition: {report.lhs} > {report.rhs} -> {report.holds}")
    print(f"representation homogeneous: {is_homogeneous_rep(rep)}")

    t0 = time.perf_counter()
    ok, _ = permits_homogeneous_rep(rep, profile_cap=400_000)
    print(f"admits a homogeneous representation: {ok} "
          f"({time.perf_counter() - t0:.2f}s)")


if __name__ == "__main__":
    main()
