"""Seeded sweep comparing the decomposition solver against brute force.

Unweighted instances compare the full achievable-score sets; weighted
instances compare every ordered-pair margin and every necessary-winner
decision. Prints one line per mismatch and a summary; exits 1 when any
mismatch was found.

Usage:
    python3 scripts/crosscheck_random.py --trials 200 --seed 7 --weighted
"""

import argparse
import itertools
import random
import sys
import time

from socialpolls.dpsolver import (
    achievable_scores_dp,
    max_margin_dp,
    necessary_winner_dp,
)
from socialpolls.graphkit import graph_of, heuristic_td, make_nice
from socialpolls.oracle import (
    achievable_scores_bf,
    max_margin_bf,
    necessary_winner_bf,
)
from socialpolls.reductions import gen_random


def check_unweighted(inst, ntd):
    mism = []
    if achievable_scores_dp(inst, ntd) != achievable_scores_bf(inst):
        mism.append("achievable sets differ")
    return mism


def check_weighted(inst, ntd):
    mism = []
    for d, c in itertools.permutations(inst.candidates, 2):
        dp = max_margin_dp(inst, ntd, d, c)
        bf = max_margin_bf(inst, d, c)
        if dp != bf:
            mism.append("margin(%s,%s): dp=%d bf=%d" % (d, c, dp, bf))
    for c in inst.candidates:
        dp = necessary_winner_dp(inst, ntd, c)[0]
        bf = necessary_winner_bf(inst, c)[0]
        if dp != bf:
            mism.append("necessary(%s): dp=%s bf=%s" % (c, dp, bf))
    return mism


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-agents", type=int, default=8)
    ap.add_argument("--candidates", type=int, default=3)
    ap.add_argument("--edge-prob", type=float, default=0.3)
    ap.add_argument("--max-edges", type=int, default=14)
    ap.add_argument("--weighted", action="store_true")
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    bad = 0
    start = time.monotonic()
    for trial in range(args.trials):
        n = rng.randint(2, args.max_agents)
        while True:
            inst = gen_random(
                rng.randrange(10**6),
                n,
                args.candidates,
                edge_prob=args.edge_prob,
                max_weight=9 if args.weighted else 1,
            )
            if len(graph_of(inst).edges) <= args.max_edges:
                break
        ntd = make_nice(heuristic_td(graph_of(inst)))
        check = check_weighted if args.weighted else check_unweighted
        mism = check(inst, ntd)
        if mism:
            bad += 1
            for line in mism:
                print("trial %d n=%d: %s" % (trial, n, line))
        elif args.verbose:
            print("trial %d n=%d ok" % (trial, n))
    elapsed = time.monotonic() - start
    print(
        "%d trials, %d mismatching instances, %.1fs" % (args.trials, bad, elapsed)
    )
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
