"""Run every identity check over a list of types and degrees and print a summary table.

    python scripts/sweep_cocycles.py --types A3 B3 H3 --degrees 1 2 3 --samples 2000
"""

import argparse
import sys
import time

from coxsigns.identities import CHECKS, SweepConfig, run_checks


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--types", nargs="+", default=["A2", "A3", "B2", "B3", "G2", "I2(5)", "H3"])
    ap.add_argument("--degrees", nargs="+", type=int, default=[1, 2, 3, 4])
    ap.add_argument("--checks", nargs="+", default=list(CHECKS), choices=list(CHECKS))
    ap.add_argument("--samples", type=int, default=2_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    cfg = SweepConfig(samples=args.samples, seed=args.seed)
    failed = 0
    for t in args.types:
        start = time.perf_counter()
        results = run_checks(t, args.checks, args.degrees, cfg, jobs=args.jobs)
        for r in results:
            print(r.line())
            for f in r.failures:
                print(f"    counterexample: {f}")
        failed += sum(not r.passed for r in results)
        cases = sum(r.checked for r in results)
        print(f"== {t}: {cases} cases in {time.perf_counter() - start:.1f}s\n")
    print("all passed" if not failed else f"{failed} check(s) failed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
