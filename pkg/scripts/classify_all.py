"""Classify epsilon_3 restricted to Omega for every irreducible Weyl type up to a given rank.

    python scripts/classify_all.py --max-rank 7 --csv omega.csv
"""

import argparse
import sys
import time

from coxsigns.omega import classify_restrictions, diff_against_expectations, load_expectations, reports_to_csv


def weyl_types(max_rank):
    out = [f"A{n}" for n in range(1, max_rank + 1)]
    out += [f"B{n}" for n in range(2, max_rank + 1)]
    out += [f"C{n}" for n in range(2, max_rank + 1)]
    out += [f"D{n}" for n in range(4, max_rank + 1)]
    out += [t for t, r in (("G2", 2), ("F4", 4), ("E6", 6), ("E7", 7), ("E8", 8)) if r <= max_rank]
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-rank", type=int, default=7)
    ap.add_argument("--csv", help="also write all subgroup verdicts here")
    args = ap.parse_args()

    expectations = load_expectations()
    reports, mismatches = [], 0
    for t in weyl_types(args.max_rank):
        start = time.perf_counter()
        r = classify_restrictions(t)
        reports.append(r)
        omega = r.verdict("Ω").verdict if r.omega_shape != "1" else "-"
        coords = r.verdict("Ω").coordinates if r.omega_shape != "1" else None
        tag = ""
        if t in expectations["types"]:
            problems = diff_against_expectations(r, expectations)
            mismatches += len(problems)
            tag = "matches table" if not problems else "MISMATCH " + "; ".join(problems)
        print(
            f"{t:<4} Omega={r.omega_shape:<8} eps3|Omega={omega:<11} coords={coords!s:<14}"
            f" perp={r.perp_type!s:<10} {time.perf_counter() - start:5.2f}s  {tag}"
        )
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(reports_to_csv(reports))
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
