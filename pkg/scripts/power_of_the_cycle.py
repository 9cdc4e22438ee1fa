"""Show eps_3(C^m, C, C^m) in S_2m computed directly and term by term.

    python scripts/power_of_the_cycle.py 4 6 8
"""

import sys

from coxsigns.omega import power_expansion


def main(argv):
    sizes = [int(a) for a in argv] or [4, 6]
    for n in sizes:
        p = power_expansion(n)
        print(f"S{n}: direct value {p.direct}")
        print(f"  terms j=1..{n - 1}: {p.terms}  (symmetric: {p.paired}, middle term {p.middle})")
        for k, v in p.lengths.items():
            print(f"  |{k}| = {v}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
