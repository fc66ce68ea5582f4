"""Zero atom of a - b on H3(Z/p^m Z): exact census for several primes, and
a dense rank cross-check on the levels small enough to build.

    python scripts/heisenberg_table.py --primes 3 5 7 --levels 4
"""

import argparse

from quotient_brown import regular_rep_matrix, structural_zero_count, zero_atom_rank
from quotient_brown.groups import QuotientSpec
from quotient_brown.verification import heisenberg_a_minus_b

DENSE_LIMIT = 4096


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", type=int, nargs="+", default=[3, 5, 7])
    ap.add_argument("--levels", type=int, default=4)
    args = ap.parse_args()
    u = heisenberg_a_minus_b()
    for p in args.primes:
        print(f"p = {p}, limit {p}/{p + 1}")
        for m in range(1, args.levels + 1):
            rep = structural_zero_count(p, m)
            line = f"  m={m}  mass {str(rep.mass):>14}  deviation {float(rep.deviation):.3e}"
            q = QuotientSpec.heisenberg(p, m)
            if q.order <= DENSE_LIMIT:
                dense = zero_atom_rank(regular_rep_matrix(u, q), q.order, power=p**m)
                line += f"  dense rank {dense} ({'agrees' if dense == rep.mass else 'DISAGREES'})"
            print(line)


if __name__ == "__main__":
    main()
