"""Zero atom of the nilpotent Jordan block M_n against the corner
perturbation eps: the atom at 0 jumps to a circle of radius eps^(1/n).

    python scripts/discontinuity_demo.py --n 4 8 16
"""

import argparse

import numpy as np

from quotient_brown.quotient_rep import nilpotent_jordan
from quotient_brown.spectra import eigenvalues, zero_atom_numeric


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[4, 8, 16])
    ap.add_argument("--eps", type=float, nargs="+", default=[1e-4, 1e-8, 1e-12])
    args = ap.parse_args()
    print(f"{'n':>3} {'eps':>8} {'atom(M_n)':>10} {'atom(M_n+eps)':>14} {'max|lam|':>10} {'eps^(1/n)':>10}")
    for n in args.n:
        atom0 = zero_atom_numeric(nilpotent_jordan(n), n, tau=1e-12)
        for eps in args.eps:
            lam = eigenvalues(nilpotent_jordan(n, eps))
            atom1 = zero_atom_numeric(None, n, tau=1e-3, eigs=lam)
            print(f"{n:>3} {eps:>8.0e} {str(atom0):>10} {str(atom1):>14} {np.abs(lam).max():>10.4g} {eps ** (1 / n):>10.4g}")


if __name__ == "__main__":
    main()
