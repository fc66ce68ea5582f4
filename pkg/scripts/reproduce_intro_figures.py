"""Eigenvalues of the 2x2 example over Z on Z/5, Z/25, Z/125, with the
torus limit curve overlaid, plus the convergence report.

    python scripts/reproduce_intro_figures.py --out figures/intro
"""

import argparse
import json
from pathlib import Path

from quotient_brown import TorusSampler, limit_measure, weak_convergence_report
from quotient_brown.abelian import box_radius, quotient_measure
from quotient_brown.cli import write_atomic
from quotient_brown.groups import QuotientSpec
from quotient_brown.svg import measure_svg
from quotient_brown.verification import INTRO_CHAIN, intro_matrix


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures/intro")
    ap.add_argument("--grid", type=int, default=2048)
    args = ap.parse_args()
    out = Path(args.out)

    A = intro_matrix()
    sampler = TorusSampler.grid(args.grid)
    limit = limit_measure(A, sampler)
    R = box_radius(A)
    chain = [QuotientSpec.abelian(A.group, [m]) for m in INTRO_CHAIN]
    for i, q in enumerate(chain, start=1):
        mu = quotient_measure(A, q)
        write_atomic(out / f"level{i}.svg", measure_svg(mu, f"|G_{i}| = {q.order}", overlay=limit, radius=R))
    report = weak_convergence_report(A, chain, sampler, limit=limit)
    write_atomic(out / "convergence.json", json.dumps(report.to_dict(), indent=2))
    for lv in report.levels:
        print(f"|G| = {lv.order:>4}: histogram distance to limit {lv.histogram_distance:.4g}")


if __name__ == "__main__":
    main()
