"""Command-line interface: ``quotient-brown <command> [options]``.

Exit codes: 0 success, 2 configuration or parse error, 3 numerical failure,
4 verification failure.  Errors are reported as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from . import abelian, heisenberg, spectra, verification
from .config import JobConfig, split_list
from .errors import (
    ConfigError,
    DimensionTooLarge,
    NoConvergence,
    NotIntegral,
    Overflow,
    QuotientBrownError,
    QuotientTooLarge,
    TooLarge,
)
from .groups import AbelianGroupSpec, Family, QuotientSpec
from .quotient_rep import DEFAULT_DENSE_CAP, nilpotent_jordan, regular_rep_matrix
from .spectra import AtomicMeasure
from .svg import PALETTE, measure_svg, scatter_svg

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VERIFY = 0, 2, 3, 4
NUMERICAL_ERRORS = (NoConvergence, DimensionTooLarge, QuotientTooLarge, TooLarge, Overflow, NotIntegral, ArithmeticError)


def write_atomic(path: Path, content: str) -> Path:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _fraction(x: Fraction) -> dict:
    return {"exact": f"{x.numerator}/{x.denominator}", "value": float(x)}


def _complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _product(value: float, passed: bool) -> dict:
    return {"value": value if math.isfinite(value) else "inf", "at_least_one": passed}


def _write_measure(out: Path, stem: str, mu: AtomicMeasure, formats, title: str, overlay=None, radius=None) -> list[Path]:
    written = []
    if "csv" in formats:
        written.append(write_atomic(out / f"{stem}.csv", mu.to_csv()))
    if "json" in formats:
        written.append(write_atomic(out / f"{stem}.json", mu.to_json()))
    if "svg" in formats:
        written.append(write_atomic(out / f"{stem}.svg", measure_svg(mu, title, overlay=overlay, radius=radius)))
    return written


# ---------------------------------------------------------------------------
# per-level spectral summaries


def _dense_level(A, q: QuotientSpec, cfg: JobConfig) -> tuple[np.ndarray, dict]:
    M = regular_rep_matrix(A, q)
    power = cfg.power
    if power is None and q.family is Family.HEISENBERG:
        power = q.prime**q.level
    eigs = spectra.eigenvalues_deflated(M, power, cfg.tau_svd) if power is not None else spectra.eigenvalues(M)
    zeros, power_used = spectra.kernel_and_power(M, power, cfg.tau_svd)
    summary = {
        "route": "regular",
        "eigensolver": "lapack" if power is None else f"deflated by rank of A^{power}",
        "trace": _complex(np.trace(M)),
        "zero_atom_rank": _fraction(Fraction(zeros, q.order)),
        "rank_power": power_used,
        "fk_determinant": spectra.fk_determinant(M),
    }
    if A.is_integral:
        product, passed = spectra.luck_product_check(M, cfg.tau, eigs=eigs)
        summary["nonzero_eigenvalue_product"] = _product(product, passed)
    return eigs, summary


def _block_level(A, q: QuotientSpec, cfg: JobConfig) -> tuple[np.ndarray, dict]:
    """Abelian quotients too large for the dense path, one block per character.

    Singular values, kernels and traces of the regular representation are
    the unions (sums) of those of the blocks ``A(zeta)``.
    """
    blocks = abelian.evaluate_many(A, abelian.characters(q))
    eigs = np.linalg.eigvals(blocks).reshape(-1)
    dim = A.n * q.order
    zeros = sum(spectra.generalized_kernel_dimension(B, cfg.power, cfg.tau_svd) for B in blocks)
    sv = np.linalg.svd(blocks, compute_uv=False).reshape(-1)
    fk = 0.0 if np.any(sv == 0) else float(np.exp(np.sum(np.log(sv)) / dim))
    summary = {
        "route": "factorization",
        "eigensolver": "lapack per character block",
        "trace": _complex(np.trace(blocks, axis1=1, axis2=2).sum()),
        "zero_atom_rank": _fraction(Fraction(zeros, q.order)),
        "rank_power": cfg.power,
        "fk_determinant": fk,
    }
    if A.is_integral:
        product, passed = spectra.nonzero_product(eigs, cfg.tau, dim, scale=float(sv.max()))
        summary["nonzero_eigenvalue_product"] = _product(product, passed)
    return eigs, summary


def level_summary(A, q: QuotientSpec, cfg: JobConfig) -> tuple[AtomicMeasure, dict]:
    if q.family is Family.ABELIAN and A.n * q.order > DEFAULT_DENSE_CAP:
        eigs, summary = _block_level(A, q, cfg)
    else:
        eigs, summary = _dense_level(A, q, cfg)
    dim = A.n * q.order
    mu = AtomicMeasure(eigs, np.full(eigs.shape, 1.0 / q.order), dim / q.order)
    summary = {
        "quotient": q.describe(),
        "order": q.order,
        "dimension": dim,
        **summary,
        "normalized_trace": [t / q.order for t in summary["trace"]],
        "zero_atom_numeric": _fraction(spectra.zero_atom_numeric(None, q.order, cfg.tau, eigs=eigs)),
        "tau": cfg.tau,
        "tau_svd": cfg.tau_svd,
    }
    if q.family is Family.HEISENBERG and _is_census_element(A) and q.prime != 2:
        rep = heisenberg.structural_zero_count(q.prime, q.level)
        summary["structural_zero_atom"] = _fraction(rep.mass)
    return mu, summary


def _is_census_element(A) -> bool:
    """True for the 1x1 matrix ``(a - b)``."""
    if A.n != 1:
        return False
    G = A.group
    return dict(A.entries[0][0].items()) == {G.a: 1, G.b: -1}


# ---------------------------------------------------------------------------
# commands


def cmd_quotient_spectrum(cfg: JobConfig, echo=print) -> list[Path]:
    A = cfg.parsed_matrix()
    chain = cfg.quotients()
    if not chain:
        raise ConfigError("quotient-spectrum needs a non-empty --chain")
    out = Path(cfg.out)
    written = []
    for i, q in enumerate(chain, start=1):
        mu, summary = level_summary(A, q, cfg)
        stem = f"level{i}_{q.describe().replace('^', 'p')}"
        written += _write_measure(out, stem, mu, cfg.formats, f"{q.describe()}: order {q.order}")
        written.append(write_atomic(out / f"{stem}_summary.json", json.dumps(summary, indent=2)))
        echo(
            f"{q.describe():>8}  dim {summary['dimension']:>5}  zero atom (rank) {summary['zero_atom_rank']['exact']:>8}"
            f"  (numeric) {summary['zero_atom_numeric']['exact']:>8}  FK det {summary['fk_determinant']:.6g}"
        )
    return written


def cmd_limit_measure(cfg: JobConfig, echo=print) -> list[Path]:
    A = cfg.parsed_matrix()
    if not isinstance(A.group, AbelianGroupSpec):
        raise ConfigError("limit-measure needs an abelian group")
    try:
        sampler = abelian.TorusSampler.parse(cfg.sampler, A.group.rank, cfg.seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    limit = abelian.limit_measure(A, sampler)
    out = Path(cfg.out)
    R = abelian.box_radius(A)
    written = _write_measure(out, "limit", limit, cfg.formats, f"limit ({cfg.sampler})", radius=R)
    echo(f"limit measure: {len(limit)} atoms, total mass {limit.total_mass:.6g}")
    chain = cfg.quotients()
    if chain:
        report = abelian.weak_convergence_report(
            A, chain, sampler, degree=cfg.degree, cells=cfg.cells, tau=cfg.tau, limit=limit
        )
        written.append(write_atomic(out / "convergence.json", json.dumps(report.to_dict(), indent=2)))
        if "svg" in cfg.formats:
            for i, q in enumerate(chain, start=1):
                mu = abelian.quotient_measure(A, q)
                svg = measure_svg(mu, f"{q.describe()} with limit", overlay=limit, radius=R)
                written.append(write_atomic(out / f"level{i}_{q.describe()}_overlay.svg", svg))
        for lv in report.levels:
            echo(f"{lv.quotient:>8}  histogram distance {lv.histogram_distance:.4g}  moment error {lv.moment_error:.4g}")
    return written


def _parse_levels(text: str) -> list[int]:
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in split_list(text)]
    except ValueError as exc:
        raise ConfigError(f"levels look like 1..4 or 1,2,3; got {text!r}") from exc


def cmd_heisenberg_table(p: int, levels, out: str | None = None, echo=print) -> dict:
    rows = [heisenberg.structural_zero_count(p, m) for m in levels]
    limit = Fraction(p, p + 1)
    echo(f"{'m':>3}  {'|G|':>12}  {'mu({0})':>22}  {'decimal':>12}  {'deviation':>14}")
    for r in rows:
        mass = f"{r.mass.numerator}/{r.mass.denominator}"
        dev = r.deviation
        echo(f"{r.m:>3}  {r.group_order:>12}  {mass:>22}  {float(r.mass):>12.10f}  {float(dev):>14.6e}")
    echo(f"{'lim':>3}  {'':>12}  {f'{limit.numerator}/{limit.denominator}':>22}  {float(limit):>12.10f}")
    table = {"p": p, "rows": [r.to_dict() for r in rows], "limit": _fraction(limit)}
    if out is not None:
        write_atomic(Path(out) / f"heisenberg_p{p}.json", json.dumps(table, indent=2))
    return table


def cmd_demo_discontinuity(n: int, eps: float, out: str | None = None, formats=("csv", "json", "svg"), echo=print) -> dict:
    if n < 2:
        raise ConfigError("n must be >= 2")
    if eps < 0 or not math.isfinite(eps):
        raise ConfigError("eps must be a finite nonnegative number")
    M0, M1 = nilpotent_jordan(n), nilpotent_jordan(n, eps)
    lam0, lam1 = spectra.eigenvalues(M0), spectra.eigenvalues(M1)
    mu0, mu1 = spectra.brown_measure(M0), spectra.eigenvalue_measure(M1, n, eigs=lam1)
    summary = {
        "n": n,
        "eps": eps,
        "zero_atom_unperturbed": _fraction(spectra.zero_atom_rank(M0, n)),
        "zero_atom_perturbed": _fraction(spectra.zero_atom_rank(M1, n)),
        "predicted_radius": eps ** (1 / n),
        "moduli_perturbed": [float(x) for x in np.sort(np.abs(lam1))],
        "moduli_unperturbed": [float(x) for x in np.sort(np.abs(lam0))],
    }
    if out is not None:
        o = Path(out)
        _write_measure(o, f"jordan{n}", mu0, [f for f in formats if f != "svg"], "")
        _write_measure(o, f"jordan{n}_eps", mu1, [f for f in formats if f != "svg"], "")
        write_atomic(o / f"discontinuity_n{n}.json", json.dumps(summary, indent=2))
        if "svg" in formats:
            svg = scatter_svg(
                [(mu0, PALETTE[0], f"M_{n}"), (mu1, PALETTE[1], f"M_{n} + {eps:g} corner")],
                radius=max(1.1, 1.1 * summary["predicted_radius"]),
                title=f"n = {n}, eps = {eps:g}",
            )
            write_atomic(o / f"discontinuity_n{n}.svg", svg)
    echo(
        f"M_{n}: zero atom {summary['zero_atom_unperturbed']['exact']}; perturbed: zero atom "
        f"{summary['zero_atom_perturbed']['exact']}, |lambda| = {summary['moduli_perturbed'][-1]:.6g}"
        f" (predicted {summary['predicted_radius']:.6g})"
    )
    return summary


def cmd_verify(suite: str, echo=print) -> int:
    results = verification.run_suite(suite, echo)
    failed = [r.number for r in results if not r.passed]
    echo(f"{len(results) - len(failed)}/{len(results)} criteria passed" + (f"; failed: {failed}" if failed else ""))
    return EXIT_VERIFY if failed else EXIT_OK


# ---------------------------------------------------------------------------
# argument handling


def _job_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="JSON job file; flags override its fields")
    p.add_argument("--group", help="Z, Z^2, Z^2xZ/3, Z/4 or H3")
    expr = p.add_mutually_exclusive_group()
    expr.add_argument("--element", help="group ring element, e.g. 'a - b'")
    expr.add_argument("--matrix", help="matrix, e.g. '[[g^2 + 3g, 4], [g^3, -g^4 + g]]'")
    p.add_argument("--chain", help="comma separated levels: 5,25,125 or 4x4,8x8 or 3^1,3^2")
    p.add_argument("--sampler", help="grid:M, roots:m or mc:N")
    p.add_argument("--degree", type=int, help="number of holomorphic moments")
    p.add_argument("--tol", type=float, dest="tau", help="zero threshold for eigenvalue moduli")
    p.add_argument("--tol-svd", type=float, dest="tau_svd", help="relative singular value threshold")
    p.add_argument("--power", type=int, help="power K used for rank(A^K)")
    p.add_argument("--cells", type=int, help="histogram cells per side")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", dest="formats", help="comma separated subset of csv,json,svg")
    return p


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--threads", type=int, help="cap BLAS/LAPACK worker threads")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quotient-brown", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    job, common = _job_options(), _common()
    sub.add_parser("quotient-spectrum", parents=[job, common], help="eigenvalue measures along a quotient chain")
    sub.add_parser("limit-measure", parents=[job, common], help="torus-sampled limit measure (abelian groups)")
    t = sub.add_parser("heisenberg-table", parents=[common], help="exact zero-atom table for a - b")
    t.add_argument("--p", type=int, default=3)
    t.add_argument("--levels", default="1..4")
    t.add_argument("--out")
    d = sub.add_parser("demo-discontinuity", parents=[common], help="nilpotent Jordan block versus its perturbation")
    d.add_argument("--n", type=int, default=4)
    d.add_argument("--eps", type=float, default=1e-8)
    d.add_argument("--out")
    d.add_argument("--format", dest="formats", default="csv,json,svg")
    v = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    v.add_argument("--suite", choices=("smoke", "full"), default="smoke")
    return parser


def config_from_args(args: argparse.Namespace) -> JobConfig:
    base = JobConfig.load(args.config) if args.config else JobConfig()
    data = base.to_dict()
    for key in ("group", "sampler", "degree", "tau", "tau_svd", "power", "cells", "seed", "out"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    if args.element is not None:
        data["matrix"] = args.element
    if args.matrix is not None:
        data["matrix"] = args.matrix
    if args.chain is not None:
        data["chain"] = split_list(args.chain)
    if args.formats is not None:
        data["formats"] = split_list(args.formats)
    return JobConfig.from_dict(data)


def _dispatch(args) -> int:
    if args.command == "quotient-spectrum":
        cmd_quotient_spectrum(config_from_args(args))
    elif args.command == "limit-measure":
        cmd_limit_measure(config_from_args(args))
    elif args.command == "heisenberg-table":
        cmd_heisenberg_table(args.p, _parse_levels(args.levels), args.out)
    elif args.command == "demo-discontinuity":
        formats = split_list(args.formats)
        cmd_demo_discontinuity(args.n, args.eps, args.out, formats)
    elif args.command == "verify":
        return cmd_verify(args.suite)
    return EXIT_OK


def error_payload(exc: BaseException) -> tuple[int, dict]:
    code = EXIT_NUMERIC if isinstance(exc, NUMERICAL_ERRORS) else EXIT_CONFIG
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    if hasattr(exc, "position"):
        payload["position"] = exc.position
        payload["expected"] = sorted(exc.expected)
    return code, payload


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is not None and args.threads < 1:
        print(json.dumps({"error": "ConfigError", "message": "--threads must be >= 1", "exit_code": 2}), file=sys.stderr)
        return EXIT_CONFIG
    try:
        with threadpool_limits(limits=args.threads):
            return _dispatch(args)
    except (QuotientBrownError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        if isinstance(exc, np.linalg.LinAlgError):
            exc = NoConvergence(str(exc))
        code, payload = error_payload(exc)
        print(json.dumps(payload), file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
