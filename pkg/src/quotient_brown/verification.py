"""Acceptance checks, shared by ``quotient-brown verify`` and the test suite.

Each ``check_*`` function returns a ``CheckResult``; nothing here raises on
a failed comparison.  ``run_suite`` times each check and collects results.
"""

from __future__ import annotations

import functools
import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.stats import unitary_group

from . import abelian, heisenberg, spectra
from .group_ring import GroupRingElement, GroupRingMatrix, parse_group, parse_matrix, star_moment
from .groups import QuotientSpec
from .quotient_rep import (
    apply_irrep,
    irrep_census,
    irrep_parameters,
    nilpotent_jordan,
    regular_rep_matrix,
    shift_matrix,
)

INTRO_MATRIX = "[[g^2 + 3g, 4], [g^3, -g^4 + g]]"
INTRO_CHAIN = (5, 25, 125)


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number}. {self.name} ({self.seconds:.2f}s): {self.detail}"


def intro_matrix() -> GroupRingMatrix:
    return parse_matrix(INTRO_MATRIX, parse_group("Z"))


def heisenberg_a_minus_b() -> GroupRingElement:
    H = parse_group("H3")
    return GroupRingElement.basis(H.a) - GroupRingElement.basis(H.b)


@functools.lru_cache(maxsize=4)
def _heisenberg_regular(m: int) -> np.ndarray:
    """Regular representation of ``a - b`` on ``H3(Z/3^m Z)`` (read-only)."""
    M = regular_rep_matrix(heisenberg_a_minus_b(), QuotientSpec.heisenberg(3, m))
    M.flags.writeable = False
    return M


def check_exact_census() -> CheckResult:
    expected = {(3, 1): Fraction(7, 9), (3, 2): Fraction(61, 81), (5, 1): Fraction(21, 25)}
    got = {key: heisenberg.structural_zero_count(*key).mass for key in expected}
    limits = {p: heisenberg.structural_zero_count(p, 1).limit for p in (3, 5)}
    ok = got == expected and limits == {3: Fraction(3, 4), 5: Fraction(5, 6)}
    detail = ", ".join(f"({p},{m})={v}" for (p, m), v in got.items())
    return CheckResult(1, "Heisenberg zero atom, exact", ok, f"{detail}; limits {limits[3]}, {limits[5]}")


def check_numeric_census(levels=(1, 2), tau: float = 1e-3, tau_svd: float = 1e-10) -> CheckResult:
    parts, ok, data = [], True, {}
    for m in levels:
        q = QuotientSpec.heisenberg(3, m)
        M = _heisenberg_regular(m)
        K = 3**m
        expected = heisenberg.structural_zero_count(3, m).mass
        rank_atom = spectra.zero_atom_rank(M, q.order, power=K, tau_svd=tau_svd)
        ok &= rank_atom == expected
        parts.append(f"m={m}: rank {rank_atom}")
        data[m] = rank_atom
        if m == 1:
            numeric_atom = spectra.zero_atom_numeric(M, q.order, tau)
            ok &= numeric_atom == expected
            parts.append(f"numeric {numeric_atom}")
            data["numeric"] = numeric_atom
    return CheckResult(2, "Heisenberg zero atom, numeric", ok, "; ".join(parts), data=data)


def check_luck(levels=(1, 2), tau: float = 1e-3) -> CheckResult:
    parts, ok = [], True
    for m in levels:
        M = _heisenberg_regular(m)
        product, passed = spectra.luck_product_check(M, tau, power=3**m)
        ok &= passed and product >= 0.999
        parts.append(f"m={m}: {product:.6g}")
    return CheckResult(9, "Nonzero eigenvalue product >= 1", ok, "; ".join(parts))


def check_irrep_decomposition(p: int = 3, m: int = 1, tol: float = 1e-8) -> CheckResult:
    u = heisenberg_a_minus_b()
    n = p**m
    q = QuotientSpec.heisenberg(p, m)
    M = regular_rep_matrix(u, q)
    K = n
    regular = spectra.eigenvalues_deflated(M, power=K)
    union, dims = [], {}
    for spec in irrep_parameters(n):
        block = apply_irrep(u, spec)
        lam = spectra.eigenvalues_deflated(block, power=K) if block.shape[0] > 1 else np.diag(block)
        union.extend(np.tile(lam, spec.d2))
        dims[spec.d2] = dims.get(spec.d2, 0) + 1
    census = {e.dimension: e.count for e in irrep_census(p, m)}
    dist = spectra.match_spectra(regular, np.array(union))
    ok = dist <= tol and dims == census
    return CheckResult(3, "Spectral decomposition", ok, f"max matched distance {dist:.2e}; irreps by dim {dims}")


def _random_integer_matrix(rng, G, n: int) -> GroupRingMatrix:
    g = G.generator(0)
    entries = []
    for _ in range(n):
        row = []
        for _ in range(n):
            terms = {}
            for _ in range(rng.integers(0, 4)):
                h = g ** int(rng.integers(-3, 4))
                terms[h] = terms.get(h, 0) + int(rng.integers(-3, 4))
            row.append(GroupRingElement(G, terms))
        entries.append(row)
    return GroupRingMatrix(G, entries)


def check_factorization(trials: int = 20, seed: int = 20240601, tol: float = 1e-8,
                        cluster: float = 1e-6) -> CheckResult:
    """Both routes are compared after merging eigenvalues closer than
    ``cluster * max(1, ||A_q||)``: integer blocks at real characters can be
    defective, and then only the cluster mean is determined to ``tol``."""
    rng = np.random.default_rng(seed)
    G = parse_group("Z")
    worst, worst_raw, ok = 0.0, 0.0, True
    for _ in range(trials):
        n = int(rng.integers(1, 4))
        A = _random_integer_matrix(rng, G, n)
        q = QuotientSpec.abelian(G, [int(rng.integers(2, 64 // n + 1))])
        M = regular_rep_matrix(A, q)
        x = abelian.spectrum_by_factorization(A, q)
        y = spectra.eigenvalues(M)
        radius = cluster * max(1.0, np.linalg.norm(M, 2))
        d = spectra.match_spectra(spectra.merge_clusters(x, radius), spectra.merge_clusters(y, radius))
        worst = max(worst, d)
        worst_raw = max(worst_raw, spectra.match_spectra(x, y))
        ok &= d <= tol
    return CheckResult(
        4, "Abelian factorization law", ok,
        f"{trials} matrices, worst matched distance {worst:.2e} (before cluster merging {worst_raw:.2e})",
    )


def check_intro_figures(sampler_points: int = 2048, cells: int = 128) -> CheckResult:
    A = intro_matrix()
    G = A.group
    chain = [QuotientSpec.abelian(G, [m]) for m in INTRO_CHAIN]
    report = abelian.weak_convergence_report(A, chain, abelian.TorusSampler.grid(sampler_points), cells=cells)
    d = report.distances
    ok = d[-1] * 2 <= d[0]
    return CheckResult(
        5, "Intro figure convergence", ok, "histogram distances " + ", ".join(f"{x:.3g}" for x in d),
        data={"distances": d},
    )


def check_star_moments(levels=(7, 8, 12, 16, 32), max_length: int = 6) -> CheckResult:
    """``(1/m) Tr`` of every word in ``T, T^*`` against the identity coefficient."""
    G = parse_group("Z")
    g = GroupRingElement.basis(G.generator(0))
    count, ok = 0, True
    for m in levels:
        T = shift_matrix(m).astype(np.int64)
        mats = {"1": T, "*": T.T}
        for length in range(1, max_length + 1):
            for word in itertools.product("1*", repeat=length):
                P = np.eye(m, dtype=np.int64)
                for letter in word:
                    P = P @ mats[letter]
                lhs = Fraction(int(np.trace(P)), m)
                rhs = star_moment(g, "".join(word))
                ok &= lhs == rhs
                count += 1
    return CheckResult(6, "Star-moment exactness", ok, f"{count} (level, word) pairs compared")


def check_discontinuity(n: int = 4, eps: float = 1e-8) -> CheckResult:
    M = nilpotent_jordan(n)
    atom = spectra.zero_atom_numeric(M, n, tau=1e-12)
    lam = spectra.eigenvalues(nilpotent_jordan(n, eps))
    radius = eps ** (1 / n)
    dev = float(np.max(np.abs(np.abs(lam) - radius)))
    ok = atom == 1 and lam.size == n and dev <= 1e-6
    return CheckResult(7, "Discontinuity demo", ok, f"zero atom {atom}; |lambda| deviation from {radius:.3g} is {dev:.2e}")


def check_eigensolver(trials: int = 50, max_dim: int = 512, seed: int = 7, tol: float = 1e-8) -> CheckResult:
    """Planted spectra ``Q diag(lam) Q^H`` with Haar unitary ``Q``."""
    rng = np.random.default_rng(seed)
    worst_rel, worst_trace, ok = 0.0, 0.0, True
    for _ in range(trials):
        dim = int(rng.integers(2, max_dim + 1))
        lam = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        Q = unitary_group.rvs(dim, random_state=rng)
        M = (Q * lam) @ Q.conj().T
        norm = np.linalg.norm(M, 2)
        got = spectra.eigenvalues(M)
        rel = spectra.match_spectra(got, lam) / norm
        trace = abs(got.sum() - np.trace(M)) / (dim * norm)
        worst_rel, worst_trace = max(worst_rel, rel), max(worst_trace, trace)
        ok &= rel <= tol and trace <= tol
    return CheckResult(
        8, "Eigensolver contract", ok,
        f"{trials} matrices, worst error {worst_rel:.2e}*||M||, worst trace gap {worst_trace:.2e}*dim*||M||",
    )


SMOKE = (
    check_exact_census,
    lambda: check_numeric_census(levels=(1,)),
    check_irrep_decomposition,
    lambda: check_factorization(trials=5),
    lambda: check_intro_figures(sampler_points=512),
    lambda: check_star_moments(levels=(7, 8)),
    check_discontinuity,
    lambda: check_eigensolver(trials=10, max_dim=128),
    lambda: check_luck(levels=(1,)),
)

FULL = (
    check_exact_census,
    check_numeric_census,
    check_irrep_decomposition,
    check_factorization,
    check_intro_figures,
    check_star_moments,
    check_discontinuity,
    check_eigensolver,
    check_luck,
)


def timed(check) -> CheckResult:
    t0 = time.perf_counter()
    res = check()
    res.seconds = time.perf_counter() - t0
    return res


def run_suite(suite: str = "smoke", echo=None) -> list[CheckResult]:
    checks = {"smoke": SMOKE, "full": FULL}.get(suite)
    if checks is None:
        raise ValueError(f"unknown suite {suite!r}; choose smoke or full")
    results = []
    for check in checks:
        res = timed(check)
        results.append(res)
        if echo is not None:
            echo(res.line())
    return results
