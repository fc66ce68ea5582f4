"""Abelian groups: symbols on the torus, the characteristic polynomial
product law, torus-sampled limit measures and convergence diagnostics.

For ``G = Z^k x (torsion)`` every character of a finite quotient is a tuple
of roots of unity ``zeta``, and the regular representation of ``A`` is
block diagonalised by characters into the ``n x n`` matrices ``A(zeta)``.
The spectrum of ``A_m`` is therefore the union of the spectra of
``A(zeta)`` over the characters of ``G_m``, and the limit measure is the
average of the root measures of ``A(zeta)`` over the whole torus.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import MismatchedGroup, OffTorus, TooLarge, UnsupportedRank
from .group_ring import GroupRingMatrix
from .groups import AbelianGroupSpec, Family, QuotientSpec
from .quotient_rep import DEFAULT_DENSE_CAP, regular_rep_matrix
from .spectra import (
    DEFAULT_ZERO_TOL,
    AtomicMeasure,
    eigenvalue_measure,
    eigenvalues,
    holomorphic_moments,
    zero_atom_numeric,
)

TORUS_TOL = 1e-12


def _abelian_group(A: GroupRingMatrix) -> AbelianGroupSpec:
    if not isinstance(A.group, AbelianGroupSpec):
        raise MismatchedGroup(f"expected a matrix over an abelian group, got {A.group}")
    return A.group


def _terms(A: GroupRingMatrix):
    """``(row, col, coeff, exponents)`` for every nonzero coefficient."""
    out = []
    for u, row in enumerate(A.entries):
        for v, e in enumerate(row):
            for g, c in e.items():
                out.append((u, v, c, np.array(g.coords, dtype=np.int64)))
    return out


def _check_points(group: AbelianGroupSpec, Z: np.ndarray):
    if Z.shape[-1] != group.ncoords:
        raise ValueError(f"expected {group.ncoords} torus coordinates, got {Z.shape[-1]}")
    dev = np.abs(np.abs(Z) - 1)
    if dev.size and dev.max() > TORUS_TOL:
        raise OffTorus(f"point off the unit torus by {dev.max():.3e}")
    for j, t in enumerate(group.torsion_orders):
        col = Z[..., group.rank + j]
        if np.any(np.abs(col**t - 1) > 1e-9):
            raise OffTorus(f"torsion coordinate {j} is not a {t}-th root of unity")


def evaluate_many(A: GroupRingMatrix, points) -> np.ndarray:
    """Stack of ``A(zeta)`` for each row ``zeta`` of ``points``; shape ``(S, n, n)``."""
    group = _abelian_group(A)
    Z = np.atleast_2d(np.asarray(points, dtype=complex))
    _check_points(group, Z)
    out = np.zeros((Z.shape[0], A.n, A.n), dtype=complex)
    for u, v, c, exps in _terms(A):
        mono = np.prod(Z**exps, axis=1) if exps.size else np.ones(Z.shape[0])
        out[:, u, v] += c * mono
    return out


def evaluate_at(A: GroupRingMatrix, zeta) -> np.ndarray:
    """``A(zeta)``: substitute ``zeta_j`` for the j-th generator."""
    zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
    return evaluate_many(A, zeta[None, :])[0]


def _root_angles(m: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(m) / m)


def characters(q: QuotientSpec) -> np.ndarray:
    """All characters of ``q.target`` as rows of roots of unity, lexicographic."""
    if q.family is not Family.ABELIAN:
        raise MismatchedGroup("characters are only available for abelian quotients")
    axes = [_root_angles(m) for m in q.moduli] + [_root_angles(t) for t in q.base.torsion_orders]
    return np.array(list(itertools.product(*axes)), dtype=complex).reshape(-1, len(axes))


def spectrum_by_factorization(A: GroupRingMatrix, q: QuotientSpec) -> np.ndarray:
    """Union over characters ``zeta`` of ``G/N`` of the eigenvalues of ``A(zeta)``."""
    if A.group != q.base:
        raise MismatchedGroup(f"matrix over {A.group}, quotient of {q.base}")
    blocks = evaluate_many(A, characters(q))
    return np.linalg.eigvals(blocks).reshape(-1)


class SamplerMode(enum.Enum):
    ROOTS_OF_UNITY = "roots"
    UNIFORM_GRID = "grid"
    MONTE_CARLO = "mc"


@dataclass(frozen=True)
class TorusSampler:
    """How to sample the free coordinates of the torus.

    ``ROOTS_OF_UNITY`` uses the characters of ``Z/orders[j]`` on each free
    coordinate (reproducing a finite quotient exactly), ``UNIFORM_GRID``
    the midpoint rule with ``points`` nodes per coordinate, and
    ``MONTE_CARLO`` ``count`` uniform draws from a seeded generator.
    Torsion coordinates are always enumerated in full.
    """

    k: int
    mode: SamplerMode
    orders: tuple[int, ...] = ()
    points: int = 0
    count: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.mode is SamplerMode.ROOTS_OF_UNITY and (len(self.orders) != self.k or min(self.orders, default=1) < 1):
            raise ValueError("roots-of-unity sampler needs one positive order per free coordinate")
        if self.mode is SamplerMode.UNIFORM_GRID and self.points < 1:
            raise ValueError("grid sampler needs at least one point per coordinate")
        if self.mode is SamplerMode.MONTE_CARLO and self.count < 1:
            raise ValueError("Monte Carlo sampler needs at least one sample")

    @classmethod
    def roots(cls, orders) -> TorusSampler:
        orders = tuple(int(m) for m in np.atleast_1d(orders))
        return cls(len(orders), SamplerMode.ROOTS_OF_UNITY, orders=orders)

    @classmethod
    def grid(cls, points: int, k: int = 1) -> TorusSampler:
        return cls(k, SamplerMode.UNIFORM_GRID, points=int(points))

    @classmethod
    def monte_carlo(cls, count: int, seed: int = 0, k: int = 1) -> TorusSampler:
        return cls(k, SamplerMode.MONTE_CARLO, count=int(count), seed=int(seed))

    @classmethod
    def parse(cls, text: str, k: int = 1, seed: int = 0) -> TorusSampler:
        """``grid:2048``, ``roots:5`` (or ``roots:5x7``), ``mc:1000``."""
        kind, _, arg = text.partition(":")
        if kind == "grid":
            return cls.grid(int(arg), k)
        if kind == "roots":
            return cls.roots([int(a) for a in arg.split("x")])
        if kind == "mc":
            return cls.monte_carlo(int(arg), seed, k)
        raise ValueError(f"unknown sampler {text!r}; use grid:M, roots:m or mc:N")

    def free_points(self) -> np.ndarray:
        if self.k == 0:
            return np.ones((1, 0), dtype=complex)
        if self.mode is SamplerMode.ROOTS_OF_UNITY:
            axes = [_root_angles(m) for m in self.orders]
            return np.array(list(itertools.product(*axes)), dtype=complex)
        if self.mode is SamplerMode.UNIFORM_GRID:
            axis = np.exp(2j * np.pi * (np.arange(self.points) + 0.5) / self.points)
            return np.array(list(itertools.product(axis, repeat=self.k)), dtype=complex)
        rng = np.random.default_rng(self.seed)
        return np.exp(2j * np.pi * rng.random((self.count, self.k)))

    def sample(self, group: AbelianGroupSpec) -> np.ndarray:
        if group.rank != self.k:
            raise ValueError(f"sampler has {self.k} free coordinates, group has {group.rank}")
        free = self.free_points()
        if not group.torsion_orders:
            return free
        tors = np.array(list(itertools.product(*[_root_angles(t) for t in group.torsion_orders])), dtype=complex)
        rows = [np.concatenate([f, t]) for f in free for t in tors]
        return np.array(rows, dtype=complex)


def limit_measure(A: GroupRingMatrix, sampler: TorusSampler) -> AtomicMeasure:
    """Equal-weight average over sample points of the eigenvalues of ``A(zeta)``.

    Total mass is ``n``.  With ``TorusSampler.roots(m)`` this is exactly the
    eigenvalue measure of the regular representation on ``G / mG``.
    """
    group = _abelian_group(A)
    pts = sampler.sample(group)
    lam = np.linalg.eigvals(evaluate_many(A, pts)).reshape(-1)
    S = pts.shape[0]
    return AtomicMeasure(lam, np.full(lam.shape, 1.0 / S), A.n)


def moment_samples(A: GroupRingMatrix, sampler: TorusSampler, degree: int) -> np.ndarray:
    """``trace(A(zeta)^j)`` for ``j = 1..degree`` at each sample; shape ``(S, degree)``."""
    group = _abelian_group(A)
    blocks = evaluate_many(A, sampler.sample(group))
    out = np.empty((blocks.shape[0], degree), dtype=complex)
    P = np.broadcast_to(np.eye(A.n), blocks.shape).copy()
    for j in range(degree):
        P = P @ blocks
        out[:, j] = np.trace(P, axis1=1, axis2=2)
    return out


def group_ring_moments(A: GroupRingMatrix, degree: int) -> np.ndarray:
    """``sum_u Tr_G((A^j)_{uu})`` for ``j = 1..degree``, computed in the group ring."""
    out = []
    P = GroupRingMatrix.identity(A.group, A.n)
    for _ in range(degree):
        P = P @ A
        out.append(P.trace())
    return np.array(out, dtype=complex)


# ---------------------------------------------------------------------------
# symbolic characteristic polynomial (one free generator)


class _Laurent2:
    """Polynomial in ``y`` with Laurent polynomial coefficients in ``t``,
    stored as ``{(t_exp, y_exp): coeff}``."""

    __slots__ = ("c",)

    def __init__(self, c=None):
        self.c = {k: v for k, v in (c or {}).items() if v != 0}

    def __add__(self, other):
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, 0) + v
        return _Laurent2(out)

    def __neg__(self):
        return _Laurent2({k: -v for k, v in self.c.items()})

    def __mul__(self, other):
        out: dict = {}
        for (a, b), v in self.c.items():
            for (c, d), w in other.c.items():
                key = (a + c, b + d)
                out[key] = out.get(key, 0) + v * w
        return _Laurent2(out)


@dataclass(frozen=True)
class CharPoly:
    """``p(t, y) = det(y Id - A)`` for ``A`` over ``C[t, t^-1]``."""

    n: int
    coefficients: dict = field(hash=False)

    def y_coefficients(self, zeta: complex) -> np.ndarray:
        """Coefficients of ``p(zeta, y)`` in ``y``, highest degree first."""
        out = np.zeros(self.n + 1, dtype=complex)
        for (a, b), v in self.coefficients.items():
            out[self.n - b] += v * zeta**a
        return out

    def __call__(self, zeta: complex, y: complex) -> complex:
        return complex(np.polyval(self.y_coefficients(zeta), y))

    def __str__(self):
        def coeff_text(v):
            v = complex(v)
            if v.imag == 0 and v.real.is_integer():
                return str(int(v.real))
            return f"({v.real:g}{v.imag:+g}j)"

        parts = []
        for (a, b), v in sorted(self.coefficients.items(), key=lambda kv: (-kv[0][1], -kv[0][0])):
            mono = "*".join(x for x in (f"t^{a}" if a else "", f"y^{b}" if b else "") if x)
            parts.append(coeff_text(v) + ("*" + mono if mono else ""))
        return " + ".join(parts) if parts else "0"


def symbolic_char_poly(A: GroupRingMatrix, max_n: int = 8) -> CharPoly:
    """Exact Laurent expansion of ``det(y Id - A)`` by cofactor recursion.

    Only for ``G = Z`` and ``n <= max_n``; everything else goes through
    evaluation at torus points.
    """
    group = _abelian_group(A)
    if group.rank != 1 or group.torsion_orders:
        raise UnsupportedRank(f"symbolic path needs G = Z, got {group}")
    n = A.n
    if n > max_n:
        raise TooLarge(f"n = {n} exceeds the cofactor budget {max_n}")
    entries = []
    for u in range(n):
        row = []
        for v in range(n):
            c = {(g.free_exponents[0], 0): -coeff for g, coeff in A.entries[u][v].items()}
            if u == v:
                c[(0, 1)] = c.get((0, 1), 0) + 1
            row.append(_Laurent2(c))
        entries.append(row)

    memo: dict[int, _Laurent2] = {}

    def minor(mask: int) -> _Laurent2:
        # determinant of rows [popcount(mask)..n) restricted to columns not in mask
        if mask in memo:
            return memo[mask]
        row = bin(mask).count("1")
        if row == n:
            return _Laurent2({(0, 0): 1})
        total = _Laurent2()
        sign = 1
        for col in range(n):
            if mask >> col & 1:
                continue
            term = entries[row][col] * minor(mask | 1 << col)
            total = total + (term if sign > 0 else -term)
            sign = -sign
        memo[mask] = total
        return total

    det = minor(0)
    coeffs = {k: (int(v.real) if v.imag == 0 and float(v.real).is_integer() else v) for k, v in det.c.items()}
    return CharPoly(n, coeffs)


# ---------------------------------------------------------------------------
# convergence diagnostics


def coefficient_bound(A: GroupRingMatrix) -> float:
    """Largest row sum of coefficient moduli; bounds ``||A(zeta)||_inf`` on the torus."""
    return max(A.coefficient_l1_rows())


def box_radius(A: GroupRingMatrix, padding: float = 0.1) -> float:
    return (1.0 + coefficient_bound(A)) * (1.0 + padding)


@dataclass(frozen=True)
class HistogramGrid:
    """``cells x cells`` grid on ``[-radius, radius]^2``."""

    cells: int = 128
    radius: float = 1.0

    @property
    def diagonal(self) -> float:
        return 2 * self.radius * math.sqrt(2)

    @property
    def bandwidth(self) -> float:
        return 2 * self.diagonal / self.cells

    def centers(self) -> np.ndarray:
        edges = np.linspace(-self.radius, self.radius, self.cells + 1)
        return 0.5 * (edges[:-1] + edges[1:])


def smoothed_histogram(mu: AtomicMeasure, grid: HistogramGrid) -> np.ndarray:
    """Gaussian-smoothed density of ``mu`` at the grid cell centres, summing to 1."""
    c = grid.centers()
    h = grid.bandwidth
    ex = np.exp(-((c[:, None] - mu.locations.real[None, :]) ** 2) / (2 * h * h))
    ey = np.exp(-((c[:, None] - mu.locations.imag[None, :]) ** 2) / (2 * h * h))
    H = (ex * mu.weights[None, :]) @ ey.T
    total = H.sum()
    return H / total if total > 0 else H


def histogram_distance(mu: AtomicMeasure, nu: AtomicMeasure, grid: HistogramGrid) -> float:
    """L1 distance between the smoothed, normalised histograms."""
    return float(np.abs(smoothed_histogram(mu, grid) - smoothed_histogram(nu, grid)).sum())


def quotient_spectrum(A: GroupRingMatrix, q: QuotientSpec, route: str = "auto") -> np.ndarray:
    """Eigenvalues of ``A_q``, from the dense regular representation or by
    factorisation over characters (``route`` = ``regular`` / ``factorization`` / ``auto``)."""
    if route == "auto":
        route = "regular" if A.n * q.order <= DEFAULT_DENSE_CAP else "factorization"
    if route == "regular":
        return eigenvalues(regular_rep_matrix(A, q))
    if route == "factorization":
        return spectrum_by_factorization(A, q)
    raise ValueError(f"unknown route {route!r}")


def quotient_measure(A: GroupRingMatrix, q: QuotientSpec, route: str = "auto") -> AtomicMeasure:
    lam = quotient_spectrum(A, q, route)
    return AtomicMeasure(lam, np.full(lam.shape, 1.0 / q.order), A.n)


@dataclass
class LevelReport:
    quotient: str
    order: int
    moments: np.ndarray
    moment_error: float
    histogram_distance: float
    zero_atom: Fraction

    def to_dict(self) -> dict:
        return {
            "quotient": self.quotient,
            "order": self.order,
            "moments": [[float(z.real), float(z.imag)] for z in self.moments],
            "moment_error": self.moment_error,
            "histogram_distance": self.histogram_distance,
            "zero_atom": float(self.zero_atom),
            "zero_atom_exact": f"{self.zero_atom.numerator}/{self.zero_atom.denominator}",
        }


@dataclass
class ConvergenceReport:
    levels: list[LevelReport]
    limit_moments: np.ndarray
    grid: HistogramGrid
    sampler: TorusSampler

    @property
    def distances(self) -> list[float]:
        return [lv.histogram_distance for lv in self.levels]

    @property
    def distances_decreasing(self) -> bool:
        d = self.distances
        return all(b <= a for a, b in zip(d, d[1:]))

    def to_dict(self) -> dict:
        return {
            "sampler": {"mode": self.sampler.mode.value, "k": self.sampler.k, "orders": list(self.sampler.orders),
                        "points": self.sampler.points, "count": self.sampler.count, "seed": self.sampler.seed},
            "grid": {"cells": self.grid.cells, "radius": self.grid.radius, "bandwidth": self.grid.bandwidth},
            "limit_moments": [[float(z.real), float(z.imag)] for z in self.limit_moments],
            "levels": [lv.to_dict() for lv in self.levels],
            "distances_decreasing": self.distances_decreasing,
        }


def weak_convergence_report(
    A: GroupRingMatrix,
    chain,
    sampler: TorusSampler,
    degree: int = 4,
    cells: int = 128,
    tau: float = DEFAULT_ZERO_TOL,
    route: str = "auto",
    limit: AtomicMeasure | None = None,
) -> ConvergenceReport:
    """Compare each ``mu_i`` along ``chain`` with the sampled limit measure.

    The histogram distance is a smoothed proxy for convergence on Borel
    sets; the trend is reported, not enforced.
    """
    _abelian_group(A)
    chain = list(chain)
    if any(b.order <= a.order for a, b in zip(chain, chain[1:])):
        raise ValueError("quotient chain must have increasing order")
    if limit is None:
        limit = limit_measure(A, sampler)
    grid = HistogramGrid(cells, box_radius(A))
    limit_moments = holomorphic_moments(limit, degree)
    levels = []
    for q in chain:
        lam = quotient_spectrum(A, q, route)
        mu = AtomicMeasure(lam, np.full(lam.shape, 1.0 / q.order), A.n)
        mom = holomorphic_moments(mu, degree)
        levels.append(
            LevelReport(
                quotient=q.describe(),
                order=q.order,
                moments=mom,
                moment_error=float(np.max(np.abs(mom - limit_moments))),
                histogram_distance=histogram_distance(mu, limit, grid),
                zero_atom=zero_atom_numeric(None, q.order, tau, eigs=lam),
            )
        )
    return ConvergenceReport(levels, limit_moments, grid, sampler)


def regular_measure(A: GroupRingMatrix, q: QuotientSpec) -> AtomicMeasure:
    """``mu_i`` from the dense regular representation."""
    return eigenvalue_measure(regular_rep_matrix(A, q), q.order)
