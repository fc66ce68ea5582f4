"""Dense spectral kernel: eigenvalues, rank, eigenvalue measures, moments,
Fuglede-Kadison determinants and zero-atom counting.

Counting zero eigenvalues from a floating point eigensolve is fragile: a
nilpotent Jordan block of size ``d`` turns into a ring of eigenvalues of
radius about ``ulp**(1/d)``.  ``zero_atom_rank`` and
``eigenvalues_deflated`` use ``rank(M^K)`` instead, which is stable
whenever the nonzero part of the spectrum is separated from zero.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.csgraph
from scipy.optimize import linear_sum_assignment

from .errors import DimensionTooLarge, GapWarning, NoConvergence, NonSquare, NotIntegral
from .quotient_rep import DEFAULT_DENSE_CAP

logger = logging.getLogger(__name__)

DEFAULT_ZERO_TOL = 1e-3
DEFAULT_SVD_TOL = 1e-10
GAP_RATIO = 10.0


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    """Finite weighted point measure on the complex plane."""

    locations: np.ndarray
    weights: np.ndarray
    total_mass: float

    def __init__(self, locations, weights, total_mass: float | None = None):
        loc = np.asarray(locations, dtype=complex).reshape(-1)
        w = np.broadcast_to(np.asarray(weights, dtype=float), loc.shape).copy()
        if np.any(w <= 0):
            raise ValueError("atom weights must be positive")
        if not np.all(np.isfinite(loc)):
            raise ValueError("atom locations must be finite")
        s = float(w.sum())
        if total_mass is None:
            total_mass = s
        elif not math.isclose(s, total_mass, rel_tol=1e-12, abs_tol=1e-300):
            raise ValueError(f"weights sum to {s}, declared total mass {total_mass}")
        loc.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "total_mass", float(total_mass))

    @classmethod
    def uniform(cls, points, weight: float) -> AtomicMeasure:
        points = np.asarray(points, dtype=complex).reshape(-1)
        return cls(points, np.full(points.shape, weight), points.size * weight)

    @classmethod
    def dirac(cls, z: complex = 0, mass: float = 1.0) -> AtomicMeasure:
        return cls([z], [mass], mass)

    def __len__(self):
        return self.locations.size

    def mass_in_disk(self, center: complex, radius: float) -> float:
        return float(self.weights[np.abs(self.locations - center) <= radius].sum())

    def normalized(self) -> AtomicMeasure:
        return AtomicMeasure(self.locations, self.weights / self.total_mass, 1.0)

    def moments(self, degree: int) -> np.ndarray:
        return holomorphic_moments(self, degree)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("re,im,weight\n")
        for z, w in zip(self.locations, self.weights):
            buf.write(f"{z.real:.17g},{z.imag:.17g},{w:.17g}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> AtomicMeasure:
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames != ["re", "im", "weight"]:
            raise ValueError(f"expected header re,im,weight, got {reader.fieldnames}")
        rows = list(reader)
        loc = [complex(float(r["re"]), float(r["im"])) for r in rows]
        return cls(loc, [float(r["weight"]) for r in rows])

    def to_dict(self) -> dict:
        return {
            "atoms": [
                {"re": float(z.real), "im": float(z.imag), "w": float(w)}
                for z, w in zip(self.locations, self.weights)
            ],
            "total_mass": self.total_mass,
        }

    @classmethod
    def from_dict(cls, data: dict) -> AtomicMeasure:
        atoms = data["atoms"]
        return cls(
            [complex(a["re"], a["im"]) for a in atoms],
            [a["w"] for a in atoms],
            data.get("total_mass"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _square(M) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {M.shape}")
    return M


def eigenvalues(M, max_dim: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """All eigenvalues of ``M`` with algebraic multiplicity (LAPACK ``geev``)."""
    M = _square(M)
    if M.shape[0] > max_dim:
        raise DimensionTooLarge(f"dimension {M.shape[0]} exceeds dense cap {max_dim}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    try:
        return scipy.linalg.eigvals(M, check_finite=False).astype(complex)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc


def matrix_rank(M, tau_svd: float = DEFAULT_SVD_TOL, noise_floor: float = 0.0) -> int:
    """Number of singular values above ``tau_svd * sigma_max``.

    Singular values at or below ``noise_floor`` never count, so a matrix
    that is zero up to rounding has rank 0.  Emits ``GapWarning`` when the
    singular values on either side of the threshold are within a factor
    ``GAP_RATIO`` of each other.
    """
    s = scipy.linalg.svdvals(np.asarray(M))
    if s.size == 0 or s[0] <= noise_floor:
        return 0
    thr = max(tau_svd * s[0], noise_floor)
    rank = int(np.count_nonzero(s > thr))
    if 0 < rank < s.size and s[rank] > 0 and s[rank - 1] / s[rank] < GAP_RATIO:
        warnings.warn(
            f"no clear singular value gap at the rank threshold: {s[rank - 1]:.3e} vs {s[rank]:.3e}",
            GapWarning,
            stacklevel=2,
        )
    return rank


def is_integral(M) -> bool:
    M = np.asarray(M)
    if np.iscomplexobj(M):
        if np.any(M.imag != 0):
            return False
        M = M.real
    return bool(np.all(M == np.round(M)))


def matrix_power_for_rank(M, power: int) -> tuple[np.ndarray, float]:
    """``M^power`` up to a positive scalar, with the rounding floor of the product.

    Integral matrices are powered exactly in float64 while every
    intermediate stays below 2**53 (the floor is then 0); otherwise ``M`` is
    scaled to unit infinity norm first so the power neither overflows nor
    underflows.
    """
    M = _square(M)
    dim = M.shape[0]
    norm = float(np.abs(M).sum(axis=1).max()) if M.size else 0.0
    if norm == 0:
        return np.zeros(M.shape), 0.0
    if is_integral(M) and power * math.log2(max(norm, 1.0)) < 53:
        base = np.real(M).astype(float)
        return np.linalg.matrix_power(base, power), 0.0
    P = np.linalg.matrix_power(M / norm, power)
    return P, 10.0 * power * dim * np.finfo(float).eps


def _rank_of_power(M, power, tau_svd) -> int:
    P, floor = matrix_power_for_rank(M, power)
    return matrix_rank(P, tau_svd, floor)


def kernel_and_power(M, power: int | None = None, tau_svd: float = DEFAULT_SVD_TOL) -> tuple[int, int]:
    """``(dim - rank(M^K), K)`` with ``K`` the first power at which the rank settles.

    The kernels of ``M^j`` grow strictly until the index of 0 and are
    constant afterwards, so ``rank(M^K)`` equals ``rank(M^power)`` for every
    ``power >= K``.  Stopping at the first plateau keeps large powers from
    pushing small nonzero eigenvalues under the rank threshold.  ``power``
    caps the search (default ``dim``).
    """
    dim = M.shape[0]
    if power is not None and power < 1:
        raise ValueError("power must be positive")
    cap = dim if power is None else power
    prev = _rank_of_power(M, 1, tau_svd)
    j = 1
    while prev and j < cap:
        cur = _rank_of_power(M, j + 1, tau_svd)
        if cur == prev:
            break
        prev, j = cur, j + 1
    return dim - prev, j


def generalized_kernel_dimension(M, power: int | None = None, tau_svd: float = DEFAULT_SVD_TOL) -> int:
    """Algebraic multiplicity of the eigenvalue 0, as ``dim - rank(M^power)``.

    ``power`` must be at least the size of the largest nilpotent Jordan
    block; it caps the search in ``kernel_and_power`` (default ``dim``).
    """
    return kernel_and_power(_square(M), power, tau_svd)[0]


def eigenvalues_deflated(
    M,
    power: int | None = None,
    tau_svd: float = DEFAULT_SVD_TOL,
    max_dim: int = DEFAULT_DENSE_CAP,
) -> np.ndarray:
    """Eigenvalues with the zero eigenvalue resolved by rank.

    The range of ``M^K`` is ``M``-invariant and carries exactly the nonzero
    eigenvalues, so those come from ``U^H M U`` with ``U`` an orthonormal
    basis of that range; the remaining ``dim - rank`` eigenvalues are
    returned as exact zeros, after the nonzero ones.
    """
    M = _square(M)
    dim = M.shape[0]
    if dim > max_dim:
        raise DimensionTooLarge(f"dimension {dim} exceeds dense cap {max_dim}")
    zeros, power = kernel_and_power(M, power, tau_svd)
    if zeros == 0:
        return eigenvalues(M, max_dim)
    rank = dim - zeros
    if rank == 0:
        return np.zeros(dim, dtype=complex)
    U = scipy.linalg.svd(matrix_power_for_rank(M, power)[0])[0][:, :rank]
    B = U.conj().T @ M @ U
    return np.concatenate([eigenvalues(B, max_dim), np.zeros(zeros, dtype=complex)])


def eigenvalue_measure(M, group_order: int, eigs=None) -> AtomicMeasure:
    """``(1/group_order) * sum_j delta_{lambda_j}``; total mass ``dim / group_order``."""
    M = _square(M)
    if group_order < 1:
        raise ValueError("group_order must be positive")
    lam = eigenvalues(M) if eigs is None else np.asarray(eigs, dtype=complex)
    return AtomicMeasure(lam, np.full(lam.shape, 1.0 / group_order), M.shape[0] / group_order)


def brown_measure(M) -> AtomicMeasure:
    """Brown measure of a finite matrix under the normalized trace: the
    eigenvalue measure with unit total mass."""
    M = _square(M)
    return eigenvalue_measure(M, M.shape[0])


def zero_atom_numeric(M, group_order: int, tau: float = DEFAULT_ZERO_TOL, eigs=None) -> Fraction:
    """Fraction of eigenvalues with modulus ``<= tau``, over ``group_order``."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    lam = eigenvalues(M) if eigs is None else np.asarray(eigs)
    return Fraction(int(np.count_nonzero(np.abs(lam) <= tau)), group_order)


def zero_atom_rank(M, group_order: int, power: int | None = None, tau_svd: float = DEFAULT_SVD_TOL) -> Fraction:
    """``(dim - rank(M^K)) / group_order``, ``K`` as in ``kernel_and_power``."""
    return Fraction(generalized_kernel_dimension(M, power, tau_svd), group_order)


def holomorphic_moments(mu: AtomicMeasure, degree: int) -> np.ndarray:
    """``[sum_j w_j z_j^n for n in 1..degree]``."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    powers = np.power.outer(mu.locations, np.arange(1, degree + 1))
    return mu.weights @ powers


def fk_determinant(M, eps: float = 0.0) -> float:
    """``exp(1/(2 dim) * sum_j log(sigma_j^2 + eps))`` over singular values."""
    M = _square(M)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    s = scipy.linalg.svdvals(M)
    if eps == 0 and np.any(s == 0):
        return 0.0
    return float(np.exp(np.sum(np.log(s**2 + eps)) / (2 * M.shape[0])))


def log_fk_determinant(M, eps: float = 0.0) -> float:
    d = fk_determinant(M, eps)
    return -math.inf if d == 0 else math.log(d)


def luck_product_check(M, tau: float = DEFAULT_ZERO_TOL, power: int | None = None, eigs=None):
    """Product of ``|lambda|`` over eigenvalues with ``|lambda| > tau``.

    For an integer matrix this is the modulus of the lowest nonvanishing
    coefficient of the characteristic polynomial, hence at least one.
    When ``power`` is given the zero eigenvalues are removed by rank first
    (see ``eigenvalues_deflated``), which keeps perturbed nilpotent blocks
    from leaking into the product.  Returns ``(product, passed)``.
    """
    M = _square(M)
    if not is_integral(M):
        raise NotIntegral("the product bound only holds for integer matrices")
    if eigs is None:
        eigs = eigenvalues_deflated(M, power) if power is not None else eigenvalues(M)
    return nonzero_product(eigs, tau, M.shape[0], scale=float(np.linalg.norm(M, 2)))


def nonzero_product(eigs, tau: float, dim: int, scale: float = 1.0) -> tuple[float, bool]:
    """``(prod |lambda| over |lambda| > tau, product >= 1 up to rounding)``.

    Each eigenvalue carries an error of about ``dim * eps * scale``, with
    ``scale`` the norm of the matrix, so small moduli dominate the slack.
    """
    mod = np.abs(np.asarray(eigs))
    mod = mod[mod > tau]
    log_product = float(np.sum(np.log(mod)))
    product = math.exp(log_product) if log_product < 700 else math.inf
    slack = 10 * dim * np.finfo(float).eps * max(1.0, scale) * float(np.sum(1.0 / mod))
    passed = log_product >= math.log1p(-min(slack, 0.5))
    logger.info("nonzero eigenvalue product %.17g (%s)", product, "pass" if passed else "FAIL")
    return product, bool(passed)


def small_eigenvalue_profile(mu: AtomicMeasure, lambdas, tau: float = DEFAULT_ZERO_TOL) -> np.ndarray:
    """``mu({tau < |z| < lam}) * |log lam|`` for each ``lam`` in ``lambdas``."""
    lambdas = np.asarray(lambdas, dtype=float)
    mod = np.abs(mu.locations)
    keep = mod > tau
    out = np.empty(lambdas.shape)
    for i, lam in enumerate(lambdas):
        out[i] = mu.weights[keep & (mod < lam)].sum() * abs(math.log(lam))
    return out


def merge_clusters(lam, radius: float) -> np.ndarray:
    """Replace each chain of eigenvalues closer than ``radius`` by copies of its mean.

    A defective eigenvalue of multiplicity ``d`` is only determined to about
    ``ulp**(1/d)`` by any floating point eigensolver, while the mean of the
    cluster it splits into is well conditioned.
    """
    lam = np.asarray(lam, dtype=complex).reshape(-1).copy()
    if lam.size < 2 or radius <= 0:
        return lam
    near = np.abs(lam[:, None] - lam[None, :]) <= radius
    _, labels = scipy.sparse.csgraph.connected_components(scipy.sparse.csr_matrix(near), directed=False)
    for c in np.unique(labels):
        idx = labels == c
        if idx.sum() > 1:
            lam[idx] = lam[idx].mean()
    return lam


def match_spectra(x, y) -> float:
    """Largest pairwise distance under the optimal one-to-one matching."""
    x = np.asarray(x, dtype=complex).reshape(-1)
    y = np.asarray(y, dtype=complex).reshape(-1)
    if x.size != y.size:
        raise ValueError(f"multisets differ in size: {x.size} vs {y.size}")
    if x.size == 0:
        return 0.0
    cost = np.abs(x[:, None] - y[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
