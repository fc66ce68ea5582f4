"""Finite matrices attached to group-ring data.

``regular_rep_matrix`` realises right multiplication by ``A`` on
``C[G/N]^n``; ``heisenberg_irrep`` and ``apply_irrep`` give the explicit
irreducible representations of ``H3(Z/nZ)``.
"""

from __future__ import annotations

import io
import math
import struct
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidParams, MismatchedGroup, NotPrime, QuotientTooLarge
from .group_ring import GroupRingElement, GroupRingMatrix
from .groups import HeisenbergGroup, QuotientSpec, enumerate_quotient, project

DEFAULT_DENSE_CAP = 4096


def regular_rep_matrix(
    A: GroupRingMatrix | GroupRingElement,
    q: QuotientSpec,
    max_dim: int = DEFAULT_DENSE_CAP,
) -> np.ndarray:
    """Matrix of right multiplication by ``A`` on ``C[G/N]^n``.

    Block ``(u, v)`` is ``sum_g (A_uv)_g P_g`` with ``(P_g)[h, h*g] = 1`` in
    the order of ``enumerate_quotient(q)``.  The result is real when every
    coefficient is real.
    """
    if isinstance(A, GroupRingElement):
        A = GroupRingMatrix.from_element(A)
    if A.group != q.base:
        raise MismatchedGroup(f"matrix over {A.group}, quotient of {q.base}")
    order = q.order
    dim = A.n * order
    if dim > max_dim:
        raise QuotientTooLarge(f"dense dimension {dim} exceeds cap {max_dim}")
    elements = enumerate_quotient(q)
    index = {h: i for i, h in enumerate(elements)}
    rows = np.arange(order)
    complex_entries = any(c.imag != 0 for row in A.entries for e in row for _, c in e.items())
    M = np.zeros((dim, dim), dtype=complex if complex_entries else float)
    column_cache: dict = {}
    for u in range(A.n):
        for v in range(A.n):
            block = M[u * order : (u + 1) * order, v * order : (v + 1) * order]
            for g, coeff in A.entries[u][v].items():
                gq = project(g, q)
                cols = column_cache.get(gq)
                if cols is None:
                    cols = np.fromiter((index[h * gq] for h in elements), dtype=np.intp, count=order)
                    column_cache[gq] = cols
                block[rows, cols] += coeff if complex_entries else coeff.real
    return M


def shift_matrix(m: int) -> np.ndarray:
    """The ``m x m`` cyclic shift: ones on the superdiagonal and bottom-left."""
    return np.roll(np.eye(m), 1, axis=1)


def nilpotent_jordan(n: int, corner: float = 0.0) -> np.ndarray:
    """Nilpotent Jordan block ``M_n``, optionally with a bottom-left entry."""
    M = np.eye(n, k=1)
    if corner:
        M[n - 1, 0] = corner
    return M


# ---------------------------------------------------------------------------
# Heisenberg irreducibles


@dataclass(frozen=True)
class IrrepSpec:
    """Parameters ``(k, r, s)`` of an irreducible representation of ``H3(Z/nZ)``.

    The representation has dimension ``d2 = n / gcd(n, k)`` and ``r, s``
    range over ``[0, gcd(n, k))``.
    """

    n: int
    k: int
    r: int = 0
    s: int = 0
    d1: int = field(init=False)
    d2: int = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParams(f"modulus must be positive, got {self.n}")
        if not 0 <= self.k < self.n:
            raise InvalidParams(f"k={self.k} outside [0, {self.n})")
        d1 = math.gcd(self.n, self.k)
        if not (0 <= self.r < d1 and 0 <= self.s < d1):
            raise InvalidParams(f"r={self.r}, s={self.s} must lie in [0, {d1})")
        object.__setattr__(self, "d1", d1)
        object.__setattr__(self, "d2", self.n // d1)

    @property
    def omega(self) -> complex:
        return np.exp(2j * np.pi / self.n)

    @property
    def dim(self) -> int:
        return self.d2


def _root(n: int, e: int) -> complex:
    """``exp(2 pi i e / n)``, exact for the quarter turns."""
    e %= n
    if (4 * e) % n == 0:
        return (1, 1j, -1, -1j)[4 * e // n]
    return complex(np.exp(2j * np.pi * e / n))


def heisenberg_irrep(spec: IrrepSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Images of ``a``, ``b`` and ``c`` under ``rho_{k,r,s}``."""
    n, k, d2 = spec.n, spec.k, spec.d2
    rho_a = np.zeros((d2, d2), dtype=complex)
    rho_a[np.arange(d2 - 1), np.arange(1, d2)] = 1
    rho_a[d2 - 1, 0] += _root(n, spec.r * d2)
    rho_b = np.diag([_root(n, spec.s + j * k) for j in range(d2)])
    rho_c = _root(n, k) * np.eye(d2)
    return rho_a, rho_b, rho_c


def irrep_parameters(n: int):
    """All ``IrrepSpec`` for ``H3(Z/nZ)``, ordered by ``(k, r, s)``."""
    for k in range(n):
        d1 = math.gcd(n, k)
        for r in range(d1):
            for s in range(d1):
                yield IrrepSpec(n, k, r, s)


def apply_irrep(u: GroupRingElement, spec: IrrepSpec) -> np.ndarray:
    """``sum_g u_g rho(g)``.

    ``(x, y, z) = a^x b^y c^(z - x*y)`` in the group law used here, so
    ``rho(g) = rho_a^x rho_b^y rho_c^(z - x*y)``.  Elements of ``H3(Z)``
    are accepted too: every generator image has order dividing ``n``.
    """
    group = u.group
    if not isinstance(group, HeisenbergGroup) or (group.modulus is not None and group.modulus % spec.n):
        raise MismatchedGroup(f"element over {group} cannot be evaluated in an irrep of H3(Z/{spec.n})")
    n = spec.n
    rho_a, rho_b, rho_c = heisenberg_irrep(spec)
    out = np.zeros((spec.d2, spec.d2), dtype=complex)
    for g, coeff in u.items():
        x, y, z = g.coords
        image = (
            np.linalg.matrix_power(rho_a, x % n)
            @ np.linalg.matrix_power(rho_b, y % n)
            @ np.linalg.matrix_power(rho_c, (z - x * y) % n)
        )
        out += coeff * image
    return out


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class CensusEntry:
    dimension: int
    count: int
    multiplicity: int


@lru_cache(maxsize=None)
def _census(p: int, m: int) -> tuple[CensusEntry, ...]:
    entries = []
    for i in range(m):
        d2 = p ** (m - i)
        entries.append(CensusEntry(d2, (d2 - d2 // p) * p ** (2 * i), d2))
    entries.append(CensusEntry(1, p ** (2 * m), 1))
    return tuple(entries)


def irrep_census(p: int, m: int) -> list[CensusEntry]:
    """Dimensions, counts and regular-representation multiplicities of the
    irreducibles of ``H3(Z/p^m Z)``."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m < 1:
        raise InvalidParams("level must be >= 1")
    return list(_census(p, m))


# ---------------------------------------------------------------------------
# matrix export


def matrix_to_csv(M: np.ndarray) -> str:
    """One line per row, each entry written as ``re,im``."""
    M = np.asarray(M, dtype=complex)
    buf = io.StringIO()
    for row in M:
        buf.write(",".join(f"{z.real:.17g},{z.imag:.17g}" for z in row))
        buf.write("\n")
    return buf.getvalue()


def matrix_from_csv(text: str) -> np.ndarray:
    rows = []
    for line in text.strip().splitlines():
        vals = [float(v) for v in line.split(",")]
        rows.append([complex(vals[j], vals[j + 1]) for j in range(0, len(vals), 2)])
    return np.array(rows, dtype=complex)


_HEADER = struct.Struct("<QQ")


def matrix_to_bytes(M: np.ndarray) -> bytes:
    """``rows, cols`` as little-endian uint64, then row-major ``re, im`` float64 pairs."""
    M = np.ascontiguousarray(M, dtype="<c16")
    return _HEADER.pack(*M.shape) + M.tobytes(order="C")


def matrix_from_bytes(data: bytes) -> np.ndarray:
    rows, cols = _HEADER.unpack_from(data)
    body = np.frombuffer(data, dtype="<c16", offset=_HEADER.size)
    if body.size != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, found {body.size}")
    return body.reshape(rows, cols).astype(complex)
