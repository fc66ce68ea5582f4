"""Finitely generated abelian groups, the discrete Heisenberg group, and
their coordinatewise finite quotients.

Elements are immutable value objects.  Abelian elements are exponent
vectors; Heisenberg elements are the three free entries ``(x, y, z)`` of
the upper unitriangular matrix

    [[1, x, z],
     [0, 1, y],
     [0, 0, 1]]

so that ``(x1, y1, z1) * (x2, y2, z2) = (x1 + x2, y1 + y2, z1 + z2 + x1*y2)``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Union

from .errors import MismatchedGroup, QuotientTooLarge

DEFAULT_ENUMERATION_CAP = 10**6


@dataclass(frozen=True)
class AbelianGroupSpec:
    """``Z^rank x Z/t_1 x ... x Z/t_j``."""

    rank: int
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion_orders", tuple(int(t) for t in self.torsion_orders))
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        if self.rank + len(self.torsion_orders) < 1:
            raise ValueError("group must have at least one generator")
        if any(t < 2 for t in self.torsion_orders):
            raise ValueError("torsion orders must be >= 2")

    @property
    def ncoords(self) -> int:
        return self.rank + len(self.torsion_orders)

    @property
    def order(self) -> int | None:
        if self.rank:
            return None
        return math.prod(self.torsion_orders)

    def identity(self) -> AbelianElement:
        return AbelianElement(self, (0,) * self.rank, (0,) * len(self.torsion_orders))

    def element(self, coords) -> AbelianElement:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.ncoords:
            raise ValueError(f"expected {self.ncoords} coordinates, got {len(coords)}")
        return AbelianElement(self, coords[: self.rank], coords[self.rank :])

    def generator(self, j: int) -> AbelianElement:
        coords = [0] * self.ncoords
        coords[j] = 1
        return self.element(coords)

    def elements(self, cap: int = DEFAULT_ENUMERATION_CAP) -> list[AbelianElement]:
        if self.rank:
            raise QuotientTooLarge("cannot enumerate an infinite group")
        if self.order > cap:
            raise QuotientTooLarge(f"group order {self.order} exceeds cap {cap}")
        ranges = [range(t) for t in self.torsion_orders]
        return [AbelianElement(self, (), c) for c in itertools.product(*ranges)]

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion_orders)
        return "x".join(parts)


@dataclass(frozen=True)
class AbelianElement:
    group: AbelianGroupSpec
    free_exponents: tuple[int, ...]
    torsion_residues: tuple[int, ...]

    def __post_init__(self):
        residues = tuple(
            int(r) % t for r, t in zip(self.torsion_residues, self.group.torsion_orders)
        )
        object.__setattr__(self, "free_exponents", tuple(int(e) for e in self.free_exponents))
        object.__setattr__(self, "torsion_residues", residues)

    @property
    def coords(self) -> tuple[int, ...]:
        return self.free_exponents + self.torsion_residues

    def __mul__(self, other: AbelianElement) -> AbelianElement:
        if not isinstance(other, AbelianElement) or other.group != self.group:
            raise MismatchedGroup(f"cannot multiply elements of {self.group} and {_group_of(other)}")
        return AbelianElement(
            self.group,
            tuple(a + b for a, b in zip(self.free_exponents, other.free_exponents)),
            tuple(a + b for a, b in zip(self.torsion_residues, other.torsion_residues)),
        )

    def inverse(self) -> AbelianElement:
        return AbelianElement(
            self.group,
            tuple(-a for a in self.free_exponents),
            tuple(-a for a in self.torsion_residues),
        )

    def __pow__(self, e: int) -> AbelianElement:
        return AbelianElement(
            self.group,
            tuple(a * e for a in self.free_exponents),
            tuple(a * e for a in self.torsion_residues),
        )

    def is_identity(self) -> bool:
        return not any(self.coords)

    def sort_key(self):
        return self.coords


@dataclass(frozen=True)
class HeisenbergGroup:
    """``H3(Z)`` when ``modulus`` is None, else ``H3(Z/nZ)``."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise ValueError("modulus must be >= 2")

    @property
    def order(self) -> int | None:
        return None if self.modulus is None else self.modulus**3

    def identity(self) -> HeisenbergElement:
        return HeisenbergElement(0, 0, 0, self.modulus)

    def element(self, coords) -> HeisenbergElement:
        x, y, z = (int(c) for c in coords)
        return HeisenbergElement(x, y, z, self.modulus)

    @property
    def a(self) -> HeisenbergElement:
        return HeisenbergElement(1, 0, 0, self.modulus)

    @property
    def b(self) -> HeisenbergElement:
        return HeisenbergElement(0, 1, 0, self.modulus)

    @property
    def c(self) -> HeisenbergElement:
        return HeisenbergElement(0, 0, 1, self.modulus)

    def elements(self, cap: int = DEFAULT_ENUMERATION_CAP) -> list[HeisenbergElement]:
        if self.modulus is None:
            raise QuotientTooLarge("cannot enumerate an infinite group")
        if self.order > cap:
            raise QuotientTooLarge(f"group order {self.order} exceeds cap {cap}")
        n = self.modulus
        return [HeisenbergElement(x, y, z, n) for x, y, z in itertools.product(range(n), repeat=3)]

    def __str__(self):
        return "H3(Z)" if self.modulus is None else f"H3(Z/{self.modulus})"


@dataclass(frozen=True)
class HeisenbergElement:
    x: int
    y: int
    z: int
    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None:
            n = self.modulus
            object.__setattr__(self, "x", self.x % n)
            object.__setattr__(self, "y", self.y % n)
            object.__setattr__(self, "z", self.z % n)

    @property
    def group(self) -> HeisenbergGroup:
        return HeisenbergGroup(self.modulus)

    @property
    def coords(self) -> tuple[int, int, int]:
        return (self.x, self.y, self.z)

    def __mul__(self, other: HeisenbergElement) -> HeisenbergElement:
        if not isinstance(other, HeisenbergElement) or other.modulus != self.modulus:
            raise MismatchedGroup(f"cannot multiply elements of {self.group} and {_group_of(other)}")
        return HeisenbergElement(
            self.x + other.x,
            self.y + other.y,
            self.z + other.z + self.x * other.y,
            self.modulus,
        )

    def inverse(self) -> HeisenbergElement:
        return HeisenbergElement(-self.x, -self.y, -self.z + self.x * self.y, self.modulus)

    def __pow__(self, e: int) -> HeisenbergElement:
        base = self if e >= 0 else self.inverse()
        result = self.group.identity()
        for _ in range(abs(e)):
            result = result * base
        return result

    def is_identity(self) -> bool:
        return self.x == 0 and self.y == 0 and self.z == 0

    def sort_key(self):
        return self.coords


Group = Union[AbelianGroupSpec, HeisenbergGroup]
GroupElement = Union[AbelianElement, HeisenbergElement]


def _group_of(obj):
    return getattr(obj, "group", type(obj).__name__)


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    return g * h


class Family(enum.Enum):
    ABELIAN = "abelian"
    HEISENBERG = "heisenberg"


@dataclass(frozen=True)
class QuotientSpec:
    """A finite coordinatewise quotient.

    For an abelian group each free coordinate is reduced modulo the matching
    entry of ``moduli`` and torsion is left alone.  For the Heisenberg group
    every coordinate is reduced modulo ``prime**level``.
    """

    family: Family
    base: Group
    moduli: tuple[int, ...] = ()
    prime: int | None = None
    level: int | None = None

    @classmethod
    def abelian(cls, base: AbelianGroupSpec, moduli) -> QuotientSpec:
        moduli = tuple(int(m) for m in moduli)
        if len(moduli) != base.rank:
            raise ValueError(f"need one modulus per free generator ({base.rank}), got {len(moduli)}")
        if any(m < 1 for m in moduli):
            raise ValueError("moduli must be positive")
        return cls(Family.ABELIAN, base, moduli=moduli)

    @classmethod
    def heisenberg(cls, prime: int, level: int) -> QuotientSpec:
        if prime < 2 or level < 1:
            raise ValueError("Heisenberg quotient needs p >= 2 and level >= 1")
        return cls(Family.HEISENBERG, HeisenbergGroup(None), prime=int(prime), level=int(level))

    @property
    def target(self) -> Group:
        """The finite group ``G / N``."""
        if self.family is Family.HEISENBERG:
            return HeisenbergGroup(self.prime**self.level)
        # Z/1 factors are dropped from the coordinates but counted as trivial.
        orders = tuple(m for m in self.moduli if m > 1) + self.base.torsion_orders
        if not orders:
            return _TRIVIAL
        return AbelianGroupSpec(0, orders)

    @property
    def order(self) -> int:
        if self.family is Family.HEISENBERG:
            return self.prime ** (3 * self.level)
        return math.prod(self.moduli) * math.prod(self.base.torsion_orders)

    def describe(self) -> str:
        if self.family is Family.HEISENBERG:
            return f"{self.prime}^{self.level}"
        return "x".join(str(m) for m in self.moduli) if self.moduli else "torsion"


class _TrivialGroup:
    """The one-element group, for quotients such as Z / Z."""

    order = 1
    ncoords = 0
    rank = 0
    torsion_orders = ()

    def identity(self):
        return _TRIVIAL_ELEMENT

    def elements(self, cap: int = DEFAULT_ENUMERATION_CAP):
        return [_TRIVIAL_ELEMENT]

    def __repr__(self):
        return "TrivialGroup()"


@dataclass(frozen=True)
class _TrivialElement:
    coords: tuple = ()

    @property
    def group(self):
        return _TRIVIAL

    def __mul__(self, other):
        return self

    def inverse(self):
        return self

    def is_identity(self):
        return True


_TRIVIAL = _TrivialGroup()
_TRIVIAL_ELEMENT = _TrivialElement()


def project(g: GroupElement, q: QuotientSpec) -> GroupElement:
    """Image of ``g`` in ``q.target``."""
    if q.family is Family.HEISENBERG:
        if not isinstance(g, HeisenbergElement) or g.modulus is not None:
            raise MismatchedGroup(f"{g!r} is not an element of H3(Z)")
        return HeisenbergElement(g.x, g.y, g.z, q.prime**q.level)
    if not isinstance(g, AbelianElement) or g.group != q.base:
        raise MismatchedGroup(f"{g!r} is not an element of {q.base}")
    target = q.target
    if target is _TRIVIAL:
        return _TRIVIAL_ELEMENT
    free = [e % m for e, m in zip(g.free_exponents, q.moduli) if m > 1]
    return AbelianElement(target, (), tuple(free) + g.torsion_residues)


def enumerate_quotient(q: QuotientSpec, cap: int = DEFAULT_ENUMERATION_CAP) -> list[GroupElement]:
    """Elements of ``q.target`` in lexicographic coordinate order, identity first."""
    if q.order > cap:
        raise QuotientTooLarge(f"quotient order {q.order} exceeds cap {cap}")
    return q.target.elements(cap)
