"""Exact zero-atom census for ``a - b`` in ``H3(Z/p^m Z)``.

In ``rho_{k,r,s}`` the element ``(a - b)^n`` acts as the scalar
``(1 - sign * omega^((s-r)*d2))^d1`` with ``sign = (-1)^(d2+1)``
(``n = p^m``), so ``rho(a - b)`` is either nilpotent or invertible.  Summing ``dimension * multiplicity`` over
the nilpotent irreducibles gives the algebraic multiplicity of 0 in the
regular representation with integer arithmetic only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidParams, NotOddPrime, Overflow
from .quotient_rep import IrrepSpec, is_prime

DEFAULT_MAX_MODULUS = 10**7


@dataclass(frozen=True)
class PowerScalar:
    """``rho_{k,r,s}((a-b)^n) = (-base)^d1 * Id`` with
    ``base = sign * omega^exponent - 1``."""

    n: int
    k: int
    r: int
    s: int
    d1: int
    d2: int
    sign: int
    exponent: int
    is_zero: bool
    established: bool

    @property
    def base(self) -> complex:
        return self.sign * cmath.exp(2j * cmath.pi * self.exponent / self.n) - 1

    @property
    def value(self) -> complex:
        return 0j if self.is_zero else (-self.base) ** self.d1


def _vanishes(n: int, sign: int, exponent: int) -> bool:
    if sign == 1:
        return exponent % n == 0
    return n % 2 == 0 and exponent % n == n // 2


def power_scalar(n: int, k: int, r: int, s: int) -> PowerScalar:
    """Scalar by which ``(a - b)^n`` acts in ``rho_{k,r,s}``.

    Zero-ness is decided on the integer exponent.  For even ``d2`` the
    same formula is evaluated but ``established`` is False: the sign
    analysis behind the zero test is only worked out for odd ``d2``.
    """
    spec = IrrepSpec(n, k, r, s)
    d1, d2 = spec.d1, spec.d2
    sign = 1 if d2 % 2 == 1 else -1
    exponent = ((s - r) * d2) % n
    return PowerScalar(n, k, r, s, d1, d2, sign, exponent, _vanishes(n, sign, exponent), d2 % 2 == 1)


def _check_odd_prime(p: int):
    if p == 2 or not is_prime(p):
        raise NotOddPrime(f"p must be an odd prime, got {p}")


def closed_form_mass(p: int, m: int) -> Fraction:
    """``(1 - 1/p) * sum_{i<m} p^(-2i) + p^(-2m)``."""
    geometric = sum(Fraction(1, p ** (2 * i)) for i in range(m))
    return (1 - Fraction(1, p)) * geometric + Fraction(1, p ** (2 * m))


def enumerated_zero_count(n: int) -> int:
    """Multiplicity of 0 for ``a - b`` in the regular representation of
    ``H3(Z/nZ)``, by walking every irreducible ``rho_{k,r,s}``.

    Each nilpotent irreducible of dimension ``d2`` occurs ``d2`` times and
    contributes ``d2`` zeros per copy.  Pairs ``(r, s)`` are grouped by
    ``s - r``, which is all the scalar depends on.
    """
    total = 0
    for k in range(n):
        d1 = math.gcd(n, k)
        d2 = n // d1
        sign = 1 if d2 % 2 == 1 else -1
        for delta in range(-(d1 - 1), d1):
            if _vanishes(n, sign, delta * d2):
                total += (d1 - abs(delta)) * d2 * d2
    return total


@dataclass(frozen=True)
class ZeroAtomReport:
    p: int
    m: int
    S1: int
    S2: int
    mass: Fraction
    limit: Fraction
    enumerated: int

    @property
    def group_order(self) -> int:
        return self.p ** (3 * self.m)

    @property
    def deviation(self) -> Fraction:
        return self.mass - self.limit

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "S1": self.S1,
            "S2": self.S2,
            "group_order": self.group_order,
            "mass": f"{self.mass.numerator}/{self.mass.denominator}",
            "mass_decimal": float(self.mass),
            "limit": f"{self.limit.numerator}/{self.limit.denominator}",
            "limit_decimal": float(self.limit),
            "deviation": f"{self.deviation.numerator}/{self.deviation.denominator}",
            "deviation_decimal": float(self.deviation),
        }


def structural_zero_count(p: int, m: int, max_modulus: int = DEFAULT_MAX_MODULUS) -> ZeroAtomReport:
    """Zero-atom mass of ``a - b`` on ``H3(Z/p^m Z)``, exactly.

    ``S1`` counts zeros from irreducibles of dimension ``p^(m-i) > 1``,
    ``S2 = p^m`` those from the one-dimensional ones.  The total is checked
    against ``enumerated_zero_count`` before returning.
    """
    _check_odd_prime(p)
    if m < 1:
        raise InvalidParams("level must be >= 1")
    n = p**m
    if n > max_modulus:
        raise Overflow(f"p^m = {n} exceeds the enumeration budget {max_modulus}")
    S1 = sum(p ** (m - i) * p ** (m - i) * (p ** (m - i) - p ** (m - i - 1)) * p**i for i in range(m))
    S2 = n
    mass = Fraction(S1 + S2, p ** (3 * m))
    enumerated = enumerated_zero_count(n)
    if enumerated != S1 + S2:
        raise ArithmeticError(f"census mismatch for p={p}, m={m}: closed form {S1 + S2}, enumeration {enumerated}")
    if mass != closed_form_mass(p, m):
        raise ArithmeticError(f"mass {mass} disagrees with the geometric-series form for p={p}, m={m}")
    return ZeroAtomReport(p, m, S1, S2, mass, Fraction(p, p + 1), enumerated)


@dataclass(frozen=True)
class SequenceRow:
    m: int
    mass: Fraction
    deviation: Fraction


def zero_count_sequence(p: int, levels) -> list[SequenceRow]:
    """``(m, mu_m({0}), |mu_m({0}) - p/(p+1)|)`` for each level."""
    rows = []
    for m in levels:
        rep = structural_zero_count(p, m)
        rows.append(SequenceRow(m, rep.mass, abs(rep.deviation)))
    return rows
