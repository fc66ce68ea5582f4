"""Complex group rings C[G], square matrices over them, and a parser for
the textual input format.

Expression grammar (whitespace is ignored)::

    matrix   := '[' row (',' row)* ']'
    row      := '[' expr (',' expr)* ']'
    expr     := [sign] term (sign term)*
    term     := coeff ['*'] monomial | coeff | monomial
    coeff    := number | '(' number ',' number ')'      # (re, im)
    monomial := factor (['*'] factor)*
    factor   := generator ['^' signed-integer]

Generators are ``g`` (rank one) or ``g1 .. gk`` for free abelian
coordinates, ``h1 .. hj`` for torsion coordinates, and ``a``, ``b``, ``c``
for the Heisenberg group.  ``t`` is accepted as an alias of ``g``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import MismatchedGroup, ParseError
from .groups import AbelianGroupSpec, Group, GroupElement, HeisenbergGroup


def _is_integer(c: complex) -> bool:
    return c.imag == 0 and float(c.real).is_integer()


class GroupRingElement:
    """Finitely supported formal sum ``sum_g a_g g`` with complex ``a_g``.

    Zero coefficients are dropped on construction by an exact test, so the
    support is reproducible regardless of cancellation order.
    """

    __slots__ = ("group", "_terms")

    def __init__(self, group: Group, terms: Mapping[GroupElement, complex] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for g, coeff in items:
            if g.group != group:
                raise MismatchedGroup(f"element {g} does not belong to {group}")
            acc[g] = acc.get(g, 0j) + complex(coeff)
        self.group = group
        self._terms = {g: c for g, c in acc.items() if c != 0}

    @classmethod
    def scalar(cls, group: Group, value: complex = 1) -> GroupRingElement:
        return cls(group, {group.identity(): value})

    @classmethod
    def basis(cls, g: GroupElement, coeff: complex = 1) -> GroupRingElement:
        return cls(g.group, {g: coeff})

    @property
    def terms(self) -> dict[GroupElement, complex]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list[GroupElement]:
        return sorted(self._terms, key=lambda g: g.sort_key())

    def coefficient(self, g: GroupElement) -> complex:
        return self._terms.get(g, 0j)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    @property
    def is_integral(self) -> bool:
        return all(_is_integer(c) for c in self._terms.values())

    def _check(self, other: GroupRingElement):
        if other.group != self.group:
            raise MismatchedGroup(f"{self.group} vs {other.group}")

    def _coerce(self, other) -> GroupRingElement:
        if isinstance(other, GroupRingElement):
            self._check(other)
            return other
        if isinstance(other, (int, float, complex)):
            return GroupRingElement.scalar(self.group, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GroupRingElement(self.group, list(self.items()) + list(other.items()))

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement(self.group, {g: -c for g, c in self.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return GroupRingElement(self.group, {g: c * other for g, c in self.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ring_multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    def __pow__(self, e: int) -> GroupRingElement:
        if e < 0:
            raise ValueError("group ring elements are not invertible in general")
        result = GroupRingElement.scalar(self.group)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.group == other.group and self._terms == other._terms

    def __hash__(self):
        return hash((self.group, frozenset(self._terms.items())))

    def star(self) -> GroupRingElement:
        return star(self)

    def trace(self) -> complex:
        return trace_G(self)

    def __repr__(self):
        return f"GroupRingElement({self.group}, {format_element(self)!r})"

    def __str__(self):
        return format_element(self)


def ring_multiply(u: GroupRingElement, v: GroupRingElement) -> GroupRingElement:
    """Convolution product ``(uv)_g = sum_h u_h v_{h^-1 g}``."""
    if u.group != v.group:
        raise MismatchedGroup(f"{u.group} vs {v.group}")
    acc: dict = {}
    for g, a in u.items():
        for h, b in v.items():
            gh = g * h
            acc[gh] = acc.get(gh, 0j) + a * b
    return GroupRingElement(u.group, acc)


def star(u: GroupRingElement) -> GroupRingElement:
    """Involution ``(u*)_g = conj(u_{g^-1})``."""
    return GroupRingElement(u.group, {g.inverse(): c.conjugate() for g, c in u.items()})


def trace_G(u: GroupRingElement) -> complex:
    """Coefficient of the identity element."""
    return u.coefficient(u.group.identity())


def _word_letters(word) -> list[bool]:
    """Parse a word over {1, *}; True marks a starred letter."""
    letters = []
    for ch in word:
        if ch in ("1", "plain", "PLAIN"):
            letters.append(False)
        elif ch in ("*", "star", "STAR"):
            letters.append(True)
        else:
            raise ValueError(f"invalid word letter {ch!r}; use '1' or '*'")
    if not letters:
        raise ValueError("word must be nonempty")
    return letters


def star_moment(u: GroupRingElement, word) -> complex:
    """``Tr_G`` of the product of ``u`` / ``u*`` following ``word``.

    ``word`` is a string such as ``"1*1"`` or a sequence of ``"1"``/``"*"``.
    """
    letters = _word_letters(word)
    us = star(u)
    result = GroupRingElement.scalar(u.group)
    for starred in letters:
        result = result * (us if starred else u)
    return trace_G(result)


class GroupRingMatrix:
    """An ``n x n`` matrix with entries in ``C[G]``."""

    __slots__ = ("group", "entries")

    def __init__(self, group: Group, entries):
        rows = [list(row) for row in entries]
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise ValueError("group ring matrix must be square and nonempty")
        fixed = []
        for row in rows:
            out = []
            for e in row:
                if not isinstance(e, GroupRingElement):
                    e = GroupRingElement.scalar(group, e)
                if e.group != group:
                    raise MismatchedGroup(f"entry over {e.group}, matrix over {group}")
                out.append(e)
            fixed.append(tuple(out))
        self.group = group
        self.entries = tuple(fixed)

    @classmethod
    def from_element(cls, u: GroupRingElement) -> GroupRingMatrix:
        return cls(u.group, [[u]])

    @classmethod
    def identity(cls, group: Group, n: int = 1) -> GroupRingMatrix:
        return cls(group, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij) -> GroupRingElement:
        i, j = ij
        return self.entries[i][j]

    @property
    def is_integral(self) -> bool:
        return all(e.is_integral for row in self.entries for e in row)

    def __matmul__(self, other: GroupRingMatrix) -> GroupRingMatrix:
        if other.group != self.group:
            raise MismatchedGroup(f"{self.group} vs {other.group}")
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        n = self.n
        zero = GroupRingElement(self.group)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return GroupRingMatrix(self.group, out)

    def __pow__(self, e: int) -> GroupRingMatrix:
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = GroupRingMatrix.identity(self.group, self.n)
        for _ in range(e):
            result = result @ self
        return result

    def star(self) -> GroupRingMatrix:
        n = self.n
        return GroupRingMatrix(self.group, [[star(self.entries[j][i]) for j in range(n)] for i in range(n)])

    def trace(self) -> complex:
        """Sum of ``Tr_G`` over the diagonal."""
        return sum((trace_G(self.entries[i][i]) for i in range(self.n)), 0j)

    def coefficient_l1_rows(self) -> list[float]:
        return [sum(abs(c) for e in row for _, c in e.items()) for row in self.entries]

    def __eq__(self, other):
        if not isinstance(other, GroupRingMatrix):
            return NotImplemented
        return self.group == other.group and self.entries == other.entries

    def __repr__(self):
        return f"GroupRingMatrix({self.group}, {format_matrix(self)!r})"

    def __str__(self):
        return format_matrix(self)


def matrix_star_moment(A: GroupRingMatrix, word) -> complex:
    letters = _word_letters(word)
    As = A.star()
    result = GroupRingMatrix.identity(A.group, A.n)
    for starred in letters:
        result = result @ (As if starred else A)
    return result.trace()


# ---------------------------------------------------------------------------
# formatting

def _generator_names(group: Group) -> list[str]:
    if isinstance(group, HeisenbergGroup):
        return ["a", "b", "c"]
    names = ["g"] if group.rank == 1 else [f"g{j + 1}" for j in range(group.rank)]
    names += [f"h{j + 1}" for j in range(len(group.torsion_orders))]
    return names


def _format_monomial(g: GroupElement) -> str:
    names = _generator_names(g.group)
    if isinstance(g.group, HeisenbergGroup):
        # (x, y, z) = a^x b^y c^(z - xy)
        x, y, z = g.coords
        exps = [x, y, z - x * y]
        if g.modulus is not None:
            exps = [e % g.modulus for e in exps]
    else:
        exps = list(g.coords)
    parts = []
    for name, e in zip(names, exps):
        if e == 0:
            continue
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _format_real(x: float) -> str:
    if float(x).is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(float(x))


def _format_coeff(c: complex) -> tuple[str, str]:
    """Return (sign, magnitude text) for a coefficient."""
    if c.imag == 0:
        sign = "-" if c.real < 0 else "+"
        return sign, _format_real(abs(c.real))
    return "+", f"({_format_real(c.real)},{_format_real(c.imag)})"


def format_element(u: GroupRingElement) -> str:
    if not u:
        return "0"
    out = []
    for g in u.support():
        sign, mag = _format_coeff(u.coefficient(g))
        mono = _format_monomial(g)
        if not mono:
            body = mag
        elif mag == "1":
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def format_matrix(A: GroupRingMatrix) -> str:
    return "[" + ", ".join("[" + ", ".join(format_element(e) for e in row) + "]" for row in A.entries) + "]"


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z]\d*)"
    r"|(?P<op>[-+*^(),\[\]]))"
)


@dataclass
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, group: Group):
        self.text = text
        self.group = group
        self.tokens = _tokenize(text)
        self.i = 0
        self.generators = self._generators()

    def _generators(self) -> dict[str, GroupElement]:
        g = self.group
        if isinstance(g, HeisenbergGroup):
            return {"a": g.a, "b": g.b, "c": g.c}
        gens = {}
        for j, name in enumerate(_generator_names(g)):
            gens[name] = g.generator(j)
        if g.rank == 1:
            gens["g1"] = gens["t"] = gens["g"]
        return gens

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def fail(self, message, expected=()):
        raise ParseError(message, self.tok.pos, expected)

    def accept(self, text) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            self.fail(f"unexpected {self.tok.text or 'end of input'!r}", {repr(text)})

    def at_end(self):
        if self.tok.kind != "end":
            self.fail(f"trailing input {self.tok.text!r}", {"end of input"})

    def matrix(self) -> GroupRingMatrix:
        self.expect("[")
        rows = [self.row()]
        while self.accept(","):
            rows.append(self.row())
        self.expect("]")
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ParseError(f"matrix must be square, got {n} rows of lengths {[len(r) for r in rows]}", 0)
        return GroupRingMatrix(self.group, rows)

    def row(self) -> list[GroupRingElement]:
        self.expect("[")
        entries = [self.expr()]
        while self.accept(","):
            entries.append(self.expr())
        self.expect("]")
        return entries

    def expr(self) -> GroupRingElement:
        terms: list = []
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        terms.extend(self.term(sign))
        while True:
            if self.accept("+"):
                terms.extend(self.term(1))
            elif self.accept("-"):
                terms.extend(self.term(-1))
            else:
                break
        return GroupRingElement(self.group, terms)

    def term(self, sign: int):
        coeff = None
        if self.tok.kind == "num" or (self.tok.kind == "op" and self.tok.text == "("):
            coeff = self.coefficient()
            has_star = self.accept("*")
            if self.tok.kind != "name":
                if has_star:
                    self.fail("expected generator after '*'", set(self.generators))
                return [(self.group.identity(), sign * coeff)]
        if self.tok.kind != "name":
            self.fail(f"unexpected {self.tok.text or 'end of input'!r}", {"number", "(re,im)", *self.generators})
        g = self.monomial()
        return [(g, sign * (1 if coeff is None else coeff))]

    def coefficient(self) -> complex:
        if self.tok.kind == "num":
            value = float(self.tok.text)
            self.i += 1
            return complex(value)
        self.expect("(")
        re_part = self.signed_number()
        self.expect(",")
        im_part = self.signed_number()
        self.expect(")")
        return complex(re_part, im_part)

    def signed_number(self) -> float:
        sign = 1.0
        if self.accept("-"):
            sign = -1.0
        else:
            self.accept("+")
        if self.tok.kind != "num":
            self.fail("expected number", {"number"})
        value = float(self.tok.text)
        self.i += 1
        return sign * value

    def monomial(self) -> GroupElement:
        g = self.factor()
        while True:
            if self.tok.kind == "name":
                g = g * self.factor()
            elif self.tok.kind == "op" and self.tok.text == "*" and self.tokens[self.i + 1].kind == "name":
                self.i += 1
                g = g * self.factor()
            else:
                return g

    def factor(self) -> GroupElement:
        name = self.tok.text
        if name not in self.generators:
            self.fail(f"unknown generator {name!r}", set(self.generators))
        self.i += 1
        gen = self.generators[name]
        if self.accept("^"):
            sign = 1
            if self.accept("-"):
                sign = -1
            else:
                self.accept("+")
            if self.tok.kind != "num" or not self.tok.text.isdigit():
                self.fail("expected integer exponent", {"integer"})
            e = sign * int(self.tok.text)
            self.i += 1
            return gen**e
        return gen


def parse_element(text: str, group: Group) -> GroupRingElement:
    p = _Parser(text, group)
    u = p.expr()
    p.at_end()
    return u


def parse_matrix(text: str, group: Group) -> GroupRingMatrix:
    """Parse ``[[..], [..]]``; a bare expression becomes a 1x1 matrix."""
    p = _Parser(text, group)
    if p.tok.kind == "op" and p.tok.text == "[":
        A = p.matrix()
    else:
        A = GroupRingMatrix.from_element(p.expr())
    p.at_end()
    return A


def parse_group(text: str) -> Group:
    """Parse a group name: ``Z``, ``Z^2``, ``Z^2xZ/3``, ``Z/4``, ``H3``."""
    s = text.replace(" ", "")
    if s.upper() in ("H3", "H3(Z)", "HEISENBERG"):
        return HeisenbergGroup(None)
    rank = 0
    torsion = []
    for part in s.split("x"):
        m = re.fullmatch(r"Z(?:\^(\d+))?", part)
        if m:
            rank += int(m.group(1) or 1)
            continue
        m = re.fullmatch(r"Z/(\d+)", part)
        if m:
            torsion.append(int(m.group(1)))
            continue
        raise ParseError(f"cannot parse group {text!r}", 0, {"Z", "Z^k", "Z/n", "H3"})
    try:
        return AbelianGroupSpec(rank, tuple(torsion))
    except ValueError as exc:
        raise ParseError(str(exc), 0) from exc
