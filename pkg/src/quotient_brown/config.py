"""Job configuration shared by the CLI and JSON job files."""

from __future__ import annotations

import dataclasses
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, ParseError
from .group_ring import GroupRingMatrix, parse_group, parse_matrix
from .groups import AbelianGroupSpec, Group, QuotientSpec

FORMATS = ("csv", "json", "svg")


def parse_chain(items, group: Group) -> list[QuotientSpec]:
    """Quotient levels from strings.

    Abelian: ``"5"`` or ``"4x6"`` (one modulus per free generator).
    Heisenberg: ``"3^2"`` for ``H3(Z/3^2 Z)``.
    """
    out = []
    for item in items:
        item = str(item).strip()
        if isinstance(group, AbelianGroupSpec):
            try:
                moduli = [int(m) for m in item.split("x")] if item else []
                out.append(QuotientSpec.abelian(group, moduli))
            except ValueError as exc:
                raise ConfigError(f"bad abelian chain level {item!r}: {exc}") from exc
        else:
            m = re.fullmatch(r"(\d+)\^(\d+)", item)
            if not m:
                raise ConfigError(f"Heisenberg chain levels look like p^i, got {item!r}")
            try:
                out.append(QuotientSpec.heisenberg(int(m.group(1)), int(m.group(2))))
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
    if any(b.order <= a.order for a, b in zip(out, out[1:])):
        raise ConfigError("chain levels must have increasing order")
    return out


def split_list(text: str) -> list[str]:
    return [s for s in (p.strip() for p in text.split(",")) if s]


@dataclass
class JobConfig:
    group: str = "Z"
    matrix: str = "g"
    chain: list[str] = field(default_factory=list)
    sampler: str = "grid:2048"
    degree: int = 4
    tau: float = 1e-3
    tau_svd: float = 1e-10
    power: int | None = None
    cells: int = 128
    seed: int = 0
    out: str = "out"
    formats: list[str] = field(default_factory=lambda: list(FORMATS))

    def __post_init__(self):
        bad = [f for f in self.formats if f not in FORMATS]
        if bad:
            raise ConfigError(f"unknown output format(s) {bad}; choose from {FORMATS}")
        if self.degree < 1:
            raise ConfigError("degree must be >= 1")
        if self.tau <= 0 or self.tau_svd <= 0:
            raise ConfigError("tolerances must be positive")
        if self.power is not None and self.power < 1:
            raise ConfigError("power must be positive")

    def parsed_group(self) -> Group:
        try:
            return parse_group(self.group)
        except ParseError as exc:
            raise ConfigError(str(exc)) from exc

    def parsed_matrix(self) -> GroupRingMatrix:
        return parse_matrix(self.matrix, self.parsed_group())

    def quotients(self) -> list[QuotientSpec]:
        return parse_chain(self.chain, self.parsed_group())

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> JobConfig:
        if not isinstance(data, dict):
            raise ConfigError("job config must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, text: str) -> JobConfig:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> JobConfig:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_json(text)
