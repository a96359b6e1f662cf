"""Empirical constants: mean/median lifetime ratios and compensation constants."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import DomainError, ParseError
from .noise import FAMILIES, check_family


@dataclass(frozen=True)
class CompensationConstants:
    """Constants of the compensation template ``exp(c1 * (d / (d + L)) ** c2)``."""

    c1: float
    c2: float

    def __post_init__(self) -> None:
        if not (self.c1 > 0 and self.c2 > 0):
            raise DomainError(f"compensation constants must be positive, got ({self.c1}, {self.c2})")


@dataclass(frozen=True)
class Estimate:
    value: float
    uncertainty: float = 0.0


@dataclass(frozen=True)
class CalibrationTables:
    """Per-family ratio ``rho = mean / median lifetime`` and compensation constants.

    Uncertainties are three standard deviations, as in the published defaults.
    """

    rho: dict[str, Estimate]
    c1: dict[str, Estimate]
    c2: dict[str, Estimate]
    provenance: dict = field(default_factory=lambda: {"source": "defaults"})

    def constants(self, family: str) -> CompensationConstants:
        family = check_family(family)
        return CompensationConstants(self.c1[family].value, self.c2[family].value)

    def rho_for(self, family: str) -> float:
        return self.rho[check_family(family)].value

    def replace(self, **updates) -> CalibrationTables:
        """Copy with some per-family entries overridden, e.g. ``rho={"gaussian": Estimate(1.15)}``."""
        merged = {}
        for name in ("rho", "c1", "c2"):
            merged[name] = {**getattr(self, name), **updates.get(name, {})}
        return CalibrationTables(merged["rho"], merged["c1"], merged["c2"], updates.get("provenance", self.provenance))

    def to_dict(self) -> dict:
        return {
            "rho": {k: asdict(v) for k, v in self.rho.items()},
            "c1": {k: asdict(v) for k, v in self.c1.items()},
            "c2": {k: asdict(v) for k, v in self.c2.items()},
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict, base: CalibrationTables | None = None) -> CalibrationTables:
        """Parse exported tables; families missing from ``data`` fall back to ``base``."""
        base = base or DEFAULT_TABLES
        try:
            parts = {}
            for name in ("rho", "c1", "c2"):
                section = dict(getattr(base, name))
                for fam, entry in data.get(name, {}).items():
                    if isinstance(entry, dict):
                        section[check_family(fam)] = Estimate(float(entry["value"]), float(entry.get("uncertainty", 0.0)))
                    else:
                        section[check_family(fam)] = Estimate(float(entry))
                parts[name] = section
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed calibration tables: {exc}") from exc
        return cls(parts["rho"], parts["c1"], parts["c2"], data.get("provenance", {"source": "file"}))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path) -> CalibrationTables:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: not valid JSON ({exc})") from exc
        return cls.from_dict(data)


DEFAULT_TABLES = CalibrationTables(
    rho={
        "gaussian": Estimate(1.154, 0.012),
        "uniform": Estimate(1.000, 0.010),
        "rayleigh": Estimate(1.136, 0.013),
        "exponential": Estimate(1.265, 0.016),
    },
    c1={
        "gaussian": Estimate(0.845, 0.029),
        "uniform": Estimate(0.880, 0.017),
        "rayleigh": Estimate(0.726, 0.026),
        "exponential": Estimate(0.436, 0.036),
    },
    c2={
        "gaussian": Estimate(0.809, 0.061),
        "uniform": Estimate(0.639, 0.026),
        "rayleigh": Estimate(0.605, 0.054),
        "exponential": Estimate(0.393, 0.075),
    },
)

assert set(DEFAULT_TABLES.rho) == set(FAMILIES)
