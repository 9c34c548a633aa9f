"""Machine-readable experiment reports and glyph records.

Reports are canonical JSON (sorted keys), with all wall-clock derived
quantities quarantined under ``timings`` so that the remaining fields are
byte-reproducible from ``(command, config, seed)``.  Glyph records
serialize ellipsoid data (eigenvalues, eigenvectors, determinant) for
external plotting, one JSON object per line.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .tri import DomainError, NotSpdError

SCHEMA_VERSION = 1


@dataclass
class ResultRecord:
    """One named result: a scalar or a sequence, with units and tolerance."""

    name: str
    value: float | bool | None = None
    values: list[float] | None = None
    units: str = ""
    tolerance: float | None = None
    note: str = ""


@dataclass
class ExperimentReport:
    experiment: str
    metrics: list[str]
    inputs: dict
    environment: dict
    results: list[ResultRecord]
    timings: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def nontiming_json(self) -> str:
        """Canonical JSON with the timing fields stripped."""
        d = self.to_dict()
        d.pop("timings", None)
        return json.dumps(d, sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        d = dict(d)
        d["results"] = [ResultRecord(**r) for r in d.get("results", [])]
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        """Per-record CSV export: name, index, value."""
        lines = ["name,index,value"]
        for rec in self.results:
            if rec.values is not None:
                for i, v in enumerate(rec.values):
                    lines.append(f"{rec.name},{i},{v!r}")
            else:
                lines.append(f"{rec.name},0,{rec.value!r}")
        return "\n".join(lines) + "\n"

    def result(self, name: str) -> ResultRecord:
        for rec in self.results:
            if rec.name == name:
                return rec
        raise KeyError(name)


@dataclass
class GlyphRecord:
    """Ellipsoid glyph of one SPD matrix at a grid position."""

    row: int
    col: int
    eigenvalues: list[float]
    eigenvectors: list[float]  # orthonormal matrix, flattened row-major
    determinant: float

    @classmethod
    def from_spd_dense(cls, a: np.ndarray, row: int, col: int) -> "GlyphRecord":
        w, u = np.linalg.eigh(a)
        if w[0] <= 0.0:
            raise NotSpdError(f"glyph requires positive eigenvalues, got {w[0]}")
        order = np.argsort(w)[::-1]
        w = w[order]
        u = u[:, order]
        if np.abs(u.T @ u - np.eye(a.shape[0])).max() > 1e-10:
            raise DomainError("eigenvector matrix failed the orthonormality check")
        return cls(
            row=row,
            col=col,
            eigenvalues=[float(x) for x in w],
            eigenvectors=[float(x) for x in u.ravel(order="C")],
            determinant=float(np.prod(w)),
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GlyphRecord":
        return cls(**json.loads(text))
