from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import orjson
import pandas as pd
from rich.console import Console
from rich.table import Table

from .analysis import LevitationResult
from .energy import EnergyCurve
from .errors import OutputError
from .utils import atomic_write_text, format_length, sign_changes

CSV_FLOAT_FORMAT = "%.17g"

SCAN_COLUMNS = [
    "film_thickness_m",
    "levitation_distance_m",
    "peak_separation_m",
    "peak_energy_J_per_m2",
    "status",
]


def write_csv(frame: pd.DataFrame, path: str | Path) -> None:
    """Write ``frame`` with full double precision; the file appears atomically."""

    payload = frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    try:
        atomic_write_text(path, payload)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def write_json(payload: str, path: str | Path) -> None:
    try:
        atomic_write_text(path, payload)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def interpolate_zero(separations: Sequence[float], values: Sequence[float], index: int) -> float:
    """Zero of the segment ``index -> index + 1``, linear in (ln d, value)."""

    d0, d1 = separations[index], separations[index + 1]
    v0, v1 = values[index], values[index + 1]
    if v0 == v1:
        return math.sqrt(d0 * d1)
    weight = v0 / (v0 - v1)
    return math.exp(math.log(d0) + weight * (math.log(d1) - math.log(d0)))


def _crossings(separations: Sequence[float], values: Sequence[float]) -> list[float]:
    crossings = []
    for index in sign_changes(values):
        following = next(j for j in range(index + 1, len(values)) if values[j] != 0)
        if following == index + 1:
            crossings.append(interpolate_zero(separations, values, index))
        else:
            crossings.append(separations[index + 1])
    return crossings


@dataclass(slots=True)
class CurveReport:
    name: str
    curve: EnergyCurve

    @property
    def energy_sign_changes(self) -> list[float]:
        return _crossings(list(self.curve.separations), list(self.curve.energies))

    @property
    def pressure_sign_changes(self) -> list[float]:
        return _crossings(list(self.curve.separations), list(self.curve.pressures))

    @property
    def ok(self) -> bool:
        return self.curve.converged

    def to_frame(self) -> pd.DataFrame:
        return self.curve.to_frame()

    def as_dict(self) -> dict[str, Any]:
        payload = self.curve.as_dict()
        payload.update(
            {
                "name": self.name,
                "converged": self.ok,
                "energy_sign_changes_m": self.energy_sign_changes,
                "pressure_sign_changes_m": self.pressure_sign_changes,
            }
        )
        return payload

    def to_json(self) -> str:
        return orjson.dumps(self.as_dict(), option=orjson.OPT_INDENT_2).decode()

    def to_rich_console(self, console: Console | None = None) -> None:
        console = console or Console()
        console.rule(f"{self.name}: {self.curve.stack}")
        points = self.curve.points
        console.print(
            f"Points: {len(points)}  Range: {format_length(points[0].separation)} .. "
            f"{format_length(points[-1].separation)}"
        )
        energy_zeros = self.energy_sign_changes
        if energy_zeros:
            console.print("[bold]Energy sign changes:[/bold] " + ", ".join(map(format_length, energy_zeros)))
        else:
            console.print("No energy sign change.")
        pressure_zeros = self.pressure_sign_changes
        if pressure_zeros:
            console.print("Pressure sign changes: " + ", ".join(map(format_length, pressure_zeros)))
        failed = [point for point in points if not point.converged]
        if not failed:
            return
        table = Table(title="Non-converged points")
        table.add_column("Separation")
        table.add_column("Energy (J/m²)", justify="right")
        for point in failed:
            table.add_row(format_length(point.separation), f"{point.free_energy:.6g}")
        console.print(table)


@dataclass(slots=True)
class ScanReport:
    name: str
    stack: str
    rows: list[tuple[float, LevitationResult]] = field(default_factory=list)
    config: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(result.converged for _, result in self.rows)

    def to_frame(self) -> pd.DataFrame:
        records = [
            {
                "film_thickness_m": thickness,
                "levitation_distance_m": _nan_if_none(result.levitation_distance),
                "peak_separation_m": _nan_if_none(result.peak_separation),
                "peak_energy_J_per_m2": _nan_if_none(result.peak_energy),
                "status": result.status,
            }
            for thickness, result in self.rows
        ]
        return pd.DataFrame.from_records(records, columns=SCAN_COLUMNS)

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "stack": self.stack,
            "config": dict(self.config),
            "converged": self.ok,
            "rows": [
                {"film_thickness_m": thickness, **result.as_dict()} for thickness, result in self.rows
            ],
        }

    def to_json(self) -> str:
        return orjson.dumps(self.as_dict(), option=orjson.OPT_INDENT_2).decode()

    def to_rich_console(self, console: Console | None = None) -> None:
        console = console or Console()
        console.rule(f"{self.name}: {self.stack}")
        table = Table(title="Levitation scan")
        table.add_column("Film")
        table.add_column("Levitation distance")
        table.add_column("Peak separation")
        table.add_column("Peak energy (J/m²)", justify="right")
        table.add_column("Status")
        for thickness, result in self.rows:
            table.add_row(
                format_length(thickness),
                _length_or_dash(result.levitation_distance),
                _length_or_dash(result.peak_separation),
                "-" if result.peak_energy is None else f"{result.peak_energy:.6g}",
                result.status if result.converged else f"{result.status} (not converged)",
            )
        console.print(table)


def _nan_if_none(value: float | None) -> float:
    return np.nan if value is None else value


def _length_or_dash(value: float | None) -> str:
    return "-" if value is None else format_length(value)


__all__ = [
    "CSV_FLOAT_FORMAT",
    "CurveReport",
    "SCAN_COLUMNS",
    "ScanReport",
    "interpolate_zero",
    "write_csv",
    "write_json",
]
