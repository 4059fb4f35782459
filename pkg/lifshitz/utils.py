from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import regex

from .constants import ANGSTROM, MICROMETER, NANOMETER, UNDERFLOW_EXPONENT

_LENGTH_PATTERN = regex.compile(
    r"^\s*(?P<value>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(?P<unit>\p{L}*)\s*$"
)

_LENGTH_UNITS: dict[str, float] = {
    "": 1.0,
    "m": 1.0,
    "um": MICROMETER,
    "µm": MICROMETER,
    "μm": MICROMETER,
    "micron": MICROMETER,
    "nm": NANOMETER,
    "\u00c5": ANGSTROM,
    "\u212b": ANGSTROM,
    "A": ANGSTROM,
    "angstrom": ANGSTROM,
}


def parse_length(value: Any) -> float:
    """Return a length in meters from a float or a string such as ``"20 Å"``."""

    if isinstance(value, bool):
        raise ValueError("length must be a number or a string with a unit suffix")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ValueError("length must be a number or a string with a unit suffix")
    match = _LENGTH_PATTERN.match(value)
    if match is None:
        raise ValueError(f"cannot parse length {value!r}")
    unit = match.group("unit")
    scale = _LENGTH_UNITS.get(unit, _LENGTH_UNITS.get(unit.lower()))
    if scale is None:
        raise ValueError(f"unknown length unit {unit!r} in {value!r}")
    return float(match.group("value")) * scale


def format_length(meters: float) -> str:
    if meters >= 1e-6:
        return f"{meters / MICROMETER:.4g} um"
    if meters >= 1e-9:
        return f"{meters / NANOMETER:.4g} nm"
    return f"{meters / ANGSTROM:.4g} Å"


def attenuation(exponent: np.ndarray | float) -> np.ndarray:
    """Return ``exp(-exponent)``, exactly zero once the exponent exceeds the underflow bound."""

    exponent = np.asarray(exponent, dtype=float)
    safe = np.minimum(exponent, UNDERFLOW_EXPONENT)
    return np.where(exponent > UNDERFLOW_EXPONENT, 0.0, np.exp(-safe))


def sign_changes(values: Sequence[float]) -> list[int]:
    """Indices ``i`` where the sign flips between ``values[i]`` and the next nonzero value."""

    signs = np.sign(np.asarray(values, dtype=float))
    nonzero = [(index, sign) for index, sign in enumerate(signs) if sign != 0]
    changes: list[int] = []
    for (index, sign), (_, next_sign) in zip(nonzero, nonzero[1:]):
        if sign != next_sign:
            changes.append(index)
    return changes


def atomic_write_text(path: str | Path, payload: str) -> None:
    """Write ``payload`` to a temporary sibling of ``path`` and rename it into place."""

    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(payload)
        os.replace(tmp_name, target)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise


__all__ = [
    "atomic_write_text",
    "attenuation",
    "format_length",
    "parse_length",
    "sign_changes",
]
