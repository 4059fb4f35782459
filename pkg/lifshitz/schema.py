"""Pydantic schema of the material-library document.

A library is a TOML document with one ``[[material]]`` table per entry.
Frequencies are given in eV, the convention of the optical-data literature.
"""

from __future__ import annotations

from typing import Annotated, Any, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator


class OscillatorTermSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    strength: float = Field(gt=0)
    frequency_eV: float = Field(gt=0)
    damping_eV: float = Field(default=0.0, ge=0)


class _EntryBase(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = Field(min_length=1)
    source: str = ""


class OscillatorSpec(_EntryBase):
    kind: Literal["oscillator"]
    terms: list[OscillatorTermSpec] = Field(default_factory=list)


class DrudeSpec(_EntryBase):
    """Drude metal; optional ``terms`` add interband oscillators to it."""

    kind: Literal["drude"]
    plasma_frequency_eV: float = Field(gt=0)
    relaxation_rate_eV: float = Field(default=0.0, ge=0)
    terms: list[OscillatorTermSpec] = Field(default_factory=list)


class TabulatedSpec(_EntryBase):
    kind: Literal["tabulated"]
    samples: list[tuple[float, float]] = Field(min_length=2)

    @field_validator("samples")
    @classmethod
    def _check_samples(cls, samples: list[tuple[float, float]]) -> list[tuple[float, float]]:
        previous = 0.0
        for xi_ev, eps in samples:
            if xi_ev <= previous:
                raise ValueError("sample frequencies must be positive and strictly increasing")
            if eps < 1.0:
                raise ValueError("sample permittivities must be >= 1")
            previous = xi_ev
        return samples


MaterialSpec = Annotated[
    Union[OscillatorSpec, DrudeSpec, TabulatedSpec], Field(discriminator="kind")
]

MATERIAL_ADAPTER: TypeAdapter[Any] = TypeAdapter(MaterialSpec)


class LibraryDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    material: list[dict[str, Any]] = Field(default_factory=list)


__all__ = [
    "DrudeSpec",
    "LibraryDocument",
    "MATERIAL_ADAPTER",
    "MaterialSpec",
    "OscillatorSpec",
    "OscillatorTermSpec",
    "TabulatedSpec",
]
