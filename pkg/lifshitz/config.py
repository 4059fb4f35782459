"""Run configuration files.

A run file is TOML::

    name = "gold-in-toluene"
    [stack]
    left = "silica"
    left_films = [{ material = "gold", thickness = "20 Å" }]
    gap = "toluene"
    right = "silica"
    [grid]
    min = "2 Å"
    max = "50 Å"
    count = 25
    spacing = "log"
    [solver]
    temperature = 300.0
"""

from __future__ import annotations

from pathlib import Path
from typing import Annotated, Any, Literal, Optional

import numpy as np
import tomli
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PrivateAttr,
    ValidationError,
    field_validator,
    model_validator,
)

from .constants import ANGSTROM
from .dielectric import MaterialLibrary, default_library, load_material_library
from .energy import SolverConfig
from .errors import ConfigError, UnknownMaterialError
from .stack import Layer, LayerStack, Side
from .utils import parse_length

Length = Annotated[float, BeforeValidator(parse_length), Field(gt=0, allow_inf_nan=False)]


class FilmSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    material: str
    thickness: Length


class StackSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    left: str
    left_films: list[FilmSpec] = Field(default_factory=list)
    gap: str
    right_films: list[FilmSpec] = Field(default_factory=list)
    right: str


class GridSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    min: Length
    max: Length
    count: int = Field(ge=1)
    spacing: Literal["linear", "log"] = "log"

    @model_validator(mode="after")
    def _check_range(self) -> "GridSpec":
        if self.count == 1 and self.max != self.min:
            raise ValueError("a one-point grid needs min == max")
        if self.count > 1 and not self.min < self.max:
            raise ValueError("min must be smaller than max")
        return self

    def separations(self) -> list[float]:
        if self.count == 1:
            return [self.min]
        if self.spacing == "log":
            values = np.geomspace(self.min, self.max, self.count)
        else:
            values = np.linspace(self.min, self.max, self.count)
        return [float(value) for value in values]


class LevitationSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    thicknesses: list[Length] = Field(min_length=1)
    bracket: tuple[Length, Length] = (2 * ANGSTROM, 200 * ANGSTROM)
    side: Optional[Side] = None
    scan_points: int = Field(default=12, ge=2)

    @field_validator("thicknesses")
    @classmethod
    def _check_thicknesses(cls, values: list[float]) -> list[float]:
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("thicknesses must be strictly increasing")
        return values

    @field_validator("bracket")
    @classmethod
    def _check_bracket(cls, value: tuple[float, float]) -> tuple[float, float]:
        if not value[0] < value[1]:
            raise ValueError("bracket lower end must be below the upper end")
        return value


class OutputSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    path: Optional[Path] = None
    report: Optional[Path] = None


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "run"
    materials: Optional[Path] = None
    stack: StackSpec
    grid: Optional[GridSpec] = None
    solver: SolverConfig = Field(default_factory=SolverConfig)
    levitation: Optional[LevitationSpec] = None
    output: OutputSpec = Field(default_factory=OutputSpec)
    threads: int = Field(default=1, ge=1)

    _base_dir: Path = PrivateAttr(default_factory=Path.cwd)

    def resolve(self, path: Path) -> Path:
        return path if path.is_absolute() else self._base_dir / path

    def library(self, override: Path | None = None) -> MaterialLibrary:
        """The material library named by ``override``, the config, or the shipped default."""

        if override is not None:
            return load_material_library(override)
        if self.materials is not None:
            return load_material_library(self.resolve(self.materials))
        return default_library()

    def build_stack(self, library: MaterialLibrary, separation: float | None = None) -> LayerStack:
        """Stack template at ``separation`` (default: the first grid point or the bracket start)."""

        if separation is None:
            if self.grid is not None:
                separation = self.grid.separations()[0]
            elif self.levitation is not None:
                separation = self.levitation.bracket[0]
            else:
                raise ConfigError("field 'grid': needed to place the stack")
        spec = self.stack
        return LayerStack(
            left_halfspace=_lookup(library, spec.left, "stack.left"),
            left_films=tuple(
                Layer(_lookup(library, film.material, f"stack.left_films.{i}.material"), film.thickness)
                for i, film in enumerate(spec.left_films)
            ),
            gap=_lookup(library, spec.gap, "stack.gap"),
            separation=separation,
            right_films=tuple(
                Layer(_lookup(library, film.material, f"stack.right_films.{i}.material"), film.thickness)
                for i, film in enumerate(spec.right_films)
            ),
            right_halfspace=_lookup(library, spec.right, "stack.right"),
        )


def _lookup(library: MaterialLibrary, name: str, field_name: str) -> Any:
    try:
        return library[name]
    except UnknownMaterialError as exc:
        raise ConfigError(f"field {field_name!r}: {exc}") from exc


def _describe(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        location = ".".join(str(item) for item in error.get("loc", ())) or "<root>"
        parts.append(f"field {location!r}: {error.get('msg', 'invalid value')}")
    return "; ".join(parts)


def parse_run_config(data: dict[str, Any], base_dir: Path | None = None) -> RunConfig:
    try:
        config = RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(_describe(exc)) from exc
    if base_dir is not None:
        config._base_dir = base_dir
    return config


def load_run_config(path: str | Path) -> RunConfig:
    file_path = Path(path)
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read run config {file_path}: {exc}") from exc
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"parse error in {file_path}: {exc}") from exc
    try:
        return parse_run_config(data, base_dir=file_path.resolve().parent)
    except ConfigError as exc:
        raise ConfigError(f"{file_path}: {exc}") from exc


__all__ = [
    "FilmSpec",
    "GridSpec",
    "LevitationSpec",
    "Length",
    "OutputSpec",
    "RunConfig",
    "StackSpec",
    "load_run_config",
    "parse_run_config",
]
