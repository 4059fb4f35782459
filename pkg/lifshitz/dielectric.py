"""Dielectric functions on the imaginary frequency axis.

Every model maps an array of imaginary frequencies ``xi`` (rad/s) to the real
permittivity ``eps(i xi) >= 1``. Models are frozen dataclasses and may be shared
between threads.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, ClassVar, Iterator, Union

import numpy as np
import tomli
import tomli_w
from pydantic import ValidationError

from .constants import EV_TO_RAD_PER_S
from .errors import (
    DivergentStaticLimitError,
    DomainError,
    MaterialLibraryError,
    UnknownMaterialError,
)
from .schema import MATERIAL_ADAPTER, DrudeSpec, LibraryDocument, OscillatorSpec, TabulatedSpec

DEFAULT_LIBRARY = "default.matlib"


class Metallic(enum.Enum):
    """Marker returned by :func:`static_limit` for models whose ε(0) diverges."""

    METALLIC = "metallic"

    def __repr__(self) -> str:
        return "METALLIC"


METALLIC = Metallic.METALLIC


@dataclass(frozen=True, slots=True)
class OscillatorTerm:
    strength: float
    frequency: float
    damping: float = 0.0

    def __post_init__(self) -> None:
        if not self.strength > 0:
            raise DomainError(f"oscillator strength must be > 0, got {self.strength}")
        if not self.frequency > 0:
            raise DomainError(f"oscillator frequency must be > 0, got {self.frequency}")
        if not self.damping >= 0:
            raise DomainError(f"oscillator damping must be >= 0, got {self.damping}")


@dataclass(frozen=True, slots=True)
class OscillatorModel:
    """ε(iξ) = 1 + Σ C ω² / (ω² + g ξ + ξ²)."""

    terms: tuple[OscillatorTerm, ...] = ()

    is_metallic: ClassVar[bool] = False

    def epsilon(self, xi: np.ndarray) -> np.ndarray:
        eps = np.ones_like(xi, dtype=float)
        for term in self.terms:
            w2 = term.frequency * term.frequency
            eps = eps + term.strength * w2 / (w2 + term.damping * xi + xi * xi)
        return eps

    def static(self) -> float:
        return 1.0 + sum(term.strength for term in self.terms)

    def characteristic_frequencies(self) -> tuple[float, ...]:
        return tuple(term.frequency for term in self.terms)


@dataclass(frozen=True, slots=True)
class DrudeModel:
    """ε(iξ) = 1 + ω_p² / (ξ (ξ + ν)); divergent at ξ = 0."""

    plasma_frequency: float
    relaxation_rate: float = 0.0

    is_metallic: ClassVar[bool] = True

    def __post_init__(self) -> None:
        if not self.plasma_frequency > 0:
            raise DomainError(f"plasma frequency must be > 0, got {self.plasma_frequency}")
        if not self.relaxation_rate >= 0:
            raise DomainError(f"relaxation rate must be >= 0, got {self.relaxation_rate}")

    def epsilon(self, xi: np.ndarray) -> np.ndarray:
        return 1.0 + self.plasma_frequency**2 / (xi * (xi + self.relaxation_rate))

    def static(self) -> Metallic:
        return METALLIC

    def characteristic_frequencies(self) -> tuple[float, ...]:
        if self.relaxation_rate > 0:
            return (self.plasma_frequency, self.relaxation_rate)
        return (self.plasma_frequency,)


@dataclass(frozen=True, slots=True)
class TabulatedModel:
    """Sampled ε(iξ), interpolated linearly in (ln ξ, ln(ε − 1)).

    Outside the sampled range the end values are used and a warning is issued.
    """

    xi: tuple[float, ...]
    eps: tuple[float, ...]
    _log_xi: np.ndarray = field(init=False, repr=False, compare=False)
    _log_excess: np.ndarray = field(init=False, repr=False, compare=False)

    is_metallic: ClassVar[bool] = False

    def __post_init__(self) -> None:
        xi = np.asarray(self.xi, dtype=float)
        eps = np.asarray(self.eps, dtype=float)
        if xi.ndim != 1 or xi.shape != eps.shape or xi.size < 2:
            raise DomainError("tabulated model needs at least two (xi, eps) samples")
        if np.any(xi <= 0) or np.any(np.diff(xi) <= 0):
            raise DomainError("tabulated frequencies must be positive and strictly increasing")
        if np.any(eps < 1.0):
            raise DomainError("tabulated permittivities must be >= 1")
        object.__setattr__(self, "_log_xi", np.log(xi))
        object.__setattr__(self, "_log_excess", np.log(np.maximum(eps - 1.0, 1e-300)))

    def epsilon(self, xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        samples = np.asarray(self.xi)
        values = np.asarray(self.eps)
        outside = (xi < samples[0]) | (xi > samples[-1])
        if np.any(outside):
            warnings.warn(
                "tabulated dielectric data evaluated outside its sample range; "
                "using the end values",
                stacklevel=3,
            )
        with np.errstate(divide="ignore"):
            log_xi = np.log(np.clip(xi, samples[0], samples[-1]))
        eps = 1.0 + np.exp(np.interp(log_xi, self._log_xi, self._log_excess))
        index = np.searchsorted(samples, xi)
        index = np.clip(index, 0, samples.size - 1)
        exact = samples[index] == xi
        eps = np.where(exact, values[index], eps)
        eps = np.where(xi < samples[0], values[0], eps)
        return np.where(xi > samples[-1], values[-1], eps)

    def static(self) -> float:
        return float(self.eps[0])

    def characteristic_frequencies(self) -> tuple[float, ...]:
        return (self.xi[0], self.xi[-1])


@dataclass(frozen=True, slots=True)
class CompositeModel:
    """Sum of susceptibilities: ε = 1 + Σ (ε_c − 1)."""

    components: tuple["DielectricModel", ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise DomainError("composite model needs at least one component")

    @property
    def is_metallic(self) -> bool:
        return any(component.is_metallic for component in self.components)

    def epsilon(self, xi: np.ndarray) -> np.ndarray:
        eps = np.ones_like(xi, dtype=float)
        for component in self.components:
            eps = eps + (component.epsilon(xi) - 1.0)
        return eps

    def static(self) -> float | Metallic:
        if self.is_metallic:
            return METALLIC
        return 1.0 + sum(float(component.static()) - 1.0 for component in self.components)  # type: ignore[arg-type]

    def characteristic_frequencies(self) -> tuple[float, ...]:
        return tuple(f for component in self.components for f in component.characteristic_frequencies())


DielectricModel = Union[OscillatorModel, DrudeModel, TabulatedModel, CompositeModel]


def eval_epsilon(model: DielectricModel, xi: float | np.ndarray) -> Any:
    """Evaluate ε(iξ); returns a float for scalar ``xi`` and an array otherwise."""

    values = np.asarray(xi, dtype=float)
    if np.any(np.isnan(values)) or np.any(values < 0):
        raise DomainError("imaginary frequency xi must be >= 0")
    if model.is_metallic and np.any(values == 0):
        raise DivergentStaticLimitError(
            "metallic model has a divergent static limit at xi = 0; use static_limit()"
        )
    eps = model.epsilon(values)
    if np.ndim(xi) == 0:
        return float(eps)
    return eps


def static_limit(model: DielectricModel) -> float | Metallic:
    """ε(0) for insulators, :data:`METALLIC` for Drude-type models."""

    return model.static()


@dataclass(frozen=True, slots=True)
class Material:
    name: str
    model: DielectricModel
    source: str = ""

    @property
    def static(self) -> float | Metallic:
        return static_limit(self.model)

    @property
    def is_metallic(self) -> bool:
        return bool(self.model.is_metallic)

    def epsilon(self, xi: float | np.ndarray) -> Any:
        return eval_epsilon(self.model, xi)


class MaterialLibrary:
    """Named materials; names are unique."""

    def __init__(self, materials: list[Material] | None = None) -> None:
        self._materials: dict[str, Material] = {}
        for material in materials or []:
            self.add(material)

    def add(self, material: Material) -> None:
        if material.name in self._materials:
            raise MaterialLibraryError(f"duplicate material name {material.name!r}")
        self._materials[material.name] = material

    def __getitem__(self, name: str) -> Material:
        try:
            return self._materials[name]
        except KeyError:
            known = ", ".join(sorted(self._materials)) or "none"
            raise UnknownMaterialError(f"unknown material {name!r} (known: {known})") from None

    def __contains__(self, name: object) -> bool:
        return name in self._materials

    def __iter__(self) -> Iterator[Material]:
        return iter(self._materials.values())

    def __len__(self) -> int:
        return len(self._materials)

    def names(self) -> list[str]:
        return list(self._materials)

    def to_document(self) -> dict[str, Any]:
        return {"material": [_material_to_entry(material) for material in self]}

    def to_toml(self) -> str:
        return tomli_w.dumps(self.to_document())


def _term_from_spec(term: Any) -> OscillatorTerm:
    return OscillatorTerm(
        strength=term.strength,
        frequency=term.frequency_eV * EV_TO_RAD_PER_S,
        damping=term.damping_eV * EV_TO_RAD_PER_S,
    )


def _term_to_entry(term: OscillatorTerm) -> dict[str, float]:
    return {
        "strength": term.strength,
        "frequency_eV": term.frequency / EV_TO_RAD_PER_S,
        "damping_eV": term.damping / EV_TO_RAD_PER_S,
    }


def material_from_spec(spec: OscillatorSpec | DrudeSpec | TabulatedSpec) -> Material:
    model: DielectricModel
    if isinstance(spec, OscillatorSpec):
        model = OscillatorModel(tuple(_term_from_spec(term) for term in spec.terms))
    elif isinstance(spec, DrudeSpec):
        drude = DrudeModel(
            plasma_frequency=spec.plasma_frequency_eV * EV_TO_RAD_PER_S,
            relaxation_rate=spec.relaxation_rate_eV * EV_TO_RAD_PER_S,
        )
        if spec.terms:
            interband = OscillatorModel(tuple(_term_from_spec(term) for term in spec.terms))
            model = CompositeModel((drude, interband))
        else:
            model = drude
    else:
        model = TabulatedModel(
            xi=tuple(xi_ev * EV_TO_RAD_PER_S for xi_ev, _ in spec.samples),
            eps=tuple(eps for _, eps in spec.samples),
        )
    return Material(name=spec.name, model=model, source=spec.source)


def _material_to_entry(material: Material) -> dict[str, Any]:
    model = material.model
    entry: dict[str, Any] = {"name": material.name}
    if isinstance(model, OscillatorModel):
        entry["kind"] = "oscillator"
        entry["terms"] = [_term_to_entry(term) for term in model.terms]
    elif isinstance(model, DrudeModel):
        entry.update(_drude_entry(model, ()))
    elif isinstance(model, TabulatedModel):
        entry["kind"] = "tabulated"
        entry["samples"] = [[xi / EV_TO_RAD_PER_S, eps] for xi, eps in zip(model.xi, model.eps)]
    elif _is_drude_with_interband(model):
        drude, interband = model.components  # type: ignore[misc]
        entry.update(_drude_entry(drude, interband.terms))  # type: ignore[union-attr]
    else:
        raise MaterialLibraryError(
            f"material {material.name!r}: composite models other than Drude plus "
            "oscillators cannot be written to a library file"
        )
    entry["source"] = material.source
    return entry


def _is_drude_with_interband(model: DielectricModel) -> bool:
    return (
        isinstance(model, CompositeModel)
        and len(model.components) == 2
        and isinstance(model.components[0], DrudeModel)
        and isinstance(model.components[1], OscillatorModel)
    )


def _drude_entry(model: DrudeModel, terms: tuple[OscillatorTerm, ...]) -> dict[str, Any]:
    return {
        "kind": "drude",
        "plasma_frequency_eV": model.plasma_frequency / EV_TO_RAD_PER_S,
        "relaxation_rate_eV": model.relaxation_rate / EV_TO_RAD_PER_S,
        "terms": [_term_to_entry(term) for term in terms],
    }


def library_from_document(data: dict[str, Any]) -> MaterialLibrary:
    try:
        document = LibraryDocument.model_validate(data)
    except ValidationError as exc:
        raise MaterialLibraryError(f"library document: {_describe_validation(exc)}") from exc
    library = MaterialLibrary()
    for index, raw in enumerate(document.material):
        name = str(raw.get("name", f"#{index}"))
        try:
            spec = MATERIAL_ADAPTER.validate_python(raw)
        except ValidationError as exc:
            raise MaterialLibraryError(f"material {name!r}: {_describe_validation(exc)}") from exc
        if spec.name in library:
            raise MaterialLibraryError(f"material {spec.name!r}: duplicate name")
        try:
            library.add(material_from_spec(spec))
        except DomainError as exc:
            raise MaterialLibraryError(f"material {spec.name!r}: {exc}") from exc
    return library


def _describe_validation(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        loc = [str(item) for item in error.get("loc", ())]
        if loc and loc[0] in {"oscillator", "drude", "tabulated"}:
            loc = loc[1:]
        field_name = ".".join(loc) or "<entry>"
        parts.append(f"field {field_name!r}: {error.get('msg', 'invalid value')}")
    return "; ".join(parts)


def load_material_library(path: str | Path) -> MaterialLibrary:
    file_path = Path(path)
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MaterialLibraryError(f"cannot read material library {file_path}: {exc}") from exc
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise MaterialLibraryError(f"parse error in {file_path}: {exc}") from exc
    return library_from_document(data)


def save_material_library(library: MaterialLibrary, path: str | Path) -> None:
    file_path = Path(path)
    try:
        file_path.write_text(library.to_toml(), encoding="utf-8")
    except OSError as exc:
        raise MaterialLibraryError(f"cannot write material library {file_path}: {exc}") from exc


def default_library() -> MaterialLibrary:
    """The literature-sourced library shipped with the package."""

    text = resources.files("lifshitz").joinpath("materials", DEFAULT_LIBRARY).read_text("utf-8")
    return library_from_document(tomli.loads(text))


__all__ = [
    "CompositeModel",
    "DielectricModel",
    "DrudeModel",
    "METALLIC",
    "Material",
    "MaterialLibrary",
    "Metallic",
    "OscillatorModel",
    "OscillatorTerm",
    "TabulatedModel",
    "default_library",
    "eval_epsilon",
    "library_from_document",
    "load_material_library",
    "material_from_spec",
    "save_material_library",
    "static_limit",
]
