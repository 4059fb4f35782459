"""Planar layer geometry and reflection coefficients on the imaginary frequency axis.

Everything here is evaluated at imaginary frequency ``xi`` where all quantities
are real. Wave numbers enter through the normal wave vector ``q = gamma * k``
so that interface and film factors stay regular as ``k -> 0``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Any, NamedTuple, Sequence

import numpy as np

from .constants import C
from .dielectric import Material, eval_epsilon
from .errors import DomainError
from .utils import attenuation, format_length


class Polarization(str, enum.Enum):
    TM = "TM"
    TE = "TE"


class Side(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True, slots=True)
class Layer:
    material: Material
    thickness: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.thickness) and self.thickness > 0):
            raise DomainError(
                f"film {self.material.name!r}: thickness must be finite and > 0, "
                f"got {self.thickness}"
            )

    def describe(self) -> str:
        return f"{self.material.name}({format_length(self.thickness)})"


@dataclass(frozen=True, slots=True, kw_only=True)
class LayerStack:
    """left_halfspace | left_films | gap(separation) | right_films | right_halfspace.

    ``left_films`` runs outward-in (its last film touches the gap);
    ``right_films`` runs inward-out (its first film touches the gap).
    """

    left_halfspace: Material
    left_films: tuple[Layer, ...] = ()
    gap: Material
    separation: float
    right_films: tuple[Layer, ...] = ()
    right_halfspace: Material

    def __post_init__(self) -> None:
        object.__setattr__(self, "left_films", tuple(self.left_films))
        object.__setattr__(self, "right_films", tuple(self.right_films))
        if not (np.isfinite(self.separation) and self.separation > 0):
            raise DomainError(f"separation must be finite and > 0, got {self.separation}")

    def with_separation(self, separation: float) -> "LayerStack":
        return replace(self, separation=separation)

    def with_film_thickness(self, thickness: float, side: Side | str | None = None) -> "LayerStack":
        """Copy with the gap-adjacent film on ``side`` resized.

        Without ``side`` the left film is used when present, otherwise the right one.
        """

        chosen = self.coated_side() if side is None else Side(side)
        if chosen is Side.LEFT:
            if not self.left_films:
                raise DomainError("stack has no film on the left side")
            films = self.left_films[:-1] + (Layer(self.left_films[-1].material, thickness),)
            return replace(self, left_films=films)
        if not self.right_films:
            raise DomainError("stack has no film on the right side")
        films = (Layer(self.right_films[0].material, thickness),) + self.right_films[1:]
        return replace(self, right_films=films)

    def coated_side(self) -> Side:
        if self.left_films:
            return Side.LEFT
        if self.right_films:
            return Side.RIGHT
        raise DomainError("stack has no films")

    def mirrored(self) -> "LayerStack":
        return LayerStack(
            left_halfspace=self.right_halfspace,
            left_films=tuple(reversed(self.right_films)),
            gap=self.gap,
            separation=self.separation,
            right_films=tuple(reversed(self.left_films)),
            right_halfspace=self.left_halfspace,
        )

    def left_side(self) -> list[Material | Layer]:
        """Media seen from the gap looking left, ending with the half-space."""

        return [*reversed(self.left_films), self.left_halfspace]

    def right_side(self) -> list[Material | Layer]:
        return [*self.right_films, self.right_halfspace]

    def materials(self) -> list[Material]:
        found: dict[str, Material] = {}
        for medium in (self.gap, *self.left_side(), *self.right_side()):
            material = medium.material if isinstance(medium, Layer) else medium
            found.setdefault(material.name, material)
        return list(found.values())

    def describe(self) -> str:
        parts = [self.left_halfspace.name]
        parts += [film.describe() for film in self.left_films]
        parts.append(f"{self.gap.name}[{format_length(self.separation)}]")
        parts += [film.describe() for film in self.right_films]
        parts.append(self.right_halfspace.name)
        return "|".join(parts)


def _check_wavenumber(k: Any) -> np.ndarray:
    values = np.asarray(k, dtype=float)
    if np.any(~(values > 0)):
        raise DomainError("in-plane wave number k must be > 0")
    return values


def _check_frequency(xi: Any) -> np.ndarray:
    values = np.asarray(xi, dtype=float)
    if np.any(~(values >= 0)):
        raise DomainError("imaginary frequency xi must be >= 0")
    return values


def gamma(epsilon: Any, xi: Any, k: Any) -> Any:
    """γ = √(1 + ε (ξ / c k)²), the imaginary-axis form of the normal-wave-vector factor."""

    k_values = _check_wavenumber(k)
    xi_values = _check_frequency(xi)
    ratio = xi_values / (C * k_values)
    result = np.sqrt(1.0 + np.asarray(epsilon, dtype=float) * ratio * ratio)
    return float(result) if np.ndim(result) == 0 else result


def normal_wavevector(epsilon: np.ndarray, xi: np.ndarray, k: np.ndarray) -> np.ndarray:
    """γ k = √(k² + ε ξ² / c²)."""

    return np.sqrt(k * k + epsilon * (xi / C) ** 2)


def fresnel(pol: Polarization | str, eps_i: Any, gamma_i: Any, eps_j: Any, gamma_j: Any) -> Any:
    """Reflection amplitude for a wave in medium i hitting medium j.

    The γ arguments may equally be normal wave vectors γk: only their ratio enters.
    """

    pol = Polarization(pol)
    gamma_i = np.asarray(gamma_i, dtype=float)
    gamma_j = np.asarray(gamma_j, dtype=float)
    if pol is Polarization.TM:
        eps_i = np.asarray(eps_i, dtype=float)
        eps_j = np.asarray(eps_j, dtype=float)
        result = (eps_j * gamma_i - eps_i * gamma_j) / (eps_j * gamma_i + eps_i * gamma_j)
    else:
        result = (gamma_i - gamma_j) / (gamma_i + gamma_j)
    return float(result) if np.ndim(result) == 0 else result


def _static_tm(eps_i: np.ndarray, eps_j: np.ndarray) -> np.ndarray:
    """TM reflection at ξ = 0 where γ = 1; infinite ε marks a metal."""

    metal_i = np.isinf(eps_i)
    metal_j = np.isinf(eps_j)
    with np.errstate(invalid="ignore"):
        dielectric = (eps_j - eps_i) / (eps_j + eps_i)
    return np.where(
        metal_i & metal_j, 0.0, np.where(metal_j, 1.0, np.where(metal_i, -1.0, dielectric))
    )


class _Medium(NamedTuple):
    eps: np.ndarray
    q: np.ndarray
    thickness: float | None


def _interface(pol: Polarization, incoming: _Medium, outgoing: _Medium, static: bool) -> np.ndarray:
    if static:
        if pol is Polarization.TE:
            return np.zeros(np.broadcast(incoming.q, outgoing.q).shape)
        tm = _static_tm(incoming.eps, outgoing.eps)
        return np.broadcast_to(tm, np.broadcast(tm, incoming.q, outgoing.q).shape)
    return np.asarray(fresnel(pol, incoming.eps, incoming.q, outgoing.eps, outgoing.q))


def _fold(pol: Polarization, media: Sequence[_Medium], static: bool) -> np.ndarray:
    """Effective reflection of ``media[1:]`` seen from ``media[0]``.

    Films are folded in from the half-space outward with the composite
    coefficient r_ijk = (r_ij + e r_jk) / (1 + e r_ij r_jk), e = exp(-2 q_j d_j).
    """

    r = _interface(pol, media[-2], media[-1], static)
    for index in range(len(media) - 2, 0, -1):
        film = media[index]
        r_front = _interface(pol, media[index - 1], film, static)
        factor = attenuation(2.0 * film.q * film.thickness)  # type: ignore[operator]
        r = (r_front + factor * r) / (1.0 + factor * r_front * r)
    return r


class _Evaluator:
    """Permittivities and normal wave vectors of every medium for one (ξ, k) batch."""

    def __init__(self, xi: np.ndarray, k: np.ndarray, *, retarded: bool) -> None:
        self.xi = xi
        self.k = k
        self.retarded = retarded
        self.static = bool(np.all(xi == 0))
        if not self.static and np.any(xi == 0):
            raise DomainError("zero and non-zero frequencies cannot be mixed in one batch")
        self._cache: dict[Material, tuple[np.ndarray, np.ndarray]] = {}

    def _material(self, material: Material) -> tuple[np.ndarray, np.ndarray]:
        cached = self._cache.get(material)
        if cached is not None:
            return cached
        if self.static:
            value = material.static
            eps = np.asarray(np.inf if not isinstance(value, float) else value)
            q = self.k
        else:
            eps = np.asarray(eval_epsilon(material.model, self.xi), dtype=float)
            q = normal_wavevector(eps, self.xi, self.k) if self.retarded else self.k
        self._cache[material] = (eps, q)
        return eps, q

    def medium(self, medium: Material | Layer) -> _Medium:
        if isinstance(medium, Layer):
            eps, q = self._material(medium.material)
            return _Medium(eps, q, medium.thickness)
        eps, q = self._material(medium)
        return _Medium(eps, q, None)


class RoundTrip(NamedTuple):
    """Gap wave vector and the products r_left r_right per polarization."""

    q_gap: np.ndarray
    tm: np.ndarray
    te: np.ndarray


def round_trip(stack: LayerStack, xi: Any, k: Any, *, retarded: bool = True) -> RoundTrip:
    """Vectorised gap reflections; ``xi`` and ``k`` broadcast against each other.

    A batch with ``xi == 0`` everywhere uses static permittivities (metals reflect TM fully)
    and returns a vanishing TE product.
    """

    evaluator = _Evaluator(_check_frequency(xi), _check_wavenumber(k), retarded=retarded)
    gap = evaluator.medium(stack.gap)
    left = [gap, *(evaluator.medium(m) for m in stack.left_side())]
    right = [gap, *(evaluator.medium(m) for m in stack.right_side())]
    products = {
        pol: _fold(pol, left, evaluator.static) * _fold(pol, right, evaluator.static)
        for pol in Polarization
    }
    return RoundTrip(gap.q, products[Polarization.TM], products[Polarization.TE])


def composite_reflection(
    pol: Polarization | str,
    outer: Material,
    film: Layer,
    inner: Material,
    xi: Any,
    k: Any,
    *,
    retarded: bool = True,
) -> Any:
    """r_ijk of a film ``film`` on ``inner`` seen from ``outer``."""

    evaluator = _Evaluator(_check_frequency(xi), _check_wavenumber(k), retarded=retarded)
    media = [evaluator.medium(outer), evaluator.medium(film), evaluator.medium(inner)]
    result = _fold(Polarization(pol), media, evaluator.static)
    return float(result) if np.ndim(result) == 0 else result


def side_reflection(
    pol: Polarization | str, stack: LayerStack, side: Side | str, xi: Any, k: Any, *, retarded: bool = True
) -> Any:
    """Effective reflection of one side of ``stack`` seen from the gap."""

    evaluator = _Evaluator(_check_frequency(xi), _check_wavenumber(k), retarded=retarded)
    media = stack.left_side() if Side(side) is Side.LEFT else stack.right_side()
    result = _fold(
        Polarization(pol),
        [evaluator.medium(stack.gap), *(evaluator.medium(m) for m in media)],
        evaluator.static,
    )
    return float(result) if np.ndim(result) == 0 else result


def mode_condition(
    pol: Polarization | str, stack: LayerStack, xi: Any, k: Any, *, retarded: bool = True
) -> Any:
    """f_k(iξ) = 1 − exp(−2 γ_gap k d) r_left r_right."""

    pol = Polarization(pol)
    trip = round_trip(stack, xi, k, retarded=retarded)
    product = trip.tm if pol is Polarization.TM else trip.te
    result = 1.0 - attenuation(2.0 * trip.q_gap * stack.separation) * product
    return float(result) if np.ndim(result) == 0 else result


__all__ = [
    "Layer",
    "LayerStack",
    "Polarization",
    "RoundTrip",
    "Side",
    "composite_reflection",
    "fresnel",
    "gamma",
    "mode_condition",
    "normal_wavevector",
    "round_trip",
    "side_reflection",
]
