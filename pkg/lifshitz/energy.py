"""Interaction free energy and pressure per unit area between planar stacks.

For every imaginary frequency the in-plane wave-number integral is taken over
``y = 2 γ_gap k d``; with ``y = y0 + t`` and ``t = span * s**2`` the integrand
becomes smooth and decays like ``exp(-t)``. Finite temperature sums the
Matsubara frequencies with the ``n = 0`` term halved; zero temperature
integrates over ``ln ξ``.

Sign convention: E < 0 attraction, E > 0 repulsion, P = −∂E/∂d.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import orjson
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from .constants import C, HBAR, K_B, matsubara_spacing
from .dielectric import eval_epsilon
from .errors import DomainError
from .quadrature import panel_rule, squared_rule
from .stack import LayerStack, round_trip
from .utils import attenuation

logger = logging.getLogger(__name__)

_TINY = 1e-300


class SolverConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    temperature: float = Field(default=300.0, ge=0, description="Kelvin")
    retarded: bool = True
    rel_tol: float = Field(default=1e-8, gt=0, lt=1)
    k_quadrature_order: int = Field(default=64, ge=2)
    max_k_panels: int = Field(default=64, ge=1)
    xi_quadrature_order: int = Field(default=32, ge=2)
    matsubara_rel_cutoff: float = Field(default=1e-10, gt=0, lt=1)
    matsubara_max_n: int = Field(default=10_000_000, ge=1)
    matsubara_block: int = Field(default=512, ge=3)

    def updated(self, **changes: Any) -> "SolverConfig":
        return self.model_validate({**self.model_dump(), **changes})


class Quantity(str, enum.Enum):
    ENERGY = "energy"
    PRESSURE = "pressure"


@dataclass(frozen=True, slots=True)
class EnergyResult:
    """A converged-or-flagged energy (J/m²) or pressure (N/m²)."""

    value: float
    converged: bool = True
    matsubara_terms: int = 0
    tail_estimate: float = 0.0
    message: str = ""

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True, slots=True)
class CurvePoint:
    separation: float
    free_energy: float
    pressure: float
    converged: bool


@dataclass(slots=True)
class EnergyCurve:
    points: list[CurvePoint]
    stack: str
    config: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        separations = [point.separation for point in self.points]
        if any(b <= a for a, b in zip(separations, separations[1:])):
            raise DomainError("curve separations must be strictly increasing")

    @property
    def separations(self) -> np.ndarray:
        return np.array([point.separation for point in self.points])

    @property
    def energies(self) -> np.ndarray:
        return np.array([point.free_energy for point in self.points])

    @property
    def pressures(self) -> np.ndarray:
        return np.array([point.pressure for point in self.points])

    @property
    def converged(self) -> bool:
        return all(point.converged for point in self.points)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "separation_m": self.separations,
                "free_energy_J_per_m2": self.energies,
                "pressure_N_per_m2": self.pressures,
                "converged": [point.converged for point in self.points],
            }
        )

    def as_dict(self) -> dict[str, Any]:
        return {
            "stack": self.stack,
            "config": dict(self.config),
            "points": [
                {
                    "separation_m": point.separation,
                    "free_energy_J_per_m2": point.free_energy,
                    "pressure_N_per_m2": point.pressure,
                    "converged": point.converged,
                }
                for point in self.points
            ],
        }

    def to_json(self) -> str:
        return orjson.dumps(self.as_dict(), option=orjson.OPT_INDENT_2).decode()


def _k_span(config: SolverConfig) -> float:
    base = math.log(100.0 / config.rel_tol)
    return base + 2.0 * math.log1p(base)


def _gap_offset(stack: LayerStack, xi: np.ndarray, retarded: bool) -> np.ndarray:
    """y0 = 2 d √ε_gap ξ / c, the lower end of the y integral."""

    if not retarded or np.all(xi == 0):
        return np.zeros_like(xi)
    eps_gap = eval_epsilon(stack.gap.model, xi)
    return 2.0 * stack.separation * np.sqrt(eps_gap) * xi / C


def _k_rule(
    stack: LayerStack, xi: np.ndarray, config: SolverConfig, quantity: Quantity, panels: int
) -> np.ndarray:
    """Per-frequency k integral with a fixed rule; rows follow ``xi``."""

    d = stack.separation
    t, w = squared_rule(_k_span(config), panels=panels, order=config.k_quadrature_order)
    xi_col = xi[:, None]
    y0 = _gap_offset(stack, xi, config.retarded)[:, None]
    k = np.sqrt(t[None, :] * (t[None, :] + 2.0 * y0)) / (2.0 * d)
    trip = round_trip(stack, xi_col if not np.all(xi == 0) else 0.0, k, retarded=config.retarded)
    y = y0 + t[None, :]
    decay = attenuation(y)
    if quantity is Quantity.ENERGY:
        integrand = y * (np.log1p(-decay * trip.tm) + np.log1p(-decay * trip.te))
        scale = 1.0 / (8.0 * math.pi * d * d)
    else:
        integrand = y * y * (
            decay * trip.tm / (1.0 - decay * trip.tm) + decay * trip.te / (1.0 - decay * trip.te)
        )
        scale = -1.0 / (8.0 * math.pi * d**3)
    return scale * (integrand @ w)


def _k_integral(
    stack: LayerStack, xi: np.ndarray, config: SolverConfig, quantity: Quantity, panels: int
) -> tuple[np.ndarray, int, bool]:
    """Panel-doubling k integral; returns values, the panel count to start from next, and status."""

    coarse = _k_rule(stack, xi, config, quantity, panels)
    while True:
        fine = _k_rule(stack, xi, config, quantity, 2 * panels)
        scale = max(float(np.max(np.abs(fine), initial=0.0)), _TINY)
        if float(np.max(np.abs(fine - coarse), initial=0.0)) <= config.rel_tol * scale:
            return fine, panels, True
        if 2 * panels >= config.max_k_panels:
            logger.warning(
                "k quadrature not converged with %d panels for %s", 2 * panels, stack.describe()
            )
            return fine, panels, False
        panels *= 2
        coarse = fine


def _dielectric_ceiling(stack: LayerStack) -> float:
    frequencies = [f for m in stack.materials() for f in m.model.characteristic_frequencies()]
    return 10.0 * max(frequencies, default=0.0)


def _retardation_ceiling(stack: LayerStack, config: SolverConfig) -> float:
    return _k_span(config) * C / (2.0 * stack.separation)


def _geometric_tail(terms: np.ndarray) -> float | None:
    """Tail of a geometrically decaying sequence from its last three terms, or None."""

    if terms.size < 3:
        return None
    a1, a2, a3 = (float(v) for v in terms[-3:])
    if a3 == 0.0:
        return 0.0
    if a1 == 0.0 or a2 == 0.0:
        return None
    first, second = a2 / a1, a3 / a2
    if not (0.0 < first < 1.0 and 0.0 < second < 1.0):
        return None
    return a3 * second / (1.0 - second)


def _require_temperature(config: SolverConfig, operation: str) -> None:
    if config.temperature <= 0:
        raise DomainError(f"{operation} needs T > 0; use energy_T0 for T = 0")


def _matsubara_sum(stack: LayerStack, config: SolverConfig, quantity: Quantity) -> EnergyResult:
    kT = K_B * config.temperature
    spacing = matsubara_spacing(config.temperature)
    zero, panels, k_ok = _k_integral(stack, np.zeros(1), config, quantity, 1)
    partials = [0.5 * float(zero[0])]
    ceiling = _dielectric_ceiling(stack)
    if config.retarded:
        ceiling = min(ceiling, _retardation_ceiling(stack, config))
    tail: float | None = None
    converged = False
    n = 1
    while n <= config.matsubara_max_n:
        count = min(config.matsubara_block, config.matsubara_max_n - n + 1)
        xi = spacing * np.arange(n, n + count, dtype=float)
        terms, panels, block_ok = _k_integral(stack, xi, config, quantity, panels)
        k_ok = k_ok and block_ok
        partials.append(math.fsum(terms))
        n += count
        total = math.fsum(partials)
        tail = _geometric_tail(terms)
        if tail is not None and xi[-1] >= ceiling:
            if abs(tail) <= config.matsubara_rel_cutoff * abs(total):
                converged = True
                break
    total = math.fsum(partials)
    message = ""
    if not converged:
        message = f"Matsubara cap of {config.matsubara_max_n} terms reached before convergence"
        logger.warning("%s for %s", message, stack.describe())
    elif not k_ok:
        message = "k quadrature did not reach rel_tol"
    logger.debug("%s: %d Matsubara terms for %s", quantity.value, n - 1, stack.describe())
    return EnergyResult(
        value=kT * total,
        converged=converged and k_ok,
        matsubara_terms=n - 1,
        tail_estimate=kT * (tail or 0.0),
        message=message,
    )


def _frequency_bounds(stack: LayerStack, config: SolverConfig) -> tuple[float, float]:
    frequencies = [f for m in stack.materials() for f in m.model.characteristic_frequencies()]
    scales = [f for f in frequencies if f > 0]
    if config.retarded:
        scales.append(C / (2.0 * stack.separation))
    upper = 100.0 * _dielectric_ceiling(stack)
    if config.retarded:
        upper = min(upper, _retardation_ceiling(stack, config))
    lower = 1e-9 * min(scales, default=1.0)
    return lower, max(upper, 10.0 * lower)


def _frequency_integral(stack: LayerStack, config: SolverConfig, quantity: Quantity) -> EnergyResult:
    """ħ/2π ∫ dξ over ln ξ with panel doubling."""

    lower, upper = _frequency_bounds(stack, config)
    u_lo, u_hi = math.log(lower), math.log(upper)
    panels = max(1, math.ceil((u_hi - u_lo) / math.log(10.0)))
    k_panels = 1
    k_ok = True

    def integrate(count: int) -> float:
        nonlocal k_panels, k_ok
        u, w = panel_rule(u_lo, u_hi, panels=count, order=config.xi_quadrature_order)
        xi = np.exp(u)
        pieces: list[float] = []
        for start in range(0, xi.size, config.matsubara_block):
            chunk = xi[start : start + config.matsubara_block]
            values, k_panels, ok = _k_integral(stack, chunk, config, quantity, k_panels)
            k_ok = k_ok and ok
            pieces.append(math.fsum(values * chunk * w[start : start + config.matsubara_block]))
        edge, _, _ = _k_integral(stack, np.array([lower]), config, quantity, k_panels)
        pieces.append(float(edge[0]) * lower)
        return math.fsum(pieces)

    coarse = integrate(panels)
    converged = False
    while panels <= 4096:
        fine = integrate(2 * panels)
        panels *= 2
        if abs(fine - coarse) <= config.rel_tol * max(abs(fine), _TINY) or fine == coarse:
            converged = True
            coarse = fine
            break
        coarse = fine
    message = "" if converged and k_ok else "frequency quadrature did not reach rel_tol"
    if message:
        logger.warning("%s for %s", message, stack.describe())
    return EnergyResult(
        value=HBAR / (2.0 * math.pi) * coarse, converged=converged and k_ok, message=message
    )


def free_energy(stack: LayerStack, config: SolverConfig) -> EnergyResult:
    """Helmholtz free energy per unit area (J/m²) by Matsubara summation."""

    _require_temperature(config, "free_energy")
    return _matsubara_sum(stack, config, Quantity.ENERGY)


def energy_T0(stack: LayerStack, config: SolverConfig) -> EnergyResult:
    """Zero-temperature interaction energy per unit area (J/m²); ``config.temperature`` is ignored."""

    return _frequency_integral(stack, config, Quantity.ENERGY)


def pressure(stack: LayerStack, config: SolverConfig) -> EnergyResult:
    """P = −∂E/∂d in N/m²; T = 0 uses the frequency integral."""

    if config.temperature == 0:
        return _frequency_integral(stack, config, Quantity.PRESSURE)
    return _matsubara_sum(stack, config, Quantity.PRESSURE)


def classical_term(stack: LayerStack, config: SolverConfig) -> EnergyResult:
    """The halved n = 0 Matsubara term alone (static TM, no TE)."""

    _require_temperature(config, "classical_term")
    zero, _, ok = _k_integral(stack, np.zeros(1), config, Quantity.ENERGY, 1)
    return EnergyResult(
        value=0.5 * K_B * config.temperature * float(zero[0]), converged=ok, matsubara_terms=1
    )


def interaction_energy(stack: LayerStack, config: SolverConfig) -> EnergyResult:
    """free_energy for T > 0, energy_T0 for T = 0."""

    if config.temperature == 0:
        return energy_T0(stack, config)
    return free_energy(stack, config)


def hamaker_constant(stack: LayerStack, config: SolverConfig) -> float:
    """A = −12π d² E(d) of the non-retarded interaction (J)."""

    energy = interaction_energy(stack, config.updated(retarded=False))
    return -12.0 * math.pi * stack.separation**2 * energy.value


__all__ = [
    "CurvePoint",
    "EnergyCurve",
    "EnergyResult",
    "Quantity",
    "SolverConfig",
    "classical_term",
    "energy_T0",
    "free_energy",
    "hamaker_constant",
    "interaction_energy",
    "pressure",
]
