"""Separation sweeps, levitation distances and film-thickness scans."""

from __future__ import annotations

import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence, TypeVar

import numpy as np
import orjson
from scipy.optimize import minimize_scalar

from .energy import CurvePoint, EnergyCurve, SolverConfig, interaction_energy, pressure
from .errors import DomainError, NoLevitationError
from .stack import LayerStack, Side

logger = logging.getLogger(__name__)

NO_LEVITATION = "no levitation in range"
BISECTION_REL_WIDTH = 1e-3

_T = TypeVar("_T")
_R = TypeVar("_R")


@dataclass(frozen=True, slots=True)
class LevitationResult:
    """Free-energy zero and repulsion maximum of one stack.

    ``levitation_distance`` is the attraction-to-repulsion zero of E(d);
    ``peak_separation`` is where the repulsive branch peaks (the force zero).
    """

    levitation_distance: float | None
    peak_separation: float | None
    peak_energy: float | None
    bracket: tuple[float, float]
    converged: bool
    status: str = "ok"

    @property
    def found(self) -> bool:
        return self.levitation_distance is not None

    def as_dict(self) -> dict[str, Any]:
        return {
            "levitation_distance_m": self.levitation_distance,
            "peak_separation_m": self.peak_separation,
            "peak_energy_J_per_m2": self.peak_energy,
            "bracket_m": list(self.bracket),
            "converged": self.converged,
            "status": self.status,
        }

    def to_json(self) -> str:
        return orjson.dumps(self.as_dict(), option=orjson.OPT_INDENT_2).decode()


def _ordered_map(func: Callable[[_T], _R], items: Iterable[_T], threads: int) -> list[_R]:
    if threads <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def _check_increasing(values: Sequence[float], what: str) -> None:
    if not values:
        raise DomainError(f"{what} must not be empty")
    if any(not (value > 0 and math.isfinite(value)) for value in values):
        raise DomainError(f"{what} must be finite and > 0")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise DomainError(f"{what} must be strictly increasing")


def separation_sweep(
    stack: LayerStack,
    separations: Sequence[float],
    config: SolverConfig,
    *,
    threads: int = 1,
) -> EnergyCurve:
    """Energy and pressure of ``stack`` at every separation; points are evaluated independently."""

    _check_increasing(list(separations), "separations")

    def evaluate(separation: float) -> CurvePoint:
        current = stack.with_separation(separation)
        energy = interaction_energy(current, config)
        force = pressure(current, config)
        if not (energy.converged and force.converged):
            logger.warning("point at d = %.6g m did not converge", separation)
        return CurvePoint(
            separation=float(separation),
            free_energy=energy.value,
            pressure=force.value,
            converged=energy.converged and force.converged,
        )

    points = _ordered_map(evaluate, separations, threads)
    return EnergyCurve(points=points, stack=stack.describe(), config=config.model_dump())


class _EnergySampler:
    """E(d) with convergence bookkeeping."""

    def __init__(self, stack: LayerStack, config: SolverConfig) -> None:
        self.stack = stack
        self.config = config
        self.converged = True
        self._lock = threading.Lock()

    def __call__(self, separation: float) -> float:
        result = interaction_energy(self.stack.with_separation(separation), self.config)
        if not result.converged:
            with self._lock:
                self.converged = False
        return result.value


def levitation_distance(
    stack: LayerStack,
    bracket: tuple[float, float],
    config: SolverConfig,
    *,
    scan_points: int = 12,
    threads: int = 1,
) -> LevitationResult:
    """Locate the attraction-to-repulsion zero of E(d) inside ``bracket``.

    The bracket is sampled on a log grid; the first negative-to-positive change is
    refined by bisection in ln d to ``BISECTION_REL_WIDTH``. The repulsion maximum
    is then located on the positive branch with scipy's bounded Brent minimiser
    (golden-section steps with parabolic interpolation) in ln d.

    Raises ``NoLevitationError`` when no crossing is found; its ``converged``
    flag reports whether every sampled energy converged.
    """

    d_lo, d_hi = (float(value) for value in bracket)
    if not (0 < d_lo < d_hi):
        raise DomainError(f"bracket must satisfy 0 < lower < upper, got {bracket}")
    if scan_points < 2:
        raise DomainError("scan_points must be >= 2")
    sampler = _EnergySampler(stack, config)
    grid = np.geomspace(d_lo, d_hi, scan_points)
    energies = _ordered_map(sampler, [float(d) for d in grid], threads)
    crossing = next(
        (i for i in range(scan_points - 1) if energies[i] < 0 < energies[i + 1]), None
    )
    if crossing is None:
        raise NoLevitationError(NO_LEVITATION, converged=sampler.converged)

    lower, upper = float(grid[crossing]), float(grid[crossing + 1])
    while upper / lower - 1.0 > BISECTION_REL_WIDTH:
        middle = math.sqrt(lower * upper)
        value = sampler(middle)
        if value == 0.0:
            lower = upper = middle
            break
        if value < 0:
            lower = middle
        else:
            upper = middle
    zero = math.sqrt(lower * upper)
    logger.debug("levitation distance %.6g m for %s", zero, stack.describe())

    peak_separation, peak_energy = _repulsion_peak(sampler, zero, grid, energies, crossing)
    return LevitationResult(
        levitation_distance=zero,
        peak_separation=peak_separation,
        peak_energy=peak_energy,
        bracket=(d_lo, d_hi),
        converged=sampler.converged,
    )


def _repulsion_peak(
    sampler: _EnergySampler,
    zero: float,
    grid: np.ndarray,
    energies: list[float],
    crossing: int,
) -> tuple[float, float]:
    end = crossing + 1
    while end + 1 < grid.size and energies[end + 1] > 0:
        end += 1
    best = max(range(crossing + 1, end + 1), key=lambda i: energies[i])
    left = zero if best == crossing + 1 else float(grid[best - 1])
    right = float(grid[min(best + 1, grid.size - 1)])
    if right <= left:
        return float(grid[best]), energies[best]
    outcome = minimize_scalar(
        lambda u: -sampler(math.exp(u)),
        bounds=(math.log(left), math.log(right)),
        method="bounded",
        options={"xatol": BISECTION_REL_WIDTH},
    )
    separation = math.exp(float(outcome.x))
    energy = -float(outcome.fun)
    if energy < energies[best]:
        return float(grid[best]), energies[best]
    return separation, energy


def thickness_scan(
    stack: LayerStack,
    thicknesses: Sequence[float],
    bracket: tuple[float, float],
    config: SolverConfig,
    *,
    side: Side | str | None = None,
    scan_points: int = 12,
    threads: int = 1,
) -> list[tuple[float, LevitationResult]]:
    """Levitation result per film thickness; stacks without a crossing yield a status row."""

    _check_increasing(list(thicknesses), "thicknesses")

    def evaluate(thickness: float) -> tuple[float, LevitationResult]:
        coated = stack.with_film_thickness(thickness, side)
        try:
            result = levitation_distance(coated, bracket, config, scan_points=scan_points)
        except NoLevitationError as exc:
            result = LevitationResult(
                levitation_distance=None,
                peak_separation=None,
                peak_energy=None,
                bracket=(float(bracket[0]), float(bracket[1])),
                converged=exc.converged,
                status=str(exc),
            )
        return float(thickness), result

    return _ordered_map(evaluate, thicknesses, threads)


__all__ = [
    "BISECTION_REL_WIDTH",
    "LevitationResult",
    "NO_LEVITATION",
    "levitation_distance",
    "separation_sweep",
    "thickness_scan",
]
