from __future__ import annotations

from pathlib import Path
from typing import Callable

import pytest

from lifshitz.constants import EV_TO_RAD_PER_S, NANOMETER
from lifshitz.dielectric import (
    Material,
    MaterialLibrary,
    OscillatorModel,
    OscillatorTerm,
    default_library,
    load_material_library,
)
from lifshitz.energy import SolverConfig
from lifshitz.stack import Layer, LayerStack

DATA_DIR = Path(__file__).parent / "data"


def oscillator(name: str, strength: float, frequency_eV: float = 0.5) -> Material:
    """Single undamped oscillator medium."""

    return Material(
        name=name,
        model=OscillatorModel((OscillatorTerm(strength, frequency_eV * EV_TO_RAD_PER_S),)),
    )


@pytest.fixture(scope="session")
def make_oscillator() -> Callable[..., Material]:
    return oscillator


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def library() -> MaterialLibrary:
    return default_library()


@pytest.fixture(scope="session")
def toy_library() -> MaterialLibrary:
    return load_material_library(DATA_DIR / "toy.matlib")


@pytest.fixture(scope="session")
def fast_config() -> SolverConfig:
    """Non-retarded room temperature with loose tolerances."""

    return SolverConfig(
        temperature=300.0,
        retarded=False,
        rel_tol=1e-6,
        k_quadrature_order=32,
        matsubara_rel_cutoff=1e-6,
    )


@pytest.fixture
def crossing_stack(toy_library: MaterialLibrary) -> LayerStack:
    """low | film(2 nm) | medium | high: attractive below about ten film thicknesses, repulsive beyond."""

    return LayerStack(
        left_halfspace=toy_library["low"],
        left_films=(Layer(toy_library["film"], 2 * NANOMETER),),
        gap=toy_library["medium"],
        separation=2 * NANOMETER,
        right_halfspace=toy_library["high"],
    )


@pytest.fixture
def ideal_metal_stack(library: MaterialLibrary) -> LayerStack:
    return LayerStack(
        left_halfspace=library["ideal-metal"],
        gap=library["vacuum"],
        separation=1e-6,
        right_halfspace=library["ideal-metal"],
    )
