from __future__ import annotations

import math
from typing import Callable

import numpy as np
import pytest
from scipy.special import zeta

from lifshitz.constants import C, HBAR, K_B, NANOMETER, matsubara_spacing
from lifshitz.dielectric import Material, MaterialLibrary
from lifshitz.energy import (
    CurvePoint,
    EnergyCurve,
    SolverConfig,
    classical_term,
    energy_T0,
    free_energy,
    hamaker_constant,
    pressure,
)
from lifshitz.errors import DomainError
from lifshitz.stack import Layer, LayerStack


def polylog3(x: np.ndarray) -> np.ndarray:
    orders = np.arange(1, 31)
    return np.sum(np.asarray(x)[..., None] ** orders / orders**3, axis=-1)


def bare_stack(library: MaterialLibrary, left: str, gap: str, right: str, d: float) -> LayerStack:
    return LayerStack(
        left_halfspace=library[left], gap=library[gap], separation=d, right_halfspace=library[right]
    )


def test_solver_config_constraints() -> None:
    with pytest.raises(ValueError):
        SolverConfig(temperature=-1.0)
    with pytest.raises(ValueError):
        SolverConfig(rel_tol=1.5)
    with pytest.raises(ValueError):
        SolverConfig(k_quadrature_order=1)
    config = SolverConfig()
    assert config.rel_tol == 1e-8
    assert config.matsubara_max_n == 10_000_000
    assert config.updated(retarded=False).retarded is False
    assert config.retarded is True


def test_gap_matched_stack_gives_exact_zero(toy_library: MaterialLibrary) -> None:
    stack = bare_stack(toy_library, "medium", "medium", "medium", 2 * NANOMETER)
    config = SolverConfig(temperature=300.0)
    energy = free_energy(stack, config)
    assert energy.value == 0.0
    assert energy.converged
    assert pressure(stack, config).value == 0.0
    assert classical_term(stack, config).value == 0.0
    assert energy_T0(stack, config).value == 0.0


def test_zero_temperature_is_redirected(toy_library: MaterialLibrary) -> None:
    stack = bare_stack(toy_library, "low", "medium", "high", NANOMETER)
    with pytest.raises(DomainError, match="energy_T0"):
        free_energy(stack, SolverConfig(temperature=0.0))
    with pytest.raises(DomainError):
        classical_term(stack, SolverConfig(temperature=0.0))


def test_matsubara_cap_flags_partial_result(toy_library: MaterialLibrary) -> None:
    stack = bare_stack(toy_library, "low", "medium", "high", 2 * NANOMETER)
    capped = free_energy(stack, SolverConfig(retarded=False, matsubara_max_n=3))
    assert not capped.converged
    assert capped.matsubara_terms == 3
    assert "cap" in capped.message
    assert capped.value > 0
    assert float(capped) == capped.value


def test_repeated_evaluation_is_bit_identical(toy_library: MaterialLibrary, fast_config: SolverConfig) -> None:
    stack = bare_stack(toy_library, "low", "medium", "high", 3 * NANOMETER)
    assert free_energy(stack, fast_config) == free_energy(stack, fast_config)


def test_classical_term_of_perfect_reflectors(library: MaterialLibrary) -> None:
    d, temperature = 10e-6, 300.0
    stack = bare_stack(library, "ideal-metal", "vacuum", "ideal-metal", d)
    config = SolverConfig(temperature=temperature)
    expected = -zeta(3) * K_B * temperature / (16 * math.pi * d * d)
    assert classical_term(stack, config).value == pytest.approx(expected, rel=5e-3)
    assert free_energy(stack, config).value == pytest.approx(expected, rel=2e-2)


def test_classical_term_with_metal_coated_substrate(library: MaterialLibrary) -> None:
    d, temperature = 3 * NANOMETER, 300.0
    stack = LayerStack(
        left_halfspace=library["silica"],
        gap=library["toluene"],
        separation=d,
        right_films=(Layer(library["gold"], 2 * NANOMETER),),
        right_halfspace=library["silica"],
    )
    silica, toluene = library["silica"].static, library["toluene"].static
    delta = (silica - toluene) / (silica + toluene)
    expected = -K_B * temperature * polylog3(np.array(delta)) / (16 * math.pi * d * d)
    result = classical_term(stack, SolverConfig(temperature=temperature))
    assert result.value < 0
    assert result.value == pytest.approx(float(expected), rel=1e-6)


def test_hamaker_law_and_brute_force_constant(toy_library: MaterialLibrary) -> None:
    temperature = 300.0
    config = SolverConfig(temperature=temperature, retarded=False)
    separations = [1 * NANOMETER, 2 * NANOMETER, 5 * NANOMETER, 10 * NANOMETER]
    scaled = [
        free_energy(bare_stack(toy_library, "low", "medium", "high", d), config).value * d * d
        for d in separations
    ]
    assert max(scaled) == pytest.approx(min(scaled), rel=1e-3)

    low, medium, high = (toy_library[n] for n in ("low", "medium", "high"))
    xi = matsubara_spacing(temperature) * np.arange(1, 20_001)
    eps_l, eps_g, eps_r = low.epsilon(xi), medium.epsilon(xi), high.epsilon(xi)
    product = (eps_l - eps_g) / (eps_l + eps_g) * (eps_r - eps_g) / (eps_r + eps_g)
    s_l, s_g, s_r = low.static, medium.static, high.static
    static = (s_l - s_g) / (s_l + s_g) * (s_r - s_g) / (s_r + s_g)
    series = 0.5 * float(polylog3(np.array(static))) + math.fsum(polylog3(product))
    reference = 1.5 * K_B * temperature * series

    constant = hamaker_constant(bare_stack(toy_library, "low", "medium", "high", 2 * NANOMETER), config)
    assert constant < 0
    assert constant == pytest.approx(reference, rel=1e-6)
    assert scaled[0] == pytest.approx(-reference / (12 * math.pi), rel=1e-6)


@pytest.mark.parametrize("seed", range(20))
def test_symmetric_stacks_attract(seed: int, make_oscillator: Callable[..., Material]) -> None:
    rng = np.random.default_rng(seed)
    outer = make_oscillator("outer", rng.uniform(0.2, 5.0), rng.uniform(0.1, 1.0))
    gap = make_oscillator("gap", rng.uniform(0.1, 3.0), rng.uniform(0.1, 1.0))
    films: tuple[Layer, ...] = ()
    if rng.random() < 0.5:
        coating = make_oscillator("coating", rng.uniform(0.2, 5.0), rng.uniform(0.1, 1.0))
        films = (Layer(coating, rng.uniform(0.5, 5.0) * NANOMETER),)
    stack = LayerStack(
        left_halfspace=outer,
        left_films=films,
        gap=gap,
        separation=NANOMETER,
        right_films=films,
        right_halfspace=outer,
    )
    for retarded in (True, False):
        config = SolverConfig(
            retarded=retarded, rel_tol=1e-6, k_quadrature_order=32, matsubara_rel_cutoff=1e-6
        )
        for d in np.geomspace(1.0, 100.0, 5) * NANOMETER:
            assert free_energy(stack.with_separation(float(d)), config).value < 0


@pytest.mark.parametrize("retarded", [True, False])
def test_ordered_permittivities_repel(retarded: bool, toy_library: MaterialLibrary) -> None:
    config = SolverConfig(
        retarded=retarded, rel_tol=1e-6, k_quadrature_order=32, matsubara_rel_cutoff=1e-6
    )
    for d in np.geomspace(1.0, 100.0, 5) * NANOMETER:
        stack = bare_stack(toy_library, "low", "medium", "high", float(d))
        assert free_energy(stack, config).value > 0


def test_symmetric_energy_decays(toy_library: MaterialLibrary, fast_config: SolverConfig) -> None:
    energies = [
        abs(free_energy(bare_stack(toy_library, "high", "medium", "high", d), fast_config).value)
        for d in (1 * NANOMETER, 2 * NANOMETER, 4 * NANOMETER, 8 * NANOMETER)
    ]
    assert all(b < a for a, b in zip(energies, energies[1:]))


def test_vanishing_dielectric_film_matches_bare_stack(toy_library: MaterialLibrary) -> None:
    config = SolverConfig(temperature=300.0)
    bare = bare_stack(toy_library, "low", "medium", "high", 50 * NANOMETER)
    coated = LayerStack(
        left_halfspace=toy_library["low"],
        left_films=(Layer(toy_library["film"], 1e-15),),
        gap=toy_library["medium"],
        separation=50 * NANOMETER,
        right_halfspace=toy_library["high"],
    )
    for d in np.geomspace(50.0, 500.0, 5) * NANOMETER:
        expected = free_energy(bare.with_separation(float(d)), config).value
        actual = free_energy(coated.with_separation(float(d)), config).value
        assert actual == pytest.approx(expected, rel=1e-6)


def test_pressure_matches_finite_difference(toy_library: MaterialLibrary) -> None:
    symmetric = LayerStack(
        left_halfspace=toy_library["high"],
        left_films=(Layer(toy_library["film"], 2 * NANOMETER),),
        gap=toy_library["medium"],
        separation=5 * NANOMETER,
        right_films=(Layer(toy_library["film"], 2 * NANOMETER),),
        right_halfspace=toy_library["high"],
    )
    cases = [
        (symmetric, SolverConfig(temperature=300.0, retarded=True)),
        (bare_stack(toy_library, "low", "medium", "high", 3 * NANOMETER), SolverConfig(retarded=False)),
    ]
    for stack, config in cases:
        d = stack.separation
        h = d * 1e-4
        lower = free_energy(stack.with_separation(d - h), config).value
        upper = free_energy(stack.with_separation(d + h), config).value
        assert pressure(stack, config).value == pytest.approx((lower - upper) / (2 * h), rel=1e-3)


def test_energy_curve_rejects_unsorted_points() -> None:
    points = [CurvePoint(2e-9, -1.0, -1.0, True), CurvePoint(1e-9, -2.0, -2.0, True)]
    with pytest.raises(DomainError):
        EnergyCurve(points=points, stack="a|b|c")


@pytest.mark.slow
def test_perfect_reflector_casimir_limit(ideal_metal_stack: LayerStack) -> None:
    d = ideal_metal_stack.separation
    config = SolverConfig(temperature=1.0)
    energy_expected = -math.pi**2 * HBAR * C / (720 * d**3)
    pressure_expected = -math.pi**2 * HBAR * C / (240 * d**4)
    energy = free_energy(ideal_metal_stack, config)
    assert energy.converged
    assert energy.value == pytest.approx(energy_expected, rel=5e-3)
    assert pressure(ideal_metal_stack, config).value == pytest.approx(pressure_expected, rel=5e-3)
    assert energy_T0(ideal_metal_stack, config).value == pytest.approx(energy_expected, rel=5e-3)
    zero_t = SolverConfig(temperature=0.0)
    assert pressure(ideal_metal_stack, zero_t).value == pytest.approx(pressure_expected, rel=5e-3)


@pytest.mark.slow
def test_free_energy_approaches_zero_temperature_limit(ideal_metal_stack: LayerStack) -> None:
    stack = ideal_metal_stack.with_separation(100 * NANOMETER)
    reference = energy_T0(stack, SolverConfig(temperature=0.0)).value
    gaps = [
        abs(free_energy(stack, SolverConfig(temperature=t)).value - reference) / abs(reference)
        for t in (30.0, 3.0, 1.0)
    ]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[-1] < 1e-3


@pytest.mark.slow
def test_retardation_weakens_vacuum_gap_attraction(library: MaterialLibrary) -> None:
    config = SolverConfig(rel_tol=1e-6, k_quadrature_order=32, matsubara_rel_cutoff=1e-6)
    for d in (10 * NANOMETER, 100 * NANOMETER, 1000 * NANOMETER):
        stack = bare_stack(library, "silica", "vacuum", "silica", d)
        retarded = free_energy(stack, config).value
        plain = free_energy(stack, config.updated(retarded=False)).value
        assert plain < retarded < 0


@pytest.mark.slow
def test_thick_gold_film_matches_gold_halfspace(library: MaterialLibrary) -> None:
    config = SolverConfig(temperature=300.0, matsubara_rel_cutoff=1e-8)
    halfspace = LayerStack(
        left_halfspace=library["silica"],
        gap=library["toluene"],
        separation=NANOMETER,
        right_halfspace=library["gold"],
    )
    coated = LayerStack(
        left_halfspace=library["silica"],
        gap=library["toluene"],
        separation=NANOMETER,
        right_films=(Layer(library["gold"], 1e-6),),
        right_halfspace=library["silica"],
    )
    for d in np.geomspace(1.0, 10.0, 5) * NANOMETER:
        expected = free_energy(halfspace.with_separation(float(d)), config).value
        actual = free_energy(coated.with_separation(float(d)), config).value
        assert actual == pytest.approx(expected, rel=1e-6)


@pytest.mark.slow
def test_non_retarded_thick_gold_in_toluene_attracts_everywhere(library: MaterialLibrary) -> None:
    config = SolverConfig(
        retarded=False, rel_tol=1e-6, k_quadrature_order=32, matsubara_rel_cutoff=1e-6
    )
    stack = LayerStack(
        left_halfspace=library["silica"],
        gap=library["toluene"],
        separation=NANOMETER,
        right_films=(Layer(library["gold"], 1e-6),),
        right_halfspace=library["silica"],
    )
    signs = {
        np.sign(free_energy(stack.with_separation(float(d)), config).value)
        for d in np.geomspace(0.2, 20.0, 5) * NANOMETER
    }
    assert signs == {-1.0}


def gold_coated(library: MaterialLibrary, gap: str, thickness: float, d: float = NANOMETER) -> LayerStack:
    return LayerStack(
        left_halfspace=library["silica"],
        gap=library[gap],
        separation=d,
        right_films=(Layer(library["gold"], thickness),),
        right_halfspace=library["silica"],
    )


@pytest.mark.slow
def test_bromobenzene_models_disagree_on_retardation(library: MaterialLibrary) -> None:
    retarded = SolverConfig(rel_tol=1e-6, k_quadrature_order=32, matsubara_rel_cutoff=1e-6)
    plain = retarded.updated(retarded=False)
    munday = gold_coated(library, "bromobenzene-M", 2 * NANOMETER)
    for d in (0.2, 1.2, 8.0, 30.0, 100.0):
        assert free_energy(munday.with_separation(d * NANOMETER), plain).value < 0
    for d in (30.0, 100.0):
        assert free_energy(munday.with_separation(d * NANOMETER), retarded).value > 0

    zwol = gold_coated(library, "bromobenzene-Z", 2 * NANOMETER)
    for d in (0.2, 3.0, 30.0):
        assert free_energy(zwol.with_separation(d * NANOMETER), plain).value > 0
        assert free_energy(zwol.with_separation(d * NANOMETER), retarded).value > 0


@pytest.mark.slow
@pytest.mark.parametrize(
    ("thickness", "d"),
    [(1e-6, 0.5 * NANOMETER), (2 * NANOMETER, 0.5 * NANOMETER), (2 * NANOMETER, 5 * NANOMETER)],
)
def test_pressure_matches_finite_difference_on_gold_coated_silica(
    library: MaterialLibrary, thickness: float, d: float
) -> None:
    config = SolverConfig(temperature=300.0)
    stack = gold_coated(library, "toluene", thickness, d)
    h = d * 1e-4
    lower = free_energy(stack.with_separation(d - h), config).value
    upper = free_energy(stack.with_separation(d + h), config).value
    assert pressure(stack, config).value == pytest.approx((lower - upper) / (2 * h), rel=1e-3)
