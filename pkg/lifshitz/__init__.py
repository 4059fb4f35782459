from __future__ import annotations

from .analysis import LevitationResult, levitation_distance, separation_sweep, thickness_scan
from .config import RunConfig, load_run_config
from .dielectric import (
    METALLIC,
    CompositeModel,
    DrudeModel,
    Material,
    MaterialLibrary,
    OscillatorModel,
    OscillatorTerm,
    TabulatedModel,
    default_library,
    eval_epsilon,
    load_material_library,
    save_material_library,
    static_limit,
)
from .energy import (
    EnergyCurve,
    EnergyResult,
    SolverConfig,
    classical_term,
    energy_T0,
    free_energy,
    hamaker_constant,
    pressure,
)
from .errors import (
    ConfigError,
    DivergentStaticLimitError,
    DomainError,
    LifshitzError,
    MaterialLibraryError,
    NoLevitationError,
    OutputError,
    UnknownMaterialError,
)
from .report import CurveReport, ScanReport
from .stack import (
    Layer,
    LayerStack,
    Polarization,
    Side,
    composite_reflection,
    fresnel,
    gamma,
    mode_condition,
    round_trip,
)

__all__ = [
    "METALLIC",
    "CompositeModel",
    "ConfigError",
    "CurveReport",
    "DivergentStaticLimitError",
    "DomainError",
    "DrudeModel",
    "EnergyCurve",
    "EnergyResult",
    "Layer",
    "LayerStack",
    "LevitationResult",
    "LifshitzError",
    "Material",
    "MaterialLibrary",
    "MaterialLibraryError",
    "NoLevitationError",
    "OscillatorModel",
    "OscillatorTerm",
    "OutputError",
    "Polarization",
    "RunConfig",
    "ScanReport",
    "Side",
    "SolverConfig",
    "TabulatedModel",
    "UnknownMaterialError",
    "classical_term",
    "composite_reflection",
    "default_library",
    "energy_T0",
    "eval_epsilon",
    "free_energy",
    "fresnel",
    "gamma",
    "hamaker_constant",
    "levitation_distance",
    "load_material_library",
    "load_run_config",
    "mode_condition",
    "pressure",
    "round_trip",
    "save_material_library",
    "separation_sweep",
    "static_limit",
    "thickness_scan",
]
