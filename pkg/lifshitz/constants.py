"""Physical constants, SI throughout."""

from __future__ import annotations

from scipy import constants as _codata

HBAR: float = _codata.hbar
K_B: float = _codata.Boltzmann
C: float = _codata.c

#: ξ[rad/s] = E[eV] · EV_TO_RAD_PER_S
EV_TO_RAD_PER_S: float = _codata.e / _codata.hbar

ANGSTROM: float = _codata.angstrom
NANOMETER: float = _codata.nano
MICROMETER: float = _codata.micro

#: exponents beyond this are treated as exact zeros
UNDERFLOW_EXPONENT: float = 700.0


def matsubara_spacing(temperature: float) -> float:
    """Spacing 2π k_B T / ħ of the Matsubara frequencies in rad/s."""

    return 2.0 * _codata.pi * K_B * temperature / HBAR


__all__ = [
    "ANGSTROM",
    "C",
    "EV_TO_RAD_PER_S",
    "HBAR",
    "K_B",
    "MICROMETER",
    "NANOMETER",
    "UNDERFLOW_EXPONENT",
    "matsubara_spacing",
]
