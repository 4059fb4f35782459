"""Composite Gauss-Legendre rules."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss


@lru_cache(maxsize=64)
def _reference_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def panel_rule(
    lower: float, upper: float, *, panels: int, order: int
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of ``panels`` equal Gauss-Legendre panels on ``(lower, upper)``."""

    if panels < 1 or order < 2:
        raise ValueError("panel_rule needs at least one panel of order two")
    ref_nodes, ref_weights = _reference_rule(order)
    edges = np.linspace(lower, upper, panels + 1)
    half = 0.5 * np.diff(edges)[:, None]
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    nodes = (mid + half * ref_nodes[None, :]).ravel()
    weights = (half * ref_weights[None, :]).ravel()
    return nodes, weights


def squared_rule(span: float, *, panels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Rule on ``(0, span)`` after the substitution ``t = span * s**2``.

    The substitution removes the ``t log t`` behaviour of the perfect-reflector
    integrand at the origin.
    """

    s, w = panel_rule(0.0, 1.0, panels=panels, order=order)
    return span * s**2, 2.0 * span * s * w


__all__ = ["panel_rule", "squared_rule"]
