"""Radial quadrature graded toward the unit circle (and toward the origin)."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

GAUSS_ORDER = 8
DIVERGENCE_SHARE = 0.10


class DivergenceWarning(RuntimeWarning):
    """A graded integral whose tail or last layer dominates the total."""


@dataclass(frozen=True)
class GradedRule:
    """Gauss-Legendre nodes on dyadic layers of ``(0, 1)``.

    Outer layers are ``[1 - 2^{-j}, 1 - 2^{-j-1}]`` for ``j = 1..levels``;
    inner layers split ``[0, 1/2]`` dyadically toward the origin.  The
    uncovered strip ``(1 - eps, 1)`` is handled analytically by
    :func:`radial_integral`.
    """

    nodes: np.ndarray
    weights: np.ndarray
    layer: np.ndarray  # outer layer index j, 0 for inner layers
    eps: float
    levels: int

    @property
    def last_layer(self) -> np.ndarray:
        return self.layer == self.levels


def graded_rule(levels: int = 24, inner_levels: int = 6, order: int = GAUSS_ORDER) -> GradedRule:
    x, w = np.polynomial.legendre.leggauss(order)
    edges = [0.0] + [2.0 ** -(inner_levels + 1 - k) for k in range(inner_levels + 1)]
    inner = list(zip(edges[:-1], edges[1:]))
    outer = [(1 - 2.0 ** -j, 1 - 2.0 ** -(j + 1)) for j in range(1, levels + 1)]
    nodes, weights, layer = [], [], []
    for idx, (a, b) in enumerate(inner + outer):
        nodes.append(0.5 * (b - a) * x + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * w)
        layer.append(np.full(order, 0 if idx < len(inner) else idx - len(inner) + 1))
    return GradedRule(np.concatenate(nodes), np.concatenate(weights),
                      np.concatenate(layer), 2.0 ** -(levels + 1), levels)


@dataclass(frozen=True)
class RadialIntegral:
    total: float
    tail: float
    last_layer: float
    divergent: bool


def radial_integral(rule: GradedRule, profile, exponent: float, label: str = "integral",
                    warn: bool = True) -> RadialIntegral:
    """Integrate a radial profile ``g(ρ)`` (already integrated over angle).

    Near ``ρ = 1`` the profile is modelled as ``q·(1-ρ)^{exponent-1}`` to add
    the analytic tail ``q·eps^{exponent}/exponent``.  The result is flagged
    divergent when ``exponent <= 0`` or when the last graded layer still
    carries more than 10% of the total.
    """
    profile = np.asarray(profile, dtype=float)
    body = float(np.sum(rule.weights * profile))
    last = float(np.sum((rule.weights * profile)[rule.last_layer]))
    j = np.argmax(rule.nodes)
    if exponent > 0:
        q = profile[j] / (1 - rule.nodes[j]) ** (exponent - 1)
        tail = float(q * rule.eps ** exponent / exponent)
    else:
        tail = np.inf
    total = body + tail
    divergent = (not np.isfinite(tail)) or (
        total > 0 and abs(last) > DIVERGENCE_SHARE * abs(total))
    if divergent and warn:
        warnings.warn(f"{label}: graded tail does not settle (weight exponent {exponent:g})",
                      DivergenceWarning, stacklevel=3)
    return RadialIntegral(total, tail, last, bool(divergent))
