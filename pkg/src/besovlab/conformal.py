"""Riemann maps of starlike domains by Theodorsen iteration.

The interior map ``φ`` of a domain bounded by ``r(θ)e^{iθ}`` is stored
through the Taylor coefficients of ``L(z) = log(φ(z)/z)``; on the circle
``L(e^{iθ}) = log r(σ(θ)) + i(σ(θ) - θ)`` where ``σ`` is the boundary
correspondence.  The exterior domain is handled by inversion: solve the
interior problem for ``1/r(-θ)`` to get ``ψ`` and set ``Φ(w) = 1/ψ(w)``,
which maps the unit disk onto the exterior with ``0 ↦ ∞``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._quad import graded_rule
from .curves import (
    Circle,
    InvertedRadial,
    RadialLipschitz,
    SampledCurve,
    build_curve,
    radial_function,
    spec_from_json,
    spec_to_json,
)
from .spectral import hilbert_transform, mode_numbers

__all__ = [
    "ConvergenceError",
    "StarlikeMap",
    "theodorsen_map",
    "identity_map",
    "map_eval",
    "koebe_check",
    "KoebeResult",
    "lipschitz_data",
    "LipschitzData",
    "p_interval",
]

INTERIOR = "interior"
EXTERIOR = "exterior"


class ConvergenceError(RuntimeError):
    def __init__(self, message, residual=np.nan, iterations=0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True, eq=False)
class StarlikeMap:
    """Conformal map of the unit disk onto one side of a starlike curve.

    Attributes
    ----------
    spec : Circle or RadialLipschitz
        The curve ``Γ`` itself (not the inverted one).
    orientation : {"interior", "exterior"}
    coeffs : complex ndarray
        Taylor coefficients of ``log(ψ(z)/z)``, with ``ψ`` the interior map of
        the solved radial function (``r`` or ``1/r(-θ)``).
    sigma : float ndarray
        Boundary correspondence of ``ψ`` on the uniform grid.
    residual : float
        Sup of the last fixed-point update.
    """

    spec: object
    orientation: str
    coeffs: np.ndarray
    sigma: np.ndarray
    residual: float
    iterations: int
    relaxed: bool = False
    _radial: object = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.sigma)

    @property
    def theta(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n) / self.n

    @property
    def solved_radial(self):
        """Radius function whose interior ``ψ`` maps onto."""
        if self._radial is not None:
            return self._radial
        base = radial_function(self.spec)
        return base if self.orientation == INTERIOR else InvertedRadial(base)

    @property
    def boundary_parameter(self) -> np.ndarray:
        """Polar angle on ``Γ`` of the image of ``e^{iθ_k}``.

        Increasing for the interior map, decreasing for the exterior map.
        """
        return self.sigma if self.orientation == INTERIOR else -self.sigma

    @property
    def derivative_at_origin(self) -> float:
        """``ψ'(0) = e^{c_0}``."""
        return float(np.exp(self.coeffs[0].real))

    @cached_property
    def _active(self):
        amp = np.abs(self.coeffs)
        keep = np.nonzero(amp > 1e-17 * max(amp.max(), 1e-300))[0]
        m = keep.max() + 1 if len(keep) else 1
        return self.coeffs[:m]

    # -- evaluation ---------------------------------------------------------

    def log_series(self, z):
        """``L(z)`` and ``L'(z)`` at arbitrary points of the closed disk."""
        c = self._active
        z = np.asarray(z, dtype=complex)
        val = np.full(z.shape, c[-1], dtype=complex)
        der = np.zeros(z.shape, dtype=complex)
        for n in range(len(c) - 2, -1, -1):
            der = der * z + val
            val = val * z + c[n]
        return val, der

    def inner_eval(self, z):
        """``ψ(z)`` and ``ψ'(z)``."""
        z = np.asarray(z, dtype=complex)
        L, dL = self.log_series(z)
        e = np.exp(L)
        return z * e, e * (1 + z * dL)

    def eval(self, z):
        """The map and its derivative; the exterior map has a pole at 0."""
        psi, dpsi = self.inner_eval(z)
        if self.orientation == INTERIOR:
            return psi, dpsi
        with np.errstate(divide="ignore", invalid="ignore"):
            return 1.0 / psi, -dpsi / psi ** 2

    def polar_inner(self, radii, n_theta: int | None = None):
        """``ψ`` and ``ψ'`` on the polar grid ``radii × 2πk/n_theta`` via FFT."""
        n_theta = n_theta or self.n
        c = self._active
        if len(c) > n_theta // 2:
            raise ValueError("angular grid too coarse for the map series")
        radii = np.atleast_1d(np.asarray(radii, dtype=float))
        theta = 2 * np.pi * np.arange(n_theta) / n_theta
        z = radii[:, None] * np.exp(1j * theta)[None, :]
        k = np.arange(len(c))
        buf = np.zeros((len(radii), n_theta), dtype=complex)
        buf[:, :len(c)] = c[None, :] * radii[:, None] ** k[None, :]
        L = np.fft.ifft(buf, axis=1) * n_theta
        buf[:, :len(c)] *= k[None, :]
        zdL = np.fft.ifft(buf, axis=1) * n_theta
        e = np.exp(L)
        return z * e, e * (1 + zdL)

    def polar(self, radii, n_theta: int | None = None):
        psi, dpsi = self.polar_inner(radii, n_theta)
        if self.orientation == INTERIOR:
            return psi, dpsi
        with np.errstate(divide="ignore", invalid="ignore"):
            return 1.0 / psi, -dpsi / psi ** 2

    def boundary_log_derivative(self):
        """``1 + zL'(z)`` on the unit circle grid, i.e. ``zψ'/ψ``."""
        c = self.coeffs
        buf = np.zeros(self.n, dtype=complex)
        buf[:len(c)] = np.arange(len(c)) * c
        return 1 + np.fft.ifft(buf) * self.n

    # -- serialisation -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "spec": spec_to_json(self.spec),
            "orientation": self.orientation,
            "coeffs": [[c.real, c.imag] for c in self.coeffs],
            "sigma": self.sigma.tolist(),
            "residual": self.residual,
            "iterations": self.iterations,
            "relaxed": self.relaxed,
        }

    @classmethod
    def from_json(cls, obj) -> "StarlikeMap":
        if isinstance(obj, str):
            obj = json.loads(obj)
        coeffs = np.array([complex(a, b) for a, b in obj["coeffs"]])
        return cls(spec_from_json(obj["spec"]), obj["orientation"], coeffs,
                   np.asarray(obj["sigma"], dtype=float), float(obj["residual"]),
                   int(obj["iterations"]), bool(obj.get("relaxed", False)))


def _coefficients_from_sigma(radial, sigma):
    n = len(sigma)
    u = np.fft.fft(np.log(radial.radius(sigma))) / n
    c = np.zeros(n // 2, dtype=complex)
    c[0] = u[0].real
    c[1:] = 2 * u[1:n // 2]
    return c


def theodorsen_map(spec, orientation: str = INTERIOR, n: int = 1024,
                   tol: float = 1e-13, max_iter: int = 2000) -> StarlikeMap:
    """Boundary correspondence of a starlike domain by Theodorsen iteration.

    Iterates ``σ ← θ + H[log r∘σ]``.  When ``sup|r'/r| >= 1`` the classical
    contraction argument fails and the update is under-relaxed by 0.5.

    Raises
    ------
    ConvergenceError
        When the update does not fall below ``tol`` within ``max_iter``
        steps or the iterates stop being monotone.
    """
    if orientation not in (INTERIOR, EXTERIOR):
        raise ValueError(f"orientation must be {INTERIOR!r} or {EXTERIOR!r}")
    base = radial_function(spec)
    if base is None:
        raise ValueError("Theodorsen iteration needs a starlike (radial) curve")
    radial = base if orientation == INTERIOR else InvertedRadial(base)
    if n < 64 or n & (n - 1):
        raise ValueError("sample count must be a power of two >= 64")
    theta = 2 * np.pi * np.arange(n) / n
    relaxed = radial.lipschitz_ratio() >= 1.0
    weight = 0.5 if relaxed else 1.0
    sigma = theta.copy()
    delta = np.inf
    for it in range(1, max_iter + 1):
        update = theta + hilbert_transform(np.log(radial.radius(sigma))).values.real
        step = update - sigma
        delta = float(np.max(np.abs(step)))
        if not np.isfinite(delta) or delta > 1e3:
            raise ConvergenceError("Theodorsen iterates diverge", delta, it)
        sigma = sigma + weight * step
        if delta < tol:
            break
    else:
        raise ConvergenceError(
            f"Theodorsen iteration did not converge in {max_iter} steps "
            f"(last update {delta:.3e})", delta, max_iter)
    if np.any(np.diff(np.append(sigma, sigma[0] + 2 * np.pi)) <= 0):
        raise ConvergenceError("boundary correspondence is not monotone", delta, it)
    coeffs = _coefficients_from_sigma(radial, sigma)
    return StarlikeMap(spec, orientation, coeffs, sigma, delta, it, relaxed, radial)


def identity_map(n: int = 1024, radius: float = 1.0) -> StarlikeMap:
    """``φ(z) = radius·z`` without iterating."""
    theta = 2 * np.pi * np.arange(n) / n
    coeffs = np.zeros(n // 2, dtype=complex)
    coeffs[0] = np.log(radius)
    return StarlikeMap(Circle(radius), INTERIOR, coeffs, theta, 0.0, 0)


def map_eval(m: StarlikeMap, z):
    """``(φ(z), φ'(z))`` for ``|z| < 1``."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1):
        raise ValueError("map_eval needs points inside the unit disk")
    phi, dphi = m.eval(z)
    if z.ndim == 0:
        return complex(phi), complex(dphi)
    return phi, dphi


@dataclass(frozen=True)
class KoebeResult:
    min_ratio: float
    max_ratio: float
    samples: int

    @property
    def within_bounds(self) -> bool:
        return 0.25 <= self.min_ratio and self.max_ratio <= 4.0


def koebe_check(m: StarlikeMap, curve: SampledCurve | None = None, levels: int = 24,
                n_theta: int | None = None) -> KoebeResult:
    """Extremes of ``d(ψ(z), Γ)/((1-|z|)|ψ'(z)|)`` over the graded polar grid.

    Exterior maps are checked through ``ψ`` against the inverted curve, where
    the distortion bounds apply to a bounded map.
    """
    if curve is None:
        curve = build_curve(m.solved_radial, m.n)
    rule = graded_rule(levels)
    radii = rule.nodes
    psi, dpsi = m.polar_inner(radii, n_theta)
    d = curve.distance(psi)
    ratio = d / ((1 - radii)[:, None] * np.abs(dpsi))
    return KoebeResult(float(ratio.min()), float(ratio.max()), int(ratio.size))


def p_interval(M: float) -> tuple[float, float]:
    """Exponent window ``(1 + 2·arctan(M)/π, 1 + π/(2·arctan M))``."""
    a = np.arctan(M)
    lo = 1 + 2 * a / np.pi
    with np.errstate(over="ignore", divide="ignore"):
        hi = 1 + np.pi / (2 * a) if a > 0 else np.inf
    return float(lo), float(hi)


@dataclass(frozen=True)
class LipschitzData:
    M: float
    arg_sup: float
    M_geometric: float
    p_interval: tuple


def lipschitz_data(m: StarlikeMap) -> LipschitzData:
    """Radial-Lipschitz norm from the boundary argument of ``zψ'/ψ``.

    ``Arg(zψ'/ψ)`` is harmonic in the disk, so its sup is attained on the
    circle.  The geometric value ``sup|r'/r|`` is reported alongside.
    """
    arg = float(np.max(np.abs(np.angle(m.boundary_log_derivative()))))
    M = float(np.tan(arg))
    geo = float(m.solved_radial.lipschitz_ratio())
    return LipschitzData(M, arg, geo, p_interval(M))
