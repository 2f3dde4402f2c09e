"""Competitor extensions and almost-Dirichlet experiments on starlike domains.

Points of the plane are written ``z = λ r(θ) e^{iθ}`` so that ``Γ`` is
``λ = 1``.  The radial-cutoff competitor is ``F = f(θ) η(λ)`` with a fixed
quintic smoothstep ``η`` rising from 0 at ``λ = 1/4`` to 1 at ``λ = 1/2``;
its reflection ``R(ρe^{iθ}) = (r²/ρ)e^{iθ}`` carries interior fields to the
exterior.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._config import n_workers
from ._quad import graded_rule, radial_integral
from .conformal import EXTERIOR, INTERIOR, StarlikeMap, lipschitz_data
from .curves import SampledCurve, radial_function
from .spaces import _check_ps, _on_curve, default_map, littlewood_paley_norm
from .spectral import BoundaryFunction, random_trig_coefficients

__all__ = [
    "smoothstep",
    "ExtensionField",
    "competitor_extension",
    "RadialCutoff",
    "Reflected",
    "competitor_energy",
    "almost_dirichlet_ratio",
    "DirichletResult",
    "in_almost_dirichlet_region",
    "DirichletSweep",
    "dirichlet_sweep",
]

CUTOFF = (0.25, 0.5)


def smoothstep(x, lo: float = CUTOFF[0], hi: float = CUTOFF[1]):
    """Quintic ``6u⁵ - 15u⁴ + 10u³`` of ``u = (x-lo)/(hi-lo)`` clipped to [0, 1], and its derivative in ``x``."""
    x = np.asarray(x, dtype=float)
    u = np.clip((x - lo) / (hi - lo), 0.0, 1.0)
    val = u ** 3 * (10 - 15 * u + 6 * u * u)
    der = 30 * u * u * (1 - u) ** 2 / (hi - lo)
    return val, der


def _polar_to_cartesian(theta, d_rho, d_theta_over_rho):
    c, s = np.cos(theta), np.sin(theta)
    return c * d_rho - s * d_theta_over_rho, s * d_rho + c * d_theta_over_rho


class RadialCutoff:
    """``F(λ r(θ)e^{iθ}) = f(θ) η(λ)`` with exact polar derivatives."""

    tag = "radial-cutoff"

    def __init__(self, radial, f: BoundaryFunction, cutoff=CUTOFF):
        self.radial = radial
        self.f = f
        self.df = f.derivative()
        self.cutoff = cutoff

    def on_coordinates(self, lam, theta):
        """Values and Cartesian gradient at ``λ r(θ)e^{iθ}`` (broadcast arrays)."""
        lam, theta = np.asarray(lam, float), np.asarray(theta, float)
        # angular factors are evaluated before broadcasting against λ
        r = self.radial.radius(theta)
        rp = self.radial.dradius(theta)
        fv = self.f(theta)
        fp = self.df(theta)
        eta, deta = smoothstep(lam, *self.cutoff)
        lam, theta = np.broadcast_arrays(lam, theta)
        rho = lam * r
        F_rho = fv * deta / r
        F_theta = fp * eta - fv * deta * lam * rp / r
        gx, gy = _polar_to_cartesian(theta, F_rho, F_theta / rho)
        return fv * eta, gx, gy

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        theta = np.angle(z)
        lam = np.abs(z) / self.radial.radius(theta)
        return self.on_coordinates(lam, theta)


class Reflected:
    """Exterior field ``U(z) = F(R(z))`` for an interior field ``F``."""

    tag = "reflection"

    def __init__(self, radial, interior):
        self.radial = radial
        self.interior = interior

    def on_coordinates(self, lam, theta):
        """Values and Cartesian gradient at ``λ r(θ)e^{iθ}`` with ``λ > 1``."""
        lam, theta = np.asarray(lam, float), np.asarray(theta, float)
        r = self.radial.radius(theta)
        rp = self.radial.dradius(theta)
        rho = lam * r
        if hasattr(self.interior, "on_coordinates"):
            # R keeps the angle and sends λ to 1/λ
            val, fx, fy = self.interior.on_coordinates(1.0 / lam, theta)
        else:
            val, fx, fy = self.interior((r / lam) * np.exp(1j * theta))
        rho_ref = r / lam
        c, s = np.cos(theta), np.sin(theta)
        F_rho = c * fx + s * fy
        F_theta = rho_ref * (-s * fx + c * fy)
        U_rho = F_rho * (-r * r / rho ** 2)
        U_theta = F_rho * (2 * r * rp / rho) + F_theta
        gx, gy = _polar_to_cartesian(theta, U_rho, U_theta / rho)
        return val, gx, gy

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        theta = np.angle(z)
        return self.on_coordinates(np.abs(z) / self.radial.radius(theta), theta)


@dataclass(frozen=True, eq=False)
class ExtensionField:
    """Values and gradient of an extension sampled on a polar grid.

    ``points`` has shape ``(len(radii), len(theta))``; ``tag`` names the
    construction.
    """

    tag: str
    points: np.ndarray
    values: np.ndarray
    grad_x: np.ndarray
    grad_y: np.ndarray
    evaluator: object = None

    @property
    def grad_norm(self):
        return np.sqrt(np.abs(self.grad_x) ** 2 + np.abs(self.grad_y) ** 2)


def _starlike(curve_or_spec):
    spec = curve_or_spec.spec if isinstance(curve_or_spec, SampledCurve) else curve_or_spec
    radial = radial_function(spec)
    if radial is None:
        raise ValueError("competitor extensions need a starlike curve")
    return radial


def competitor_extension(curve: SampledCurve, f, kind: str = "radial-cutoff", levels: int = 24,
                         interior=None) -> ExtensionField:
    """Sample a competitor extension of ``f`` on the graded polar grid.

    ``kind="radial-cutoff"`` lives in the interior (``λ < 1``);
    ``kind="reflection"`` lives in the exterior at ``λ = 1/μ`` for the graded
    nodes ``μ`` and reflects ``interior`` (default: the radial cutoff of ``f``).
    """
    radial = _starlike(curve)
    f = _on_curve(curve, f)
    rule = graded_rule(levels)
    theta = f.theta
    cutoff = RadialCutoff(radial, f)
    if kind == "radial-cutoff":
        field = cutoff
        lam = rule.nodes
    elif kind == "reflection":
        field = Reflected(radial, interior if interior is not None else cutoff)
        lam = 1.0 / rule.nodes
    else:
        raise ValueError("kind must be 'radial-cutoff' or 'reflection'")
    pts = lam[:, None] * radial.radius(theta)[None, :] * np.exp(1j * theta)[None, :]
    val, gx, gy = field.on_coordinates(lam[:, None], theta[None, :])
    return ExtensionField(kind, pts, val, gx, gy, field)


def competitor_energy(curve: SampledCurve, f, p: float, s: float, kind: str = "radial-cutoff",
                      levels: int = 24) -> float:
    """``∬ |∇F|^p d(z,Γ)^{(1-s)p-1} dA`` over the side the competitor lives on.

    Integrated in ``(λ, θ)`` with area element ``λ r² dλ dθ`` (interior) or,
    with ``μ = 1/λ``, ``r² μ^{-3} dμ dθ`` (exterior).
    """
    ext = competitor_extension(curve, f, kind, levels)
    rule = graded_rule(levels)
    theta = 2 * np.pi * np.arange(ext.points.shape[1]) / ext.points.shape[1]
    r2 = ext.evaluator.radial.radius(theta) ** 2
    a = (1 - s) * p
    d = curve.distance(ext.points)
    dens = ext.grad_norm ** p * d ** (a - 1)
    nodes = rule.nodes[:, None]
    jac = nodes * r2[None, :] if kind == "radial-cutoff" else r2[None, :] / nodes ** 3
    profile = 2 * np.pi * (dens * jac).mean(axis=1)
    return radial_integral(rule, profile, a, label=f"competitor energy ({kind})").total


def in_almost_dirichlet_region(p: float, s: float, M: float) -> bool:
    """``1/2 < s < 1`` and ``2 < p < 1 + π/(2·arctan M)``, where boundedness is predicted."""
    hi = np.inf if M == 0 else 1 + np.pi / (2 * np.arctan(M))
    return bool(0.5 < s < 1 and 2 < p < hi)


@dataclass(frozen=True)
class DirichletResult:
    ratio: float
    harmonic_energy: float
    competitor_energy: float
    flag: str | None = None


def almost_dirichlet_ratio(curve: SampledCurve, f, p: float, s: float, kind: str = "radial-cutoff",
                           levels: int = 24, m: StarlikeMap | None = None, details: bool = False):
    """Weighted ``p``-energy of the harmonic extension over that of a competitor.

    The radial cutoff is compared on the interior, its reflection on the
    exterior.  Constant data give 0/0 and are reported as ratio 1.
    """
    _check_ps(p, s)
    f = _on_curve(curve, f)
    side = INTERIOR if kind == "radial-cutoff" else EXTERIOR
    scale = float(np.max(np.abs(f.values))) or 1.0
    if np.max(np.abs(f.values - f.values.mean())) <= 1e-12 * scale:
        res = DirichletResult(1.0, 0.0, 0.0, "constant data")
        return res if details else res.ratio
    harmonic = littlewood_paley_norm(curve, f, p, s, side, m, levels, details=True).energy
    competitor = competitor_energy(curve, f, p, s, kind, levels)
    if competitor < 1e-14:
        res = DirichletResult(np.inf, harmonic, competitor, "competitor energy vanishes")
    else:
        res = DirichletResult(harmonic / competitor, harmonic, competitor)
    return res if details else res.ratio


@dataclass
class DirichletSweep:
    """Ratios over a random trigonometric family for each ``(p, s)``.

    ``rows`` holds ``(p, s, M, trial, ratio)``; ``summary`` one entry per
    ``(p, s)`` with the max ratio and an ``exploratory`` flag outside the
    region where boundedness is predicted.
    """

    M: float
    rows: list
    summary: list
    flags: list = field(default_factory=list)


def dirichlet_sweep(curve: SampledCurve, p_list, s_list, trials: int = 20, seed: int = 0,
                    kind: str = "radial-cutoff", levels: int = 24, degree: int = 8) -> DirichletSweep:
    """Run :func:`almost_dirichlet_ratio` on ``trials`` random data per ``(p, s)``.

    Trial ``k`` uses the stream ``(seed, k)`` so rows do not depend on the
    worker count (``LAB_THREADS``).
    """
    if len(p_list) == 0 or len(s_list) == 0:
        raise ValueError("sweep lists must be non-empty")
    side = INTERIOR if kind == "radial-cutoff" else EXTERIOR
    m = default_map(curve, side)
    M = lipschitz_data(m if side == INTERIOR else default_map(curve, INTERIOR)).M
    data = []
    for k in range(trials):
        stream = np.random.SeedSequence([seed, k]).generate_state(1)[0]
        data.append(BoundaryFunction.from_coefficients(random_trig_coefficients(degree, stream, curve.n)))
    rows, summary, flags = [], [], []
    for p in p_list:
        for s in s_list:
            def one(f, p=p, s=s):
                return almost_dirichlet_ratio(curve, f, p, s, kind, levels, m, details=True)
            with ThreadPoolExecutor(max_workers=n_workers()) as pool:
                results = list(pool.map(one, data))
            ratios = [r.ratio for r in results]
            rows.extend((float(p), float(s), M, k, r) for k, r in enumerate(ratios))
            flags.extend(f"p={p:g}, s={s:g}, trial {k}: {r.flag}"
                         for k, r in enumerate(results) if r.flag and r.flag != "constant data")
            summary.append({"p": float(p), "s": float(s), "max_ratio": float(np.max(ratios)),
                            "exploratory": not in_almost_dirichlet_region(p, s, M)})
    return DirichletSweep(M, rows, summary, flags)
