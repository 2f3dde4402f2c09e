"""Fractional seminorms of boundary data on a Jordan curve.

* Douglas: ``∬_{Γ×Γ} |f(z)-f(ζ)|^p / |z-ζ|^{1+ps} |dz||dζ|``.
* Littlewood-Paley: ``∬_Ω |∇u|^p d(z,Γ)^{(1-s)p-1}`` for the harmonic
  extension ``u``, pulled back to the disk by a conformal map with the exact
  distance to ``Γ`` kept in the weight.
* Hölder seminorm, the gradient-bound constant and the ``V_{s,p}``
  transport check.

Seminorms are returned as ``p``-th roots.
"""
from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import zeta

from ._quad import DivergenceWarning, graded_rule, radial_integral
from .conformal import EXTERIOR, INTERIOR, StarlikeMap, identity_map, theodorsen_map
from .curves import Circle, SampledCurve, Snowflake, build_curve, radial_function
from .spectral import BoundaryFunction, HarmonicField, as_boundary, hs_seminorm, poisson_field

__all__ = [
    "weight_exponent",
    "divergence_threshold",
    "douglas_norm",
    "littlewood_paley_norm",
    "LPResult",
    "holder_seminorm",
    "gradient_bound_check",
    "vsp_isometry_check",
    "NormReport",
    "norm_report",
    "boundary_on_disk",
    "default_map",
]


def weight_exponent(p: float, s: float) -> float:
    """Exponent ``(1-s)p - 1`` of the distance weight."""
    return (1 - s) * p - 1


def divergence_threshold(p: float, h: float = 1.0) -> float:
    """Smallest ``s`` at which ``u(z) = z`` already has infinite energy: ``(p+1-h)/p``."""
    return (p + 1 - h) / p


def _check_ps(p, s, allow_endpoints=False):
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    lo_ok = s >= 0 if allow_endpoints else s > 0
    if not lo_ok or s >= 1:
        raise ValueError(f"s must lie in (0, 1), got {s}")


def _on_curve(curve: SampledCurve, f) -> BoundaryFunction:
    f = as_boundary(f)
    if f.n != curve.n:
        f = f.resample(curve.n)
    return f


# ---------------------------------------------------------------------------
# Douglas
# ---------------------------------------------------------------------------

def douglas_norm(curve: SampledCurve, f, p: float, s: float, block: int = 256) -> float:
    """Douglas seminorm by a punctured trapezoid rule with a diagonal correction.

    The off-diagonal double sum uses arc-length weights ``|z'(t_k)|h``.  The
    excluded diagonal is restored with the leading generalized-zeta term of
    the punctured trapezoid rule for ``|τ|^{(1-s)p-1}`` singularities, which
    is exact for the local linear behaviour of ``f`` and ``z``.
    """
    _check_ps(p, s)
    f = _on_curve(curve, f).values
    n = curve.n
    h = 2 * np.pi / n
    z = curve.z
    speed = np.abs(curve.velocity(curve.t))
    ds = speed * h
    total = 0.0
    for lo in range(0, n, block):
        rows = slice(lo, min(lo + block, n))
        chord = np.abs(z[rows, None] - z[None, :])
        diff = np.abs(f[rows, None] - f[None, :]) ** p
        idx = np.arange(rows.start, rows.stop)
        chord[idx - lo, idx] = 1.0
        term = diff / chord ** (1 + p * s)
        term[idx - lo, idx] = 0.0
        total += float(np.sum((term @ ds) * ds[rows]))
    a = (1 - s) * p
    f_t = (np.roll(f, -1) - np.roll(f, 1)) / (2 * h)
    local = np.abs(f_t) ** p * speed ** (1 - p * s)
    total += float(-2 * zeta(1 - a) * h ** a * np.sum(local) * h)
    return max(total, 0.0) ** (1 / p)


# ---------------------------------------------------------------------------
# Littlewood-Paley
# ---------------------------------------------------------------------------

def default_map(curve: SampledCurve, side: str = INTERIOR) -> StarlikeMap:
    spec = curve.spec
    if isinstance(spec, Circle) and side == INTERIOR:
        return identity_map(curve.n, spec.radius)
    if radial_function(spec) is None:
        raise ValueError("Littlewood-Paley norms need a starlike curve with a conformal map")
    return theodorsen_map(spec, side, curve.n)


def boundary_on_disk(m: StarlikeMap, curve: SampledCurve, f) -> BoundaryFunction:
    """``f∘φ`` on the unit circle grid of the map."""
    f = _on_curve(curve, f)
    return BoundaryFunction(f(m.boundary_parameter))


@dataclass(frozen=True)
class LPResult:
    value: float
    energy: float
    tail: float
    divergent: bool
    levels: int
    n: int


def littlewood_paley_norm(curve: SampledCurve, f, p: float, s: float, side: str = INTERIOR,
                          m: StarlikeMap | None = None, levels: int = 24, weight: str = "exact",
                          details: bool = False):
    """Weighted Dirichlet-type seminorm of the harmonic extension of ``f``.

    Computes ``∬_D |∇(u∘φ)|^p |φ'|^{2-p} d(φ(z),Γ)^{(1-s)p-1} dA`` on the
    graded polar grid, which is the domain integral after the change of
    variables ``ζ = φ(z)``.

    Parameters
    ----------
    side : {"interior", "exterior"}
    m : StarlikeMap, optional
        Map onto the requested side; computed by Theodorsen iteration if
        omitted (identity for the interior of a circle).
    weight : {"exact", "inverted"}
        ``"inverted"`` (exterior only) integrates over the inverted domain
        with the extra factor ``|z|^{2(sp-1)}`` instead of pulling back the
        exact exterior integral.
    details : bool
        Return an :class:`LPResult` instead of the bare value.
    """
    _check_ps(p, s)
    if m is None:
        m = default_map(curve, side)
    elif m.orientation != side:
        raise ValueError(f"map orientation {m.orientation!r} does not match side {side!r}")
    if weight not in ("exact", "inverted"):
        raise ValueError("weight must be 'exact' or 'inverted'")
    rule = graded_rule(levels)
    radii = rule.nodes
    g = boundary_on_disk(m, curve, f)
    grad = poisson_field(g, radii).grad_norm
    a = (1 - s) * p
    if weight == "inverted" and side == EXTERIOR:
        psi, dpsi = m.polar_inner(radii, g.n)
        inverted = build_curve(m.solved_radial, curve.n)
        d = inverted.distance(psi)
        dens = grad ** p * np.abs(dpsi) ** (2 - p) * d ** (a - 1) * np.abs(psi) ** (2 * (s * p - 1))
    else:
        phi, dphi = m.polar(radii, g.n)
        d = curve.distance(phi)
        dens = grad ** p * np.abs(dphi) ** (2 - p) * d ** (a - 1)
    profile = 2 * np.pi * radii * dens.mean(axis=1)
    res = radial_integral(rule, profile, a, label=f"Littlewood-Paley ({side})")
    value = max(res.total, 0.0) ** (1 / p)
    if details:
        return LPResult(value, res.total, res.tail, res.divergent, levels, g.n)
    return value


# ---------------------------------------------------------------------------
# pointwise checks
# ---------------------------------------------------------------------------

def holder_seminorm(curve: SampledCurve, f, alpha: float, block: int = 512) -> float:
    """``max |f(z)-f(ζ)| / |z-ζ|^α`` over sample pairs."""
    if not 0 < alpha <= 1:
        raise ValueError("Hölder order must lie in (0, 1]")
    f = _on_curve(curve, f).values
    z = curve.z
    best = 0.0
    for lo in range(0, curve.n, block):
        rows = slice(lo, lo + block)
        chord = np.abs(z[rows, None] - z[None, :])
        diff = np.abs(f[rows, None] - f[None, :])
        with np.errstate(divide="ignore", invalid="ignore"):
            q = np.where(chord > 0, diff / chord ** alpha, 0.0)
        best = max(best, float(q.max()))
    return best


def gradient_bound_check(field: HarmonicField, curve: SampledCurve, p: float, s: float,
                         m: StarlikeMap | None = None, levels: int = 24):
    """Empirical constant in ``|∇u(z)| <= C d(z,Γ)^{-(1+(1-s)p)/p}`` and the LP value.

    ``field`` is the Poisson extension of the pulled-back data ``f∘φ`` on the
    disk; with a map ``m`` the gradient is pushed forward by ``1/|φ'|``.

    Returns
    -------
    (C_emp, norm)
    """
    _check_ps(p, s)
    if field.boundary is None:
        raise ValueError("field must carry its boundary data")
    if m is None:
        m = default_map(curve, INTERIOR)
    phi, dphi = m.polar(field.radii, len(field.theta))
    grad = field.grad_norm / np.abs(dphi)
    d = curve.distance(phi)
    c_emp = float(np.max(grad * d ** ((1 + (1 - s) * p) / p)))
    # the field already lives on the disk, so integrate against the identity pull-back
    rule = graded_rule(levels)
    g = field.boundary
    grad_rule = poisson_field(g, rule.nodes).grad_norm
    phi_r, dphi_r = m.polar(rule.nodes, g.n)
    a = (1 - s) * p
    dens = grad_rule ** p * np.abs(dphi_r) ** (2 - p) * curve.distance(phi_r) ** (a - 1)
    res = radial_integral(rule, 2 * np.pi * rule.nodes * dens.mean(axis=1), a,
                          label="Littlewood-Paley")
    return c_emp, max(res.total, 0.0) ** (1 / p)


def vsp_isometry_check(m: StarlikeMap, poly, p: float, s: float, curve: SampledCurve | None = None,
                       levels: int = 24) -> float:
    """Energy ratio of ``V_{s,p}f`` on the disk to ``f`` on the domain.

    ``poly`` holds the coefficients ``a_k`` of ``f(ζ) = Σ a_k ζ^k``.  With
    ``V' = f'(φ)φ'^{1+1/p-s}`` the numerator is
    ``∬_D |f'(φ)|^p |φ'|^{p+1-sp} (1-|z|)^{(1-s)p-1}`` and the denominator,
    after the change of variables, ``∬_D |f'(φ)|^p |φ'|² d(φ,Γ)^{(1-s)p-1}``.
    """
    _check_ps(p, s)
    if m.orientation != INTERIOR:
        raise ValueError("the transport check uses an interior map")
    if curve is None:
        curve = build_curve(m.spec, m.n)
    poly = np.asarray(poly, dtype=complex)
    deriv = np.polynomial.polynomial.polyder(poly) if len(poly) > 1 else np.zeros(1)
    rule = graded_rule(levels)
    phi, dphi = m.polar(rule.nodes)
    fp = np.abs(np.polynomial.polynomial.polyval(phi, deriv)) ** p
    a = (1 - s) * p
    one_minus = (1 - rule.nodes)[:, None]
    num = fp * np.abs(dphi) ** (p + 1 - s * p) * one_minus ** (a - 1)
    den = fp * np.abs(dphi) ** 2 * curve.distance(phi) ** (a - 1)
    w = 2 * np.pi * rule.nodes
    top = radial_integral(rule, w * num.mean(axis=1), a, label="V transport")
    bottom = radial_integral(rule, w * den.mean(axis=1), a, label="V transport")
    if bottom.total <= 0:
        return 1.0
    return top.total / bottom.total


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

@dataclass
class NormReport:
    p: float
    s: float
    douglas: float
    lp_interior: float | None
    lp_exterior: float | None
    hs_fourier: float | None
    holder: float | None
    n: int
    levels: int
    warnings: list = field(default_factory=list)
    prefractal_level: int | None = None

    def to_json(self) -> dict:
        return asdict(self)


def norm_report(curve: SampledCurve, f, p: float, s: float, levels: int = 24,
                maps: dict | None = None) -> NormReport:
    """All seminorms of ``f`` that make sense on ``curve``."""
    _check_ps(p, s)
    f = _on_curve(curve, f)
    notes = []
    level = curve.spec.level if isinstance(curve.spec, Snowflake) else None
    if level is not None:
        notes.append(f"Douglas norm taken on the level-{level} prefractal")
    douglas = douglas_norm(curve, f, p, s)
    lp_i = lp_e = None
    if radial_function(curve.spec) is not None:
        maps = maps or {}
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", DivergenceWarning)
            lp_i = littlewood_paley_norm(curve, f, p, s, INTERIOR, maps.get(INTERIOR), levels)
            lp_e = littlewood_paley_norm(curve, f, p, s, EXTERIOR, maps.get(EXTERIOR), levels)
        notes.extend(str(w.message) for w in caught if issubclass(w.category, DivergenceWarning))
    else:
        notes.append("Littlewood-Paley norms need a starlike curve; skipped")
    if s >= divergence_threshold(p, 1.0):
        notes.append("s is past the energy-divergence threshold (p+1-h)/p")
    hs = hs_seminorm(f, s) if isinstance(curve.spec, Circle) else None
    holder = holder_seminorm(curve, f, s - 1 / p) if s > 1 / p else None
    return NormReport(p, s, douglas, lp_i, lp_e, hs, holder, curve.n, levels, notes, level)
