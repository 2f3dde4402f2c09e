"""Cauchy integrals on closed curves, Plemelj decomposition, area and Beurling transforms.

Conventions: ``F(z) = (1/2πi)∫_Γ f(ζ)/(ζ-z) dζ`` is ``F_i`` inside and ``F_e``
outside, so that ``f = F_i - F_e`` on ``Γ`` and ``F_e(∞) = 0``.  The
principal value operator ``T`` has traces ``F_i = Tf + f/2`` and
``F_e = Tf - f/2`` at smooth points.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .curves import SampledCurve, Side
from .spaces import douglas_norm
from .spectral import BoundaryFunction, as_boundary, random_trig_coefficients

__all__ = [
    "cauchy_transform",
    "pv_matrix",
    "Decomposition",
    "plemelj_decompose",
    "AreaGrid",
    "side_grid",
    "area_cauchy",
    "beurling_apply",
    "beurling_kernel",
    "operator_norm_estimate",
    "NormEstimate",
]

MAX_UPSAMPLE = 64


# ---------------------------------------------------------------------------
# boundary Cauchy integrals
# ---------------------------------------------------------------------------

def _on_curve(curve, f):
    f = as_boundary(f)
    return f if f.n == curve.n else f.resample(curve.n)


def _derivative_samples(curve: SampledCurve, f: BoundaryFunction) -> np.ndarray:
    """``df/dt`` at the nodes: spectral on smooth curves, centred differences otherwise."""
    if curve.is_smooth:
        return f.derivative().values
    h = 2 * np.pi / curve.n
    v = f.values
    return (np.roll(v, -1) - np.roll(v, 1)) / (2 * h)


def _kernel_weights(curve: SampledCurve) -> np.ndarray:
    """Principal value of ``(1/2πi)∫ dζ/(ζ - z_j)``: 1/2 at smooth nodes, angle/2π at corners."""
    w = np.full(curve.n, 0.5)
    v = curve.vertices
    if v is None:
        return w
    tol = 1e-12 * curve.length
    dist = np.abs(curve.z[:, None] - v[None, :])
    node, vert = np.nonzero(dist < tol)
    for j, k in zip(node, vert):
        e_in = v[k] - v[k - 1]
        e_out = v[(k + 1) % len(v)] - v[k]
        turn = np.angle(e_out / e_in)  # left turn is positive for a ccw polygon
        w[j] = (np.pi - turn) / (2 * np.pi)
    return w


def pv_matrix(curve: SampledCurve) -> np.ndarray:
    """Dense matrix of the principal-value operator ``T`` at the nodes.

    Singularity subtraction: ``Tf_j = (1/2πi)[Σ_{k≠j} (f_k - f_j) z'_k h/(z_k - z_j)
    + h f'(t_j)] + w_j f_j``.
    """
    n = curve.n
    h = 2 * np.pi / n
    z = curve.z
    dz = curve.velocity(curve.t) * h
    diff = z[None, :] - z[:, None]
    np.fill_diagonal(diff, 1.0)
    A = dz[None, :] / diff
    np.fill_diagonal(A, 0.0)
    A[np.diag_indices(n)] = -A.sum(axis=1)
    if curve.is_smooth:
        k = np.fft.fftfreq(n, d=1.0 / n)
        k[n // 2] = 0
        D = np.fft.ifft(1j * k[:, None] * np.fft.fft(np.eye(n), axis=0), axis=0)
    else:
        D = (np.roll(np.eye(n), 1, axis=1) - np.roll(np.eye(n), -1, axis=1)) / (2 * h)
    T = (A + h * D) / (2j * np.pi)
    T[np.diag_indices(n)] += _kernel_weights(curve)
    return T


def _principal_value(curve: SampledCurve, f: BoundaryFunction):
    """Subtracted integral ``S_j`` so that ``F_i = S + f`` and ``F_e = S`` at the nodes."""
    n = curve.n
    h = 2 * np.pi / n
    z = curve.z
    dz = curve.velocity(curve.t) * h
    fv = f.values
    S = np.empty(n, dtype=complex)
    block = 256
    for lo in range(0, n, block):
        idx = np.arange(lo, min(lo + block, n))
        diff = z[None, :] - z[idx, None]
        diff[np.arange(len(idx)), idx] = 1.0
        term = (fv[None, :] - fv[idx, None]) * dz[None, :] / diff
        term[np.arange(len(idx)), idx] = 0.0
        S[idx] = term.sum(axis=1)
    S += h * _derivative_samples(curve, f)
    return S / (2j * np.pi)


@dataclass(frozen=True, eq=False)
class _Upsampled:
    z: np.ndarray
    dz: np.ndarray
    f: np.ndarray


def _upsampled(curve, f, factor):
    if factor == 1:
        return _Upsampled(curve.z, curve.velocity(curve.t) * (2 * np.pi / curve.n), f.values)
    m = curve.n * factor
    t = 2 * np.pi * np.arange(m) / m
    return _Upsampled(curve.position(t), curve.velocity(t) * (2 * np.pi / m), f.resample(m).values)


def _offcurve_sum(data: _Upsampled, z, block=2048):
    out = np.empty(z.shape, dtype=complex)
    w = data.f * data.dz
    for lo in range(0, len(z), block):
        zz = z[lo:lo + block]
        out[lo:lo + block] = (1.0 / (data.z[None, :] - zz[:, None])) @ w
    return out / (2j * np.pi)


def _offcurve(curve, f, z, d=None):
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    if d is None:
        d = curve.distance(flat)
    spacing = curve.spacing
    factor = np.ones(len(flat), dtype=int)
    near = d < 4 * spacing
    factor[near] = 2 ** np.ceil(np.log2(4 * spacing / np.maximum(d[near], 1e-300)))
    factor = np.clip(factor, 1, MAX_UPSAMPLE)
    out = np.empty(len(flat), dtype=complex)
    for fac in np.unique(factor):
        sel = factor == fac
        out[sel] = _offcurve_sum(_upsampled(curve, f, int(fac)), flat[sel])
    return out.reshape(z.shape)


def cauchy_transform(curve: SampledCurve, f, z=None, mode: str = "offcurve"):
    """Cauchy integral of boundary samples ``f`` (on the curve's parameter grid).

    Parameters
    ----------
    mode : {"offcurve", "pv"}
        ``"offcurve"`` evaluates at points ``z`` off the curve (trapezoid rule,
        globally upsampled when a point is within four node spacings).
        ``"pv"`` returns the principal value ``Tf`` at the nodes; ``z`` may then
        hold node indices.
    """
    f = _on_curve(curve, f)
    if mode == "pv":
        S = _principal_value(curve, f)
        Tf = S + _kernel_weights(curve) * f.values
        return Tf if z is None else Tf[np.asarray(z, dtype=int)]
    if mode != "offcurve":
        raise ValueError("mode must be 'offcurve' or 'pv'")
    zz = np.asarray(z, dtype=complex)
    d = curve.distance(zz.ravel())
    if np.any(d < curve.length / (10 * curve.n)):
        raise ValueError("offcurve evaluation requested inside the on-curve band")
    out = _offcurve(curve, f, zz.ravel(), d).reshape(zz.shape)
    return complex(out) if zz.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Plemelj pair of ``f`` on ``curve``.

    ``trace_interior - trace_exterior == f`` holds by construction;
    ``residual`` is the independent check through extrapolated one-sided
    limits of the off-curve integrals.
    """

    curve: SampledCurve
    f: BoundaryFunction
    trace_interior: np.ndarray
    trace_exterior: np.ndarray
    residual: float
    trace_deviation: float
    far_point: complex
    far_value: complex
    check_nodes: np.ndarray = field(repr=False)

    def _evaluate(self, z, side):
        z = np.asarray(z, dtype=complex)
        if np.any(self.curve.side_of(z) != side):
            raise ValueError("evaluation point on the wrong side of the curve")
        return cauchy_transform(self.curve, self.f, z)

    def interior(self, z):
        """``F_i`` at interior points."""
        return self._evaluate(z, Side.INTERIOR)

    def exterior(self, z):
        """``F_e`` at exterior points."""
        return self._evaluate(z, Side.EXTERIOR)

    @property
    def decay_bound(self) -> float:
        """``2‖f‖_∞·diam/10`` (the bound checked at ``10·diam``)."""
        return 2 * float(np.max(np.abs(self.f.values))) * self.curve.diameter / 10

    def to_rows(self):
        t = self.curve.t
        rows = []
        for j in range(self.curve.n):
            rows.append((t[j], self.f.values[j], self.trace_interior[j], self.trace_exterior[j],
                         abs(self.f.values[j] - (self.trace_interior[j] - self.trace_exterior[j]))))
        return rows


def _normals(curve: SampledCurve):
    tau = curve.tangent
    if not curve.is_smooth:
        tau = tau + np.roll(tau, 1)
        tau = tau / np.abs(tau)
    return -1j * tau  # outward for a ccw curve


def one_sided_limits(curve: SampledCurve, f, nodes, offsets=6, order=5):
    """Extrapolate off-curve values along the normal to the curve at ``nodes``.

    Samples at ``δ_k = k·spacing/2``, ``k = 1..offsets``, on each side are
    fitted by a degree-``order`` polynomial in ``δ`` and evaluated at 0.
    """
    f = _on_curve(curve, f)
    nodes = np.asarray(nodes, dtype=int)
    normal = _normals(curve)[nodes]
    delta = np.arange(1, offsets + 1) * curve.spacing / 2
    zi = curve.z[nodes, None] - delta[None, :] * normal[:, None]
    ze = curve.z[nodes, None] + delta[None, :] * normal[:, None]
    vi = _offcurve(curve, f, zi.ravel()).reshape(zi.shape)
    ve = _offcurve(curve, f, ze.ravel()).reshape(ze.shape)
    V = np.vander(delta, order + 1, increasing=True)
    coef_i = np.linalg.lstsq(V, vi.T, rcond=None)[0]
    coef_e = np.linalg.lstsq(V, ve.T, rcond=None)[0]
    return coef_i[0], coef_e[0]


def plemelj_decompose(curve: SampledCurve, f, check_nodes: int = 64) -> Decomposition:
    """Interior/exterior Cauchy pair of ``f`` with an extrapolated-limit residual."""
    f = _on_curve(curve, f)
    S = _principal_value(curve, f)
    trace_i = S + f.values
    trace_e = S
    nodes = np.unique(np.linspace(0, curve.n, min(check_nodes, curve.n), endpoint=False).astype(int))
    lim_i, lim_e = one_sided_limits(curve, f, nodes)
    residual = float(np.max(np.abs(f.values[nodes] - (lim_i - lim_e))))
    deviation = float(max(np.max(np.abs(lim_i - trace_i[nodes])),
                          np.max(np.abs(lim_e - trace_e[nodes]))))
    centre = complex(np.mean(curve.z))
    far = centre + 10 * curve.diameter
    far_value = complex(_offcurve(curve, f, np.array([far]))[0])
    return Decomposition(curve, f, trace_i, trace_e, residual, deviation, far, far_value, nodes)


# ---------------------------------------------------------------------------
# area Cauchy transform
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AreaGrid:
    """Uniform cell grid: cell ``(i, j)`` has centre ``x0 + (j+½)h + i(y0 + (i+½)h)``."""

    x0: float
    y0: float
    h: float
    nx: int
    ny: int

    @property
    def xs(self) -> np.ndarray:
        return self.x0 + self.h * (np.arange(self.nx) + 0.5)

    @property
    def ys(self) -> np.ndarray:
        return self.y0 + self.h * (np.arange(self.ny) + 0.5)

    @property
    def centres(self) -> np.ndarray:
        return self.xs[None, :] + 1j * self.ys[:, None]

    def locate(self, z):
        z = np.asarray(z, dtype=complex)
        j = np.floor((z.real - self.x0) / self.h).astype(int)
        i = np.floor((z.imag - self.y0) / self.h).astype(int)
        return i, j


def _coverage(curve: SampledCurve, grid: AreaGrid, side: str, supersample: int) -> np.ndarray:
    inside_side = Side.INTERIOR if side == "interior" else Side.EXTERIOR
    centres = grid.centres
    frac = (curve.side_of(centres) == inside_side).astype(float)
    d = curve.distance(centres)
    near = d < grid.h * np.sqrt(0.5) * 1.01
    if np.any(near):
        k = supersample
        off = (np.arange(k) + 0.5) / k - 0.5
        sub = (off[None, :] + 1j * off[:, None]).ravel() * grid.h
        pts = centres[near][:, None] + sub[None, :]
        frac[near] = (curve.side_of(pts) == inside_side).mean(axis=1)
    return frac


def side_grid(curve: SampledCurve, side: str = "interior", n: int = 512, pad: float = 0.05,
              supersample: int = 16):
    """Square grid over the bounding box of ``curve`` with the covered fraction of ``side``."""
    zz = curve.z if curve.vertices is None else curve.vertices
    lo = complex(zz.real.min(), zz.imag.min())
    hi = complex(zz.real.max(), zz.imag.max())
    size = max(hi.real - lo.real, hi.imag - lo.imag) * (1 + 2 * pad)
    centre = (lo + hi) / 2
    h = size / n
    grid = AreaGrid(centre.real - size / 2, centre.imag - size / 2, h, n, n)
    return grid, _coverage(curve, grid, side, supersample)


def _rotated_log(w, direction):
    """``log w`` with the branch cut along ``-direction`` (continuous on that half-plane side)."""
    return np.log(w * np.conj(direction)) + 1j * np.angle(direction)


def _cell_integral(z, x0, x1, y0, y1):
    """Exact ``∬_{[x0,x1]×[y0,y1]} dA/(ζ - z)`` by splitting at ``z``."""
    xs = sorted({x0, x1, min(max(z.real, x0), x1)})
    ys = sorted({y0, y1, min(max(z.imag, y0), y1)})
    total = 0j
    for a, b in zip(xs[:-1], xs[1:]):
        for c, d in zip(ys[:-1], ys[1:]):
            if b <= a or d <= c:
                continue
            mid = complex((a + b) / 2, (c + d) / 2) - z
            direction = mid / abs(mid)

            def G(w):
                if w == 0:
                    return 0j
                return -1j * (w * _rotated_log(w, direction) - w)

            total += (G(complex(b, d) - z) - G(complex(a, d) - z)
                      - G(complex(b, c) - z) + G(complex(a, c) - z))
    return total


def area_cauchy(grid: AreaGrid, dbar, z, side: str = "interior", coverage=None):
    """Cauchy transform of area data ``∂̄U`` given at cell centres.

    For data on the interior returns ``F_e(z) = (1/π)∬_{Ω_i} ∂̄U/(ζ - z)``; for
    data on the exterior ``F_i(z) = -(1/π)∬_{Ω_e} ∂̄U/(ζ - z)``.  Cells
    near ``z`` use the exact rectangle integral of the kernel.
    """
    dbar = np.asarray(dbar, dtype=complex)
    if dbar.shape != (grid.ny, grid.nx):
        raise ValueError("dbar data must match the grid shape")
    if coverage is not None:
        dbar = dbar * coverage
    if not np.all(np.isfinite(dbar)):
        raise ValueError("area data not summable on the grid")
    sign = 1.0 if side == "interior" else -1.0
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    centres = grid.centres
    h = grid.h
    flat_c = centres.ravel()
    flat_g = dbar.ravel()
    nz = np.nonzero(flat_g)[0]
    flat_c, flat_g = flat_c[nz], flat_g[nz]
    out = np.empty(len(zs), dtype=complex)
    for k, zk in enumerate(zs):
        w = flat_c - zk
        near = np.abs(w) < 1.5 * h * np.sqrt(2)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.sum(flat_g[~near] / w[~near]) * h * h
        for c, g in zip(flat_c[near], flat_g[near]):
            val += g * _cell_integral(zk, c.real - h / 2, c.real + h / 2,
                                      c.imag - h / 2, c.imag + h / 2)
        out[k] = sign * val / np.pi
    return complex(out[0]) if np.ndim(z) == 0 else out


# ---------------------------------------------------------------------------
# Beurling transform
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def beurling_kernel(n: int, h: float) -> np.ndarray:
    """Cell averages of ``-1/(πz²)`` at offsets ``-n..n-1`` (FFT layout, shape ``(2n, 2n)``).

    The singular cell averages to zero (principal value).
    """
    off = np.fft.fftfreq(2 * n, d=1.0 / (2 * n))
    X, Y = np.meshgrid(off * h, off * h)
    centre = X + 1j * Y
    direction = np.where(centre == 0, 1.0, centre / np.where(centre == 0, 1.0, np.abs(centre)))
    total = np.zeros_like(centre)
    for sx, sy, sgn in ((1, 1, 1), (-1, 1, -1), (1, -1, -1), (-1, -1, 1)):
        w = centre + (sx + 1j * sy) * h / 2
        total += sgn * 1j * _rotated_log(w, direction)
    K = -total / (np.pi * h * h)
    K[centre == 0] = 0.0
    return K


def beurling_apply(g, h: float = 1.0) -> np.ndarray:
    """Beurling transform of cell data ``g`` on a square grid of spacing ``h``.

    Linear convolution with the cell-averaged kernel (zero padding to twice
    the box), so the result is exact for piecewise-constant data up to the
    loss of mass outside the box.
    """
    g = np.asarray(g, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError("Beurling transform expects a square grid")
    n = g.shape[0]
    rows, cols = np.nonzero(g)
    if len(rows):
        extent = max(rows.max() - rows.min(), cols.max() - cols.min()) + 1
        if extent > n / 4:
            raise ValueError("support too large for the box (needs diameter < box/4)")
    K = beurling_kernel(n, float(h))
    pad = np.zeros((2 * n, 2 * n), dtype=complex)
    pad[:n, :n] = g
    conv = np.fft.ifft2(np.fft.fft2(pad) * np.fft.fft2(K))
    return conv[:n, :n] * h * h


# ---------------------------------------------------------------------------
# operator norm estimates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormEstimate:
    estimate: float
    ratios: np.ndarray
    polished: float | None = None


def _besov_norm(curve, f, p, s):
    ds = np.abs(curve.velocity(curve.t)) * (2 * np.pi / curve.n)
    if s == 0:
        return float(np.sum(np.abs(f.values) ** p * ds) ** (1 / p))
    if s == 1:
        speed = ds / (2 * np.pi / curve.n)
        fp = _derivative_samples(curve, f) / speed
        return float(np.sum(np.abs(fp) ** p * ds) ** (1 / p))
    return douglas_norm(curve, f, p, s)


def operator_norm_estimate(curve: SampledCurve, p: float = 2.0, s: float = 0.0, trials: int = 50,
                           seed: int = 0, degree: int = 8, polish: bool = False) -> NormEstimate:
    """Lower-bound estimate of ``‖T‖`` on ``B^s_{p,p}(Γ)`` from random trials.

    Each trial draws a trigonometric polynomial in the curve parameter
    (stream ``(seed, trial)``) and records ``‖Tf‖/‖f‖``.  With ``polish`` and
    ``p = 2, s = 0`` the exact largest singular value of the discrete
    operator in weighted ``L²`` is also computed.
    """
    if not p > 1:
        raise ValueError("p must exceed 1")
    if not 0 <= s <= 1:
        raise ValueError("s must lie in [0, 1]")
    ratios = []
    for trial in range(trials):
        c = random_trig_coefficients(degree, np.random.SeedSequence([seed, trial]).generate_state(1)[0],
                                     curve.n)
        f = BoundaryFunction.from_coefficients(c)
        denom = _besov_norm(curve, f, p, s)
        if denom < 1e-12:
            raise ValueError("degenerate trial function")
        Tf = BoundaryFunction(cauchy_transform(curve, f, mode="pv"))
        ratios.append(_besov_norm(curve, Tf, p, s) / denom)
    ratios = np.array(ratios)
    polished = None
    if polish and p == 2 and s == 0:
        w = np.sqrt(np.abs(curve.velocity(curve.t)))
        T = pv_matrix(curve)
        polished = float(np.linalg.norm(w[:, None] * T / w[None, :], 2))
    est = float(ratios.max()) if polished is None else max(float(ratios.max()), polished)
    return NormEstimate(est, ratios, polished)


@dataclass(frozen=True)
class MuraiProfile:
    """Norm estimates along ``r = 1 + m cos θ`` with the ``(1+M)^{3/2}`` overlay.

    ``overlay`` is ``estimate / (1+M)^{3/2}``; ``envelope`` is the generous
    bound ``3·(1+M)^{3/2}·estimate(m=0)``.
    """

    m: np.ndarray
    M: np.ndarray
    estimate: np.ndarray
    overlay: np.ndarray
    envelope: np.ndarray
    polished: bool

    @property
    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.estimate) >= -1e-9 * self.estimate[:-1]))

    @property
    def within_envelope(self) -> bool:
        return bool(np.all(self.estimate <= self.envelope))

    def rows(self):
        return [(float(a), float(b), float(c), float(d), float(e))
                for a, b, c, d, e in zip(self.m, self.M, self.estimate, self.overlay, self.envelope)]


def murai_profile(ms, p: float = 2.0, s: float = 0.0, n: int = 512, trials: int = 50,
                  seed: int = 0, polish: bool | None = None) -> MuraiProfile:
    """:func:`operator_norm_estimate` over the family ``r = 1 + m cos θ``.

    ``M`` is the geometric ``sup|r'/r|``.  The first entry of ``ms`` must be
    0, the circle baseline of the envelope.  ``polish`` defaults to on when
    the exact ``L²`` norm is available.
    """
    from .curves import RadialLipschitz, build_curve

    ms = np.asarray(ms, dtype=float)
    if ms.ndim != 1 or len(ms) == 0:
        raise ValueError("need a non-empty list of m values")
    if ms[0] != 0 or np.any(np.diff(ms) <= 0) or ms[-1] >= 1:
        raise ValueError("m values must increase from 0 and stay below 1")
    if polish is None:
        polish = p == 2 and s == 0
    M, est = [], []
    for m in ms:
        spec = RadialLipschitz.from_modes({1: float(m)})
        M.append(spec.lipschitz_ratio())
        curve = build_curve(spec, n)
        est.append(operator_norm_estimate(curve, p, s, trials, seed, polish=polish).estimate)
    M, est = np.array(M), np.array(est)
    growth = (1 + M) ** 1.5
    return MuraiProfile(ms, M, est, est / growth, 3 * growth * est[0], bool(polish))
