"""FFT analysis on the unit circle.

Boundary data are complex samples on the uniform grid ``θ_k = 2πk/N``.
Fourier coefficients are stored in ``numpy.fft`` order and normalised so
that ``f(θ) = Σ c_n e^{inθ}``; the Nyquist mode counts as a negative
frequency throughout (``numpy.fft.fftfreq`` convention).
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BoundaryFunction",
    "as_boundary",
    "mode_numbers",
    "fourier_coefficients",
    "trig_eval",
    "hs_seminorm",
    "hilbert_transform",
    "HarmonicField",
    "poisson_field",
    "conjugate_on_curve",
    "invert_monotone",
    "parse_boundary_function",
    "load_boundary_csv",
]

_TRUNCATION = 1e-16


def mode_numbers(n: int) -> np.ndarray:
    return np.fft.fftfreq(n, d=1.0 / n).astype(int)


def fourier_coefficients(values) -> np.ndarray:
    return np.fft.fft(np.asarray(values, dtype=complex)) / len(values)


@dataclass(frozen=True, eq=False)
class BoundaryFunction:
    """Complex samples on the uniform grid of ``[0, 2π)``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 1:
            raise ValueError("boundary samples must be one-dimensional")
        if not np.all(np.isfinite(v)):
            raise ValueError("boundary samples must be finite")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def theta(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n) / self.n

    @property
    def coefficients(self) -> np.ndarray:
        return fourier_coefficients(self.values)

    @classmethod
    def from_coefficients(cls, coeffs) -> "BoundaryFunction":
        coeffs = np.asarray(coeffs, dtype=complex)
        return cls(np.fft.ifft(coeffs) * len(coeffs))

    @classmethod
    def from_callable(cls, fn, n: int) -> "BoundaryFunction":
        return cls(fn(2 * np.pi * np.arange(n) / n))

    def __call__(self, t) -> np.ndarray:
        """Trigonometric interpolant evaluated at arbitrary parameters."""
        return trig_eval(self.coefficients, t)

    def derivative(self) -> "BoundaryFunction":
        c = self.coefficients
        k = mode_numbers(self.n)
        d = 1j * k * c
        if self.n % 2 == 0:
            d[self.n // 2] = 0.0
        return BoundaryFunction.from_coefficients(d)

    def resample(self, n: int) -> "BoundaryFunction":
        """Zero-pad or truncate the spectrum to ``n`` samples."""
        c = self.coefficients
        k = mode_numbers(self.n)
        out = np.zeros(n, dtype=complex)
        keep = np.abs(k) < min(self.n, n) / 2
        out[k[keep] % n] = c[keep]
        return BoundaryFunction.from_coefficients(out)

    def __mul__(self, other):
        return BoundaryFunction(self.values * other)

    __rmul__ = __mul__


def as_boundary(f) -> BoundaryFunction:
    return f if isinstance(f, BoundaryFunction) else BoundaryFunction(f)


def trig_eval(coeffs, t, chunk: int = 1 << 22) -> np.ndarray:
    """Evaluate ``Σ c_n e^{int}`` at arbitrary ``t``.

    The Nyquist coefficient is split evenly between ``±N/2`` so that real
    samples interpolate to a real function.  Negligible modes are dropped.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    n = len(coeffs)
    k = mode_numbers(n).astype(float)
    c = coeffs.copy()
    if n % 2 == 0 and c[n // 2] != 0:
        k = np.append(k, n / 2)
        c[n // 2] *= 0.5
        c = np.append(c, c[n // 2])
    amp = np.abs(c)
    keep = amp > _TRUNCATION * max(amp.max(), 1e-300)
    k, c = k[keep], c[keep]
    t = np.asarray(t, dtype=float)
    flat = t.ravel()
    out = np.empty(flat.shape, dtype=complex)
    step = max(1, chunk // max(len(k), 1))
    for lo in range(0, len(flat), step):
        out[lo:lo + step] = np.exp(1j * np.outer(flat[lo:lo + step], k)) @ c
    return out.reshape(t.shape)


def hs_seminorm(f, s: float) -> float:
    """``(Σ |n|^{2s} |f̂(n)|²)^{1/2}`` over the sampled band."""
    f = as_boundary(f)
    c = f.coefficients
    amp = np.abs(c)
    c = np.where(amp > _TRUNCATION * max(amp.max(), 1e-300), c, 0.0)
    k = np.abs(mode_numbers(f.n)).astype(float)
    w = np.where(k > 0, k ** (2 * s), 0.0)
    return float(np.sqrt(np.sum(w * np.abs(c) ** 2)))


def hilbert_transform(f) -> BoundaryFunction:
    """Fourier multiplier ``-i sgn(n)``; the mean is removed."""
    f = as_boundary(f)
    c = f.coefficients * (-1j * np.sign(mode_numbers(f.n)))
    return BoundaryFunction.from_coefficients(c)


@dataclass(frozen=True, eq=False)
class HarmonicField:
    """Poisson extension sampled on the polar grid ``radii × theta``.

    ``grad_x`` and ``grad_y`` are the (complex) partial derivatives of the
    complex-valued field, so ``|∇u|² = |u_x|² + |u_y|²``.
    """

    radii: np.ndarray
    theta: np.ndarray
    u: np.ndarray
    grad_x: np.ndarray
    grad_y: np.ndarray
    boundary: BoundaryFunction | None = None

    @property
    def points(self) -> np.ndarray:
        return self.radii[:, None] * np.exp(1j * self.theta)[None, :]

    @property
    def grad_norm(self) -> np.ndarray:
        return np.sqrt(np.abs(self.grad_x) ** 2 + np.abs(self.grad_y) ** 2)


def poisson_field(f, radii, gradient: bool = True) -> HarmonicField:
    """Harmonic extension ``u(re^{iθ}) = Σ f̂(n) r^{|n|} e^{inθ}`` and its gradient.

    Parameters
    ----------
    f : BoundaryFunction or array_like
    radii : array_like
        Radii in ``[0, 1)``.
    """
    f = as_boundary(f)
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if np.any(radii >= 1) or np.any(radii < 0):
        raise ValueError("radii must lie in [0, 1)")
    n = f.n
    c = f.coefficients
    k = mode_numbers(n)
    ak = np.abs(k)
    theta = 2 * np.pi * np.arange(n) / n
    u = np.empty((len(radii), n), dtype=complex)
    gx = np.empty_like(u)
    gy = np.empty_like(u)
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    for i, r in enumerate(radii):
        rk = r ** ak
        rk[rk < _TRUNCATION] = 0.0
        u[i] = np.fft.ifft(c * rk) * n
        if not gradient:
            continue
        # r^{|n|-1} with the n = 0 term removed
        rk1 = np.where(ak > 0, r ** np.maximum(ak - 1, 0), 0.0)
        rk1[rk1 < _TRUNCATION] = 0.0
        u_r = np.fft.ifft(c * ak * rk1) * n
        u_t_over_r = np.fft.ifft(c * 1j * k * rk1) * n
        gx[i] = cos_t * u_r - sin_t * u_t_over_r
        gy[i] = sin_t * u_r + cos_t * u_t_over_r
    if not gradient:
        gx = gy = None
    return HarmonicField(radii, theta, u, gx, gy, f)


def invert_monotone(sigma, targets, iterations: int = 4) -> np.ndarray:
    """Solve ``σ(θ) = target`` for an increasing circle map given on the uniform grid.

    ``sigma`` holds ``σ(θ_k)`` with ``σ(θ) - θ`` periodic.  A piecewise-linear
    inverse is refined by Newton steps on the trigonometric interpolant.
    """
    sigma = np.asarray(sigma, dtype=float)
    n = len(sigma)
    theta = 2 * np.pi * np.arange(n) / n
    periodic = BoundaryFunction(sigma - theta)
    dper = periodic.derivative()
    targets = np.asarray(targets, dtype=float)
    xs = np.concatenate([sigma - 2 * np.pi, sigma, sigma + 2 * np.pi, [sigma[0] + 4 * np.pi]])
    ys = np.concatenate([theta - 2 * np.pi, theta, theta + 2 * np.pi, [4 * np.pi]])
    base = np.floor((targets - sigma[0]) / (2 * np.pi)) * 2 * np.pi
    x = np.interp(targets - base, xs, ys) + base
    for _ in range(iterations):
        g = x + periodic(x).real - targets
        gp = 1.0 + dper(x).real
        x = x - g / gp
    return x


def conjugate_on_curve(f, sigma) -> BoundaryFunction:
    """Conjugate operator transported by a circle homeomorphism.

    Returns ``V_σ^{-1} H V_σ f`` where ``V_σ f = f∘σ``.  Composition uses the
    trigonometric interpolant of the samples (exact for band-limited data).
    """
    f = as_boundary(f)
    sigma = np.asarray(sigma, dtype=float)
    if len(sigma) != f.n:
        raise ValueError("sigma and f must share the sample grid")
    step = np.diff(np.append(sigma, sigma[0] + 2 * np.pi))
    if np.any(step <= 0):
        raise ValueError("boundary correspondence must be strictly increasing")
    composed = BoundaryFunction(f(sigma))
    conj = hilbert_transform(composed)
    back = invert_monotone(sigma, f.theta)
    return BoundaryFunction(conj(back))


# ---------------------------------------------------------------------------
# named built-ins and CSV import
# ---------------------------------------------------------------------------

def random_trig_coefficients(degree: int, seed: int, n: int) -> np.ndarray:
    """Gaussian coefficients on modes ``-degree..degree`` (fft order, length ``n``)."""
    if 2 * degree >= n:
        raise ValueError("trig degree too large for the sample count")
    rng = np.random.default_rng(seed)
    modes = np.arange(-degree, degree + 1)
    vals = (rng.standard_normal(len(modes)) + 1j * rng.standard_normal(len(modes))) / np.sqrt(2)
    c = np.zeros(n, dtype=complex)
    c[modes % n] = vals
    return c


def parse_boundary_function(name: str, n: int) -> BoundaryFunction:
    """Built-ins ``mode:k``, ``cos:k``, ``sin:k``, ``const[:c]`` and ``random-trig:degree:seed``."""
    parts = name.split(":")
    theta = 2 * np.pi * np.arange(n) / n
    try:
        kind = parts[0]
        if kind == "mode":
            return BoundaryFunction(np.exp(1j * int(parts[1]) * theta))
        if kind == "cos":
            return BoundaryFunction(np.cos(int(parts[1]) * theta))
        if kind == "sin":
            return BoundaryFunction(np.sin(int(parts[1]) * theta))
        if kind == "const":
            return BoundaryFunction(np.full(n, complex(parts[1]) if len(parts) > 1 else 1.0))
        if kind == "random-trig":
            c = random_trig_coefficients(int(parts[1]), int(parts[2]), n)
            return BoundaryFunction.from_coefficients(c)
    except (IndexError, ValueError) as exc:
        raise ValueError(f"malformed boundary function {name!r}") from exc
    raise ValueError(f"unknown boundary function {name!r}")


def load_boundary_csv(path, n: int | None = None) -> BoundaryFunction:
    """Read ``θ, Re f, Im f`` rows sampled on a uniform grid; optional resampling to ``n``."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                vals = [float(x) for x in row]
            except ValueError:
                continue  # header
            rows.append(vals)
    if not rows:
        raise ValueError(f"no samples in {path}")
    arr = np.array(rows, dtype=float)
    theta = arr[:, 0]
    m = len(theta)
    if not np.allclose(theta, 2 * np.pi * np.arange(m) / m, atol=1e-9):
        raise ValueError("CSV samples must sit on the uniform grid 2πk/N")
    imag = arr[:, 2] if arr.shape[1] > 2 else 0.0
    f = BoundaryFunction(arr[:, 1] + 1j * imag)
    return f if n is None or n == m else f.resample(n)
