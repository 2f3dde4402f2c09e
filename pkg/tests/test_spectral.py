import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import brentq

from besovlab import (BoundaryFunction, Circle, RadialLipschitz, build_curve, conjugate_on_curve,
                      hilbert_transform, hs_seminorm, littlewood_paley_norm, parse_boundary_function,
                      poisson_field, theodorsen_map)
from besovlab.spectral import load_boundary_csv, random_trig_coefficients

N = 256
THETA = 2 * np.pi * np.arange(N) / N


def random_poly(degree, seed, n=N, real=False):
    f = BoundaryFunction.from_coefficients(random_trig_coefficients(degree, seed, n))
    return BoundaryFunction(f.values.real) if real else f


coeff_lists = st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                       min_size=1, max_size=40)


@given(coeff_lists)
def test_fourier_round_trip(cs):
    c = np.zeros(N, dtype=complex)
    c[:len(cs)] = cs
    f = BoundaryFunction.from_coefficients(c)
    back = BoundaryFunction(f.values).coefficients
    assert np.max(np.abs(back - c)) <= 1e-12 * max(1.0, np.max(np.abs(c)))


def test_hs_examples():
    assert hs_seminorm(np.exp(1j * THETA), 0.3) == pytest.approx(1.0)
    assert hs_seminorm(np.exp(1j * THETA), 1.0) == pytest.approx(1.0)
    assert hs_seminorm(np.full(N, 2.5), 0.5) == pytest.approx(0.0, abs=1e-14)
    assert hs_seminorm(np.exp(3j * THETA), 0.5) == pytest.approx(np.sqrt(3))


@given(st.integers(0, 10 ** 6))
def test_parseval(seed):
    f = random_poly(12, seed)
    centred = f.values - f.values.mean()
    assert hs_seminorm(f, 0.0) == pytest.approx(np.sqrt(np.mean(np.abs(centred) ** 2)), rel=1e-10)


def test_poisson_examples():
    radii = np.array([0.0, 0.3, 0.7, 0.95])
    fld = poisson_field(np.exp(1j * THETA), radii)
    np.testing.assert_allclose(fld.u, fld.points, atol=1e-13)
    np.testing.assert_allclose(fld.grad_norm, np.sqrt(2), atol=1e-12)
    fld = poisson_field(np.cos(THETA), radii)
    np.testing.assert_allclose(fld.u, fld.points.real, atol=1e-13)
    np.testing.assert_allclose(fld.grad_norm, 1.0, atol=1e-12)


def test_poisson_gradient_matches_finite_differences():
    f = np.exp(-2j * THETA)
    h = 1e-6
    fld = poisson_field(f, [0.6])
    z = fld.points[0]
    u = lambda w: np.conj(w) ** 2  # noqa: E731  exact extension
    np.testing.assert_allclose(fld.u[0], u(z), atol=1e-13)
    np.testing.assert_allclose(fld.grad_x[0], (u(z + h) - u(z - h)) / (2 * h), atol=1e-6)
    np.testing.assert_allclose(fld.grad_y[0], (u(z + 1j * h) - u(z - 1j * h)) / (2 * h), atol=1e-6)


def test_poisson_mean_value_and_laplacian():
    f = random_poly(10, 4)
    radii = np.array([0.2, 0.5, 0.8])
    fld = poisson_field(f, radii, gradient=False)
    # mean over every circle |z| = r is the value at the centre
    np.testing.assert_allclose(fld.u.mean(axis=1), f.coefficients[0], atol=1e-12)
    # closed form Σ c_k z^k + c_{-k} z̄^k
    z = fld.points
    c = f.coefficients
    exact = sum(c[k] * z ** k + (c[-k] * np.conj(z) ** k if k else 0) for k in range(11))
    np.testing.assert_allclose(fld.u, exact, atol=1e-12)


def test_hilbert_examples():
    np.testing.assert_allclose(hilbert_transform(np.cos(THETA)).values, np.sin(THETA), atol=1e-14)
    np.testing.assert_allclose(hilbert_transform(np.full(N, 3.0)).values, 0.0, atol=1e-14)


def test_hilbert_matches_cot_kernel():
    f = random_poly(16, 11, real=True)
    # desingularised p.v. (1/2π) ∫ cot((θ-φ)/2) (f(φ) - f(θ)) dφ with the trapezoid rule
    # on a finer grid whose nodes avoid θ
    m = 8192
    phi = 2 * np.pi * (np.arange(m) + 0.5) / m
    fphi = f(phi).real
    out = []
    for th in THETA[::16]:
        k = 1 / np.tan((th - phi) / 2)
        out.append(np.sum(k * (fphi - f(np.array([th])).real[0])) / m)
    np.testing.assert_allclose(hilbert_transform(f).values.real[::16], out, atol=1e-8)


@given(st.integers(0, 10 ** 6))
def test_hilbert_squared(seed):
    f = random_poly(20, seed)
    hh = hilbert_transform(hilbert_transform(f)).values
    np.testing.assert_allclose(hh, -(f.values - f.values.mean()), atol=1e-10)


def test_conjugate_identity_and_constants():
    f = random_poly(8, 1)
    np.testing.assert_allclose(conjugate_on_curve(f, THETA).values, hilbert_transform(f).values, atol=1e-13)
    sigma = THETA + 0.2 * np.sin(THETA)
    np.testing.assert_allclose(conjugate_on_curve(np.full(N, 2.0), sigma).values, 0.0, atol=1e-12)


def test_conjugate_rejects_non_monotone():
    with pytest.raises(ValueError):
        conjugate_on_curve(np.cos(THETA), THETA + 1.5 * np.sin(THETA))


def test_conjugate_matches_transported_completion():
    n = 1024
    m = theodorsen_map(RadialLipschitz.from_modes({1: 0.2}), n=n)
    sigma = m.boundary_parameter
    f = BoundaryFunction.from_callable(np.cos, n)
    got = conjugate_on_curve(f, sigma).values.real
    # oracle: g = f∘σ, analytic completion G = ĝ0 + 2Σ_{k>0} ĝ_k z^k summed directly at
    # e^{iσ^{-1}(θ)}, with σ^{-1} found by bracketing
    g = BoundaryFunction(np.cos(sigma))
    c = g.coefficients
    k = np.arange(1, n // 2)
    wobble = BoundaryFunction(sigma - f.theta)
    def sig(t):
        return t + wobble(np.array([t])).real[0]
    idx = np.arange(0, n, 37)
    for j in idx:
        th = f.theta[j]
        t = brentq(lambda x: sig(x) - th, th - 1.0, th + 1.0, xtol=1e-15)
        im = (2 * np.sum(c[k] * np.exp(1j * k * t))).imag
        assert got[j] == pytest.approx(im, abs=1e-4)


def test_lp_over_hs_is_mode_independent_at_half():
    c = build_curve(Circle(1.0), N)
    ratios = [littlewood_paley_norm(c, np.exp(1j * k * THETA), 2, 0.5) / hs_seminorm(np.exp(1j * k * THETA), 0.5)
              for k in range(1, 13)]
    assert np.ptp(ratios) / np.mean(ratios) < 0.02
    assert np.mean(ratios) == pytest.approx(np.sqrt(2 * np.pi), rel=1e-6)


def test_builtins_and_csv(tmp_path):
    f = parse_boundary_function("mode:3", 64)
    np.testing.assert_allclose(f.values, np.exp(3j * 2 * np.pi * np.arange(64) / 64))
    assert parse_boundary_function("const", 64).values[5] == 1
    r1 = parse_boundary_function("random-trig:5:7", 64)
    r2 = parse_boundary_function("random-trig:5:7", 64)
    np.testing.assert_array_equal(r1.values, r2.values)
    with pytest.raises(ValueError):
        parse_boundary_function("bogus:1", 64)
    path = tmp_path / "f.csv"
    th = 2 * np.pi * np.arange(32) / 32
    rows = "\n".join(f"{t:.17g},{np.cos(t):.17g},{np.sin(t):.17g}" for t in th)
    path.write_text("theta,re,im\n" + rows + "\n")
    g = load_boundary_csv(path, 64)
    np.testing.assert_allclose(g.values, np.exp(1j * 2 * np.pi * np.arange(64) / 64), atol=1e-12)
