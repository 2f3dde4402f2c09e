import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from besovlab import (BoundaryFunction, Circle, RadialLipschitz, build_curve, conjugate_on_curve,
                      douglas_norm, gradient_bound_check, holder_seminorm, littlewood_paley_norm,
                      norm_report, poisson_field, theodorsen_map, vsp_isometry_check, weight_exponent)
from besovlab._quad import graded_rule
from besovlab.conformal import identity_map
from besovlab.spectral import random_trig_coefficients

N = 512
THETA = 2 * np.pi * np.arange(N) / N


def mode(k, n=N):
    return np.exp(1j * k * 2 * np.pi * np.arange(n) / n)


def rand_f(seed, degree=6, n=N):
    return BoundaryFunction.from_coefficients(random_trig_coefficients(degree, seed, n))


def test_weight_exponent():
    assert weight_exponent(2, 0.5) == 0
    assert weight_exponent(3, 0.2) == pytest.approx(1.4)


@pytest.mark.parametrize("fn", [douglas_norm, littlewood_paley_norm])
def test_constants_have_zero_seminorm(unit_circle, fn):
    assert fn(unit_circle, np.full(N, 2 + 1j), 2.5, 0.4) == pytest.approx(0.0, abs=1e-12)


def test_douglas_first_mode(unit_circle):
    assert douglas_norm(unit_circle, mode(1), 2, 0.5) == pytest.approx(2 * np.pi, rel=0.01)


def test_douglas_second_mode_brute_force(unit_circle):
    # |e^{2iθ}-e^{2iφ}|²/|e^{iθ}-e^{iφ}|² = sin²(u)/sin²(u/2) depends on u = θ-φ only
    inner = quad(lambda u: np.sin(u) ** 2 / np.sin(u / 2) ** 2, 0, 2 * np.pi)[0]
    assert douglas_norm(unit_circle, mode(2), 2, 0.5) ** 2 == pytest.approx(2 * np.pi * inner, rel=0.02)
    assert 2 * np.pi * inner == pytest.approx(8 * np.pi ** 2, rel=1e-10)


@pytest.mark.parametrize("p,s", [(1.5, 0.3), (2.0, 0.7), (3.0, 0.5), (4.0, 0.2)])
def test_douglas_general_exponents(unit_circle, p, s):
    # f = e^{iθ}: the integrand is |2 sin(u/2)|^{p - 1 - ps}
    e = p - 1 - p * s
    ref = 2 * np.pi * quad(lambda u: (2 * np.sin(u / 2)) ** e, 0, 2 * np.pi, limit=200)[0]
    assert douglas_norm(unit_circle, mode(1), p, s) ** p == pytest.approx(ref, rel=0.01)


def test_douglas_matches_fourier_identity(unit_circle):
    f = rand_f(5)
    k = np.fft.fftfreq(N, 1 / N)
    ref = 4 * np.pi ** 2 * np.sum(np.abs(k) * np.abs(f.coefficients) ** 2)
    assert douglas_norm(unit_circle, f, 2, 0.5) ** 2 == pytest.approx(ref, rel=0.01)


def test_rejects_bad_exponents(unit_circle):
    for p, s in [(2, 1.0), (2, 1.5), (1.0, 0.5), (0.5, 0.5), (2, 0.0)]:
        with pytest.raises(ValueError):
            douglas_norm(unit_circle, mode(1), p, s)


def test_lp_disk_first_mode(unit_circle):
    assert littlewood_paley_norm(unit_circle, mode(1), 2, 0.5) == pytest.approx(np.sqrt(2 * np.pi), rel=0.01)


@pytest.mark.parametrize("p,s", [(1.5, 0.3), (2.0, 0.8), (3.0, 0.5), (4.0, 0.1)])
def test_lp_disk_closed_form(unit_circle, p, s):
    a = (1 - s) * p
    ref = 2 ** (p / 2) * 2 * np.pi / (a * (a + 1))
    assert littlewood_paley_norm(unit_circle, mode(1), p, s) ** p == pytest.approx(ref, rel=0.02)


def test_lp_exterior_circle(unit_circle):
    val = littlewood_paley_norm(unit_circle, mode(1), 2, 0.5, side="exterior")
    assert val == pytest.approx(np.sqrt(2 * np.pi), rel=0.01)


def test_holder_examples(unit_circle):
    assert holder_seminorm(unit_circle, np.ones(N), 0.5) == 0
    assert holder_seminorm(unit_circle, unit_circle.z, 1.0) == pytest.approx(1.0, rel=0.01)
    assert holder_seminorm(unit_circle, unit_circle.z, 0.5) == pytest.approx(np.sqrt(2), rel=0.02)


def _field(f, radii=None):
    radii = graded_rule(24).nodes if radii is None else radii
    fld = poisson_field(f, radii)
    return fld


def test_gradient_bound_refinement_stable():
    ratios = []
    for n in (256, 512, 1024):
        c = build_curve(Circle(1.0), n)
        c_emp, norm = gradient_bound_check(_field(mode(1, n)), c, 2, 0.7)
        ratios.append(c_emp / norm)
    assert np.isfinite(ratios).all()
    assert max(ratios) / min(ratios) < 1.1


def test_gradient_bound_constant_data(unit_circle):
    c_emp, norm = gradient_bound_check(_field(np.full(N, 3.0)), unit_circle, 2, 0.7)
    assert c_emp == pytest.approx(0.0, abs=1e-12)


def _mode_ratio_oracle(k, p, s):
    # closed form on the disk: |∇z^k| = √2·k·r^{k-1}, sup taken over the distance d = 1 - r
    from scipy.optimize import minimize_scalar
    from scipy.special import beta
    a = (1 - s) * p
    e = (1 + a) / p
    c = -minimize_scalar(lambda d: -(np.sqrt(2) * k * (1 - d) ** (k - 1) * d ** e),
                         bounds=(0, 1), method="bounded").fun
    norm = (2 * np.pi * (np.sqrt(2) * k) ** p * beta(p * (k - 1) + 2, a)) ** (1 / p)
    return c / norm


@pytest.mark.parametrize("p,s", [(2, 0.7), (3, 0.5), (4, 0.5)])
def test_gradient_bound_mode_ratio_matches_closed_form(unit_circle, p, s):
    r1 = np.divide(*gradient_bound_check(_field(mode(1)), unit_circle, p, s))
    r4 = np.divide(*gradient_bound_check(_field(mode(4)), unit_circle, p, s))
    expected = _mode_ratio_oracle(4, p, s) / _mode_ratio_oracle(1, p, s)
    assert r4 / r1 == pytest.approx(expected, rel=0.03)


@pytest.mark.parametrize("p,s", [(3, 0.5), (4, 0.5)])
def test_gradient_bound_uniform_across_modes(unit_circle, p, s):
    r1 = np.divide(*gradient_bound_check(_field(mode(1)), unit_circle, p, s))
    r4 = np.divide(*gradient_bound_check(_field(mode(4)), unit_circle, p, s))
    assert 0.25 < r4 / r1 < 4


def test_vsp_identity_map(unit_circle):
    poly = [0, 1, 0.3 - 0.2j, 0.1]
    assert vsp_isometry_check(identity_map(N), poly, 2.5, 0.4, unit_circle) == pytest.approx(1.0, rel=1e-6)


@pytest.fixture(scope="module")
def tilted():
    spec = RadialLipschitz.from_modes({1: 0.2})
    return theodorsen_map(spec, n=N), build_curve(spec, N)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_vsp_conformal_exponent(tilted, p):
    m, c = tilted
    assert vsp_isometry_check(m, [0, 1, 0.2, 0.05j], p, 1 - 1 / p, c) == pytest.approx(1.0, rel=0.02)


@given(p=st.floats(1.3, 4.0), s=st.floats(0.05, 0.95))
def test_vsp_within_koebe_band(tilted, p, s):
    m, c = tilted
    e = abs((1 - s) * p - 1)
    r = vsp_isometry_check(m, [0, 1, 0.3], p, s, c)
    assert 4.0 ** -e <= r <= 4.0 ** e


def test_conjugate_invariance_on_disk(unit_circle):
    f = BoundaryFunction(rand_f(2).values.real)
    g = conjugate_on_curve(f, THETA)
    for p, s in [(2, 0.5), (3, 0.6)]:
        a = littlewood_paley_norm(unit_circle, f, p, s)
        b = littlewood_paley_norm(unit_circle, g, p, s)
        assert b == pytest.approx(a, rel=0.01)


@given(lam=st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False))
def test_homogeneity(unit_circle, lam):
    f = rand_f(9)
    for fn in (douglas_norm, littlewood_paley_norm):
        base = fn(unit_circle, f, 2.5, 0.6)
        assert fn(unit_circle, lam * f.values, 2.5, 0.6) == pytest.approx(abs(lam) * base, rel=1e-10)


def test_douglas_lp_band_on_circle(unit_circle):
    ratios = [douglas_norm(unit_circle, rand_f(k), 3, 0.4) / littlewood_paley_norm(unit_circle, rand_f(k), 3, 0.4)
              for k in range(20)]
    assert max(ratios) / min(ratios) < 2


def test_grid_refinement_converges():
    spec = RadialLipschitz.from_modes({2: 0.15})
    vals = []
    for n, levels in [(256, 20), (512, 40)]:
        c = build_curve(spec, n)
        f = BoundaryFunction.from_callable(lambda t: np.cos(2 * t) + 0.5j * np.sin(3 * t), n)
        vals.append((douglas_norm(c, f, 2.5, 0.5), littlewood_paley_norm(c, f, 2.5, 0.5, levels=levels),
                     littlewood_paley_norm(c, f, 2.5, 0.5, side="exterior", levels=levels)))
    np.testing.assert_allclose(vals[1], vals[0], rtol=0.01)


def test_norm_report(unit_circle):
    rep = norm_report(unit_circle, mode(1), 2, 0.7)
    assert rep.douglas > 0 and rep.lp_interior > 0 and rep.lp_exterior > 0
    assert rep.hs_fourier == pytest.approx(1.0)
    assert rep.holder is not None and rep.holder > 0
    zero = norm_report(unit_circle, np.ones(N), 2, 0.7)
    assert zero.douglas == pytest.approx(0, abs=1e-12) and zero.lp_interior == pytest.approx(0, abs=1e-12)
    assert set(rep.to_json()) >= {"p", "s", "douglas", "lp_interior", "lp_exterior", "warnings"}


def test_exterior_inverted_weight(unit_circle):
    # at p = 2, s = 1/2 the weight is trivial and both forms are Dirichlet integrals
    f = mode(1)
    exact = littlewood_paley_norm(unit_circle, f, 2, 0.5, side="exterior")
    inverted = littlewood_paley_norm(unit_circle, f, 2, 0.5, side="exterior", weight="inverted")
    assert inverted == pytest.approx(exact, rel=1e-3)
    a = littlewood_paley_norm(unit_circle, f, 3, 0.3, side="exterior")
    b = littlewood_paley_norm(unit_circle, f, 3, 0.3, side="exterior", weight="inverted")
    assert 0.25 < b / a < 4
    with pytest.raises(ValueError):
        littlewood_paley_norm(unit_circle, f, 2, 0.5, weight="appendix")
