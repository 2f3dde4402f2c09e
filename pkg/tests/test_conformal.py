import numpy as np
import pytest
from hypothesis import given, strategies as st

from besovlab import (Circle, RadialLipschitz, build_curve, koebe_check, lipschitz_data, p_interval,
                      theodorsen_map)
from besovlab.conformal import ConvergenceError, StarlikeMap, identity_map, map_eval

BUMPY = RadialLipschitz.from_modes({1: 0.2})


@pytest.fixture(scope="module")
def bumpy_map():
    return theodorsen_map(BUMPY, n=1024)


def test_unit_disk_is_identity():
    m = theodorsen_map(RadialLipschitz.from_modes({}), n=256)
    np.testing.assert_allclose(m.sigma, m.theta, atol=1e-14)
    assert m.residual < 1e-14
    phi, dphi = map_eval(m, 0.5)
    assert phi == pytest.approx(0.5) and dphi == pytest.approx(1.0)


def test_scaling_map():
    m = theodorsen_map(Circle(2.0), n=256)
    phi, dphi = map_eval(m, 0.3j)
    assert phi == pytest.approx(0.6j, abs=1e-13)
    assert dphi == pytest.approx(2.0, abs=1e-13)


def test_identity_map_eval():
    phi, dphi = map_eval(identity_map(256), 0.5)
    assert (phi, dphi) == (pytest.approx(0.5), pytest.approx(1.0))


def test_boundary_consistency(bumpy_map):
    m = bumpy_map
    L, _ = m.log_series(np.exp(1j * m.theta))
    np.testing.assert_allclose(L.real, np.log(BUMPY.radius(m.sigma)), atol=1e-8)
    # the imaginary part carries the angle shift
    shift = np.angle(np.exp(1j * (L.imag - (m.sigma - m.theta))))
    assert np.max(np.abs(shift)) < 1e-8


def test_normalisation_and_monotone_correspondence(bumpy_map):
    m = bumpy_map
    phi0, dphi0 = map_eval(m, 0.0)
    assert abs(phi0) == 0
    assert abs(dphi0.imag) < 1e-14 and dphi0.real > 0
    assert np.all(np.diff(np.append(m.sigma, m.sigma[0] + 2 * np.pi)) > 0)
    assert dphi0.real == pytest.approx(np.exp(np.mean(np.log(BUMPY.radius(m.sigma)))), rel=1e-8)


def test_cauchy_riemann_residual(bumpy_map):
    m = bumpy_map
    rng = np.random.default_rng(0)
    z = 0.9 * np.sqrt(rng.uniform(size=200)) * np.exp(2j * np.pi * rng.uniform(size=200))
    h = 1e-5
    fx = (m.eval(z + h)[0] - m.eval(z - h)[0]) / (2 * h)
    fy = (m.eval(z + 1j * h)[0] - m.eval(z - 1j * h)[0]) / (2 * h)
    sup = np.max(np.abs(m.eval(z)[1]))
    assert np.max(np.abs(fy - 1j * fx)) < 1e-8 * sup


def test_image_stays_inside(bumpy_map):
    m = bumpy_map
    phi, _ = m.polar(np.linspace(0.0, 0.999, 50))
    assert np.all(np.abs(phi[1:]) < BUMPY.radius(np.angle(phi[1:])))


def test_exterior_map_reverses_orientation():
    m = theodorsen_map(BUMPY, "exterior", n=1024)
    w = np.exp(1j * m.theta)
    phi, _ = m.eval(w)
    ang = np.angle(phi)
    np.testing.assert_allclose(np.abs(phi), BUMPY.radius(ang), atol=1e-6)
    np.testing.assert_allclose(np.exp(1j * ang), np.exp(1j * m.boundary_parameter), atol=1e-6)
    assert np.all(np.diff(np.unwrap(ang)) < 0)
    # interior points go to the exterior
    inner, _ = m.eval(0.5 * w)
    assert np.all(np.abs(inner) > BUMPY.radius(np.angle(inner)))


def test_koebe_identity():
    k = koebe_check(identity_map(256), build_curve(Circle(1.0), 256))
    # 1 - |z| loses digits at the outermost graded layers
    assert k.min_ratio == pytest.approx(1.0, abs=1e-8)
    assert k.max_ratio == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("modes", [{3: 0.3}, {1: 0.2}, {2: 0.25, 5: 0.05}])
@pytest.mark.parametrize("side", ["interior", "exterior"])
def test_koebe_bounds(modes, side):
    m = theodorsen_map(RadialLipschitz.from_modes(modes), side, n=512)
    k = koebe_check(m)
    assert 0.25 < k.min_ratio <= k.max_ratio < 4


def test_relaxed_regime():
    m = theodorsen_map(RadialLipschitz.from_modes({1: 0.8}), n=512)
    assert m.relaxed and m.residual < 1e-12
    with pytest.raises(ConvergenceError):
        theodorsen_map(RadialLipschitz.from_modes({1: 0.9}), n=512, max_iter=300)


def test_rejects_non_starlike():
    from besovlab import Snowflake
    with pytest.raises(ValueError):
        theodorsen_map(Snowflake(2))


def test_lipschitz_circle():
    lip = lipschitz_data(theodorsen_map(Circle(1.0), n=256))
    assert lip.M == pytest.approx(0.0, abs=1e-12)
    assert lip.p_interval == (1.0, np.inf)


def test_lipschitz_matches_geometry():
    spec = RadialLipschitz.from_modes({1: 0.1})
    lip = lipschitz_data(theodorsen_map(spec, n=1024))
    assert lip.M == pytest.approx(spec.lipschitz_ratio(), rel=0.05)


def test_interval_collapses():
    lo, hi = p_interval(1e12)
    assert lo == pytest.approx(2.0, abs=1e-9) and hi == pytest.approx(2.0, abs=1e-9)


@given(st.floats(0.0, 1e3))
def test_interval_is_conjugate_pair(M):
    lo, hi = p_interval(M)
    assert lo <= 2 <= hi
    if np.isfinite(hi):
        assert 1 / lo + 1 / hi == pytest.approx(1.0)


def test_json_round_trip(bumpy_map):
    again = StarlikeMap.from_json(bumpy_map.to_json())
    z = np.array([0.3, 0.5j, -0.7])
    np.testing.assert_allclose(again.eval(z)[0], bumpy_map.eval(z)[0], atol=1e-15)
