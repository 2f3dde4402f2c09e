import numpy as np
import pytest
from scipy.integrate import quad

from besovlab import (BoundaryFunction, Circle, Polygon, RadialLipschitz, almost_dirichlet_ratio, build_curve,
                      competitor_extension, dirichlet_sweep)
from besovlab.dirichlet import (CUTOFF, Reflected, competitor_energy, in_almost_dirichlet_region,
                                smoothstep)
from besovlab.spectral import random_trig_coefficients

N = 512


@pytest.fixture(scope="module")
def trefoil_02():
    return build_curve(RadialLipschitz.from_modes({3: 0.2}), N)


def rand_f(seed, n=N, degree=8):
    return BoundaryFunction.from_coefficients(random_trig_coefficients(degree, seed, n))


def test_smoothstep_shape():
    x = np.linspace(0, 1, 101)
    v, d = smoothstep(x)
    assert np.all(v[x <= CUTOFF[0]] == 0) and np.all(v[x >= CUTOFF[1]] == 1)
    assert np.all(np.diff(v) >= 0)
    h = 1e-6
    xs = np.array([0.3, 0.37, 0.45])
    fd = (smoothstep(xs + h)[0] - smoothstep(xs - h)[0]) / (2 * h)
    np.testing.assert_allclose(smoothstep(xs)[1], fd, rtol=1e-6)


def test_constant_competitor_gradient_in_annulus(unit_circle):
    ext = competitor_extension(unit_circle, np.full(N, 2.0))
    lam = np.abs(ext.points)
    np.testing.assert_allclose(ext.values, 2.0 * smoothstep(lam)[0], atol=1e-12)
    outside = (lam <= CUTOFF[0]) | (lam >= CUTOFF[1])
    assert np.all(ext.grad_norm[outside] < 1e-12)
    assert np.any(ext.grad_norm[~outside] > 0)


@pytest.mark.parametrize("s", [0.5, 0.3, 0.8])
def test_disk_energy_against_radial_quadrature(unit_circle, s):
    a = (1 - s) * 2

    def density(rho):
        v, d = smoothstep(rho)
        return np.pi * (d * d + (v / rho) ** 2) * rho if rho > 0 else 0.0

    ref = quad(density, CUTOFF[0], 1, weight="alg", wvar=(0, a - 1), limit=200)[0]
    got = competitor_energy(unit_circle, np.cos(unit_circle.t), 2, s)
    assert got == pytest.approx(ref, rel=0.01)


def test_reflection_of_identity(unit_circle):
    class Identity:
        def __call__(self, z):
            z = np.asarray(z, dtype=complex)
            return z, np.ones_like(z), 1j * np.ones_like(z)

    radial = competitor_extension(unit_circle, np.ones(N)).evaluator.radial
    refl = Reflected(radial, Identity())
    z = np.array([1.5, 2j, -3 + 1j, 1.1 * np.exp(2j)])
    val, gx, gy = refl(z)
    np.testing.assert_allclose(val, 1 / z.conj(), atol=1e-14)
    # 1/z̄ is antiholomorphic: ∂x = -1/z̄², ∂y = i/z̄²
    np.testing.assert_allclose(gx, -1 / z.conj() ** 2, atol=1e-13)
    np.testing.assert_allclose(gy, 1j / z.conj() ** 2, atol=1e-13)


@pytest.mark.parametrize("kind", ["radial-cutoff", "reflection"])
def test_extension_trace_and_gradient(trefoil_02, kind):
    f = rand_f(2)
    ext = competitor_extension(trefoil_02, f, kind)
    field = ext.evaluator
    theta = trefoil_02.t
    val, _, _ = field.on_coordinates(np.ones_like(theta), theta)
    np.testing.assert_allclose(val, f.values, atol=1e-8)
    lam = 0.4 if kind == "radial-cutoff" else 1.7
    z = lam * trefoil_02.z[::37]
    _, gx, gy = field(z)
    h = 1e-6
    fdx = (field(z + h)[0] - field(z - h)[0]) / (2 * h)
    fdy = (field(z + 1j * h)[0] - field(z - 1j * h)[0]) / (2 * h)
    scale = np.max(np.abs(gx)) + np.max(np.abs(gy))
    assert np.max(np.abs(gx - fdx)) < 1e-4 * scale
    assert np.max(np.abs(gy - fdy)) < 1e-4 * scale


def test_dirichlet_principle_on_disk(unit_circle):
    for k in range(10):
        assert almost_dirichlet_ratio(unit_circle, rand_f(k), 2, 0.5) <= 1 + 1e-3


def test_dirichlet_principle_on_trefoil(trefoil_02):
    for kind in ("radial-cutoff", "reflection"):
        for k in range(3):
            assert almost_dirichlet_ratio(trefoil_02, rand_f(k), 2, 0.5, kind) <= 1 + 1e-3


def test_constant_data_convention(unit_circle):
    res = almost_dirichlet_ratio(unit_circle, np.full(N, 1 - 2j), 2.5, 0.6, details=True)
    assert res.ratio == 1 and res.flag == "constant data"


def test_ratio_scale_invariant(trefoil_02):
    f = rand_f(5)
    base = almost_dirichlet_ratio(trefoil_02, f, 3, 0.7)
    for lam in (1e-3, 2.5j, -40):
        assert almost_dirichlet_ratio(trefoil_02, lam * f.values, 3, 0.7) == pytest.approx(base, rel=1e-10)


def test_non_starlike_rejected():
    square = build_curve(Polygon([0, 1, 1 + 1j, 1j]), 256)
    with pytest.raises(ValueError):
        competitor_extension(square, np.ones(256))


def test_region_predicate():
    assert in_almost_dirichlet_region(3, 0.7, 0.5)
    assert not in_almost_dirichlet_region(3, 0.4, 0.5)
    assert not in_almost_dirichlet_region(1.8, 0.7, 0.5)
    # 1 + π/(2·arctan 1) = 3
    assert not in_almost_dirichlet_region(3.2, 0.7, 1.0)
    assert in_almost_dirichlet_region(50, 0.7, 0.0)


def test_sweep_bounded_under_refinement():
    spec = RadialLipschitz.from_modes({3: 0.2})
    maxima = []
    for n in (256, 512):
        sweep = dirichlet_sweep(build_curve(spec, n), [3.0], [0.7], trials=20, seed=3)
        maxima.append(sweep.summary[0]["max_ratio"])
        assert not sweep.summary[0]["exploratory"]
    assert np.isfinite(maxima).all()
    assert maxima[1] == pytest.approx(maxima[0], rel=0.1)


def test_sweep_deterministic_and_shaped(trefoil_02, monkeypatch):
    a = dirichlet_sweep(trefoil_02, [2.5], [0.3, 0.6], trials=3, seed=9)
    monkeypatch.setenv("LAB_THREADS", "1")
    b = dirichlet_sweep(trefoil_02, [2.5], [0.3, 0.6], trials=3, seed=9)
    assert a.rows == b.rows
    assert len(a.rows) == 6 and len(a.rows[0]) == 5
    assert [e["exploratory"] for e in a.summary] == [True, False]
    with pytest.raises(ValueError):
        dirichlet_sweep(trefoil_02, [], [0.5])
