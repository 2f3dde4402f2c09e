"""Three ways of measuring the smoothness of boundary data.

On the unit circle the Douglas double integral, the Littlewood-Paley energy
of the harmonic extension and the Fourier H^s sum are all explicit for pure
modes.  On a bumpy starlike curve the first two stay comparable, and the
interior and exterior energies stay close to one another.

Run:  python3 demos/01_seminorms_on_curves.py
"""
import numpy as np

from besovlab import (BoundaryFunction, Circle, RadialLipschitz, build_curve, douglas_norm, hs_seminorm,
                      lipschitz_data, littlewood_paley_norm)
from besovlab.spaces import default_map

circle = build_curve(Circle(1.0), 1024)
print("unit circle, p = 2, s = 1/2")
print(f"{'mode':>4} {'Douglas^2':>12} {'4 pi^2 n':>12} {'LP^2':>10} {'2 pi n':>10} {'H^s':>8}")
for k in (1, 2, 4, 8):
    f = BoundaryFunction(np.exp(1j * k * circle.t))
    d2 = douglas_norm(circle, f, 2, 0.5) ** 2
    lp2 = littlewood_paley_norm(circle, f, 2, 0.5) ** 2
    print(f"{k:4d} {d2:12.5f} {4 * np.pi ** 2 * k:12.5f} {lp2:10.5f} {2 * np.pi * k:10.5f} "
          f"{hs_seminorm(f, 0.5):8.4f}")

# A three-lobed curve: r(θ) = 1 + 0.25 cos 3θ.  Its Riemann maps are computed
# once per side and reused.
spec = RadialLipschitz.from_modes({3: 0.25})
curve = build_curve(spec, 512)
maps = {side: default_map(curve, side) for side in ("interior", "exterior")}
lip = lipschitz_data(maps["interior"])
print(f"\nr = 1 + 0.25 cos 3θ: M = {lip.M:.3f}, exponent window ({lip.p_interval[0]:.3f}, "
      f"{lip.p_interval[1]:.3f})")

rng = np.random.default_rng(1)
f = BoundaryFunction.from_coefficients(
    np.fft.fft(np.cos(3 * curve.t) + 0.4j * np.sin(5 * curve.t) + 0.1 * rng.standard_normal(512)) / 512)
print(f"{'p':>4} {'s':>4} {'LP_int/Dou':>11} {'LP_ext/Dou':>11}")
for p in (1.6, 2.0, 3.0):
    for s in (0.3, 0.7):
        d = douglas_norm(curve, f, p, s)
        ri = littlewood_paley_norm(curve, f, p, s, "interior", maps["interior"]) / d
        re = littlewood_paley_norm(curve, f, p, s, "exterior", maps["exterior"]) / d
        print(f"{p:4.1f} {s:4.1f} {ri:11.4f} {re:11.4f}")
