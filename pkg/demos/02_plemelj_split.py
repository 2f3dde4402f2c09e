"""Splitting boundary data into holomorphic pieces inside and outside.

The boundary route uses Cauchy integrals; the area route integrates ∂̄ of
any smooth extension.  Both give the same exterior function, and the
one-sided limits of the off-curve integrals reproduce f.

Run:  python3 demos/02_plemelj_split.py
"""
import numpy as np

from besovlab import (BoundaryFunction, Circle, RadialLipschitz, area_cauchy, build_curve, competitor_extension,
                      plemelj_decompose)
from besovlab.plemelj import side_grid
from besovlab.spectral import random_trig_coefficients

peanut = build_curve(RadialLipschitz.from_modes({2: 0.3}), 1024)
for seed in range(3):
    f = BoundaryFunction.from_coefficients(random_trig_coefficients(16, seed, 1024))
    dec = plemelj_decompose(peanut, f)
    print(f"seed {seed}: reconstruction residual {dec.residual:.2e}, "
          f"|F_e| at far point {abs(dec.far_value):.3e} (bound {dec.decay_bound:.3f})")

# Area route on the disk with f = conj(ζ): the cutoff extension has ∂̄
# supported inside, and its Cauchy transform must equal F_e = -1/z.
circle = build_curve(Circle(1.0), 512)
f = circle.z.conj()
grid, cover = side_grid(circle, "interior", n=384)
_, gx, gy = competitor_extension(circle, f).evaluator(grid.centres)
z = np.array([1.5, -1.2j, 2 + 2j])
area = area_cauchy(grid, 0.5 * (gx + 1j * gy), z, "interior", cover)
boundary = plemelj_decompose(circle, f).exterior(z)
for zk, a, b in zip(z, area, boundary):
    print(f"z = {zk:.2f}: area route {a:.5f}, boundary route {b:.5f}, -1/z = {-1 / zk:.5f}")
