"""Minkowski sausages of a snowflake and the regularity degree.

The area of the t-neighbourhood of a fractal curve shrinks like
t^(2 - h); the fitted slope recovers h close to log 4 / log 3.  The
profile is also written as a log-log SVG.  Takes about a minute.

Run:  python3 demos/03_snowflake_sausage.py [output.svg]
"""
import sys

import numpy as np

from besovlab import Snowflake, build_curve, estimate_h, minkowski_profile
from besovlab.report import render_loglog_svg

curve = build_curve(Snowflake(5), 4096)
t = 3.0 ** -np.arange(1, 7)
profile, layers = minkowski_profile(curve, t, grid=4096)
for tk, a in zip(profile.t, profile.area):
    print(f"t = {tk:.5f}  area = {a:.6f}")
h = estimate_h(profile)
print(f"estimated h = {h:.4f} (log 4 / log 3 = {np.log(4) / np.log(3):.4f})")
print("interior dyadic layer areas:", " ".join(f"{v:.4f}" for v in layers))

out = sys.argv[1] if len(sys.argv) > 1 else None
if out:
    with open(out, "w") as fh:
        fh.write(render_loglog_svg(profile.t, profile.area, "t", "sausage area", "snowflake sausage",
                                   fit=profile.loglog_fit()))
    print("wrote", out)
