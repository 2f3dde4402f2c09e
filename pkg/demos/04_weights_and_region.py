"""Which powers of the distance to a curve are A_p weights, and where the
(p, s) window for a given regularity degree lies.

On the circle d^alpha is an A_2 weight for -1 < alpha < 1.  The refinement
trace of the disk product settles for admissible exponents and keeps
growing for non-integrable ones.  The admissible (p, s) region shrinks as
h grows from 1 towards 2.

Run:  python3 demos/04_weights_and_region.py [region.svg]
"""
import sys

import numpy as np

from besovlab import Circle, admissible_region, ap_constant, build_curve, render_region_svg

circle = build_curve(Circle(1.0), 512)
for alpha in (-1.2, -0.8, -0.5, 0.5):
    est = ap_constant(circle, alpha, 2.0, levels=3)
    trace = " ".join(f"{v:.3g}" for v in est.trace)
    print(f"alpha = {alpha:+.1f}: trace {trace} -> {est.verdict}")

ps, ss = np.linspace(1.05, 6, 100), np.linspace(0.005, 0.995, 100)
for h in (1.0, 1.2619, 1.5, 1.9):
    region = admissible_region(h, ps, ss)
    print(f"h = {h:.4f}: {region.admissible.mean():.1%} of the (p, s) grid admissible")

if len(sys.argv) > 1:
    with open(sys.argv[1], "w") as fh:
        fh.write(render_region_svg(admissible_region(1.5, ps, ss)))
    print("wrote", sys.argv[1])
