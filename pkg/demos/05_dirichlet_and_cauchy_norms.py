"""Energy minimality of harmonic extensions and growth of the Cauchy
operator with the Lipschitz constant.

At p = 2, s = 1/2 the harmonic extension has the smallest weighted
energy, so every competitor ratio is at most one.  Away from that point
the ratio is a finite constant.  The Cauchy integral's norm on L^2 of the
curves r = 1 + m cos θ grows slowly with their Lipschitz constant.

Run:  python3 demos/05_dirichlet_and_cauchy_norms.py
"""
from besovlab import Circle, RadialLipschitz, build_curve, dirichlet_sweep, murai_profile

for name, spec in (("circle", Circle(1.0)), ("r = 1 + 0.2 cos 3θ", RadialLipschitz.from_modes({3: 0.2}))):
    curve = build_curve(spec, 256)
    sweep = dirichlet_sweep(curve, [2.0, 3.0], [0.5, 0.7], trials=6, seed=0)
    print(f"{name} (M = {sweep.M:.3f})")
    for entry in sweep.summary:
        tag = "exploratory" if entry["exploratory"] else "predicted bounded"
        print(f"  p = {entry['p']:g}, s = {entry['s']:g}: max ratio {entry['max_ratio']:.4f} ({tag})")

prof = murai_profile([0.0, 0.2, 0.4, 0.6], n=256, trials=20)
print("\n   m      M   estimate  estimate/(1+M)^1.5")
for m, M, est, over, _ in prof.rows():
    print(f"{m:4.1f} {M:6.3f} {est:10.4f} {over:12.4f}")
print("monotone:", prof.monotone, " within envelope:", prof.within_envelope)
