"""Command-line front end: ``besovlab <command> [options]``.

Commands: curve, weights, region, norms, plemelj, dirichlet, murai.
Invalid input exits with status 2; divergence verdicts are results and exit 0
with a ``warnings`` field.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import report
from ._quad import DivergenceWarning
from .conformal import INTERIOR, lipschitz_data
from .curves import (Circle, Polygon, RadialLipschitz, Snowflake, build_curve, geometry_constants,
                     radial_function, spec_from_json, spec_to_json)
from .dirichlet import dirichlet_sweep
from .geom_diag import admissible_region, ap_constant, estimate_h, minkowski_profile
from .plemelj import murai_profile, plemelj_decompose
from .spaces import default_map, norm_report
from .spectral import load_boundary_csv, parse_boundary_function

COMMANDS = ("curve", "weights", "region", "norms", "plemelj", "dirichlet", "murai")
FORMATS = ("json", "csv", "svg")


class ConfigError(ValueError):
    """Invalid command-line configuration (exit status 2)."""


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def parse_curve(text: str):
    """Curve from a JSON file, inline JSON, or a shorthand.

    Shorthands: ``circle[:R]``, ``snowflake:L``, ``square``, and
    ``radial:amp@k[,amp@k...]`` for ``r = 1 + Σ amp cos kθ``.
    """
    if os.path.isfile(text):
        with open(text) as fh:
            return spec_from_json(json.load(fh))
    if text.lstrip().startswith("{"):
        return spec_from_json(json.loads(text))
    name, _, arg = text.partition(":")
    if name == "circle":
        return Circle(float(arg) if arg else 1.0)
    if name == "snowflake":
        return Snowflake(int(arg or 4))
    if name == "square":
        return Polygon((-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j))
    if name == "radial" and arg:
        modes = {}
        for item in arg.split(","):
            amp, _, k = item.partition("@")
            modes[int(k or 1)] = float(amp)
        return RadialLipschitz.from_modes(modes)
    raise ConfigError(f"cannot read curve {text!r}")


def parse_list(text: str | None, name: str) -> list[float]:
    """``"a,b,c"`` or ``"start:stop:count"`` (inclusive linspace)."""
    if text is None:
        return []
    text = text.strip()
    if not text:
        raise ConfigError(f"empty sweep list for --{name}")
    try:
        if text.count(":") == 2:
            a, b, k = text.split(":")
            vals = list(np.linspace(float(a), float(b), int(k)))
        else:
            vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse --{name} {text!r}") from exc
    if not vals:
        raise ConfigError(f"empty sweep list for --{name}")
    return vals


@dataclass
class ExperimentConfig:
    command: str
    curve: str = "circle"
    f: str = "mode:1"
    p: list = field(default_factory=list)
    s: list = field(default_factory=list)
    n: int = 512
    levels: int | None = None
    seed: int = 0
    out: str | None = None
    format: str = "json"
    h: float | None = None
    alpha: list = field(default_factory=list)
    m: list = field(default_factory=list)
    trials: int | None = None
    grid: int = 1024
    kind: str = "radial-cutoff"

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")
        if self.n < 64 or self.n & (self.n - 1):
            raise ConfigError("--n must be a power of two >= 64")
        if self.format == "svg" and self.command not in ("region", "curve"):
            raise ConfigError("svg output exists for the region and curve commands only")
        if self.levels is not None and self.levels < 1:
            raise ConfigError("--levels must be positive")
        if self.trials is not None and self.trials < 1:
            raise ConfigError("--trials must be positive")
        return self

    def settings(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if k not in ("out", "format")}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="besovlab", description="Besov-space experiments on planar curves.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--curve", default="circle", help="JSON file, inline JSON or shorthand")
    ap.add_argument("--f", default="mode:1", help="built-in boundary function or CSV path")
    ap.add_argument("--p", help="exponent(s): 'a,b,c' or 'start:stop:count'")
    ap.add_argument("--s", help="smoothness value(s)")
    ap.add_argument("--n", type=int, default=512, help="boundary samples (power of two)")
    ap.add_argument("--levels", type=int, help="graded radial layers (A_p refinement levels for weights)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", help="output path (default stdout)")
    ap.add_argument("--format", default="json", choices=FORMATS)
    ap.add_argument("--svg", action="store_true", help="shorthand for --format svg")
    ap.add_argument("--h", type=float, help="regularity degree for region")
    ap.add_argument("--alpha", help="weight exponent(s) α in d(z,Γ)^α for weights")
    ap.add_argument("--m", help="cosine amplitudes for murai (first must be 0)")
    ap.add_argument("--trials", type=int)
    ap.add_argument("--grid", type=int, default=1024, help="cells per side for sausage counts")
    ap.add_argument("--kind", default="radial-cutoff", choices=("radial-cutoff", "reflection"))
    return ap


def config_from_args(argv=None) -> ExperimentConfig:
    args = build_parser().parse_args(argv)
    cfg = ExperimentConfig(
        command=args.command, curve=args.curve, f=args.f,
        p=parse_list(args.p, "p"), s=parse_list(args.s, "s"), n=args.n, levels=args.levels,
        seed=args.seed, out=args.out, format="svg" if args.svg else args.format, h=args.h,
        alpha=parse_list(args.alpha, "alpha"), m=parse_list(args.m, "m"), trials=args.trials,
        grid=args.grid, kind=args.kind,
    )
    return cfg.validate()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

@dataclass
class Output:
    payload: dict
    header: tuple = ()
    rows: list = field(default_factory=list)
    svg: str | None = None


def _boundary(cfg, curve):
    if os.path.isfile(cfg.f):
        return load_boundary_csv(cfg.f, curve.n)
    return parse_boundary_function(cfg.f, curve.n)


def _sausage_radii(curve, grid):
    """Eight geometric radii from ``diam/2`` down to the smallest one the grid resolves."""
    x, y = curve.z.real, curve.z.imag
    width = max(np.ptp(x), np.ptp(y))
    t_min = 4.2 * 1.02 * width / grid
    t_max = curve.diameter / 2
    if t_min >= t_max:
        raise ConfigError("--grid too small for a sausage profile")
    return np.geomspace(t_max, t_min, 8)


def cmd_curve(cfg: ExperimentConfig) -> Output:
    spec = parse_curve(cfg.curve)
    curve = build_curve(spec, cfg.n)
    K, C = geometry_constants(curve)
    payload = {"curve": spec_to_json(spec), "n": curve.n, "length": curve.length,
               "diameter": curve.diameter, "area": curve.area, "chord_arc_K": K, "quasicircle_C": C}
    notes = []
    if radial_function(spec) is not None:
        lip = lipschitz_data(default_map(curve, INTERIOR))
        payload.update(lipschitz_M=lip.M, lipschitz_M_geometric=lip.M_geometric,
                       p_interval=list(lip.p_interval))
    profile, layers = minkowski_profile(curve, _sausage_radii(curve, cfg.grid), grid=cfg.grid)
    try:
        h = estimate_h(profile)
    except ValueError as exc:
        h = None
        notes.append(f"no regularity estimate: {exc}")
    if isinstance(spec, Snowflake):
        notes.append(f"sausage counted on the level-{spec.level} prefractal")
    payload.update(h_estimate=h, sausage={"t": profile.t, "area": profile.area, "cell": profile.cell},
                   layers={"n": list(range(len(layers))), "layer_area": layers}, warnings=notes)
    rows = [(t, a) for t, a in zip(profile.t, profile.area)]
    svg = None
    if cfg.format == "svg":
        svg = report.render_loglog_svg(profile.t, profile.area, "t", "sausage area",
                                       "Minkowski sausage", fit=profile.loglog_fit())
    return Output(payload, ("t", "area"), rows, svg)


def cmd_weights(cfg: ExperimentConfig) -> Output:
    curve = build_curve(parse_curve(cfg.curve), cfg.n)
    alphas = cfg.alpha or [-1.2, -0.8, -0.5]
    ps = cfg.p or [2.0]
    results = [ap_constant(curve, a, p, levels=cfg.levels or 3) for p in ps for a in alphas]
    rows = [(r.p, r.alpha, r.alpha_curve, r.constant, max(r.growth), r.verdict) for r in results]
    return Output({"curve": spec_to_json(curve.spec), "estimates": [r.to_json() for r in results]},
                  ("p", "alpha", "alpha_curve", "constant", "max_growth", "verdict"), rows)


def cmd_region(cfg: ExperimentConfig) -> Output:
    if cfg.h is None:
        raise ConfigError("region needs --h")
    ps = cfg.p or list(np.linspace(1.05, 6.0, 100))
    ss = cfg.s or list(np.linspace(0.005, 0.995, 100))
    region = admissible_region(cfg.h, ps, ss)
    rows = list(region.rows())
    payload = {"h": region.h, "p": region.p, "s": region.s, "admissible": region.admissible}
    svg = report.render_region_svg(region) if cfg.format == "svg" else None
    return Output(payload, ("p", "s", "admissible"), rows, svg)


def cmd_norms(cfg: ExperimentConfig) -> Output:
    curve = build_curve(parse_curve(cfg.curve), cfg.n)
    f = _boundary(cfg, curve)
    maps = None
    if radial_function(curve.spec) is not None:
        from .conformal import EXTERIOR
        maps = {INTERIOR: default_map(curve, INTERIOR), EXTERIOR: default_map(curve, EXTERIOR)}
    reports = [norm_report(curve, f, p, s, cfg.levels or 24, maps)
               for p in (cfg.p or [2.0]) for s in (cfg.s or [0.5])]
    header = ("p", "s", "douglas", "lp_interior", "lp_exterior", "hs_fourier", "holder", "warnings")
    rows = [(r.p, r.s, r.douglas, r.lp_interior, r.lp_exterior, r.hs_fourier, r.holder, "; ".join(r.warnings))
            for r in reports]
    return Output({"curve": spec_to_json(curve.spec), "f": cfg.f,
                   "reports": [r.to_json() for r in reports],
                   "warnings": [w for r in reports for w in r.warnings]}, header, rows)


def cmd_plemelj(cfg: ExperimentConfig) -> Output:
    curve = build_curve(parse_curve(cfg.curve), cfg.n)
    dec = plemelj_decompose(curve, _boundary(cfg, curve))
    payload = {"curve": spec_to_json(curve.spec), "f": cfg.f, "n": curve.n,
               "residual": dec.residual, "trace_deviation": dec.trace_deviation,
               "far_point": dec.far_point, "far_value": dec.far_value,
               "decay_bound": dec.decay_bound, "check_nodes": len(dec.check_nodes)}
    header = ("theta", "re_f", "im_f", "re_F_i", "im_F_i", "re_F_e", "im_F_e", "residual")
    rows = [(t, fv.real, fv.imag, fi.real, fi.imag, fe.real, fe.imag, res)
            for t, fv, fi, fe, res in dec.to_rows()]
    return Output(payload, header, rows)


def cmd_dirichlet(cfg: ExperimentConfig) -> Output:
    curve = build_curve(parse_curve(cfg.curve), cfg.n)
    sweep = dirichlet_sweep(curve, cfg.p or [3.0], cfg.s or [0.7], cfg.trials or 20, cfg.seed,
                            cfg.kind, cfg.levels or 24)
    payload = {"curve": spec_to_json(curve.spec), "kind": cfg.kind, "M": sweep.M,
               "summary": sweep.summary, "warnings": sweep.flags,
               "rows": [dict(zip(("p", "s", "M", "trial", "ratio"), r)) for r in sweep.rows]}
    return Output(payload, ("p", "s", "M", "trial", "ratio"), sweep.rows)


def cmd_murai(cfg: ExperimentConfig) -> Output:
    ms = cfg.m or [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6]
    p = cfg.p[0] if cfg.p else 2.0
    s = cfg.s[0] if cfg.s else 0.0
    prof = murai_profile(ms, p, s, cfg.n, cfg.trials or 50, cfg.seed)
    payload = {"p": p, "s": s, "n": cfg.n, "polished": prof.polished, "monotone": prof.monotone,
               "within_envelope": prof.within_envelope,
               "profile": [dict(zip(("m", "M", "estimate", "overlay", "envelope"), r)) for r in prof.rows()]}
    return Output(payload, ("m", "M", "estimate", "overlay", "envelope"), prof.rows())


HANDLERS = {"curve": cmd_curve, "weights": cmd_weights, "region": cmd_region, "norms": cmd_norms,
            "plemelj": cmd_plemelj, "dirichlet": cmd_dirichlet, "murai": cmd_murai}


def run(cfg: ExperimentConfig) -> int:
    """Execute one command and write its artifact; returns the exit status."""
    cfg.validate()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DivergenceWarning)
        result = HANDLERS[cfg.command](cfg)
    extra = sorted({str(w.message) for w in caught if issubclass(w.category, DivergenceWarning)})
    if cfg.format == "svg":
        text = result.svg
    elif cfg.format == "csv":
        text = report.dumps_csv(result.header, result.rows)
    else:
        payload = dict(result.payload)
        payload["warnings"] = list(payload.get("warnings", [])) + extra
        payload["run_info"] = report.run_info(cfg.command, cfg.settings())
        text = report.dumps_json(payload)
    for msg in extra:
        print(f"warning: {msg}", file=sys.stderr)
    report.emit(text, cfg.out)
    return 0


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
        return run(cfg)
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)
    except (ConfigError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
