import json
import math

import numpy as np
import pytest

from besovlab import Circle, Polygon, RadialLipschitz, Snowflake, admissible_region
from besovlab.cli import ConfigError, main, parse_curve, parse_list
from besovlab.report import dumps_csv, dumps_json, render_loglog_svg, render_region_svg, to_jsonable


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_norms_example(capsys):
    code, out, _ = run_cli(capsys, "norms", "--curve", "circle", "--f", "mode:1", "--p", "2", "--s", "0.5")
    assert code == 0
    data = json.loads(out)
    rep = data["reports"][0]
    assert rep["douglas"] == pytest.approx(2 * math.pi, rel=0.01)
    assert rep["lp_interior"] == pytest.approx(math.sqrt(2 * math.pi), rel=0.01)
    assert isinstance(data["warnings"], list)
    prov = data["run_info"]
    assert prov["settings"]["n"] == 512 and set(prov["versions"]) >= {"numpy", "scipy", "besovlab"}


def test_norms_byte_identical(capsys):
    argv = ("norms", "--curve", "radial:0.2@3", "--f", "random-trig:6:4", "--p", "2,3", "--s", "0.4", "--n", "256")
    assert run_cli(capsys, *argv)[1] == run_cli(capsys, *argv)[1]


@pytest.mark.parametrize("argv", [
    ("dirichlet", "--p", ""),
    ("norms", "--s", ","),
    ("norms", "--n", "100"),
    ("norms", "--curve", "blob"),
    ("region",),
    ("norms", "--format", "svg"),
    ("nonsense",),
])
def test_invalid_configs_exit_2(capsys, argv):
    code, _, err = run_cli(capsys, *argv)
    assert code == 2
    assert err


def test_region_svg(capsys):
    code, out, _ = run_cli(capsys, "region", "--h", "1.5", "--svg")
    assert code == 0
    assert out.startswith("<svg") and "<polygon" in out and "h = 1.5" in out
    assert run_cli(capsys, "region", "--h", "1.5", "--svg")[1] == out


def test_region_json_and_file(capsys, tmp_path):
    path = tmp_path / "region.csv"
    code, out, _ = run_cli(capsys, "region", "--h", "1.2", "--p", "1.5:3:4", "--s", "0.25,0.75",
                           "--format", "csv", "--out", str(path))
    assert code == 0 and out == ""
    lines = path.read_text().splitlines()
    assert lines[0] == "p,s,admissible" and len(lines) == 9


def test_region_full_square_at_h_one():
    svg = render_region_svg(admissible_region(1.0, np.linspace(1.1, 5, 20), np.linspace(0.05, 0.95, 10)))
    poly = svg.split('<polygon points="')[1].split('"')[0]
    ys = sorted({float(pt.split(",")[1]) for pt in poly.split()})
    # frame spans y = 20 (s = 1) to y = 316 (s = 0)
    assert ys[0] == pytest.approx(20) and ys[-1] == pytest.approx(316)
    assert svg.count("<polygon") == 1


def test_region_empty_sliver():
    region = admissible_region(1.999, [2.0, 2.001], [0.5])
    svg = render_region_svg(region)
    assert svg.endswith("</svg>\n")


def test_plemelj_csv(capsys):
    code, out, _ = run_cli(capsys, "plemelj", "--curve", "circle", "--f", "mode:2", "--n", "128", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("theta,re_f") and len(lines) == 129


def test_plemelj_json(capsys):
    code, out, _ = run_cli(capsys, "plemelj", "--curve", "radial:0.3@2", "--f", "random-trig:8:1", "--n", "512")
    data = json.loads(out)
    assert data["residual"] < 1e-5
    assert math.hypot(*data["far_value"]) <= data["decay_bound"]


def test_dirichlet_csv(capsys):
    code, out, _ = run_cli(capsys, "dirichlet", "--curve", "circle", "--p", "2", "--s", "0.5",
                           "--trials", "3", "--n", "256", "--format", "csv")
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert len(rows) == 3 and all(float(r[4]) <= 1 + 1e-3 for r in rows)


def test_murai_json(capsys):
    code, out, _ = run_cli(capsys, "murai", "--m", "0,0.3", "--trials", "4", "--n", "128")
    data = json.loads(out)
    assert code == 0 and data["monotone"] and len(data["profile"]) == 2


def test_weights_negative_alpha(capsys):
    code, out, _ = run_cli(capsys, "weights", "--alpha=-0.5", "--levels", "3", "--n", "256", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "p,alpha,alpha_curve,constant,max_growth,verdict"


def test_curve_command(capsys):
    code, out, _ = run_cli(capsys, "curve", "--curve", "circle", "--grid", "512", "--n", "256")
    data = json.loads(out)
    assert code == 0
    assert data["chord_arc_K"] == pytest.approx(math.pi / 2, rel=0.01)
    assert data["h_estimate"] is None or abs(data["h_estimate"] - 1) < 0.1


def test_parse_curve_shorthands(tmp_path):
    assert parse_curve("circle") == Circle(1.0)
    assert parse_curve("circle:2") == Circle(2.0)
    assert parse_curve("snowflake:3") == Snowflake(3)
    assert isinstance(parse_curve("square"), Polygon)
    assert parse_curve("radial:0.2@3") == RadialLipschitz.from_modes({3: 0.2})
    path = tmp_path / "c.json"
    path.write_text('{"type": "circle", "radius": 3}')
    assert parse_curve(str(path)) == Circle(3.0)
    with pytest.raises(ConfigError):
        parse_curve("ellipse")


def test_parse_list():
    assert parse_list("1,2.5", "p") == [1.0, 2.5]
    assert parse_list("0:1:3", "s") == [0.0, 0.5, 1.0]
    assert parse_list(None, "p") == []
    for bad in ("", "a,b", " , "):
        with pytest.raises(ConfigError):
            parse_list(bad, "p")


def test_serialisation_helpers():
    obj = {"x": np.float64(np.inf), "z": 1 + 2j, "a": np.arange(2), "b": np.bool_(True), "n": float("nan")}
    assert to_jsonable(obj) == {"x": "inf", "z": [1.0, 2.0], "a": [0, 1], "b": True, "n": "nan"}
    assert json.loads(dumps_json(obj))["x"] == "inf"
    assert dumps_csv(("a", "b"), [(True, 0.1)]) == "a,b\n1,0.1\n"


def test_loglog_svg():
    t = np.geomspace(1, 0.01, 5)
    svg = render_loglog_svg(t, 3 * t, fit=(1.0, math.log10(3)))
    assert svg.count("<circle") == 5 and "stroke-dasharray" in svg
    assert render_loglog_svg(t, 3 * t) == render_loglog_svg(t, 3 * t)
