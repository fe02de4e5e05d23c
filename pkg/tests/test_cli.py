import json
import subprocess
import sys

import numpy as np
import pytest

from zhscale.cli import RunConfig, UsageError, main
from zhscale.diagram import hadamard, to_json, z_spider
from zhscale.scalable import BitMatrix, arrow, s_to_json


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, data in {
        "had": to_json(hadamard()),
        "big": to_json(z_spider(14, 14)),
        "arrow": s_to_json(arrow("yellow", BitMatrix([[1, 0], [1, 1]], 2, 2))),
        "f": {"n": 1, "values": [{"re": 1.0, "im": 0.0}, {"re": 0.0, "im": 1.0}]},
        "f_exact": {"n": 1, "values": ["0", "1/2"]},
        "sym": ["0", "1/4", "1/2", "1/4"],
        "bad": {"nodes": "nope"},
    }.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(data))
        paths[name] = str(p)
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\ntol = 1e-6\nseed = 3\n")
    paths["cfg"] = str(cfg)
    return paths


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


def test_eval_hadamard(files, capsys):
    assert main(["eval", files["had"], "--json"]) == 0
    out = _json_out(capsys)
    t = np.array([[complex(*z) for z in row] for row in out["tensor"]])
    np.testing.assert_allclose(t, np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-12)


def test_eval_capacity(files, capsys):
    assert main(["eval", files["big"]]) == 1
    assert "capacity" in capsys.readouterr().out


def test_eval_scalable_file(files, capsys):
    assert main(["eval", files["arrow"], "--json"]) == 0
    assert _json_out(capsys)["shape"] == [4, 4]


def test_parse_errors(files, capsys):
    assert main(["eval", files["bad"]]) == 2
    assert main(["eval", "/nonexistent.json"]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["check", "zs1", "--tol", "0"]) == 2
    assert main(["check", "zs1", "--limit", "2"]) == 2
    assert main(["check", "nope"]) == 2
    assert main(["check", "zs1", "-p", "m"]) == 2


def test_check_rules(capsys):
    assert main(["check", "zs2"]) == 0
    assert "20/20" in capsys.readouterr().out
    assert main(["check", "hs1", "-p", "m=2", "-p", "n=1", "-p", "a=2+1j", "--json"]) == 0
    out = _json_out(capsys)
    assert out["passed"] == out["total"] == 1


def test_check_regular_hyper_pivot(capsys):
    assert main(["check", "rhp", "--seeds", "10"]) == 0
    assert "rhp: 10/10 pass" in capsys.readouterr().out


def test_check_theorems(capsys):
    for name in ("lc", "hlc", "fhp", "mobius-nest"):
        assert main(["check", name, "--seeds", "3"]) == 0, name
    assert main(["check", "tof", "--seeds", "2"]) == 1


def test_check_is_deterministic(capsys):
    main(["check", "lc", "--seeds", "4", "--seed", "5", "--json"])
    first = capsys.readouterr().out
    main(["check", "lc", "--seeds", "4", "--seed", "5", "--json"])
    assert capsys.readouterr().out == first


def test_transform_fourier(files, capsys):
    assert main(["transform", "fourier", files["f"], "--json"]) == 0
    out = _json_out(capsys)
    vals = [complex(*v["value"]) for v in out["values"]]
    np.testing.assert_allclose(vals, [-1j, 1j], atol=1e-12)
    assert out["canonical_branch"] and not out["exact"]
    assert main(["transform", "fourier", files["f_exact"], "--json"]) == 0
    out = _json_out(capsys)
    assert out["exact"] and [v["exponent"] for v in out["values"]] == ["-1/2", "1/2"]


def test_transform_symmetric(files, capsys):
    assert main(["transform", "kravchuk", files["sym"], "--json"]) == 0
    assert len(_json_out(capsys)["values"]) == 4
    assert main(["transform", "kravchuk", files["f_exact"]]) == 2
    assert main(["transform", "hartley", files["sym"]]) == 2


def test_mine(capsys):
    assert main(["mine", "4", "--denominator", "8", "--nontrivial", "--json"]) == 0
    out = _json_out(capsys)
    assert out["found"] and out["searched"] == 16 ** 4
    assert {"1": "1/4", "2": "7/4", "3": "1/4", "4": "7/4"} in [f["gadgets"] for f in out["found"]]


def test_export(files, capsys, tmp_path):
    assert main(["export", files["had"]]) == 0
    assert 'label="H(-1)"' in capsys.readouterr().out
    target = tmp_path / "arrow.dot"
    assert main(["export", files["arrow"], "-o", str(target)]) == 0
    text = target.read_text()
    assert "arrow" in text
    main(["export", files["arrow"], "-o", str(target)])
    assert target.read_text() == text


def test_list(capsys):
    assert main(["list", "--json"]) == 0
    out = _json_out(capsys)
    assert len(out["rules"]) == 11 and "rhp" in out["theorems"]


def test_config_file_and_override(files):
    from zhscale.cli import build_parser, make_config
    args = build_parser().parse_args(["check", "zs1", "--config", files["cfg"]])
    assert make_config(args) == RunConfig(tol=1e-6, seed=3)
    args = build_parser().parse_args(["check", "zs1", "--config", files["cfg"], "--seed", "9"])
    assert make_config(args).seed == 9
    with pytest.raises(UsageError):
        RunConfig(limit=3)


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "zhscale", "eval", files["had"]], capture_output=True, text=True)
    assert proc.returncode == 0 and "0.707107" in proc.stdout
