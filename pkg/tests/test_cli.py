import json
import math
import subprocess
import sys
from importlib import resources

import numpy as np
import pytest

from poextremes.cli import main

SCEN = resources.files("poextremes") / "scenarios"


def read_csv(path):
    header, rows = [], []
    for line in open(path):
        if line.startswith("#"):
            header.append(line[1:].strip())
        elif not rows and not line[0].isdigit() and not line[0] in "-.":
            cols = line.strip().split(",")
            rows.append(cols)
        else:
            rows.append([float(v) for v in line.strip().split(",")])
    return header, rows[0], np.array(rows[1:])


@pytest.mark.parametrize("fig", ["fig1a", "fig1b", "fig2a", "fig2b", "fig3", "fig4", "fig5", "fig6", "ce4.1", "ce4.2"])
def test_reproduce_matches_expectation(fig, tmp_path, capsys):
    out = tmp_path / f"{fig}.csv"
    assert main(["reproduce", fig, "--grid-points", "400", "--out", str(out)]) == 0
    header, cols, data = read_csv(out)
    assert any(h.startswith("verdict:") for h in header)
    assert cols[:2] == ["t", "x"]
    assert np.all(np.isfinite(data))
    assert "[matches expectation]" in capsys.readouterr().out


def test_fig3_series_and_verdict(tmp_path, capsys):
    out = tmp_path / "fig3.csv"
    assert main(["reproduce", "fig3", "--out", str(out)]) == 0
    header, cols, data = read_csv(out)
    assert cols == ["t", "x", "lhs", "rhs", "diff"]
    assert data.shape == (2000, 5)
    diff, rhs = data[:, 4], data[:, 3]
    assert np.all(diff <= 1e-8 * (1 + np.abs(rhs)))
    np.testing.assert_allclose(data[:, 2] - data[:, 3], diff, atol=1e-15)
    assert "X1:3 <=disp Y1:3" in capsys.readouterr().out


def test_fig1a_changes_sign(tmp_path, capsys):
    out = tmp_path / "fig1a.csv"
    assert main(["reproduce", "fig1a", "--out", str(out)]) == 0
    _, _, data = read_csv(out)
    assert data[:, 4].max() > 0 > data[:, 4].min()
    assert "neither" in capsys.readouterr().out


def test_fig6_ratio_decreasing(tmp_path, capsys):
    out = tmp_path / "fig6.csv"
    assert main(["reproduce", "fig6", "--out", str(out)]) == 0
    _, cols, data = read_csv(out)
    assert cols == ["t", "x", "lhs", "rhs", "ratio", "slope"]
    ratio = data[:, 4]
    assert np.all(np.diff(ratio) <= 1e-8 * (1 + np.abs(ratio[1:])))
    assert "X3:3 >=* Y3:3" in capsys.readouterr().out


def test_reproduce_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["reproduce", "fig4", "--grid-points", "300", "--out", str(a)])
    main(["reproduce", "fig4", "--grid-points", "300", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_reproduce_structured(tmp_path):
    out = tmp_path / "fig5.json"
    assert main(["reproduce", "fig5", "--grid-points", "200", "--format", "structured", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["outcome"] == "A>=B"
    assert len(doc["series"]["x"]) > 0


def test_reproduce_to_stdout(capsys):
    assert main(["reproduce", "fig2a", "--grid-points", "100"]) == 0
    cap = capsys.readouterr()
    assert cap.out.startswith("# scenario: ce3.2a")
    assert "neither" in cap.err


def test_unknown_figure_lists_choices(capsys):
    assert main(["reproduce", "fig9"]) == 2
    err = capsys.readouterr().err
    assert "fig3" in err and "ex5.1" in err


def test_check_registry_files(capsys):
    assert main(["check", str(SCEN / "ex5.1.toml")]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out
    assert main(["check", str(SCEN / "ce3.1a.toml"), "--grid-points", "400"]) == 0


def test_check_structured(tmp_path):
    out = tmp_path / "r.json"
    assert main(["check", str(SCEN / "ex5.3.toml"), "--format", "structured", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["hypotheses_pass"] is True
    assert all(h["status"] == "HOLDS" for h in doc["hypotheses"])


def test_check_mismatch_exit_one(tmp_path):
    text = (SCEN / "ex5.1.toml").read_text().replace('expected = "A<=B"', 'expected = "A>=B"')
    p = tmp_path / "wrong.toml"
    p.write_text(text)
    assert main(["check", str(p), "--grid-points", "200"]) == 1


def test_check_negative_alpha_exit_two(tmp_path, capsys):
    text = (SCEN / "ex5.1.toml").read_text().replace("alpha = 0.88", "alpha = -0.88")
    p = tmp_path / "bad.toml"
    p.write_text(text)
    assert main(["check", str(p)]) == 2
    assert "sample_y.alpha" in capsys.readouterr().err


def test_check_missing_file(tmp_path):
    assert main(["check", str(tmp_path / "none.toml")]) == 2


@pytest.mark.parametrize("argv", [[], ["reproduce"], ["reproduce", "fig3", "--grid-points", "3"],
                                  ["reproduce", "fig3", "--tol", "-1"], ["frobnicate"]])
def test_usage_errors(argv):
    assert main(argv) == 2


def test_sample_independent_pass(tmp_path):
    out = tmp_path / "mc.csv"
    assert main(["sample", str(SCEN / "ce3.1a.toml"), "--n", "20000", "--seed", "1", "--out", str(out)]) == 0
    header, cols, data = read_csv(out)
    assert cols == ["x", "empirical", "analytic"]
    assert any("PASS" in h for h in header)


def test_sample_unsupported_dependence(capsys):
    assert main(["sample", str(SCEN / "ex5.1.toml"), "--n", "100"]) == 2
    assert "n = 2" in capsys.readouterr().err


def test_list_scenarios(capsys):
    assert main(["list-scenarios"]) == 0
    out = capsys.readouterr().out
    assert len(out.strip().splitlines()) == 11


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "poextremes.cli", "list-scenarios", "--format", "structured"],
                         capture_output=True, text=True, check=True)
    assert len(json.loads(res.stdout)) == 10
