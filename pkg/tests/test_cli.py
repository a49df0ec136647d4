import json

import pytest

from chordal.cli import main, parse_range, CliError
from chordal.io import write_plant, write_series
from chordal.plants import make_plant
from chordal.robustness import EXAMPLE_MARGIN
from chordal.series import Series

COARSE = ["--grid-radial", "9", "--grid-angular", "32"]


@pytest.fixture
def files(tmp_path, p0, p_alpha, controller, w):
    paths = {}

    def plant(name, p):
        paths[name] = str(tmp_path / f"{name}.json")
        write_plant(paths[name], p.num, p.den, p.witnesses)

    plant("p0", p0)
    plant("p05", p_alpha(0.05))
    plant("p10", p_alpha(0.1))
    plant("p50", p_alpha(0.5))
    paths["c"] = str(tmp_path / "c.json")
    write_series(paths["c"], controller)
    paths["zero"] = str(tmp_path / "zero.json")
    write_series(paths["zero"], Series.zero(2))
    paths["w"] = str(tmp_path / "w.json")
    write_series(paths["w"], w)
    paths["common"] = str(tmp_path / "common.json")
    write_plant(paths["common"], w, w)
    paths["stable"] = str(tmp_path / "stable.json")
    write_plant(paths["stable"], 0.5 * w, Series.constant(1.0))
    paths["one_var"] = str(tmp_path / "one.json")
    z = Series.variable(0, 1)
    write_plant(paths["one_var"], z, Series.constant(1.0, nvars=1))
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_norm(capsys, files):
    code, out, _ = run(capsys, "norm", files["w"], "--json")
    rep = json.loads(out)
    assert code == 0 and rep["l1"] == 1
    assert rep["sup"]["lo"] <= 1 <= rep["sup"]["hi"]
    code, out, _ = run(capsys, "--json", "norm", files["zero"])
    rep = json.loads(out)
    assert rep["l1"] == 0 and rep["sup"]["hi"] == 0


def test_norm_malformed(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"nvars": 2, "terms": [{"exp": [1, "a"], "re": 1}]}))
    code, out, err = run(capsys, "norm", bad)
    assert code == 2 and out == ""
    assert "terms[0].exp[1]" in err


def test_distance(capsys, files):
    code, out, _ = run(capsys, "distance", files["p0"], files["p0"], "--json", *COARSE)
    rep = json.loads(out)
    assert code == 0 and rep["lower"] == 0 and rep["upper"] == 0
    code, out, _ = run(capsys, "distance", files["p10"], files["p0"], "--json", *COARSE)
    assert json.loads(out)["lower"] <= 0.11547
    code, out, _ = run(capsys, "distance", files["p0"], files["one_var"])
    assert code == 2 and out == ""
    code, out, _ = run(capsys, "distance", files["common"], files["p0"], *COARSE)
    assert code == 3 and out == ""


def test_margin(capsys, files):
    code, out, _ = run(capsys, "margin", files["p0"], files["c"], "--json")
    rep = json.loads(out)
    assert code == 0
    assert EXAMPLE_MARGIN - 0.01 <= rep["margin"] <= EXAMPLE_MARGIN
    code, out, _ = run(capsys, "margin", files["p0"], files["zero"], *COARSE)
    assert code == 4 and out == ""
    code, out, _ = run(capsys, "margin", files["stable"], files["zero"], "--json", *COARSE)
    rep = json.loads(out)
    # g = ||0.5 z1 z2||_inf = 0.5, so min{1, 2} / 3
    assert code == 0 and rep["margin"] == pytest.approx(1 / 3)


def test_human_and_json_agree(capsys, files):
    _, human, _ = run(capsys, "margin", files["p0"], files["c"], *COARSE)
    _, js, _ = run(capsys, "margin", files["p0"], files["c"], "--json", *COARSE)
    rep = json.loads(js)
    assert f"{rep['margin']:.12g}" in human


def test_certify(capsys, files):
    code, out, _ = run(capsys, "certify", files["p0"], files["p0"], files["c"], *COARSE)
    assert code == 0
    code, out, _ = run(capsys, "certify", files["p0"], files["p50"], files["c"], "--json", *COARSE)
    rep = json.loads(out)
    assert code == 1
    assert rep["verdict"] == "not_certified"
    assert set(rep) >= {"k", "g", "margin", "kappa_lower", "kappa_upper", "verdict", "independent_check", "grid"}


def test_sweep(capsys, files):
    code, out, _ = run(capsys, "sweep", files["p0"], files["c"], files["p0"], files["p50"], "--json", *COARSE, "--no-refine")
    rep = json.loads(out)
    assert code == 1
    assert [r["verdict"] for r in rep["rows"]] == ["certified_stable", "not_certified"]


def test_example(capsys):
    code, out, _ = run(capsys, "example", "--alpha", "0", "--alpha", "0.95", "--no-refine", *COARSE)
    assert code == 0
    assert "0.1443" in out  # threshold line
    code, out, _ = run(capsys, "example", "--alpha", "0", "--alpha", "0.95", "--json", "--no-refine", *COARSE)
    rows = json.loads(out)["rows"]
    assert rows[0]["kappa_upper"] == 0 and rows[0]["verdict"] == "certified_stable"
    assert rows[1]["verdict"] == "not_certified"
    assert rows[1]["independent_check"] == "proved"


def test_example_range_errors(capsys):
    assert run(capsys, "example", "--range", "0:1.2:0.5", *COARSE)[0] == 2
    assert run(capsys, "example", "--range", "oops")[0] == 2
    assert parse_range("0:0.3:0.1") == pytest.approx([0, 0.1, 0.2, 0.3])


def test_test_theorem(capsys):
    code, out, _ = run(capsys, "test-theorem", "--trials", "3", "--seed", "1", "--json", *COARSE)
    rep = json.loads(out)
    assert code == 0 and rep["trials"] == 3 and rep["certified_not_stable"] == 0
    assert run(capsys, "test-theorem", "--trials", "-1")[0] == 2


def test_bad_invocations(capsys, files):
    assert run(capsys, "norm")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "norm", files["w"], "--grid-radial", "1")[0] == 2
    assert run(capsys, "norm", "/nonexistent/file.json")[0] == 2
