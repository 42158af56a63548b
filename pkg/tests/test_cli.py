import json

import pytest

from fiflab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def _has(doc, y, z):
    return next((w for w in doc["witnesses"] if w["y"] == y and w["z"] == z), None)


def test_check_phi_continuous(capsys):
    code, doc = run(capsys, "check", "--map", "t-continuous", "--phi", "half", "--mode", "phi",
                    "--domain", "0:12", "--delta", "0.25")
    assert code == 3
    w = _has(doc, 4.0, 4.5)
    assert w["lhs"] == 1 and w["rhs"] == 0.25


def test_check_phi_discrete(capsys):
    code, doc = run(capsys, "check", "--map", "t-discrete", "--phi", "piecewise", "--mode", "phi")
    assert code == 3
    w = _has(doc, 5.0, 7.0)
    assert w["lhs"] == 4 and w["rhs"] == pytest.approx(5 / 3)


def test_check_suzuki_continuous_reports_violation(capsys):
    # the sampled scan does turn up Suzuki violations for this map, e.g. (3, 5)
    code, doc = run(capsys, "check", "--map", "t-continuous", "--phi", "half", "--mode", "suzuki",
                    "--domain", "0:12", "--delta", "0.25")
    assert code == 3
    w = _has(doc, 3.0, 5.0)
    assert w["lhs"] == 2 and w["rhs"] == 1.5


def test_check_expr_clean(capsys):
    code, doc = run(capsys, "check", "--map", "expr", "--map-expr", "y/3", "--phi", "expr", "--phi-expr", "t/2",
                    "--mode", "suzuki", "--domain", "0:6", "--delta", "0.1")
    assert code == 0 and doc["violation_count"] == 0 and doc["verdict"]


def test_check_banach(capsys):
    code, doc = run(capsys, "check", "--map", "expr", "--map-expr", "y/3", "--mode", "banach",
                    "--domain", "0:6", "--delta", "0.5")
    assert code == 0
    code, doc = run(capsys, "check", "--map", "t-continuous", "--mode", "banach", "--delta", "0.5")
    assert code == 3


@pytest.mark.parametrize("argv", [
    ["check", "--map", "t-continuous", "--mode", "nope"],
    ["check", "--map", "expr", "--mode", "phi"],
    ["check", "--map", "expr", "--map-expr", "y +", "--mode", "phi"],
    ["check", "--map", "t-continuous", "--mode", "phi", "--domain", "5:1"],
    ["render", "--fixture", "spinach", "--points", "0"],
    ["casestudy"],
    ["build", "--alpha-list", "0.1,0.2"],
    ["build", "--alpha", "1.2"],
    [],
])
def test_usage_errors(capsys, tmp_path, monkeypatch, argv):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 2


def test_build_writes_files(capsys, tmp_path):
    prefix = str(tmp_path / "s04")
    code, meta = run(capsys, "build", "--fixture", "spinach", "--alpha", "0.4", "--svg", "--out", prefix)
    assert code == 0
    assert meta["iterations"] <= 30 and meta["residual"] <= 1e-8 and meta["bound_holds"]
    assert meta["interpolation_error"] <= 1e-8
    for suffix in ("_samples.csv", "_meta.json", ".svg"):
        assert (tmp_path / f"s04{suffix}").stat().st_size > 0
    assert (tmp_path / "s04_samples.csv").read_text().startswith("y,z\n")


def test_build_mixed_and_classical(capsys, tmp_path):
    code, meta = run(capsys, "build", "--alpha-list", "0.1,0.2,0.5,0.2,0.4,0.2,0.4,0.2,0.3,0.1",
                     "--out", str(tmp_path / "mix"))
    assert code == 0 and meta["alpha"][2] == 0.5
    code, meta = run(capsys, "build", "--alpha", "0.0", "--out", str(tmp_path / "zero"))
    assert code == 0 and meta["iterations"] == 1 and meta["sup_dev"] == 0


def test_build_from_price_csv(capsys, tmp_path):
    src = tmp_path / "prices.csv"
    src.write_text("label,min,max,avg\na,1,3,2\nb,1,5,4\nc,1,3,1\nd,2,4,3\n")
    code, meta = run(capsys, "build", "--data", str(src), "--alpha", "0.5", "--out", str(tmp_path / "p"))
    assert code == 0 and meta["dataset"] == "prices"


def test_build_bad_data(capsys, tmp_path):
    src = tmp_path / "bad.csv"
    src.write_text("label,min,max,avg\na,1,3,5\nb,1,5,4\nc,1,3,1\n")
    assert main(["build", "--data", str(src), "--out", str(tmp_path / "x")]) == 4
    src.write_text("wrong\n")
    assert main(["build", "--data", str(src), "--out", str(tmp_path / "x")]) == 4


def test_build_figure1_literal_base(capsys, tmp_path):
    code, meta = run(capsys, "build", "--fixture", "figure1", "--alpha", "0.5", "--out", str(tmp_path / "f1"))
    assert code == 0 and meta["residual"] <= 1e-8 and meta["bound_holds"]


def test_render_reproducible(capsys, tmp_path):
    args = ["render", "--fixture", "spinach", "--alpha", "0.6", "--method", "chaos", "--points", "20000",
            "--seed", "42", "--svg"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    capsys.readouterr()
    for suffix in ("_cloud.csv", "_render.json", "_cloud.svg"):
        assert (tmp_path / f"a{suffix}").read_bytes() == (tmp_path / f"b{suffix}").read_bytes()
    assert len((tmp_path / "a_cloud.csv").read_text().splitlines()) == 20001


def test_render_deterministic_figure1(capsys, tmp_path):
    code, meta = run(capsys, "render", "--fixture", "figure1", "--alpha", "0.5", "--method", "deterministic",
                     "--out", str(tmp_path / "f1"))
    assert code == 0 and meta["iterations"] == 10 and 0 < meta["points"] <= 100_000


def test_dim(capsys):
    code, doc = run(capsys, "dim", "--fixture", "spinach", "--alpha", "0.4")
    assert code == 0 and round(doc["analytic"]["value"], 5) == 1.60206
    code, doc = run(capsys, "dim", "--fixture", "spinach", "--alpha", "0.05")
    assert doc["analytic"]["value"] == 1.0


@pytest.mark.slow
def test_dim_empirical(capsys):
    code, doc = run(capsys, "dim", "--fixture", "spinach", "--alpha", "0.6", "--empirical")
    assert code == 0
    assert round(doc["analytic"]["value"], 5) == 1.77815
    assert abs(doc["boxcount"]["value"] - 1.77815) <= 0.15


def test_casestudy_idempotent(capsys, tmp_path):
    code, doc = run(capsys, "casestudy", "--out", str(tmp_path / "a"))
    assert code == 0 and doc["failures"] == []
    assert main(["casestudy", "--out", str(tmp_path / "b")]) == 0
    summary = json.loads((tmp_path / "a" / "summary.json").read_text())
    assert [round(d, 5) for d in summary["dims"]] == [1.60206, 1.77815, 1.41497]
    classical = [e for e in summary["entries"] if e["classical"]]
    assert [e["name"] for e in classical] == ["0.0"]
    for f in sorted((tmp_path / "a").iterdir()):
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()
