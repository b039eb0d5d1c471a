import json
import subprocess
import sys

import pytest

from teich import cli, gromov, io as tio
from teich.group import enumerate_classes
from teich.rep import punctured_torus_from_traces


def run(*argv, **kw):
    return subprocess.run([sys.executable, "-m", "teich.cli", *argv], capture_output=True,
                          text=True, timeout=600, **kw)


def test_fmt_uses_nine_significant_digits():
    assert tio.fmt(1.0 / 3.0) == "0.333333333"
    assert tio.fmt(123456789.123) == "123456789"
    assert tio.fmt(0.0) == "0"
    assert tio.fmt(None) == ""


def test_parse_grid():
    assert tio.parse_grid("1e-1:1e-6") == (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
    assert tio.parse_grid("1e-6:1e-1") == tio.parse_grid("1e-1:1e-6")
    for bad in ("1e-1", "x:y", "0:1e-3", "2:1e-3"):
        with pytest.raises(ValueError):
            tio.parse_grid(bad)


def test_rep_json_round_trip():
    rho = punctured_torus_from_traces(3.0, 4.0)
    obj = tio.rep_to_json(rho)
    assert obj["peripherals"] == ["abAB"]
    assert len(obj["generators"]["a"]) == 4
    back = tio.rep_from_json(json.loads(json.dumps(obj)))
    for n in ("a", "b"):
        assert back.generators()[n].is_close(rho.generators()[n])


def test_rep_json_errors():
    for bad in ({}, {"surface": {"genus": 1, "punctures": 1}, "generators": {"a": [1, 2, 3]}},
                {"surface": {"genus": 1, "punctures": 1}, "generators": []}):
        with pytest.raises(ValueError):
            tio.rep_from_json(bad)


def test_pinch_config():
    cfg = tio.pinch_config_from_json({"slope": "1/1", "epsGrid": "1e-1:1e-3", "maxLen": 3})
    assert cfg.slope == (1, 1) and cfg.eps_grid == (1e-1, 1e-2, 1e-3)
    assert tio.pinch_config_from_json(cfg.to_json()) == cfg
    with pytest.raises(ValueError):
        tio.pinch_config_from_json({"epsGrid": [2.0]})


def test_words_json():
    ws = [c.word for c in enumerate_classes(2)]
    assert tio.words_from_json(tio.words_to_json(ws)) == ws


def test_spectrum_command():
    text = cli.render(["spectrum", "--fricke", "3,3", "--maxlen", "2"])
    rows = tio.read_csv(text, is_text=True)
    assert len(rows) == 6
    got = {r["class"]: float(r["length"]) for r in rows}
    for c in ("a", "b", "ab"):
        assert got[c] == pytest.approx(1.924847, abs=1e-6)


def test_projective_command_records_normalization():
    text = cli.render(["spectrum", "--fricke", "3,3,+", "--maxlen", "1", "--projective"])
    assert text.startswith("# normalization=")


def test_tree_lengths_command():
    rows = tio.read_csv(cli.render(["tree-lengths", "--slope", "0", "--weight", "1",
                                    "--maxlen", "2"]), is_text=True)
    got = {r["class"]: float(r["length"]) for r in rows}
    assert got == {"a": 0, "b": 1, "ab": 1, "aB": 1, "aa": 0, "bb": 2}


def test_embed_command():
    obj = json.loads(cli.render(["embed", "--fricke", "3,3,+"]))
    assert obj["classes"] == ["a", "b", "ab"]
    assert obj["traces"] == [3.0, 3.0, 6.0]


def test_pinch_command_is_deterministic(tmp_path):
    argv = ["pinch", "--slope", "0", "--grid", "1e-1:1e-3", "--maxlen", "3", "--seed", "7"]
    assert cli.render(argv) == cli.render(argv)
    out = tmp_path / "traj.csv"
    assert cli.main(argv + ["--out", str(out)]) == 0
    rows = tio.read_csv(str(out))
    d = [float(r["projDistance"]) for r in rows]
    assert d == sorted(d, reverse=True) and len(set(d)) == 3
    assert list(rows[0])[:2] == ["epsilon", "lambda"]


def test_rep_file_input(tmp_path):
    path = tmp_path / "rep.json"
    path.write_text(json.dumps(tio.rep_to_json(punctured_torus_from_traces(3.0, 3.0))))
    a = cli.render(["spectrum", "--rep", str(path), "--maxlen", "3"])
    b = cli.render(["spectrum", "--fricke", "3,3", "--maxlen", "3"])
    assert a == b


def test_gromov_command(tmp_path):
    src, tgt = tmp_path / "src.json", tmp_path / "tgt.json"
    src.write_text(json.dumps({"pinch": {"eps": 1e-3}, "scaleByLambda": True}))
    tgt.write_text(json.dumps({"backend": "tree", "slope": "0"}))
    obj = json.loads(cli.render(["gromov", str(src), str(tgt), "--restarts", "8"]))
    assert 0 <= obj["epsilon"] < 1e-3


@pytest.mark.parametrize("argv,code", [
    (["spectrum", "--fricke", "2.1,2.1"], 1),
    (["spectrum", "--fricke", "3"], 1),
    (["spectrum"], 1),
    (["tree-lengths", "--weight", "-1"], 1),
    (["pinch", "--grid", "1:2"], 1),
    (["nonsense"], 1),
    (["spectrum", "--rep", "/nonexistent/rep.json"], 3),
])
def test_exit_codes(argv, code, capsys):
    assert cli.main(argv) == code
    err = json.loads(capsys.readouterr().err)
    assert err["exitCode"] == code and err["message"]


def test_invalid_json_is_a_validation_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert cli.main(["spectrum", "--rep", str(path)]) == 1


def test_unwritable_output_is_an_io_error(capsys):
    assert cli.main(["embed", "--fricke", "3,3", "--out", "/nonexistent/dir/x.json"]) == 3


def test_threads_env_does_not_change_output():
    a = run("spectrum", "--fricke", "3,4", "--maxlen", "5", env={"TEICH_THREADS": "1", "PATH": ""})
    b = run("spectrum", "--fricke", "3,4", "--maxlen", "5", env={"TEICH_THREADS": "4", "PATH": ""})
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_module_entry_point_errors_go_to_stderr():
    r = run("embed", "--fricke", "1,1")
    assert r.returncode == 1 and r.stdout == ""
    assert json.loads(r.stderr)["exitCode"] == 1


def test_check_subset():
    text = cli.render(["check", "--module", "group"])
    assert text.strip().endswith("checks passed")
    assert "FAIL" not in text


def test_non_convergence_exit_code(monkeypatch, capsys):
    def stuck(*args, **kwargs):
        raise gromov.NonConvergenceError("minimax search did not settle")

    monkeypatch.setattr(gromov, "minimax_center", stuck)
    assert cli.main(["pinch", "--slope", "0", "--grid", "1e-1:1e-2", "--maxlen", "2"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["exitCode"] == 2 and "eps=0.1" in err["message"]
