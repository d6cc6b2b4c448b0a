import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torus_harmonics import _parallel
from torus_harmonics.cli import SUBCOMMANDS, emit_plot_data, main, parse_plot_data, run
from torus_harmonics.config import ExperimentConfig
from torus_harmonics.verify import VerificationReport


@pytest.fixture(autouse=True)
def _reset_threads():
    yield
    _parallel.set_threads(None)


def test_plot_data_examples():
    empty = VerificationReport.build("x", {}, [])
    assert emit_plot_data(empty) == "n,metric\n"
    rep = VerificationReport.build("x", {}, [(n, 1.0 / (n + 1)) for n in range(10)])
    text = emit_plot_data(rep)
    assert len(text.splitlines()) == 11
    assert parse_plot_data(text) == rep.per_n


@settings(max_examples=40, deadline=None)
@given(dim=st.integers(1, 3), grid=st.sampled_from([8, 64, 1024]),
       eps=st.floats(1e-6, 10.0), c=st.floats(1e-3, 1e3),
       sub=st.lists(st.integers(0, 10**6), max_size=6), fid=st.sampled_from(
           ["cos:1", "random:5,2", "const:0.1"]))
def test_config_round_trip(dim, grid, eps, c, sub, fid):
    cfg = ExperimentConfig(dim=dim, grid_n=grid, eps=eps, c=c, subsequence=sub,
                           function_id=fid, output="out/x")
    assert ExperimentConfig.from_text(cfg.to_text()) == cfg


def test_config_file_and_flag_override(tmp_path):
    cfg_path = tmp_path / "exp.cfg"
    cfg_path.write_text("# comment\ndim = 1\ngrid_n = 64\nfunction_id = sawtooth:8\n"
                        "n_max = 16\n")
    out = tmp_path / "run"
    assert main(["lemma2", "--config", str(cfg_path), "--nmax", "20",
                 "--output", str(out)]) == 0
    saved = ExperimentConfig.load(out / "config.txt")
    assert saved.n_max == 20 and saved.function_id == "sawtooth:8"
    report = json.loads((out / "report.json").read_text())
    assert report["params"]["n_max"] == 20
    assert set(report["extra"]) == {"gap_plain", "gap_conjugate"}


def test_bad_config_line(tmp_path):
    p = tmp_path / "bad.cfg"
    p.write_text("colour = blue\n")
    assert main(["gen", "--config", str(p)]) == 2


@pytest.mark.parametrize("argv", [
    ["sums", "--fn", "nope"],
    ["sums", "--grid", "16", "--fn", "cos:9"],
    ["sums", "--grid", "16", "--nmax", "8"],
    ["verify-theorem1", "--dim", "3", "--grid", "8", "--nmax", "2"],
    ["gen", "--grid", "12"],
    ["gen", "--threads", "0"],
])
def test_precondition_exit_code(tmp_path, argv):
    assert main(argv + ["--output", str(tmp_path / "o")]) == 2


def test_strict_saturation_exit_code(tmp_path):
    argv = ["verify-1d", "--grid", "64", "--fn", "logsing:16", "--nmin", "1", "--nmax", "20",
            "--c", "5000"]
    assert main(argv + ["--output", str(tmp_path / "a")]) == 0
    assert main(argv + ["--output", str(tmp_path / "b"), "--strict"]) == 3
    assert json.loads((tmp_path / "b" / "report.json").read_text())["saturated"] is True


def test_theorem1_report_has_weak_type_table(tmp_path):
    out = tmp_path / "t1"
    assert main(["verify-theorem1", "--dim", "2", "--grid", "32", "--fn", "cos_sum",
                 "--nmin", "2", "--nmax", "12", "--output", str(out)]) == 0
    rep = json.loads((out / "report.json").read_text())
    assert len(rep["extra"]["weak_type_table"]) == 13 and rep["sup_metric"] > 0
    assert (out / "report.csv").read_text().startswith("n,metric\n")


def test_norms_closed_form(tmp_path):
    code, rep = run(ExperimentConfig(experiment="norms", function_id="const:2.0", k=1,
                                     grid_n=128, output=str(tmp_path)))
    assert code == 0 and rep.extra["closed_form_rel_error"] < 1e-8


@pytest.mark.parametrize("cmd", SUBCOMMANDS)
def test_every_subcommand_runs(tmp_path, cmd):
    dim = 1 if cmd in ("maximal", "verify-1d") else 2
    argv = [cmd, "--dim", str(dim), "--grid", "16", "--fn", "sawtooth:4", "--nmin", "1",
            "--nmax", "6", "--eps", "0.5", "--output", str(tmp_path / cmd)]
    assert main(argv) == 0
    assert (tmp_path / cmd / "report.json").exists()
    assert (tmp_path / cmd / "report.csv").exists()


def test_threads_flag_and_env(tmp_path, monkeypatch):
    monkeypatch.setenv(_parallel.ENV_VAR, "3")
    assert _parallel.get_threads() == 3
    outs = []
    for t in ("1", "5"):
        out = tmp_path / t
        assert main(["verify-cor3", "--dim", "2", "--grid", "32", "--fn", "logsing:6",
                     "--nmax", "10", "--threads", t, "--output", str(out)]) == 0
        outs.append((out / "report.json").read_bytes())
    assert outs[0] == outs[1]
    assert _parallel.get_threads() == 5


def test_default_output_directory(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["gen", "--grid", "8"]) == 0
    dirs = list((tmp_path / "out").iterdir())
    assert len(dirs) == 1 and dirs[0].name.startswith("gen-")
