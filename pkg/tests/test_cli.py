from pathlib import Path

import pytest

from barriersmc import cli

REPO = Path(__file__).resolve().parents[1]
SEC3 = REPO / "configs" / "paper_sec3.cfg"

QUICK = """\
[still]
controller = fixed_sign
k = 0.0
disturbance = sinusoid
amplitude = 0.0
omega = 1.0
phase_rad = 0.0
d_bar = 1e-9
s0 = 1.0
h = 0.001
t_end = 0.1
"""

FAILING = QUICK + "sigma_target = 0.5\nexpect_sigma_max = 1e-06\n"

DIVERGING = """\
[pole]
controller = obeid
epsilon = 0.1
k_bar = 1.0
disturbance = custom
table_t = 0.0, 1.0
table_d = 1.5, 1.5
d_bar = 1.5
s0 = 0.05
h = 0.1
t_end = 1.0
"""


def write(tmp_path, text, name="c.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_validate_ok(tmp_path, capsys):
    assert cli.main(["validate", str(write(tmp_path, QUICK))]) == cli.EXIT_OK
    assert "still" in capsys.readouterr().out


def test_validate_bad_config(tmp_path, capsys):
    p = write(tmp_path, "[x]\ncontroller = warp_drive\n")
    assert cli.main(["validate", str(p)]) == cli.EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err


def test_run_success(tmp_path, capsys):
    p = write(tmp_path, QUICK)
    code = cli.main(["run", str(p), "--out", str(tmp_path / "out")])
    assert code == cli.EXIT_OK
    assert (tmp_path / "out" / "still.csv").is_file()
    assert (tmp_path / "out" / "summary.csv").is_file()
    assert "still" in capsys.readouterr().out


def test_run_expectation_failure(tmp_path):
    p = write(tmp_path, FAILING)
    code = cli.main(["run", str(p), "--out", str(tmp_path / "out")])
    assert code == cli.EXIT_EXPECTATION


def test_run_divergence(tmp_path, capsys):
    p = write(tmp_path, DIVERGING)
    code = cli.main(["run", str(p), "--out", str(tmp_path / "out")])
    assert code == cli.EXIT_DIVERGED
    assert "error" in capsys.readouterr().out


def test_run_missing_config(tmp_path):
    assert cli.main(["run", str(tmp_path / "nope.cfg")]) == cli.EXIT_CONFIG


def test_sweep_cli(tmp_path, capsys):
    p = write(tmp_path, QUICK.replace("fixed_sign\nk = 0.0",
                                      "kinfty\nlaw = convex\nrho = 5.0\nlam = 0.05"))
    out = tmp_path / "sweep.csv"
    code = cli.main(["sweep", str(p), "--grid", "rho=1,5;lam=0.05",
                     "--target", "3.1e-3", "--budget", "1e6",
                     "--out", str(out)])
    assert code == cli.EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "rho,lam,bound,peak_u,t_conv,feasible"
    assert len(lines) == 3


def test_sweep_bad_grid(tmp_path):
    p = write(tmp_path, QUICK)
    code = cli.main(["sweep", str(p), "--grid", "sigma=1",
                     "--target", "1e-3", "--budget", "10"])
    assert code == cli.EXIT_CONFIG


def test_sweep_unknown_experiment(tmp_path):
    p = write(tmp_path, QUICK)
    code = cli.main(["sweep", str(p), "--grid", "rho=1;lam=0.05",
                     "--target", "1e-3", "--budget", "10",
                     "--experiment", "ghost"])
    assert code == cli.EXIT_CONFIG


def test_plot_cli(tmp_path, capsys):
    cfg = write(tmp_path, QUICK)
    out = tmp_path / "out"
    assert cli.main(["run", str(cfg), "--out", str(out)]) == cli.EXIT_OK
    assert cli.main(["plot", str(out), "--figure", "sliding"]) == cli.EXIT_OK
    fig = out / "fig_sliding.csv"
    assert fig.is_file()
    assert fig.read_text().splitlines()[0] == "t,s_still"
    # rerunning plot must not pick up its own output as a trajectory
    assert cli.main(["plot", str(out), "--figure", "sliding"]) == cli.EXIT_OK


def test_plot_missing_dir(tmp_path):
    assert cli.main(["plot", str(tmp_path / "nope"), "--figure",
                     "sliding"]) == cli.EXIT_CONFIG
