"""CLI contracts: dispatch, exit codes, determinism, file handling."""

import json

import numpy as np
import pytest

from imra.cli import run
from imra.gridio import read_grid, write_grid
from imra.transform import GridFunction


@pytest.fixture
def grid_file(tmp_path):
    rng = np.random.default_rng(23)
    grid = GridFunction(2, 3, ((0, 32), (0, 32)), rng.standard_normal((33, 33)))
    path = tmp_path / "grid.imra"
    write_grid(path, grid)
    return path


def test_gen_filters_stdout(capsys):
    assert run(["gen-filters", "--order", "1"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "h -1:1/2 0:1 1:1/2"


def test_gen_filters_bad_order_exit_1(capsys):
    assert run(["gen-filters", "--order", "99"]) == 1
    assert "order" in capsys.readouterr().err


def test_unknown_flag_exit_1(capsys):
    assert run(["gen-filters", "--order", "1", "--bogus"]) == 1


def test_unknown_subcommand_exit_1(capsys):
    assert run(["frobnicate"]) == 1


def test_eval_phi_deterministic(capsys):
    assert run(["eval-phi", "--order", "2", "--resolution", "3"]) == 0
    first = capsys.readouterr().out
    assert run(["eval-phi", "--order", "2", "--resolution", "3"]) == 0
    assert capsys.readouterr().out == first
    row = first.splitlines()[0].split("\t")
    assert len(row) == 3  # exact fraction, decimal, value


def test_eval_phi_plot(tmp_path, capsys):
    png = tmp_path / "phi.png"
    assert run(["eval-phi", "--order", "1", "--resolution", "4",
                "--output", str(tmp_path / "phi.tsv"), "--plot", str(png)]) == 0
    assert png.exists() and png.stat().st_size > 0


def test_decompose_reconstruct_cycle(tmp_path, grid_file, capsys):
    pyr = tmp_path / "pyr"
    back = tmp_path / "back.imra"
    assert run(["decompose", "--input", str(grid_file), "--filter", "dd2",
                "--levels", "2", "--output", str(pyr)]) == 0
    assert run(["reconstruct", "--input", str(pyr), "--output", str(back)]) == 0
    a = read_grid(grid_file)
    b = read_grid(back)
    assert np.abs(a.values - b.values).max() < 1e-10


def test_decompose_too_many_levels_exit_1(tmp_path, capsys):
    # a box away from the origin empties under repeated halving
    grid = GridFunction(2, 3, ((1, 32), (1, 32)), np.ones((32, 32)))
    path = tmp_path / "offset.imra"
    write_grid(path, grid)
    code = run(["decompose", "--input", str(path), "--filter", "dd1",
                "--levels", "12", "--output", str(tmp_path / "p")])
    assert code == 1
    assert "axis" in capsys.readouterr().err


def test_missing_input_exit_2(tmp_path, capsys):
    assert run(["decompose", "--input", str(tmp_path / "nope.imra"),
                "--filter", "dd1", "--levels", "1",
                "--output", str(tmp_path / "p")]) == 2


def test_corrupt_magic_exit_2(tmp_path, grid_file, capsys):
    raw = bytearray(grid_file.read_bytes())
    raw[:4] = b"JUNK"
    bad = tmp_path / "bad.imra"
    bad.write_bytes(bytes(raw))
    assert run(["decompose", "--input", str(bad), "--filter", "dd1",
                "--levels", "1", "--output", str(tmp_path / "p")]) == 2


def test_threshold_reports_json(tmp_path, grid_file, capsys):
    pyr = tmp_path / "pyr"
    run(["decompose", "--input", str(grid_file), "--filter", "dd1",
         "--levels", "2", "--output", str(pyr)])
    capsys.readouterr()
    assert run(["threshold", "--input", str(pyr), "--tau", "0.25",
                "--output", str(tmp_path / "pyr2")]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert set(payload) == {"dropped_l1_mass", "kept", "total"}


def test_besov_norm_json_deterministic(tmp_path, grid_file, capsys):
    pyr = tmp_path / "pyr"
    run(["decompose", "--input", str(grid_file), "--filter", "dd2",
         "--levels", "2", "--output", str(pyr)])
    capsys.readouterr()
    args = ["besov-norm", "--input", str(pyr), "--sigma", "1.2",
            "--p", "inf", "--q", "inf"]
    assert run(args) == 0
    first = capsys.readouterr().out
    assert run(args) == 0
    assert capsys.readouterr().out == first
    payload = json.loads(first)
    assert payload["kind"] == "coefficient"
    assert list(payload["level_terms"]) == sorted(payload["level_terms"])


def test_besov_norm_bad_p_exit_1(tmp_path, grid_file, capsys):
    pyr = tmp_path / "pyr"
    run(["decompose", "--input", str(grid_file), "--filter", "dd1",
         "--levels", "1", "--output", str(pyr)])
    assert run(["besov-norm", "--input", str(pyr), "--sigma", "1.0",
                "--p", "0.5", "--q", "2"]) == 1


def test_holder_est_output(tmp_path, capsys):
    from imra.transform import sample_grid

    grid = sample_grid(lambda x: abs(x - 5.0 / 16.0) ** 0.5, 9, ((-2 << 9, 2 << 9),))
    path = tmp_path / "cusp.imra"
    write_grid(path, grid)
    png = tmp_path / "fit.png"
    assert run(["holder-est", "--input", str(path), "--levels", "5",
                "--plot", str(png)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("sigma\t")
    sigma = float(lines[0].split("\t")[1])
    assert abs(sigma - 0.5) < 0.1
    assert len(lines) >= 4
    assert png.exists() and png.stat().st_size > 0


def test_besov_norm_plot(tmp_path, grid_file, capsys):
    pyr = tmp_path / "pyr"
    run(["decompose", "--input", str(grid_file), "--filter", "dd1",
         "--levels", "2", "--output", str(pyr)])
    png = tmp_path / "norm.png"
    assert run(["besov-norm", "--input", str(pyr), "--sigma", "1.0",
                "--p", "2", "--q", "2", "--plot", str(png)]) == 0
    assert png.exists() and png.stat().st_size > 0


def test_ordering_listing(capsys):
    assert run(["ordering", "--dim", "2", "--count", "3"]) == 0
    assert capsys.readouterr().out == "0\t0,0\n1\t0,-1\n2\t1,-1\n"


def test_ordering_verify_exit_codes(capsys):
    assert run(["ordering", "--dim", "3", "--verify", "2"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 4


def test_verify_subcommand_small(capsys):
    assert run(["verify", "--dim", "1", "--order", "1"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert out.strip().endswith("checks in " + out.strip().rsplit("checks in ", 1)[1])


def test_imra_threads_env_validated(monkeypatch, capsys):
    monkeypatch.setenv("IMRA_THREADS", "many")
    assert run(["gen-filters", "--order", "1"]) == 1
    monkeypatch.setenv("IMRA_THREADS", "2")
    assert run(["gen-filters", "--order", "1"]) == 0
