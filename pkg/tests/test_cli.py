"""Command-line interface: configs, outputs, digests, exit codes."""

import json

import numpy as np
import pytest

from idma import analytic, kernels, levy
from idma.cli import load_config, main
from idma.errors import ConfigError

BASE = {"measure": {"kind": "two_point", "lambda": 1.0},
        "kernel": {"kind": "signed_ou"}}


def write_config(tmp_path, extra=None, name="cfg.json"):
    doc = dict(BASE)
    if extra:
        doc.update(extra)
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def read_csv(path):
    comments, rows = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                comments.append(line)
            elif line:
                rows.append(line.split(","))
    return comments, rows[0], rows[1:]


def test_load_config_defaults_and_digest(tmp_path):
    cfg = load_config(write_config(tmp_path))
    assert cfg.T == 10.0 and cfg.seed == 0 and cfg.format == "csv"
    assert len(cfg.digest) == 64
    # same payload, different out dir: digest unchanged
    cfg2 = load_config(write_config(tmp_path, {"out": "elsewhere"},
                                    name="b.json"))
    assert cfg2.digest == cfg.digest
    # flag overrides win and feed the digest through the seed
    cfg3 = load_config(write_config(tmp_path), seed=9)
    assert cfg3.seed == 9 and cfg3.digest != cfg.digest


def test_load_config_rejects_bad_input(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.json"))
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(str(p))
    with pytest.raises(ConfigError):
        load_config(write_config(tmp_path, {"mystery": 1}))
    with pytest.raises(ConfigError):
        load_config(write_config(tmp_path, {"eps": -1.0}))
    p = tmp_path / "nokernel.json"
    p.write_text(json.dumps({"measure": {"kind": "dickman"}}))
    with pytest.raises(ConfigError):
        load_config(str(p))


def test_conditions_csv_and_json(tmp_path):
    cfg_path = write_config(tmp_path, {
        "measure": {"kind": "dickman"}, "out": str(tmp_path / "o")})
    assert main(["conditions", "--config", cfg_path]) == 0
    comments, header, rows = read_csv(tmp_path / "o" / "conditions.csv")
    assert comments[0].startswith("# config_digest=")
    assert header == ["c1", "c2", "c3", "c1_pass", "c2_pass", "c3_pass"]
    vals = rows[0]
    assert abs(float(vals[2]) - 0.5) < 1e-6
    assert vals[3:] == ["true", "true", "true"]

    assert main(["conditions", "--config", cfg_path, "--format", "json"]) == 0
    doc = json.loads((tmp_path / "o" / "conditions.json").read_text())
    assert list(doc)[:2] == ["config_digest", "seed"]
    assert doc["pass"] == [True, True, True]


def test_cf_outputs(tmp_path):
    cfg_path = write_config(tmp_path, {
        "z_grid": [0.5, 1.0], "T": 5.0, "out": str(tmp_path / "o")})
    assert main(["cf", "--config", cfg_path]) == 0
    names = {p.name for p in (tmp_path / "o").iterdir()}
    assert names == {"cf_stationary.csv", "cf_window.csv",
                     "cf_limit_claimed.csv", "cf_limit_boundary.csv"}
    _, header, rows = read_csv(tmp_path / "o" / "cf_stationary.csv")
    assert header == ["z", "log_re", "log_im", "cf_re", "cf_im"]
    want = analytic.log_cf_stationary(kernels.signed_ou(),
                                      levy.two_point(1.0), 1.0)
    row = [r for r in rows if float(r[0]) == 1.0][0]
    assert abs(float(row[1]) - want.real) < 1e-12
    assert abs(float(row[3]) - np.exp(want).real) < 1e-12


def test_cov_output(tmp_path):
    cfg_path = write_config(tmp_path, {
        "t_grid": [0.0, 1.0, 2.0], "out": str(tmp_path / "o")})
    assert main(["cov", "--config", cfg_path]) == 0
    comments, header, rows = read_csv(tmp_path / "o" / "cov.csv")
    assert header == ["t", "C"]
    assert any("integral_exact=0" in c for c in comments)
    got = {float(r[0]): float(r[1]) for r in rows}
    assert got[0.0] == pytest.approx(1.0)
    assert got[2.0] == pytest.approx(-np.exp(-2.0))


def test_cov_output_2d(tmp_path):
    cfg_path = write_config(tmp_path, {
        "kernel": {"kind": "product", "components": [
            {"kind": "signed_ou"}, {"kind": "signed_ou"}]},
        "t_grid": [[0.0, 0.0], [1.0, 2.0]], "out": str(tmp_path / "o")})
    assert main(["cov", "--config", cfg_path]) == 0
    _, header, rows = read_csv(tmp_path / "o" / "cov.csv")
    assert header == ["t_0", "t_1", "C"]
    assert len(rows) == 2


def test_simulate_threads_identical(tmp_path):
    cfg_path = write_config(tmp_path, {
        "T": 5.0, "N": 200, "eps": 0.5, "out": str(tmp_path / "a")})
    assert main(["simulate", "--config", cfg_path, "--threads", "1"]) == 0
    assert main(["simulate", "--config", cfg_path, "--threads", "4",
                 "--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "replicates.csv").read_bytes()
    b = (tmp_path / "b" / "replicates.csv").read_bytes()
    assert a == b
    text = a.decode()
    assert text.startswith("# config_digest=")
    assert text.splitlines()[1] == "replicate,l_index,S_value,Y_value"
    assert len(text.splitlines()) == 2 + 200


def test_converge_output(tmp_path):
    cfg_path = write_config(tmp_path, {
        "T_grid": [5.0, 10.0, 20.0], "z_grid": [0.5, 1.0],
        "out": str(tmp_path / "o")})
    assert main(["converge", "--config", cfg_path]) == 0
    comments, header, rows = read_csv(tmp_path / "o" / "convergence.csv")
    assert header == ["T", "dist_claimed", "dist_boundary"]
    assert any("winner=boundary_augmented" in c for c in comments)
    assert len(rows) == 3
    assert main(["converge", "--config", cfg_path, "--format", "json"]) == 0
    doc = json.loads((tmp_path / "o" / "convergence.json").read_text())
    assert doc["winner"] == "boundary_augmented"


def test_hyper_output(tmp_path):
    cfg_path = write_config(tmp_path, {
        "T_grid": [2.0, 5.0, 10.0], "N": 500, "eps": 0.5,
        "out": str(tmp_path / "o")})
    assert main(["hyper", "--config", cfg_path]) == 0
    comments, header, rows = read_csv(tmp_path / "o" / "hyper.csv")
    assert header == ["T", "var_analytic", "var_empirical", "var_se",
                      "control_var"]
    assert any("classification=hyperuniform" in c for c in comments)
    assert len(rows) == 3


def test_exit_codes(tmp_path, capsys):
    assert main(["conditions", "--config",
                 str(tmp_path / "missing.json")]) == 2
    assert "config error" in capsys.readouterr().err

    bad = write_config(tmp_path, {"bogus_key": 1}, name="bad.json")
    assert main(["conditions", "--config", bad]) == 2

    # dickman truncated at eps = 1 leaves no jumps
    empty = write_config(tmp_path, {
        "measure": {"kind": "dickman"}, "eps": 1.0, "N": 10,
        "out": str(tmp_path / "o")}, name="empty.json")
    assert main(["simulate", "--config", empty]) == 2

    # the variance curve of the heavy-tailed family does not exist
    heavy = write_config(tmp_path, {
        "measure": {"kind": "inner_truncated_stable", "alpha": 1.5,
                    "c": 1.0, "delta": 0.01},
        "T_grid": [2.0, 4.0, 8.0], "N": 100, "eps": 0.5,
        "out": str(tmp_path / "o")}, name="heavy.json")
    assert main(["hyper", "--config", heavy]) == 4
    assert "divergent moment" in capsys.readouterr().err


def test_exit_code_nonconvergence(tmp_path, capsys):
    # an unattainable tolerance exhausts the evaluation budget
    cfg_path = write_config(tmp_path, {
        "measure": {"kind": "dickman"}, "z_grid": [1.0],
        "quad_tol": 1e-16, "out": str(tmp_path / "o")})
    assert main(["cf", "--config", cfg_path]) == 3
    assert "did not converge" in capsys.readouterr().err


def test_main_prints_paths(tmp_path, capsys):
    cfg_path = write_config(tmp_path, {"out": str(tmp_path / "o")})
    assert main(["conditions", "--config", cfg_path]) == 0
    out = capsys.readouterr().out.strip()
    assert out.endswith("conditions.csv")
