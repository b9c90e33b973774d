import json
import math
import os

import numpy as np
import pytest

from fracfield.cli import main
from fracfield.config import ConfigError, from_mapping, load_config, parse_config_text
from fracfield.outputs import read_diagnostics_csv, read_snapshot_csv

BASE_CFG = """
schema_version = 1
model.alpha = 0.5
model.mu = 1.0
model.k = 0.5
model.gamma = 0.3
domain.dim = 1
domain.half_width = 12.0
domain.points = 64
kernel.shape = box
kernel.radius = 1.0
ic.kind = bump
ic.center = 0.0
ic.radius = 2.0
ic.height = 0.5
run.integrator = imex
run.dt = 0.02
run.t_final = 0.2
output.dir = {out}
seed = 0
"""


def _write_cfg(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_parse_rejects_unknown_and_duplicate_keys():
    with pytest.raises(ConfigError):
        parse_config_text("schema_version = 1\nmodel.alpha = 0.5\nmodel.turbo = 9\n")
    with pytest.raises(ConfigError):
        parse_config_text("schema_version = 1\nschema_version = 2\n")
    with pytest.raises(ConfigError):
        parse_config_text("just some words\n")


def test_parse_accepts_comments_and_blanks():
    raw = parse_config_text("# hi\n\nschema_version = 1\n")
    assert raw == {"schema_version": "1"}


def test_from_mapping_validates(tmp_path):
    raw = parse_config_text(BASE_CFG.format(out=tmp_path))
    cfg = from_mapping(raw)
    assert cfg.params.alpha == 0.5 and cfg.dim == 1
    u0 = cfg.initial_field()
    assert u0.values.max() == pytest.approx(0.5, rel=0.05)  # cell centers miss x=0
    assert np.all(u0.values >= 0.0)
    # compactly supported inside the radius
    x = cfg.domain().axis_coords()
    assert np.all(u0.values[np.abs(x) > 2.0] == 0.0)

    bad = dict(raw)
    bad["model.alpha"] = "1.5"
    with pytest.raises(ConfigError):
        from_mapping(bad)
    bad = dict(raw)
    del bad["run.dt"]
    with pytest.raises(ConfigError):
        from_mapping(bad)
    bad = dict(raw)
    bad["ic.kind"] = "wavelet"
    with pytest.raises(ConfigError):
        from_mapping(bad)
    bad = dict(raw)
    bad["schema_version"] = "2"
    with pytest.raises(ConfigError):
        from_mapping(bad)


def test_simulate_smoke_and_exit_code(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, BASE_CFG.format(out=tmp_path / "out"))
    rc = main(["simulate", "--config", cfg])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["termination"] == "completed"
    assert os.path.exists(tmp_path / "out" / "diagnostics.csv")
    assert os.path.exists(tmp_path / "out" / "summary.json")


def test_simulate_malformed_config_no_partial_outputs(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, "schema_version = 1\nmodel.alpha = oats\n")
    rc = main(["simulate", "--config", cfg, "--out", str(tmp_path / "nope")])
    assert rc == 2
    assert not os.path.exists(tmp_path / "nope")


def test_simulate_blow_up_exit_code(tmp_path):
    text = BASE_CFG.format(out=tmp_path / "boom").replace("model.mu = 1.0", "model.mu = 5.0")
    text = text.replace("model.k = 0.5", "model.k = 0.0")
    text = text.replace("model.gamma = 0.3", "model.gamma = 0.0")
    text = text.replace("ic.height = 0.5", "ic.height = 2.0")
    text = text.replace("run.t_final = 0.2", "run.t_final = 1.0")
    text = text.replace("run.dt = 0.02", "run.dt = 0.001")
    cfg = _write_cfg(tmp_path, text)
    rc = main(["simulate", "--config", cfg])
    assert rc == 3


def test_simulate_determinism(tmp_path):
    cfg = _write_cfg(tmp_path, BASE_CFG.format(out=tmp_path / "d1"))
    assert main(["simulate", "--config", cfg]) == 0
    cfg2 = _write_cfg(tmp_path, BASE_CFG.format(out=tmp_path / "d2"), name="run2.cfg")
    assert main(["simulate", "--config", cfg2]) == 0
    b1 = (tmp_path / "d1" / "diagnostics.csv").read_bytes()
    b2 = (tmp_path / "d2" / "diagnostics.csv").read_bytes()
    assert b1 == b2


def test_fracfield_out_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("FRACFIELD_OUT", str(tmp_path / "envdir"))
    cfg = _write_cfg(tmp_path, BASE_CFG.format(out=tmp_path / "ignored"))
    assert main(["simulate", "--config", cfg]) == 0
    assert os.path.exists(tmp_path / "envdir" / "diagnostics.csv")
    assert not os.path.exists(tmp_path / "ignored")


def test_snapshot_roundtrip(tmp_path):
    text = BASE_CFG.format(out=tmp_path / "snap")
    text = text.replace("run.t_final = 0.2", "run.t_final = 0.2\nrun.snapshot_times = 0.0, 0.2")
    cfg = _write_cfg(tmp_path, text)
    assert main(["simulate", "--config", cfg]) == 0
    dom, t, vals = read_snapshot_csv(tmp_path / "snap" / "snapshot_001.csv")
    assert t == 0.2 and dom.points == 64 and vals.shape == (64,)


def test_ml_eval_subcommand(capsys):
    rc = main(["ml-eval", "--alpha", "1", "--beta", "1", "--z", "-1"])
    assert rc == 0
    assert float(capsys.readouterr().out) == pytest.approx(math.exp(-1.0), abs=1e-14)
    rc = main(["ml-eval", "--alpha", "3", "--beta", "1", "--z", "0"])
    assert rc == 2


def test_fode_subcommand(tmp_path):
    out = tmp_path / "fode.csv"
    rc = main(["fode", "--alpha", "0.5", "--A", "-1.0", "--eta", "1.0",
               "--t-final", "1.0", "--dt", "0.01", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "t,w_exact,w_l1,envelope"
    assert len(lines) == 102
    first = [float(v) for v in lines[1].split(",")]
    assert first == [0.0, 1.0, 1.0, 1.0]
    # homogeneous decay: envelope column equals the exact solution
    last = [float(v) for v in lines[-1].split(",")]
    assert last[1] == pytest.approx(last[3], rel=1e-10)


def test_report_subcommand(tmp_path, capsys):
    text = BASE_CFG.format(out=tmp_path / "rep")
    text = text.replace("run.t_final = 0.2", "run.t_final = 0.2\nrun.snapshot_times = 0.2")
    cfg = _write_cfg(tmp_path, text)
    assert main(["simulate", "--config", cfg]) == 0
    capsys.readouterr()
    rc = main(["report", "--run", str(tmp_path / "rep"), "--figures"])
    assert rc == 0
    rep = json.loads((tmp_path / "rep" / "report.json").read_text())
    assert rep["k_star"] == 0.0
    assert rep["termination"]["kind"] == "completed"
    assert rep["steady_states"]["valid"] is True
    assert os.path.exists(tmp_path / "rep" / "fig_sup_norm.png")
    assert os.path.exists(tmp_path / "rep" / "fig_state.png")


def test_verify_subcommand(tmp_path, capsys):
    rc = main(["verify", "mlf", "--out", str(tmp_path / "v.json")])
    assert rc == 0
    verdict = json.loads((tmp_path / "v.json").read_text())
    assert verdict["suite"] == "mlf" and verdict["passed"]


def test_sweep_subcommand(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, BASE_CFG.format(out=tmp_path / "sweepout"))
    rc = main(["sweep", "--config", cfg,
               "--param", "model.mu=0.5,1.0", "--param", "model.k=0.5,1.0"])
    assert rc == 0
    rows = [json.loads(l) for l in (tmp_path / "sweepout" / "sweep.jsonl").read_text().splitlines()]
    assert len(rows) == 4
    csv_lines = (tmp_path / "sweepout" / "sweep.csv").read_text().strip().splitlines()
    assert csv_lines[0] == "mu,k,gamma,alpha,outcome,sup_max,decay_violation"
    assert len(csv_lines) == 5
    # sorted by grid coordinates
    keys = [(r["point"]["model.k"], r["point"]["model.mu"]) for r in rows]
    assert keys == sorted(keys)
    rc = main(["sweep", "--config", cfg, "--param", "model.mu="])
    assert rc == 2
    rc = main(["sweep", "--config", cfg, "--param", "model.mu=0.5,1.0", "--max-points", "1"])
    assert rc == 2


def test_simulate_seam_violation_exit_code(tmp_path):
    # bump close to the wrap seam of a small box trips the monitor early
    text = BASE_CFG.format(out=tmp_path / "seam")
    text = text.replace("domain.half_width = 12.0", "domain.half_width = 6.0")
    text = text.replace("run.t_final = 0.2", "run.t_final = 2.0")
    cfg = _write_cfg(tmp_path, text)
    rc = main(["simulate", "--config", cfg])
    assert rc == 4


def test_tabulated_kernel_and_field_roundtrip(tmp_path):
    import fracfield.kernels as K
    from fracfield.outputs import write_snapshot_csv

    dom = K.Domain(dim=1, half_width=12.0, points=64)
    J = K.build_kernel(dom, "box", radius=1.0)
    kpath = tmp_path / "kern.csv"
    K.save_kernel_csv(kpath, J)
    fpath = tmp_path / "field.csv"
    x = dom.axis_coords()
    write_snapshot_csv(fpath, dom, 0.0, 0.3 * np.exp(-(x**2)))
    text = BASE_CFG.format(out=tmp_path / "tab")
    text = text.replace("kernel.shape = box", "kernel.shape = tabulated")
    text = text.replace("kernel.radius = 1.0", f"kernel.file = {kpath}")
    text = text.replace("ic.kind = bump", "ic.kind = tabulated")
    text = text.replace("ic.center = 0.0", f"ic.file = {fpath}")
    text = text.replace("ic.radius = 2.0\n", "").replace("ic.height = 0.5\n", "")
    cfg = _write_cfg(tmp_path, text)
    assert main(["simulate", "--config", cfg]) == 0
    assert os.path.exists(tmp_path / "tab" / "summary.json")


def test_diagnostics_csv_readback(tmp_path):
    cfg = _write_cfg(tmp_path, BASE_CFG.format(out=tmp_path / "rb"))
    assert main(["simulate", "--config", cfg]) == 0
    diags = read_diagnostics_csv(tmp_path / "rb" / "diagnostics.csv")
    assert diags["t"].shape == diags["sup_norm"].shape
    assert diags["lyapunov"] is None
    assert np.all(np.diff(diags["t"]) > 0.0)
