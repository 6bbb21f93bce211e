"""Scenario orchestration and the CLI: config handling, per-mode output
files and their schemas, determinism, and error reporting.

The fast configuration below (constant couplings on a unit domain,
n_x = 51, two seconds) keeps every scenario here under a second.
"""

import dataclasses
import json
import os

import numpy as np
import pytest
import yaml

from hypetc.cli import main
from hypetc.errors import ConfigMismatch, OutputDirUnwritable
from hypetc.experiments import (
    MODES,
    compare_modes,
    config_from_dict,
    constants_report,
    default_config,
    load_config,
    run_scenario,
)

from conftest import load_columns, load_rows


def fast_dict(out_dir, mode="cetc", **sim_overrides):
    sim = {"dt": 2e-3, "n_x": 51, "t_end": 2.0}
    sim.update(sim_overrides)
    return {
        "mode": mode,
        "plant": {
            "kind": "raw",
            "raw": {
                "lambda1": 1.0, "lambda2": 1.0, "c1": 0.3, "c2": 0.2,
                "q": 0.5, "rho": -0.6, "ell": 1.0,
            },
        },
        "initial": {"u_amp": 1.0, "u_mode": 1, "v_amp": 0.5, "v_mode": 2},
        "etc": {"mu": 0.4, "delta": 0.2, "eta": 0.05, "theta": 1.0,
                "sigma": 0.9, "m0": -1.0},
        "petc": {"h": None, "h_frac": 0.5},
        "sim": sim,
        "output": {"dir": str(out_dir), "stride": 10},
        "kernels": {"tol": 1e-8, "max_iter": 10000},
    }


def fast_config(out_dir, mode="cetc", **sim_overrides):
    return config_from_dict(fast_dict(out_dir, mode, **sim_overrides))


def test_default_config_shape():
    cfg = config_from_dict(None)
    assert cfg.mode == "cetc"
    assert cfg.canal is not None and cfg.raw is None
    assert cfg.sim.t_end == 40.0
    assert cfg.probes == (0.0, 5.0, 10.0)
    assert cfg.stride == 10


def test_unknown_config_keys_rejected():
    with pytest.raises(ValueError, match="simx"):
        config_from_dict({"simx": {}})
    with pytest.raises(ValueError, match="sim.dtx"):
        config_from_dict({"sim": {"dtx": 1e-3}})


def test_plant_source_validation(tmp_path):
    with pytest.raises(ValueError):
        config_from_dict({"plant": {"kind": "weird"}})
    cfg = fast_config(tmp_path)
    with pytest.raises(ValueError):
        dataclasses.replace(cfg, canal=None, raw=None)
    with pytest.raises(ValueError):
        config_from_dict(fast_dict(tmp_path), mode="nonsense")
    with pytest.raises(ValueError):
        config_from_dict(fast_dict(tmp_path), stride=0)


def test_load_config_yaml(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump(fast_dict(tmp_path / "out")))
    cfg = load_config(str(path), mode="stc")
    assert cfg.mode == "stc"
    assert cfg.raw.c1 == 0.3
    bad = tmp_path / "bad.yaml"
    bad.write_text("- just\n- a list\n")
    with pytest.raises(ValueError):
        load_config(str(bad))


def test_open_loop_run(tmp_path):
    summary = run_scenario(fast_config(tmp_path, mode="open_loop"))
    assert summary.n_events == 0
    assert summary.tau is None and summary.gamma_c_max is None
    run_dir = tmp_path / "open_loop"
    with open(run_dir / "events.csv") as fh:
        assert fh.read() == "k,t_k,dwell,U_held\n"
    cols = load_columns(run_dir / "trajectory.csv")
    assert np.all(cols["U_held"] == 0.0)
    assert cols["t"].size == 101  # 1000 steps at stride 10, plus t = 0
    assert not (run_dir / "monitor.csv").exists()
    assert not (run_dir / "physical.csv").exists()  # raw plant


def test_ctc_run(tmp_path):
    summary = run_scenario(fast_config(tmp_path, mode="ctc"))
    assert summary.n_events == 0
    cols = load_columns(tmp_path / "ctc" / "trajectory.csv")
    # the input is refreshed every step, so held and continuous agree
    # on every stored row
    np.testing.assert_array_equal(cols["U_held"][1:], cols["U_continuous"][1:])
    assert summary.final_norm_plant < summary.initial_norm_plant


def test_cetc_run(tmp_path):
    cfg = fast_config(tmp_path)
    summary = run_scenario(cfg)
    run_dir = tmp_path / "cetc"

    assert summary.n_events >= 1
    assert summary.tau is not None and summary.tau > 0.0
    assert summary.gamma_c_max <= 1e-9
    assert summary.m_max < 0.0

    events = load_rows(run_dir / "events.csv")
    assert [e["k"] for e in events] == [str(i) for i in range(len(events))]
    assert float(events[0]["t_k"]) == 0.0
    dwells = [float(e["dwell"]) for e in events[1:]]
    assert all(d >= summary.tau - cfg.sim.dt - 1e-12 for d in dwells)

    mon = load_columns(run_dir / "monitor.csv")
    assert set(mon) == {"t", "gamma_c", "m", "d"}
    assert np.all(mon["gamma_c"] <= 1e-9)
    assert np.all(mon["m"] < 0.0)

    with open(run_dir / "constants.json") as fh:
        consts = json.load(fh)
    assert consts["design"]["tau"] == pytest.approx(summary.tau, rel=1e-12)
    assert consts["etc_params"]["sigma"] == 0.9

    for rel in summary.files.values():
        assert os.path.exists(os.path.join(str(tmp_path), rel))


def test_petc_run(tmp_path):
    summary = run_scenario(fast_config(tmp_path, mode="petc"))
    h = summary.petc_h
    assert h is not None and 0.0 < h <= summary.tau
    events = load_rows(tmp_path / "petc" / "events.csv")
    assert all(e["mode"] == "petc" for e in events)
    for e in events[1:]:
        ratio = float(e["t_k"]) / h
        assert abs(ratio - round(ratio)) <= 1e-9
        steps = float(e["dwell"]) / h
        assert round(steps) >= 1 and abs(steps - round(steps)) <= 1e-9


def test_stc_run(tmp_path):
    cfg = fast_config(tmp_path, mode="stc")
    summary = run_scenario(cfg)
    events = load_rows(tmp_path / "stc" / "events.csv")
    assert summary.n_events == len(events) >= 2
    tau = summary.tau
    for e in events:
        assert e["mode"] == "stc"
        gap = float(e["G_k"])
        assert tau - 1e-12 <= gap <= 10.0 * tau + 1e-12
        assert float(e["F_k"]) >= 0.0
    # each dwell is the previous gap snapped up to the step grid
    for prev, e in zip(events, events[1:]):
        dwell = float(e["dwell"])
        gap = float(prev["G_k"])
        assert gap - 1e-9 <= dwell <= gap + cfg.sim.dt + 1e-9
    assert summary.gamma_c_max <= 1e-9


def test_reruns_are_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run_scenario(fast_config(a))
    run_scenario(fast_config(b))
    for name in ("trajectory.csv", "events.csv", "monitor.csv",
                 "constants.json", "summary.json"):
        assert (a / "cetc" / name).read_bytes() == (b / "cetc" / name).read_bytes()


def test_compare_modes(tmp_path):
    configs = [fast_config(tmp_path, mode=m) for m in ("ctc", "cetc")]
    rows = compare_modes(configs)
    assert [r["mode"] for r in rows] == ["ctc", "cetc"]
    assert rows[0]["events"] == 0 and rows[1]["events"] >= 1
    table = load_rows(tmp_path / "comparison.csv")
    assert list(table[0]) == ["mode", "events", "mean_dwell", "time_to_1pct"]
    assert table[0]["mode"] == "ctc"


def test_compare_modes_mismatch(tmp_path):
    base = fast_config(tmp_path)
    other = fast_config(tmp_path, mode="ctc", t_end=1.0)
    with pytest.raises(ConfigMismatch):
        compare_modes([base, other])
    elsewhere = fast_config(tmp_path / "elsewhere", mode="ctc")
    with pytest.raises(ConfigMismatch):
        compare_modes([base, elsewhere])
    with pytest.raises(ValueError):
        compare_modes([])


def test_output_dir_unwritable(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("a file, not a directory\n")
    with pytest.raises(OutputDirUnwritable):
        run_scenario(fast_config(blocker))


def test_canal_physical_outputs(tmp_path):
    cfg = config_from_dict(
        {
            "sim": {"dt": 2e-3, "n_x": 51, "t_end": 0.5},
            "output": {"dir": str(tmp_path), "stride": 25},
        },
        mode="open_loop",
    )
    run_scenario(cfg)
    phys = load_columns(tmp_path / "open_loop" / "physical.csv")
    assert set(phys) == {"t", "H_0", "H_5", "H_10", "V_0", "V_5", "V_10", "U_ell"}
    # H(0, 0) = H_eq + h_amp sin(0) = 2 and the gate starts at U_eq
    assert phys["H_0"][0] == pytest.approx(2.0, abs=1e-12)
    assert phys["U_ell"][0] == pytest.approx(0.545949, abs=1e-6)

    with pytest.raises(ValueError, match="probe"):
        run_scenario(
            config_from_dict(
                {
                    "sim": {"dt": 2e-3, "n_x": 51, "t_end": 0.5},
                    "output": {"dir": str(tmp_path), "probes": [0.0, 20.0]},
                },
                mode="open_loop",
            )
        )


def test_constants_report_fast(tmp_path):
    report = constants_report(fast_config(tmp_path))
    assert report["assumptions"]["reflection_bound_ok"] is True
    assert "canal" not in report  # raw plant has no physical section
    assert report["design"]["tau"] > 0.0
    assert report["stc"]["varrho"] > 0.0


def test_cli_print_defaults(capsys):
    assert main(["--print-defaults"]) == 0
    parsed = yaml.safe_load(capsys.readouterr().out)
    assert parsed["sim"]["n_x"] == 201


def test_cli_no_command(capsys):
    assert main([]) == 2
    assert "usage" in capsys.readouterr().err


def test_cli_simulate_and_constants(tmp_path, capsys):
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump(fast_dict(tmp_path / "ignored")))
    out = tmp_path / "cli-out"
    rc = main(["simulate", "--config", str(path), "--mode", "cetc",
               "--out", str(out)])
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["mode"] == "cetc"
    assert (out / "cetc" / "trajectory.csv").exists()

    assert main(["constants", "--config", str(path)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["design"]["tau"] > 0.0


def test_cli_compare(tmp_path, capsys):
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump(fast_dict(tmp_path / "ignored")))
    out = tmp_path / "cmp-out"
    rc = main(["compare", "--config", str(path), "--modes", "ctc,cetc",
               "--out", str(out)])
    assert rc == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["mode"] for r in rows] == ["ctc", "cetc"]
    assert (out / "comparison.csv").exists()

    rc = main(["compare", "--config", str(path), "--modes", "ctc,warp"])
    assert rc == 1
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "ValueError"


def test_cli_error_reporting(tmp_path, capsys):
    path = tmp_path / "broken.yaml"
    path.write_text("simx: {}\n")
    assert main(["simulate", "--config", str(path)]) == 1
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "ValueError" and "simx" in err["message"]

    missing = tmp_path / "missing.yaml"
    assert main(["constants", "--config", str(missing)]) == 1
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] in ("FileNotFoundError", "OSError")


def test_all_modes_are_known():
    assert MODES == ("open_loop", "ctc", "cetc", "petc", "stc")
    defaults = default_config()
    assert defaults["mode"] in MODES
