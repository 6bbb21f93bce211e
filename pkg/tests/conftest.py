"""Shared fixtures: the reference canal design and the five full runs."""

import csv

import numpy as np
import pytest

from hypetc.experiments import config_from_dict, run_scenario, solve_design
from hypetc.saint_venant import CanalConfig, linearize
from hypetc.stc import stc_constants
from hypetc.triggers import EtcParams, design_constants

REFERENCE_MODES = ("open_loop", "ctc", "cetc", "petc", "stc")


@pytest.fixture(scope="session")
def canal_cfg():
    return CanalConfig(
        g=9.81, ell=10.0, Cf=0.2, H_eq=2.0, V_eq=1.0, H_ell=0.1, k_G=0.6
    )


@pytest.fixture(scope="session")
def canal_model(canal_cfg):
    return linearize(canal_cfg)


@pytest.fixture(scope="session")
def ref_design(canal_model):
    """Kernel bundle of the reference configuration at n_x = 201."""
    return solve_design(canal_model.coeffs, 201, 1e-8, 10000)


@pytest.fixture(scope="session")
def etc_params():
    return EtcParams(mu=0.016, delta=0.014, eta=0.001, theta=1.0, sigma=0.99, m0=-1.0)


@pytest.fixture(scope="session")
def ref_consts(ref_design, canal_model, etc_params):
    return design_constants(ref_design.gains, canal_model.coeffs, etc_params)


@pytest.fixture(scope="session")
def ref_stc_consts(ref_design, canal_model):
    return stc_constants(
        ref_design.gains, ref_design.R, canal_model.coeffs, 1e-4, 8.6872, 3.1664
    )


@pytest.fixture(scope="session")
def reference_runs(tmp_path_factory):
    """All five modes on the default (reference canal) configuration.

    Returns (output root, mode -> RunSummary). Takes a few minutes; only
    the acceptance tests consume it.
    """
    out = tmp_path_factory.mktemp("reference-runs")
    runs = {}
    for mode in REFERENCE_MODES:
        cfg = config_from_dict({"output": {"dir": str(out)}}, mode=mode)
        runs[mode] = run_scenario(cfg)
    return out, runs


def load_columns(path):
    """Numeric CSV -> dict of column name to float array."""
    data = np.genfromtxt(path, delimiter=",", names=True)
    if data.shape == ():
        data = data.reshape(1)
    return {name: np.asarray(data[name], dtype=float) for name in data.dtype.names}


def load_rows(path):
    """CSV -> list of dicts of raw strings (handles text columns)."""
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def assert_roundoff(a, b, ulps=8):
    """Assert two floats agree to a few units in the last place."""
    scale = max(abs(a), abs(b), 1e-300)
    assert abs(a - b) <= ulps * np.finfo(float).eps * scale, (a, b)
