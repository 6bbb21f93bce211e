"""Periodic trigger: sampling-period selection, the inflated triggering
function, and the sampling-instant predicate.
"""

import math

import pytest

from hypetc.errors import DtTooCoarse
from hypetc.petc import PetcConfig, gamma_p, petc_should_trigger, select_h
from hypetc.triggers import DesignConstants, EtcParams

from conftest import assert_roundoff


def _consts(**overrides):
    vals = dict(
        eps0=0.1, eps1=0.2, eps2=0.3, eps3=0.4,
        kappa0=1.0, kappa1=2.0, kappa2=3.0,
        a=2.0, C=1.0, D=1.0, r=1.0, theta_m=4.0, tau=0.13323,
    )
    vals.update(overrides)
    return DesignConstants(**vals)


def _params():
    return EtcParams(eta=0.5, theta=1.0, sigma=0.5, m0=-1.0, mu=0.02, delta=0.01)


def test_petc_config_validation():
    PetcConfig(h=0.1)
    with pytest.raises(ValueError):
        PetcConfig(h=0.0)


def test_select_h_floors_to_step_grid():
    consts = _consts(tau=0.13323)
    pc = select_h(consts, 1.0, 1e-4)
    assert pc.h == pytest.approx(0.1332, abs=1e-12)
    assert pc.h <= consts.tau
    assert pc.h_auto
    half = select_h(consts, 0.5, 1e-4)
    assert half.h == pytest.approx(0.0666, abs=1e-12)


def test_select_h_fraction_validation():
    consts = _consts()
    with pytest.raises(ValueError):
        select_h(consts, 0.0, 1e-4)
    with pytest.raises(ValueError):
        select_h(consts, 1.5, 1e-4)


def test_select_h_dt_too_coarse():
    consts = _consts(tau=0.13323)
    with pytest.raises(DtTooCoarse):
        select_h(consts, 0.001, 0.2)


def test_gamma_p_reductions():
    consts = _consts()
    params = _params()
    a, theta_m = consts.a, consts.theta_m
    # at h = 0 the function reduces to a (theta d^2 + m)
    d, m = 0.7, -1.3
    assert_roundoff(
        gamma_p(d, m, consts, params, 0.0),
        a * (params.theta * d * d + m),
    )
    # at d = 0 only the dynamic part a m remains, for any h
    assert gamma_p(0.0, -0.8, consts, params, 0.25) == pytest.approx(
        a * -0.8, rel=1e-15
    )
    # the d^2 weight grows with h
    g1 = gamma_p(d, m, consts, params, 0.1)
    g2 = gamma_p(d, m, consts, params, 0.2)
    assert g2 > g1
    expected = (math.exp(a * 0.1) * (theta_m + a * params.theta) - theta_m) * d**2
    assert gamma_p(d, m, consts, params, 0.1) == pytest.approx(
        expected + a * m, rel=1e-14
    )


def test_petc_predicate_only_fires_on_the_grid():
    consts = _consts()
    params = _params()
    h = 0.1
    # between sampling instants the predicate is False no matter the state
    assert not petc_should_trigger(0.25, h, 100.0, 100.0, consts, params)
    # on the grid with zero holding error and negative m it stays quiet
    assert not petc_should_trigger(0.3, h, 0.0, -1.0, consts, params)
    # on the grid with a large holding error it fires
    assert petc_should_trigger(0.3, h, 5.0, -1.0, consts, params)
    # accumulated floating-point sampling times are recognized
    t = 0.0
    for _ in range(7):
        t += h
    assert petc_should_trigger(t, h, 5.0, -1.0, consts, params)
