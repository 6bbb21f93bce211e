"""Periodic evaluation of the triggering condition on the h-grid.

Instead of monitoring the continuous triggering function at every
instant, a modified function is checked only at multiples of a sampling
period h bounded by the minimum dwell-time; between checks the
continuous function provably stays nonpositive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DtTooCoarse
from .triggers import DesignConstants, EtcParams


@dataclass(frozen=True)
class PetcConfig:
    """Sampling period of the periodic trigger."""

    h: float
    h_auto: bool = False

    def __post_init__(self) -> None:
        if self.h <= 0:
            raise ValueError("h must be positive")


def select_h(consts: DesignConstants, h_frac: float, dt: float) -> PetcConfig:
    """Pick a sampling period as a fraction of the minimum dwell-time.

    The result is floored to an integer multiple of the simulation time
    step so that the sampling and simulation clocks never drift.
    """
    if not 0.0 < h_frac <= 1.0:
        raise ValueError("h_frac must lie in (0, 1]")
    steps = math.floor(h_frac * consts.tau / dt)
    if steps < 1:
        raise DtTooCoarse(
            f"h_frac*tau = {h_frac * consts.tau:.3e} is below dt = {dt:.3e}"
        )
    return PetcConfig(h=steps * dt, h_auto=True)


def gamma_p(
    d: float,
    m: float,
    consts: DesignConstants,
    params: EtcParams,
    h: float,
) -> float:
    """Periodic triggering function evaluated at a sampling instant.

    Reduces to a * (theta d^2 + m) at h = 0 and inflates the d^2 weight
    with the sampling period so that a nonpositive value certifies a
    nonpositive continuous triggering function over the next interval.
    """
    a, theta_m = consts.a, consts.theta_m
    coef = math.exp(a * h) * (theta_m + a * params.theta) - theta_m
    return coef * d * d + a * m


def petc_should_trigger(
    t: float,
    h: float,
    d: float,
    m: float,
    consts: DesignConstants,
    params: EtcParams,
) -> bool:
    """True when t is a sampling instant with positive trigger value."""
    k = round(t / h)
    if abs(t - k * h) > 1e-9:
        return False
    return gamma_p(d, m, consts, params, h) > 0.0
