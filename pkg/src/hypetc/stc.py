"""Self-triggered scheduling: predict the next event time at each event.

At an event the scheduler evaluates a growth bound F on the triggering
function from the current target state and the worst-case contribution
of the (finite-time vanishing) observer error, then returns the largest
gap for which the bound stays nonpositive, floored by the minimum
dwell-time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    GridMismatch,
    MuBarNonpositive,
    NonNegativeM,
    VarrhoNotPositive,
)
from .kernels import (
    GainProfiles,
    INVERSE_R,
    KernelSet,
    PlantCoefficients,
    line_weights,
    trapezoid_matrix,
)
from .sim import HyperbolicState
from .triggers import DesignConstants, EtcParams


@dataclass(frozen=True)
class StcConstants:
    """Constants of the self-triggered gap function."""

    mu_bar: float
    delta_bar: float
    C_bar: float
    D_bar: float
    P_V2: float
    varrho: float
    r_d: float
    phi_alpha: float
    phi_beta: float
    phi_u: float
    phi_v: float


def stc_constants(
    gains: GainProfiles,
    R: KernelSet,
    coeffs: PlantCoefficients,
    delta_bar: float,
    phi_u: float,
    phi_v: float,
) -> StcConstants:
    """Evaluate the closed-form self-triggered constants.

    phi_u and phi_v bound the squared initial observer error pointwise;
    the inverse error kernels R propagate them to bounds on the initial
    target error. Raises MuBarNonpositive when the reflections are too
    strong for a positive decay rate and VarrhoNotPositive when
    delta_bar cannot make the growth rate positive.
    """
    if R.family != INVERSE_R:
        raise ValueError(f"expected family {INVERSE_R}, got {R.family}")
    if R.grid != gains.grid:
        raise GridMismatch("R kernels and gains on different grids")
    if delta_bar <= 0:
        raise ValueError("delta_bar must be positive")
    if phi_u < 0 or phi_v < 0:
        raise ValueError("phi_u and phi_v must be nonnegative")

    lam1, lam2, ell = coeffs.lambda1, coeffs.lambda2, coeffs.ell
    q, rho = coeffs.q, coeffs.rho

    two_rq = 2.0 * abs(q * rho)
    if two_rq >= 1.0:
        raise MuBarNonpositive(
            f"2|q rho| = {two_rq:.6g} >= 1: no positive decay rate exists"
        )
    mu_bar = 2.0 * lam1 * lam2 / (ell * (lam1 + lam2)) * math.log(1.0 / two_rq)

    C_bar = 1.0
    D_bar = 2.0 * q**2

    x = gains.grid.x
    w = line_weights(gains.grid.n_x, gains.grid.dx)
    wu = (C_bar / lam1) * np.exp(-mu_bar * x / lam1)
    wv = (D_bar / lam2) * np.exp(mu_bar * x / lam2)
    P_V2 = delta_bar * float(w @ (wu * gains.pbar1**2 + wv * gains.pbar2**2))

    varrho = delta_bar - mu_bar + 2.0 * D_bar * math.exp(mu_bar * ell / lam2)
    if varrho <= 0:
        raise VarrhoNotPositive(
            f"varrho = {varrho:.6g} <= 0 for delta_bar = {delta_bar:.6g}"
        )

    num = 4.0 * max(float(w @ gains.Nalpha**2), float(w @ gains.Nbeta**2))
    den = min(C_bar * math.exp(-mu_bar * ell / lam1) / lam1, D_bar / lam2)
    r_d = num / den

    W = trapezoid_matrix(R.grid)
    i11 = (R.k11**2 * W).sum(axis=1)
    i12 = (R.k12**2 * W).sum(axis=1)
    i21 = (R.k21**2 * W).sum(axis=1)
    i22 = (R.k22**2 * W).sum(axis=1)
    phi_alpha = 3.0 * float(np.max(phi_u + phi_u * x * i11 + phi_v * x * i12))
    phi_beta = 3.0 * float(np.max(phi_v + phi_u * x * i21 + phi_v * x * i22))

    return StcConstants(
        mu_bar=mu_bar,
        delta_bar=delta_bar,
        C_bar=C_bar,
        D_bar=D_bar,
        P_V2=P_V2,
        varrho=varrho,
        r_d=r_d,
        phi_alpha=phi_alpha,
        phi_beta=phi_beta,
        phi_u=phi_u,
        phi_v=phi_v,
    )


def vbar2(
    target: HyperbolicState,
    sc: StcConstants,
    coeffs: PlantCoefficients,
) -> float:
    """Weighted target-state energy used by the gap function."""
    lam1, lam2 = coeffs.lambda1, coeffs.lambda2
    x = np.linspace(0.0, target.ell, target.n_x)
    w = line_weights(target.n_x, target.dx)
    integrand = (sc.C_bar / lam1) * np.exp(-sc.mu_bar * x / lam1) * target.u**2 + (
        sc.D_bar / lam2
    ) * np.exp(sc.mu_bar * x / lam2) * target.v**2
    return float(w @ integrand)


def phi0(t: float, sc: StcConstants, coeffs: PlantCoefficients,
         ell_over_lambdas: float) -> float:
    """Worst-case squared inlet error bound; zero after the transport time."""
    if t <= ell_over_lambdas:
        return max(coeffs.rho**2 * sc.phi_alpha, sc.phi_beta)
    return 0.0


def calF(
    t: float,
    vbar2_val: float,
    sc: StcConstants,
    coeffs: PlantCoefficients,
    ell_over_lambdas: float,
) -> float:
    """Growth-bound amplitude of the triggering function at an event."""
    phi = (2.0 * sc.C_bar * coeffs.q**2 + sc.P_V2) * phi0(
        t, sc, coeffs, ell_over_lambdas
    )
    growth = 2.0 * sc.r_d * sc.D_bar * math.exp(
        sc.mu_bar * coeffs.ell / coeffs.lambda2
    )
    return sc.r_d * (2.0 * vbar2_val + (growth * vbar2_val + phi) / sc.varrho)


def gap_bound(
    m_k: float,
    F_k: float,
    consts: DesignConstants,
    params: EtcParams,
    sc: StcConstants,
) -> float:
    """Raw logarithmic gap bound; diverges as F_k tends to zero."""
    if F_k <= 0:
        return math.inf
    rate = sc.varrho + params.eta
    return (1.0 / rate) * math.log(
        (consts.theta_m * F_k - m_k * rate)
        / (F_k * (params.theta * rate + consts.theta_m))
    )


def next_event_gap(
    m_k: float,
    F_k: float,
    consts: DesignConstants,
    params: EtcParams,
    sc: StcConstants,
    f_floor: float = 1e-12,
    g_max: float | None = None,
) -> float:
    """Gap to the next event, floored by the minimum dwell-time.

    When the growth bound F_k is essentially zero the logarithmic form
    degenerates (the triggering function stays negative for any gap),
    so a configurable cap is returned instead; it defaults to ten
    minimum dwell-times.
    """
    if m_k >= 0:
        raise NonNegativeM(f"m = {m_k:.6g} must be negative at an event")
    if g_max is None:
        g_max = 10.0 * consts.tau
    if F_k <= f_floor:
        return g_max
    return min(max(consts.tau, gap_bound(m_k, F_k, consts, params, sc)), g_max)
