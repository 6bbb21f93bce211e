"""Shallow-water canal model: linearization around a uniform steady flow
and the exact maps between physical variables (depth, velocity) and the
canonical characteristic coordinates the controller operates in.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GateSubmerged, SlopeMismatch, SupercriticalFlow
from .kernels import PlantCoefficients
from .sim import HyperbolicState

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CanalConfig:
    """Physical parameters of a unit-width canal with a downstream gate.

    The bottom slope is determined by the equilibrium (uniform-flow
    balance); it may be supplied for documentation but must agree with
    the derived value to near round-off.
    """

    g: float
    ell: float
    Cf: float
    H_eq: float
    V_eq: float
    H_ell: float
    k_G: float
    S_b: float | None = None

    def __post_init__(self) -> None:
        if self.g <= 0 or self.ell <= 0:
            raise ValueError("g and ell must be positive")
        if self.Cf < 0:
            raise ValueError("Cf must be nonnegative")
        if not (self.H_eq > self.H_ell > 0):
            raise ValueError("need H_eq > H_ell > 0")
        if self.V_eq <= 0:
            raise ValueError("V_eq must be positive")
        if self.k_G <= 0:
            raise ValueError("k_G must be positive")
        if self.g * self.H_eq <= self.V_eq**2:
            raise SupercriticalFlow(
                f"g*H_eq = {self.g * self.H_eq:.6g} must exceed "
                f"V_eq^2 = {self.V_eq**2:.6g}"
            )
        derived = self.Cf * self.V_eq**2 / (self.g * self.H_eq)
        if self.S_b is None:
            object.__setattr__(self, "S_b", derived)
        else:
            scale = max(abs(derived), 1e-300)
            if abs(self.S_b - derived) > 1e-12 * scale:
                raise SlopeMismatch(
                    f"S_b = {self.S_b:.15g} but the uniform-flow balance "
                    f"requires {derived:.15g}"
                )

    @property
    def Q0(self) -> float:
        """Constant upstream flow rate (equilibrium discharge)."""
        return self.H_eq * self.V_eq


@dataclass(frozen=True)
class LinearizedModel:
    """Canonical coefficients plus the scalars of the linearization chain."""

    coeffs: PlantCoefficients
    gamma1: float
    gamma2: float
    f_H: float
    f_V: float
    q_tilde: float
    rho_tilde: float
    rho_u: float
    U_eq: float
    cfg: CanalConfig = field(repr=False)

    @property
    def exp_rate(self) -> float:
        """Decay-removal exponent rate gamma1/lambda1 + gamma2/lambda2."""
        return (
            self.gamma1 / self.coeffs.lambda1
            + self.gamma2 / self.coeffs.lambda2
        )


def linearize(cfg: CanalConfig) -> LinearizedModel:
    """Linearize the canal around its equilibrium.

    Produces the transport speeds, the in-domain coupling coefficients
    after removing the diagonal source terms by exponential scaling, and
    the boundary reflection coefficients of the canonical system.
    """
    g, H_eq, V_eq = cfg.g, cfg.H_eq, cfg.V_eq
    lam1 = V_eq + math.sqrt(g * H_eq)
    lam2 = math.sqrt(g * H_eq) - V_eq

    f_H = -cfg.Cf * V_eq**2 / H_eq**2
    f_V = 2.0 * cfg.Cf * V_eq / H_eq
    root = math.sqrt(H_eq / g)
    gamma1 = 0.5 * f_H * root + 0.5 * f_V
    gamma2 = -0.5 * f_H * root + 0.5 * f_V
    k_e = gamma1 / lam1 + gamma2 / lam2

    head = H_eq - cfg.H_ell
    q_tilde = -lam2 / lam1
    rho_tilde = (cfg.Q0 - 2.0 * lam1 * head) / (cfg.Q0 + 2.0 * lam2 * head)
    rho_u = (
        4.0 * math.sqrt(2.0) * g * cfg.k_G * head**1.5
        / (math.sqrt(H_eq) * (cfg.Q0 + 2.0 * lam2 * head))
    )
    U_eq = cfg.Q0 / (cfg.k_G * math.sqrt(2.0 * g * head))

    def c1(x):
        return -gamma2 * np.exp(k_e * np.asarray(x, dtype=float))

    def c2(x):
        return -gamma1 * np.exp(-k_e * np.asarray(x, dtype=float))

    coeffs = PlantCoefficients(
        lambda1=lam1,
        lambda2=lam2,
        c1=c1,
        c2=c2,
        q=q_tilde,
        rho=rho_tilde * math.exp(-k_e * cfg.ell),
        ell=cfg.ell,
    )
    return LinearizedModel(
        coeffs=coeffs,
        gamma1=gamma1,
        gamma2=gamma2,
        f_H=f_H,
        f_V=f_V,
        q_tilde=q_tilde,
        rho_tilde=rho_tilde,
        rho_u=rho_u,
        U_eq=U_eq,
        cfg=cfg,
    )


def to_characteristic(
    H_dev: np.ndarray,
    V_dev: np.ndarray,
    model: LinearizedModel,
    t: float = 0.0,
) -> HyperbolicState:
    """Map depth/velocity deviations to canonical characteristic states."""
    H_dev = np.asarray(H_dev, dtype=float)
    V_dev = np.asarray(V_dev, dtype=float)
    if H_dev.shape != V_dev.shape or H_dev.ndim != 1:
        raise ValueError("H_dev and V_dev must be 1-d arrays of equal length")
    cfg, co = model.cfg, model.coeffs
    s = math.sqrt(cfg.g / cfg.H_eq)
    xi1 = s * H_dev + V_dev
    xi2 = -s * H_dev + V_dev
    x = np.linspace(0.0, cfg.ell, H_dev.size)
    u = np.exp(model.gamma1 * x / co.lambda1) * xi1
    v = np.exp(-model.gamma2 * x / co.lambda2) * xi2
    return HyperbolicState(u=u, v=v, t=t, ell=cfg.ell)


def from_characteristic(
    state: HyperbolicState, model: LinearizedModel
) -> tuple[np.ndarray, np.ndarray]:
    """Map a canonical state back to absolute depth and velocity profiles."""
    cfg, co = model.cfg, model.coeffs
    x = np.linspace(0.0, cfg.ell, state.n_x)
    xi1 = np.exp(-model.gamma1 * x / co.lambda1) * state.u
    xi2 = np.exp(model.gamma2 * x / co.lambda2) * state.v
    s = math.sqrt(cfg.g / cfg.H_eq)
    H = cfg.H_eq + (xi1 - xi2) / (2.0 * s)
    V = cfg.V_eq + (xi1 + xi2) / 2.0
    return H, V


def gate_opening(
    U_canonical: float,
    H_at_ell: float,
    model: LinearizedModel,
    cfg: CanalConfig,
) -> float:
    """Physical gate opening realizing a canonical boundary input.

    The gate law is only meaningful while the upstream level exceeds the
    level beyond the gate. A negative requested opening is clamped to
    zero (fully closed) and logged, since the linearized law can demand
    one during large transients.
    """
    if H_at_ell <= cfg.H_ell:
        raise GateSubmerged(
            f"water level {H_at_ell:.6g} at the gate does not exceed the "
            f"downstream level {cfg.H_ell:.6g}"
        )
    co = model.coeffs
    U_tilde = U_canonical * math.exp(model.gamma2 * cfg.ell / co.lambda2)
    U_ell = model.U_eq + U_tilde / model.rho_u
    if U_ell < 0.0:
        log.warning(
            "gate opening clamped to 0 (requested %.6g at t with "
            "canonical input %.6g)", U_ell, U_canonical,
        )
        return 0.0
    return U_ell
