"""Upwind time stepping for the plant, observer, and error systems.

The two transport equations are discretized with first-order upwind
differences and explicit Euler in time; coupling and output-injection
terms are added explicitly. Interior nodes are updated first, then the
boundary values are assigned so both boundary conditions hold at every
stored time level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import CflViolation, GridMismatch
from .kernels import (
    GainProfiles,
    KernelSet,
    CONTROLLER_K,
    INVERSE_L,
    line_weights,
    trapezoid_matrix,
)
from .kernels import PlantCoefficients

Array = NDArray[np.float64]


@dataclass
class HyperbolicState:
    """A pair of grid functions on n_x uniform nodes of [0, ell]."""

    u: Array
    v: Array
    t: float
    ell: float

    def __post_init__(self) -> None:
        self.u = np.asarray(self.u, dtype=float)
        self.v = np.asarray(self.v, dtype=float)
        if self.u.shape != self.v.shape or self.u.ndim != 1:
            raise ValueError("u and v must be 1-d arrays of equal length")
        if self.ell <= 0:
            raise ValueError("ell must be positive")

    @property
    def n_x(self) -> int:
        return self.u.size

    @property
    def dx(self) -> float:
        return self.ell / (self.n_x - 1)


@dataclass(frozen=True)
class SimConfig:
    """Time step, spatial resolution, and horizon of a simulation."""

    dt: float
    n_x: int
    t_end: float

    def __post_init__(self) -> None:
        if self.dt <= 0 or self.t_end <= 0:
            raise ValueError("dt and t_end must be positive")
        if self.n_x < 3:
            raise ValueError("n_x must be at least 3")


def check_cfl(dt: float, dx: float, coeffs: PlantCoefficients) -> None:
    """Raise CflViolation when dt is too large for dx and the speeds."""
    lam = max(coeffs.lambda1, coeffs.lambda2)
    if dt * lam > dx * (1.0 + 1e-12):
        raise CflViolation(
            f"dt*max(lambda) = {dt * lam:.3e} exceeds dx = {dx:.3e}"
        )


def sample_coefficients(coeffs: PlantCoefficients, n_x: int) -> tuple[Array, Array]:
    """Sample c1 and c2 on the uniform simulation grid."""
    x = np.linspace(0.0, coeffs.ell, n_x)
    return (
        np.asarray(coeffs.c1(x), dtype=float),
        np.asarray(coeffs.c2(x), dtype=float),
    )


def step_plant(
    state: HyperbolicState,
    held_input: float,
    coeffs: PlantCoefficients,
    dt: float,
    c_samples: tuple[Array, Array] | None = None,
) -> HyperbolicState:
    """One upwind step of the plant with a zero-order-held input.

    Interior nodes are updated first; then the inflow boundaries are
    assigned: u(0) = q v(0) and v(ell) = rho u(ell) + held_input.
    """
    dx = state.dx
    check_cfl(dt, dx, coeffs)
    c1, c2 = c_samples if c_samples is not None else sample_coefficients(
        coeffs, state.n_x
    )
    u, v = state.u, state.v
    r1 = coeffs.lambda1 * dt / dx
    r2 = coeffs.lambda2 * dt / dx

    nu = np.empty_like(u)
    nv = np.empty_like(v)
    nu[1:] = u[1:] - r1 * (u[1:] - u[:-1]) + dt * c1[1:] * v[1:]
    nv[:-1] = v[:-1] + r2 * (v[1:] - v[:-1]) + dt * c2[:-1] * u[:-1]
    nu[0] = coeffs.q * nv[0]
    nv[-1] = coeffs.rho * nu[-1] + held_input
    return HyperbolicState(nu, nv, state.t + dt, state.ell)


def step_observer(
    state: HyperbolicState,
    measurement_v0: float,
    held_input: float,
    gains: GainProfiles,
    coeffs: PlantCoefficients,
    dt: float,
    measurement_v0_new: float | None = None,
    c_samples: tuple[Array, Array] | None = None,
) -> HyperbolicState:
    """One upwind step of the observer driven by the boundary measurement.

    measurement_v0 is the plant's v(0, t) at the current time level; it
    drives the output-injection terms p1(x) vt0, p2(x) vt0 with
    vt0 = measurement_v0 - v_hat(0, t). measurement_v0_new is the
    measurement at the new time level, used for the inlet condition
    u_hat(0) = q v(0); when omitted the current measurement is reused,
    which lags the inlet by one step.
    """
    dx = state.dx
    check_cfl(dt, dx, coeffs)
    if gains.grid.n_x != state.n_x:
        raise GridMismatch("gain profiles and state on different grids")
    c1, c2 = c_samples if c_samples is not None else sample_coefficients(
        coeffs, state.n_x
    )
    if measurement_v0_new is None:
        measurement_v0_new = measurement_v0
    u, v = state.u, state.v
    vt0 = measurement_v0 - v[0]
    r1 = coeffs.lambda1 * dt / dx
    r2 = coeffs.lambda2 * dt / dx

    nu = np.empty_like(u)
    nv = np.empty_like(v)
    nu[1:] = (
        u[1:] - r1 * (u[1:] - u[:-1]) + dt * c1[1:] * v[1:]
        + dt * gains.p1[1:] * vt0
    )
    nv[:-1] = (
        v[:-1] + r2 * (v[1:] - v[:-1]) + dt * c2[:-1] * u[:-1]
        + dt * gains.p2[:-1] * vt0
    )
    nu[0] = coeffs.q * measurement_v0_new
    nv[-1] = coeffs.rho * nu[-1] + held_input
    return HyperbolicState(nu, nv, state.t + dt, state.ell)


def step_error(
    state: HyperbolicState,
    gains: GainProfiles,
    coeffs: PlantCoefficients,
    dt: float,
    c_samples: tuple[Array, Array] | None = None,
) -> HyperbolicState:
    """One upwind step of the observer-error system.

    The error dynamics carry the negated injection terms and the
    boundary conditions u~(0) = 0, v~(ell) = rho u~(ell); no control
    input appears, so error trajectories are identical across control
    modes with shared initial data.
    """
    dx = state.dx
    check_cfl(dt, dx, coeffs)
    if gains.grid.n_x != state.n_x:
        raise GridMismatch("gain profiles and state on different grids")
    c1, c2 = c_samples if c_samples is not None else sample_coefficients(
        coeffs, state.n_x
    )
    u, v = state.u, state.v
    vt0 = v[0]
    r1 = coeffs.lambda1 * dt / dx
    r2 = coeffs.lambda2 * dt / dx

    nu = np.empty_like(u)
    nv = np.empty_like(v)
    nu[1:] = (
        u[1:] - r1 * (u[1:] - u[:-1]) + dt * c1[1:] * v[1:]
        - dt * gains.p1[1:] * vt0
    )
    nv[:-1] = (
        v[:-1] + r2 * (v[1:] - v[:-1]) + dt * c2[:-1] * u[:-1]
        - dt * gains.p2[:-1] * vt0
    )
    nu[0] = 0.0
    nv[-1] = coeffs.rho * nu[-1]
    return HyperbolicState(nu, nv, state.t + dt, state.ell)


class VolterraMap:
    """Precomputed Volterra transform between observer and target pairs.

    With the controller kernels the forward direction maps (u_hat,
    v_hat) to (alpha_hat, beta_hat); with the inverse kernels and
    sign -1 it maps back.
    """

    def __init__(self, ks: KernelSet, sign: float = 1.0):
        grid = ks.grid
        n = grid.n_x
        W = trapezoid_matrix(grid)
        T = np.zeros((2 * n, 2 * n))
        T[:n, :n] = ks.k11 * W
        T[:n, n:] = ks.k12 * W
        T[n:, :n] = ks.k21 * W
        T[n:, n:] = ks.k22 * W
        self._T = T
        self._sign = float(sign)
        self.n_x = n
        self.ell = grid.ell

    def apply(self, u: Array, v: Array) -> tuple[Array, Array]:
        n = self.n_x
        z = np.concatenate((u, v))
        integral = self._T @ z
        return (
            u - self._sign * integral[:n],
            v - self._sign * integral[n:],
        )


def transform_to_target(obs: HyperbolicState, K: KernelSet) -> HyperbolicState:
    """Map an observer state to target coordinates.

    alpha(x) = u_hat(x) - int_0^x (k11 u_hat + k12 v_hat) dxi and
    beta(x) likewise with k21, k22, by trapezoid quadrature per node.
    """
    if K.family != CONTROLLER_K:
        raise ValueError(f"expected family {CONTROLLER_K}, got {K.family}")
    if K.grid.n_x != obs.n_x:
        raise GridMismatch("kernel grid and state grid differ")
    alpha, beta = VolterraMap(K).apply(obs.u, obs.v)
    return HyperbolicState(alpha, beta, obs.t, obs.ell)


def transform_from_target(target: HyperbolicState, L: KernelSet) -> HyperbolicState:
    """Map a target state back to observer coordinates with the inverse kernels."""
    if L.family != INVERSE_L:
        raise ValueError(f"expected family {INVERSE_L}, got {L.family}")
    if L.grid.n_x != target.n_x:
        raise GridMismatch("kernel grid and state grid differ")
    u, v = VolterraMap(L, sign=-1.0).apply(target.u, target.v)
    return HyperbolicState(u, v, target.t, target.ell)


def control_law(obs: HyperbolicState, gains: GainProfiles) -> float:
    """Continuous feedback value: integral of Nu u_hat + Nv v_hat."""
    if gains.grid.n_x != obs.n_x:
        raise GridMismatch("gain profiles and state on different grids")
    w = line_weights(obs.n_x, obs.dx)
    return float(w @ (gains.Nu * obs.u + gains.Nv * obs.v))


def l2_norm(state: HyperbolicState) -> float:
    """Spatial L2 norm of the pair: sqrt of the integral of u^2 + v^2."""
    w = line_weights(state.n_x, state.dx)
    return float(np.sqrt(w @ (state.u**2 + state.v**2)))
