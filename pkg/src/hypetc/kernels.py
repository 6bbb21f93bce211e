"""Backstepping kernel solver on the triangular domain 0 <= xi <= x <= ell.

Four kernel families arise for a 2x2 hyperbolic system: the controller
transform and its inverse carry data on the xi = 0 edge, the observer
transform and its inverse carry data on the x = ell edge, and every
family imposes two of its four kernels on the diagonal xi = x. All four
share the same transport structure, so a single marching routine solves
them: each kernel is integrated along its characteristic direction by
the midpoint rule, with the coupling sources frozen at the previous
iterate, and the sweep is repeated until the finite-difference residual
of the transport equations drops below tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from .errors import GridMismatch, InvalidCoefficients, NonConvergence
from .ioutil import atomic_write_text, fmt

Array = NDArray[np.float64]

CONTROLLER_K = "controller-K"
OBSERVER_P = "observer-P"
INVERSE_L = "inverse-L"
INVERSE_R = "inverse-R"
FAMILIES = (CONTROLLER_K, OBSERVER_P, INVERSE_L, INVERSE_R)

KERNEL_NAMES = ("k11", "k12", "k21", "k22")

# Fraction of dx used as the tie tolerance when a characteristic foot
# lands exactly on the previous grid row.
_FOOT_TIE = 1e-12


@dataclass(frozen=True)
class TriangularGrid:
    """Uniform grid over the triangle {0 <= xi <= x <= ell}.

    Kernel samples are stored as dense (n_x, n_x) arrays with row index
    for x and column index for xi; entries above the diagonal are unused
    and stay zero.
    """

    n_x: int
    ell: float

    def __post_init__(self) -> None:
        if self.n_x < 3:
            raise ValueError("n_x must be at least 3")
        if self.ell <= 0:
            raise ValueError("ell must be positive")

    @property
    def dx(self) -> float:
        return self.ell / (self.n_x - 1)

    @property
    def x(self) -> Array:
        return np.linspace(0.0, self.ell, self.n_x)


@dataclass(frozen=True)
class PlantCoefficients:
    """Parameters of the canonical 2x2 hyperbolic system.

    c1 and c2 are vectorized callables sampling the space-dependent
    coupling coefficients; they must return finite values on [0, ell].
    q and rho are the boundary reflection coefficients at x = 0 and
    x = ell.
    """

    lambda1: float
    lambda2: float
    c1: Callable[[Array], Array]
    c2: Callable[[Array], Array]
    q: float
    rho: float
    ell: float

    def __post_init__(self) -> None:
        if self.lambda1 <= 0 or self.lambda2 <= 0:
            raise InvalidCoefficients("transport speeds must be positive")
        if self.q == 0:
            raise InvalidCoefficients("reflection q must be nonzero")
        if self.rho == 0:
            raise InvalidCoefficients("reflection rho must be nonzero")
        if self.ell <= 0:
            raise InvalidCoefficients("domain length must be positive")


@dataclass
class KernelSet:
    """Solved kernels of one family on a triangular grid."""

    family: str
    grid: TriangularGrid
    k11: Array
    k12: Array
    k21: Array
    k22: Array

    def kernel(self, name: str) -> Array:
        return getattr(self, name)


@dataclass
class GainProfiles:
    """All gain profiles derived from the solved kernel families.

    p1, p2 are the output-injection gains and pbar1, pbar2 their images
    under the controller transform (functions of x). Nu, Nv are the
    feedback kernels in observer coordinates and Nalpha, Nbeta the same
    feedback expressed in target coordinates (functions of xi).
    """

    grid: TriangularGrid
    p1: Array
    p2: Array
    pbar1: Array
    pbar2: Array
    Nu: Array
    Nv: Array
    Nalpha: Array
    Nbeta: Array


@dataclass(frozen=True)
class _Family:
    """Marching data for one kernel family.

    edge_at_zero: True when the 11/22 kernels carry data on xi = 0,
    False when they carry data on x = ell. source_arg_xi: True when the
    coupling coefficients are sampled at xi, False when sampled at x.
    diag12/diag21: signs of the imposed diagonal data c1/(l1+l2) and
    c2/(l1+l2). sources: kernel -> (sign, coefficient name, partner).
    """

    edge_at_zero: bool
    source_arg_xi: bool
    diag12: float
    diag21: float
    sources: dict[str, tuple[float, str, str]]


_ROW_COUPLED = {
    "k11": (-1.0, "c2", "k12"),
    "k12": (-1.0, "c1", "k11"),
    "k21": (+1.0, "c2", "k22"),
    "k22": (+1.0, "c1", "k21"),
}
_COL_COUPLED = {
    "k11": (+1.0, "c1", "k21"),
    "k12": (+1.0, "c1", "k22"),
    "k21": (-1.0, "c2", "k11"),
    "k22": (-1.0, "c2", "k12"),
}

_FAMILY_TABLE = {
    CONTROLLER_K: _Family(True, True, +1.0, -1.0, _ROW_COUPLED),
    INVERSE_L: _Family(True, False, +1.0, -1.0, _COL_COUPLED),
    OBSERVER_P: _Family(False, False, -1.0, +1.0, _COL_COUPLED),
    INVERSE_R: _Family(False, True, -1.0, +1.0, _ROW_COUPLED),
}


def _edge_coefficients(coeffs: PlantCoefficients, edge_at_zero: bool):
    """Edge relations tying the 11/22 kernels to the 12/21 kernels.

    Returns ((partner of k11, factor), (partner of k22, factor)).
    """
    if edge_at_zero:
        e11 = coeffs.lambda2 / (coeffs.q * coeffs.lambda1)
        e22 = coeffs.q * coeffs.lambda1 / coeffs.lambda2
        return ("k12", e11), ("k21", e22)
    return ("k21", 1.0 / coeffs.rho), ("k12", coeffs.rho)


def _char_speed(name: str, coeffs: PlantCoefficients) -> float:
    return coeffs.lambda1 if name in ("k11", "k12") else coeffs.lambda2


def _back_slope(name: str, coeffs: PlantCoefficients) -> float:
    """d(xi)/d(-x) of the characteristic for the off-diagonal kernels."""
    if name == "k12":
        return coeffs.lambda2 / coeffs.lambda1
    return coeffs.lambda1 / coeffs.lambda2


def _diag_value(fam: _Family, name: str, coeffs: PlantCoefficients, x):
    lam_sum = coeffs.lambda1 + coeffs.lambda2
    if name == "k12":
        return fam.diag12 * coeffs.c1(x) / lam_sum
    return fam.diag21 * coeffs.c2(x) / lam_sum


def _march_offdiag(
    name: str,
    arrs: dict[str, Array],
    fam: _Family,
    coeffs: PlantCoefficients,
    grid: TriangularGrid,
) -> None:
    """March a 12/21 kernel from its diagonal data toward larger x.

    Rows are processed in increasing x so that each one-step backtrace
    foot lies either on the already-updated previous row or on the
    diagonal, where the data is imposed exactly.
    """
    arr = arrs[name]
    sgn, c_name, partner_name = fam.sources[name]
    partner = arrs[partner_name]
    c_src = getattr(coeffs, c_name)
    x, dx, n = grid.x, grid.dx, grid.n_x
    slope = _back_slope(name, coeffs)
    lam = _char_speed(name, coeffs)
    pdiag = np.diagonal(partner).copy()
    inv_dx = 1.0 / dx

    for i in range(1, n):
        xi = x[:i]
        xi_foot = xi + slope * dx
        hit = xi_foot > x[i - 1] + _FOOT_TIE * dx

        jf = np.clip((xi_foot * inv_dx).astype(np.int64), 0, max(i - 2, 0))
        w = np.clip(xi_foot * inv_dx - jf, 0.0, 1.0)
        foot = (1.0 - w) * arr[i - 1, jf] + w * arr[i - 1, jf + 1]
        p_foot = (1.0 - w) * partner[i - 1, jf] + w * partner[i - 1, jf + 1]

        x_anchor = (xi + slope * x[i]) / (1.0 + slope)
        anchor = _diag_value(fam, name, coeffs, x_anchor)
        dj = np.clip((x_anchor * inv_dx).astype(np.int64), 0, n - 2)
        wd = np.clip(x_anchor * inv_dx - dj, 0.0, 1.0)
        p_anchor = (1.0 - wd) * pdiag[dj] + wd * pdiag[dj + 1]

        seg = np.where(hit, x[i] - x_anchor, dx)
        base = np.where(hit, anchor, foot)
        p_mid = 0.5 * (np.where(hit, p_anchor, p_foot) + partner[i, :i])
        x_mid = np.where(hit, 0.5 * (x_anchor + x[i]), x[i] - 0.5 * dx)
        xi_mid = np.where(hit, 0.5 * (x_anchor + xi), 0.5 * (xi_foot + xi))
        c_mid = c_src(xi_mid if fam.source_arg_xi else x_mid)

        arr[i, :i] = base + seg * (sgn / lam) * c_mid * p_mid


def _march_grid_aligned(
    name: str,
    arrs: dict[str, Array],
    fam: _Family,
    coeffs: PlantCoefficients,
    grid: TriangularGrid,
) -> None:
    """March an 11/22 kernel along the grid diagonal from its edge data.

    The edge values themselves are imposed by _impose_edges before this
    is called; characteristics of these kernels are grid aligned so no
    interpolation is needed.
    """
    arr = arrs[name]
    sgn, c_name, partner_name = fam.sources[name]
    partner = arrs[partner_name]
    c_src = getattr(coeffs, c_name)
    x, dx, n = grid.x, grid.dx, grid.n_x
    lam = _char_speed(name, coeffs)
    f = sgn * dx / lam

    if fam.edge_at_zero:
        for i in range(1, n):
            p_mid = 0.5 * (partner[i - 1, 0:i] + partner[i, 1 : i + 1])
            if fam.source_arg_xi:
                c_mid = c_src(x[1 : i + 1] - 0.5 * dx)
            else:
                c_mid = c_src(x[i] - 0.5 * dx)
            arr[i, 1 : i + 1] = arr[i - 1, 0:i] + f * c_mid * p_mid
    else:
        for i in range(n - 2, -1, -1):
            p_mid = 0.5 * (partner[i, 0 : i + 1] + partner[i + 1, 1 : i + 2])
            if fam.source_arg_xi:
                c_mid = c_src(x[0 : i + 1] + 0.5 * dx)
            else:
                c_mid = c_src(x[i] + 0.5 * dx)
            arr[i, 0 : i + 1] = arr[i + 1, 1 : i + 2] - f * c_mid * p_mid


def _impose_diagonal(arrs, fam, coeffs, grid) -> None:
    idx = np.arange(grid.n_x)
    arrs["k12"][idx, idx] = _diag_value(fam, "k12", coeffs, grid.x)
    arrs["k21"][idx, idx] = _diag_value(fam, "k21", coeffs, grid.x)


def _impose_edges(arrs, fam, coeffs, grid) -> None:
    (p11, e11), (p22, e22) = _edge_coefficients(coeffs, fam.edge_at_zero)
    if fam.edge_at_zero:
        arrs["k11"][:, 0] = e11 * arrs[p11][:, 0]
        arrs["k22"][:, 0] = e22 * arrs[p22][:, 0]
    else:
        arrs["k11"][-1, :] = e11 * arrs[p11][-1, :]
        arrs["k22"][-1, :] = e22 * arrs[p22][-1, :]


def _sweep(arrs, fam, coeffs, grid) -> float:
    """One successive-approximation sweep; returns the max increment."""
    delta = 0.0
    for name in ("k12", "k21"):
        before = arrs[name].copy()
        _march_offdiag(name, arrs, fam, coeffs, grid)
        delta = max(delta, float(np.max(np.abs(arrs[name] - before))))
    for name in ("k11", "k22"):
        before = arrs[name].copy()
        _impose_edges(arrs, fam, coeffs, grid)
        _march_grid_aligned(name, arrs, fam, coeffs, grid)
        delta = max(delta, float(np.max(np.abs(arrs[name] - before))))
    return delta


def _pde_defects(arrs, fam, coeffs, grid) -> dict[str, float]:
    """Transport-equation residuals of the converged kernels.

    Each marched node is checked against its one-sided characteristic
    finite difference with the midpoint source, using the current arrays
    on both sides (pure function, no sequential reuse). The returned
    values are in the units of the transport equations.
    """
    x, dx, n = grid.x, grid.dx, grid.n_x
    out: dict[str, float] = {}

    for name in ("k12", "k21"):
        arr = arrs[name]
        sgn, c_name, partner_name = fam.sources[name]
        partner = arrs[partner_name]
        c_src = getattr(coeffs, c_name)
        slope = _back_slope(name, coeffs)
        lam = _char_speed(name, coeffs)
        pdiag = np.diagonal(partner).copy()
        inv_dx = 1.0 / dx
        worst = 0.0
        for i in range(1, n):
            xi = x[:i]
            xi_foot = xi + slope * dx
            hit = xi_foot > x[i - 1] + _FOOT_TIE * dx
            jf = np.clip((xi_foot * inv_dx).astype(np.int64), 0, max(i - 2, 0))
            w = np.clip(xi_foot * inv_dx - jf, 0.0, 1.0)
            foot = (1.0 - w) * arr[i - 1, jf] + w * arr[i - 1, jf + 1]
            p_foot = (1.0 - w) * partner[i - 1, jf] + w * partner[i - 1, jf + 1]
            x_anchor = (xi + slope * x[i]) / (1.0 + slope)
            anchor = _diag_value(fam, name, coeffs, x_anchor)
            dj = np.clip((x_anchor * inv_dx).astype(np.int64), 0, n - 2)
            wd = np.clip(x_anchor * inv_dx - dj, 0.0, 1.0)
            p_anchor = (1.0 - wd) * pdiag[dj] + wd * pdiag[dj + 1]
            seg = np.where(hit, x[i] - x_anchor, dx)
            base = np.where(hit, anchor, foot)
            p_mid = 0.5 * (np.where(hit, p_anchor, p_foot) + partner[i, :i])
            x_mid = np.where(hit, 0.5 * (x_anchor + x[i]), x[i] - 0.5 * dx)
            xi_mid = np.where(hit, 0.5 * (x_anchor + xi), 0.5 * (xi_foot + xi))
            c_mid = c_src(xi_mid if fam.source_arg_xi else x_mid)
            defect = lam * (arr[i, :i] - base) / seg - sgn * c_mid * p_mid
            worst = max(worst, float(np.max(np.abs(defect))))
        out[name] = worst

    for name in ("k11", "k22"):
        arr = arrs[name]
        sgn, c_name, partner_name = fam.sources[name]
        partner = arrs[partner_name]
        c_src = getattr(coeffs, c_name)
        lam = _char_speed(name, coeffs)
        worst = 0.0
        for i in range(1, n):
            p_mid = 0.5 * (partner[i - 1, 0:i] + partner[i, 1 : i + 1])
            if fam.source_arg_xi:
                c_mid = c_src(x[1 : i + 1] - 0.5 * dx)
            else:
                c_mid = c_src(x[i] - 0.5 * dx)
            defect = (
                lam * (arr[i, 1 : i + 1] - arr[i - 1, 0:i]) / dx
                - sgn * c_mid * p_mid
            )
            worst = max(worst, float(np.max(np.abs(defect))))
        out[name] = worst

    return out


def _condition_defects(arrs, fam, coeffs, grid) -> dict[str, float]:
    """Max deviation of the imposed diagonal and edge conditions."""
    idx = np.arange(grid.n_x)
    d12 = arrs["k12"][idx, idx] - _diag_value(fam, "k12", coeffs, grid.x)
    d21 = arrs["k21"][idx, idx] - _diag_value(fam, "k21", coeffs, grid.x)
    diag = max(float(np.max(np.abs(d12))), float(np.max(np.abs(d21))))

    (p11, e11), (p22, e22) = _edge_coefficients(coeffs, fam.edge_at_zero)
    if fam.edge_at_zero:
        e1 = arrs["k11"][:, 0] - e11 * arrs[p11][:, 0]
        e2 = arrs["k22"][:, 0] - e22 * arrs[p22][:, 0]
    else:
        e1 = arrs["k11"][-1, :] - e11 * arrs[p11][-1, :]
        e2 = arrs["k22"][-1, :] - e22 * arrs[p22][-1, :]
    edge = max(float(np.max(np.abs(e1))), float(np.max(np.abs(e2))))
    return {"diag": diag, "edge": edge}


def solve_kernels(
    family: str,
    coeffs: PlantCoefficients,
    grid: TriangularGrid,
    tol: float = 1e-8,
    max_iter: int = 10_000,
) -> KernelSet:
    """Solve one kernel family by successive approximation.

    Marches every kernel along its characteristic direction with the
    coupling sources frozen at the previous iterate and repeats until
    the transport residuals (one-sided characteristic differences with
    midpoint sources) are below tol in max norm.

    Args:
        family: one of the FAMILIES tags.
        coeffs: plant coefficients; c1/c2 must be finite on the grid.
        grid: triangular grid shared by all kernels of the set.
        tol: residual tolerance (max norm, transport-equation units).
        max_iter: sweep budget before NonConvergence is raised.

    Returns:
        KernelSet with the four kernels on the grid.
    """
    if family not in _FAMILY_TABLE:
        raise ValueError(f"unknown kernel family: {family!r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    fam = _FAMILY_TABLE[family]

    c1s = np.asarray(coeffs.c1(grid.x), dtype=float)
    c2s = np.asarray(coeffs.c2(grid.x), dtype=float)
    if not (np.all(np.isfinite(c1s)) and np.all(np.isfinite(c2s))):
        raise InvalidCoefficients("c1/c2 sample non-finite values on the grid")

    n = grid.n_x
    arrs = {name: np.zeros((n, n)) for name in KERNEL_NAMES}
    _impose_diagonal(arrs, fam, coeffs, grid)

    # The increment of a sweep understates the residual by roughly
    # lambda/dx, so iterate down to a correspondingly smaller increment
    # before paying for a residual evaluation.
    lam_max = max(coeffs.lambda1, coeffs.lambda2)
    inc_target = 0.25 * tol * grid.dx / lam_max

    sweeps = 0
    while sweeps < max_iter:
        delta = _sweep(arrs, fam, coeffs, grid)
        sweeps += 1
        if delta <= inc_target:
            residual = max(_pde_defects(arrs, fam, coeffs, grid).values())
            if residual <= tol:
                return KernelSet(family, grid, **arrs)
            inc_target *= 0.1
    residual = max(_pde_defects(arrs, fam, coeffs, grid).values())
    raise NonConvergence(
        f"{family}: residual {residual:.3e} > tol {tol:.3e} "
        f"after {sweeps} sweeps"
    )


def kernel_residuals(ks: KernelSet, coeffs: PlantCoefficients) -> dict[str, float]:
    """Residual report for a solved kernel set.

    Returns the max transport-equation residual per kernel plus the max
    deviation of the imposed diagonal and edge conditions.
    """
    fam = _FAMILY_TABLE[ks.family]
    arrs = {name: ks.kernel(name) for name in KERNEL_NAMES}
    report = _pde_defects(arrs, fam, coeffs, ks.grid)
    report.update(_condition_defects(arrs, fam, coeffs, ks.grid))
    return report


def trapezoid_matrix(grid: TriangularGrid) -> Array:
    """Row-wise trapezoid weights for integrals from xi = 0 to xi = x.

    W[i, j] is the weight of node j in the quadrature over [0, x_i];
    row 0 is all zero (empty interval).
    """
    n, dx = grid.n_x, grid.dx
    W = np.tril(np.full((n, n), dx))
    W[:, 0] = 0.5 * dx
    idx = np.arange(n)
    W[idx, idx] = 0.5 * dx
    W[0, 0] = 0.0
    return W


def line_weights(n: int, dx: float) -> Array:
    """Composite trapezoid weights on a uniform n-node interval."""
    w = np.full(n, dx)
    w[0] = 0.5 * dx
    w[-1] = 0.5 * dx
    return w


def gain_profiles(
    K: KernelSet,
    P: KernelSet,
    L: KernelSet,
    coeffs: PlantCoefficients,
) -> GainProfiles:
    """Assemble all controller and observer gain profiles.

    The output-injection gains come from the observer kernels on the
    xi = 0 column, their transformed versions from Volterra integrals
    against the controller kernels, and the feedback kernels from the
    x = ell rows of the controller and inverse kernels.
    """
    if not (K.grid == P.grid == L.grid):
        raise GridMismatch("kernel sets live on different grids")
    expected = {CONTROLLER_K: K, OBSERVER_P: P, INVERSE_L: L}
    for tag, ks in expected.items():
        if ks.family != tag:
            raise ValueError(f"expected family {tag}, got {ks.family}")

    grid = K.grid
    lam2, rho = coeffs.lambda2, coeffs.rho

    p1 = -lam2 * P.k12[:, 0]
    p2 = -lam2 * P.k22[:, 0]

    W = trapezoid_matrix(grid)
    pbar1 = p1 - (K.k11 * W) @ p1 - (K.k12 * W) @ p2
    pbar2 = p2 - (K.k21 * W) @ p1 - (K.k22 * W) @ p2

    Nu = K.k21[-1, :] - rho * K.k11[-1, :]
    Nv = K.k22[-1, :] - rho * K.k12[-1, :]
    Nalpha = L.k21[-1, :] - rho * L.k11[-1, :]
    Nbeta = L.k22[-1, :] - rho * L.k12[-1, :]

    return GainProfiles(grid, p1, p2, pbar1, pbar2, Nu, Nv, Nalpha, Nbeta)


def dump_kernels_csv(ks: KernelSet, path: str) -> None:
    """Write the lower-triangle kernel samples to a CSV file."""
    x = ks.grid.x
    lines = ["x,xi,k11,k12,k21,k22"]
    for i in range(ks.grid.n_x):
        for j in range(i + 1):
            lines.append(
                ",".join(
                    (
                        fmt(x[i]),
                        fmt(x[j]),
                        fmt(ks.k11[i, j]),
                        fmt(ks.k12[i, j]),
                        fmt(ks.k21[i, j]),
                        fmt(ks.k22[i, j]),
                    )
                )
            )
    atomic_write_text(path, "\n".join(lines) + "\n")


def dump_gains_csv(gains: GainProfiles, path: str) -> None:
    """Write the gain profiles to a CSV file."""
    x = gains.grid.x
    lines = ["x,p1,p2,pbar1,pbar2,Nu,Nv,Nalpha,Nbeta"]
    for i in range(gains.grid.n_x):
        lines.append(
            ",".join(
                (
                    fmt(x[i]),
                    fmt(gains.p1[i]),
                    fmt(gains.p2[i]),
                    fmt(gains.pbar1[i]),
                    fmt(gains.pbar2[i]),
                    fmt(gains.Nu[i]),
                    fmt(gains.Nv[i]),
                    fmt(gains.Nalpha[i]),
                    fmt(gains.Nbeta[i]),
                )
            )
        )
    atomic_write_text(path, "\n".join(lines) + "\n")
