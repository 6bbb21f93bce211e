"""Scenario orchestration: configuration handling, closed-loop runs under
the five input-update modes, and deterministic emission of result files.

A scenario solves the four kernel families once, simulates plant and
observer-error dynamics to the horizon, and writes per-run CSV/JSON
files into a mode-named subdirectory of the configured output root.
"""

from __future__ import annotations

import json
import logging
import math
import os
from dataclasses import asdict, dataclass, field

import numpy as np
import yaml

from .errors import (
    AssumptionViolated,
    ConfigMismatch,
    DtTooCoarse,
    MuBarNonpositive,
    MuOutOfRange,
    OutputDirUnwritable,
    VarrhoNotPositive,
)
from .ioutil import atomic_write_text, fmt
from .kernels import (
    CONTROLLER_K,
    INVERSE_L,
    INVERSE_R,
    OBSERVER_P,
    GainProfiles,
    KernelSet,
    PlantCoefficients,
    TriangularGrid,
    gain_profiles,
    line_weights,
    solve_kernels,
)
from .petc import PetcConfig, gamma_p, select_h
from .saint_venant import (
    CanalConfig,
    LinearizedModel,
    from_characteristic,
    gate_opening,
    linearize,
    to_characteristic,
)
from .sim import (
    HyperbolicState,
    SimConfig,
    VolterraMap,
    check_cfl,
    control_law,
    l2_norm,
    sample_coefficients,
    step_error,
    step_plant,
)
from .stc import StcConstants, calF, gap_bound, next_event_gap, stc_constants, vbar2
from .triggers import (
    DEFAULT_C_MARGIN,
    DesignConstants,
    EtcParams,
    TriggerState,
    cetc_should_trigger,
    design_constants,
    gamma_c,
    mu_upper_bound,
    update_m,
)

log = logging.getLogger(__name__)

MODES = ("open_loop", "ctc", "cetc", "petc", "stc")
TRIGGERED_MODES = ("cetc", "petc", "stc")


@dataclass(frozen=True)
class RawCoefficients:
    """Direct canonical plant coefficients with constant couplings."""

    lambda1: float
    lambda2: float
    c1: float
    c2: float
    q: float
    rho: float
    ell: float

    def to_plant(self) -> PlantCoefficients:
        c1_val, c2_val = float(self.c1), float(self.c2)

        def c1_fun(x):
            return np.full_like(np.asarray(x, dtype=float), c1_val)

        def c2_fun(x):
            return np.full_like(np.asarray(x, dtype=float), c2_val)

        return PlantCoefficients(
            lambda1=self.lambda1,
            lambda2=self.lambda2,
            c1=c1_fun,
            c2=c2_fun,
            q=self.q,
            rho=self.rho,
            ell=self.ell,
        )


@dataclass(frozen=True)
class StcParams:
    """User inputs of the self-triggered design."""

    delta_bar: float
    phi_u: float
    phi_v: float

    def __post_init__(self) -> None:
        if self.delta_bar <= 0:
            raise ValueError("delta_bar must be positive")
        if self.phi_u < 0 or self.phi_v < 0:
            raise ValueError("phi_u and phi_v must be nonnegative")


@dataclass(frozen=True)
class InitialConditions:
    """Sine-profile initial data.

    Canal scenarios read the depth/velocity deviation pairs (h_amp,
    h_mode) and (v_amp, v_mode); raw-coefficient scenarios read the
    characteristic pairs (u_amp, u_mode) and (v_amp, v_mode). All
    profiles vanish at both ends, so the boundary conditions hold at
    t = 0 with a zero held input.
    """

    h_amp: float = 0.0
    h_mode: int = 1
    v_amp: float = 0.0
    v_mode: int = 1
    u_amp: float = 0.0
    u_mode: int = 1


@dataclass(frozen=True)
class RunConfig:
    """Complete description of one scenario."""

    mode: str
    canal: CanalConfig | None
    raw: RawCoefficients | None
    initial: InitialConditions
    etc: EtcParams
    c_margin: float
    petc_h: float | None
    petc_h_frac: float | None
    stc: StcParams
    sim: SimConfig
    out_dir: str
    stride: int
    probes: tuple[float, ...]
    kernel_tol: float
    kernel_max_iter: int

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if (self.canal is None) == (self.raw is None):
            raise ValueError("exactly one plant source (canal or raw) required")
        if self.stride < 1:
            raise ValueError("stride must be at least 1")
        if self.mode == "petc" and self.petc_h is None and self.petc_h_frac is None:
            raise ValueError("petc mode needs petc_h or petc_h_frac")
        object.__setattr__(self, "probes", tuple(float(p) for p in self.probes))


def default_config() -> dict:
    """Nested defaults reproducing the reference shallow-water study."""
    return {
        "mode": "cetc",
        "plant": {
            "kind": "canal",
            "canal": {
                "g": 9.81,
                "ell": 10.0,
                "Cf": 0.2,
                "H_eq": 2.0,
                "V_eq": 1.0,
                "H_ell": 0.1,
                "k_G": 0.6,
                "S_b": None,
            },
            "raw": {
                "lambda1": 1.0,
                "lambda2": 1.0,
                "c1": 0.0,
                "c2": 0.0,
                "q": 0.5,
                "rho": -0.6,
                "ell": 1.0,
            },
        },
        "initial": {
            "h_amp": -1.0,
            "h_mode": 1,
            "v_amp": 0.5,
            "v_mode": 3,
            "u_amp": 1.0,
            "u_mode": 1,
        },
        "etc": {
            "mu": 0.016,
            "delta": 0.014,
            "eta": 0.001,
            "theta": 1.0,
            "sigma": 0.99,
            "m0": -1.0,
            "c_margin": DEFAULT_C_MARGIN,
        },
        "petc": {"h": 0.13, "h_frac": None},
        "stc": {"delta_bar": 1.0e-4, "phi_u": 8.6872, "phi_v": 3.1664},
        "sim": {"dt": 1.0e-4, "n_x": 201, "t_end": 40.0},
        "output": {"dir": "results", "stride": 10, "probes": [0.0, 5.0, 10.0]},
        "kernels": {"tol": 1.0e-8, "max_iter": 10000},
    }


def default_config_yaml() -> str:
    return yaml.safe_dump(default_config(), sort_keys=False)


def _merge(base: dict, override: dict, path: str = "") -> dict:
    """Overlay override onto base, rejecting keys absent from base."""
    out = dict(base)
    for key, val in override.items():
        if key not in base:
            raise ValueError(f"unknown config key {path + str(key)!r}")
        if isinstance(base[key], dict) and isinstance(val, dict):
            out[key] = _merge(base[key], val, path + str(key) + ".")
        else:
            out[key] = val
    return out


def config_from_dict(
    user: dict | None,
    mode: str | None = None,
    out_dir: str | None = None,
    stride: int | None = None,
) -> RunConfig:
    """Build a RunConfig from a (partial) nested dict over the defaults."""
    d = _merge(default_config(), user or {})
    if mode is not None:
        d["mode"] = mode
    if out_dir is not None:
        d["output"]["dir"] = out_dir
    if stride is not None:
        d["output"]["stride"] = stride

    kind = d["plant"]["kind"]
    if kind == "canal":
        canal, raw = CanalConfig(**d["plant"]["canal"]), None
    elif kind == "raw":
        canal, raw = None, RawCoefficients(**d["plant"]["raw"])
    else:
        raise ValueError(f"plant kind must be 'canal' or 'raw', got {kind!r}")

    etc_d = dict(d["etc"])
    c_margin = float(etc_d.pop("c_margin"))
    return RunConfig(
        mode=d["mode"],
        canal=canal,
        raw=raw,
        initial=InitialConditions(**d["initial"]),
        etc=EtcParams(**etc_d),
        c_margin=c_margin,
        petc_h=d["petc"]["h"],
        petc_h_frac=d["petc"]["h_frac"],
        stc=StcParams(**d["stc"]),
        sim=SimConfig(**d["sim"]),
        out_dir=d["output"]["dir"],
        stride=int(d["output"]["stride"]),
        probes=tuple(d["output"]["probes"]),
        kernel_tol=float(d["kernels"]["tol"]),
        kernel_max_iter=int(d["kernels"]["max_iter"]),
    )


def load_config(
    path: str,
    mode: str | None = None,
    out_dir: str | None = None,
    stride: int | None = None,
) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        user = yaml.safe_load(fh)
    if user is not None and not isinstance(user, dict):
        raise ValueError(f"config file {path!r} must hold a mapping")
    return config_from_dict(user, mode=mode, out_dir=out_dir, stride=stride)


@dataclass
class KernelBundle:
    """All solved kernel families and the derived gain profiles."""

    grid: TriangularGrid
    K: KernelSet
    P: KernelSet
    L: KernelSet
    R: KernelSet
    gains: GainProfiles


def build_plant(config: RunConfig) -> tuple[PlantCoefficients, LinearizedModel | None]:
    if config.canal is not None:
        model = linearize(config.canal)
        return model.coeffs, model
    return config.raw.to_plant(), None


def solve_design(
    coeffs: PlantCoefficients, n_x: int, tol: float, max_iter: int
) -> KernelBundle:
    grid = TriangularGrid(n_x=n_x, ell=coeffs.ell)
    K = solve_kernels(CONTROLLER_K, coeffs, grid, tol=tol, max_iter=max_iter)
    P = solve_kernels(OBSERVER_P, coeffs, grid, tol=tol, max_iter=max_iter)
    L = solve_kernels(INVERSE_L, coeffs, grid, tol=tol, max_iter=max_iter)
    R = solve_kernels(INVERSE_R, coeffs, grid, tol=tol, max_iter=max_iter)
    gains = gain_profiles(K, P, L, coeffs)
    return KernelBundle(grid=grid, K=K, P=P, L=L, R=R, gains=gains)


def initial_state(
    config: RunConfig, model: LinearizedModel | None, n_x: int
) -> HyperbolicState:
    """Initial plant state in canonical coordinates."""
    ini = config.initial
    if config.canal is not None:
        ell = config.canal.ell
        x = np.linspace(0.0, ell, n_x)
        H_dev = ini.h_amp * np.sin(ini.h_mode * math.pi * x / ell)
        V_dev = ini.v_amp * np.sin(ini.v_mode * math.pi * x / ell)
        return to_characteristic(H_dev, V_dev, model, t=0.0)
    ell = config.raw.ell
    x = np.linspace(0.0, ell, n_x)
    u = ini.u_amp * np.sin(ini.u_mode * math.pi * x / ell)
    v = ini.v_amp * np.sin(ini.v_mode * math.pi * x / ell)
    return HyperbolicState(u=u, v=v, t=0.0, ell=ell)


@dataclass
class RunSummary:
    """Headline numbers and file manifest of one finished scenario."""

    mode: str
    n_events: int
    initial_norm_plant: float
    final_norm_plant: float
    final_norm_observer: float
    final_norm_error: float
    min_dwell: float | None
    mean_dwell: float | None
    time_to_1pct: float | None
    gamma_c_max: float | None
    m_max: float | None
    tau: float | None
    petc_h: float | None
    files: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return fmt(value)


def _write_csv(path: str, header: list[str], rows: list[tuple]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    atomic_write_text(path, "\n".join(lines) + "\n")


def _write_json(path: str, payload: dict) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _prepare_out_dir(path: str) -> None:
    try:
        os.makedirs(path, exist_ok=True)
        probe = os.path.join(path, ".write-probe")
        with open(probe, "w", encoding="utf-8"):
            pass
        os.remove(probe)
    except OSError as exc:
        raise OutputDirUnwritable(f"cannot write to {path!r}: {exc}") from exc


def _resolve_petc(
    config: RunConfig, consts: DesignConstants, dt: float
) -> tuple[float, int]:
    """Sampling period and its step count on the simulation clock."""
    if config.petc_h_frac is not None:
        pc = select_h(consts, config.petc_h_frac, dt)
    else:
        pc = PetcConfig(h=float(config.petc_h))
    if pc.h > consts.tau * (1.0 + 1e-12):
        raise ValueError(
            f"sampling period h = {pc.h:.6g} exceeds the minimum "
            f"dwell-time tau = {consts.tau:.6g}"
        )
    steps = int(round(pc.h / dt))
    if steps < 1:
        raise DtTooCoarse(f"h = {pc.h:.3e} below the time step {dt:.3e}")
    h_eff = steps * dt
    if abs(h_eff - pc.h) > 1e-9:
        log.warning("sampling period snapped from %.15g to %.15g", pc.h, h_eff)
    return h_eff, steps


def constants_report(config: RunConfig) -> dict:
    """Design constants plus an assumption-check section."""
    coeffs, model = build_plant(config)
    bundle = solve_design(
        coeffs, config.sim.n_x, config.kernel_tol, config.kernel_max_iter
    )
    rq = abs(coeffs.rho * coeffs.q)
    assumptions: dict = {
        "abs_rho_q": rq,
        "reflection_bound_ok": bool(rq < 0.5),
        "lambda1": coeffs.lambda1,
        "lambda2": coeffs.lambda2,
        "q": coeffs.q,
        "rho": coeffs.rho,
    }
    if rq >= 0.5:
        assumptions["warning"] = (
            "measured |rho q| is not below 1/2; the design constants are "
            "undefined for this configuration"
        )
        log.warning("|rho q| = %.6g >= 1/2 on this configuration", rq)
        assumptions["mu_max"] = None
    else:
        assumptions["mu_max"] = mu_upper_bound(coeffs)

    report: dict = {"assumptions": assumptions}
    if model is not None:
        report["canal"] = {
            "gamma1": model.gamma1,
            "gamma2": model.gamma2,
            "q_tilde": model.q_tilde,
            "rho_tilde": model.rho_tilde,
            "rho_u": model.rho_u,
            "U_eq": model.U_eq,
            "S_b": model.cfg.S_b,
        }
    try:
        consts = design_constants(bundle.gains, coeffs, config.etc, config.c_margin)
        report["design"] = asdict(consts)
    except (AssumptionViolated, MuOutOfRange) as exc:
        report["design"] = {"error": str(exc)}
    try:
        sc = stc_constants(
            bundle.gains,
            bundle.R,
            coeffs,
            config.stc.delta_bar,
            config.stc.phi_u,
            config.stc.phi_v,
        )
        report["stc"] = asdict(sc)
    except (MuBarNonpositive, VarrhoNotPositive) as exc:
        report["stc"] = {"error": str(exc)}
    return report


def run_scenario(config: RunConfig) -> RunSummary:
    """Execute one scenario and write all of its result files.

    Files land in <out_dir>/<mode>/: trajectory.csv always; events.csv
    always (header-only for open_loop/ctc); monitor.csv and
    constants.json for the triggered modes; physical.csv for canal
    scenarios; summary.json last.
    """
    run_dir = os.path.join(config.out_dir, config.mode)
    _prepare_out_dir(run_dir)

    coeffs, model = build_plant(config)
    sim = config.sim
    dt, n_x, stride = sim.dt, sim.n_x, config.stride
    mode = config.mode
    triggered = mode in TRIGGERED_MODES
    dx = coeffs.ell / (n_x - 1)
    check_cfl(dt, dx, coeffs)

    bundle = solve_design(coeffs, n_x, config.kernel_tol, config.kernel_max_iter)
    gains = bundle.gains

    consts = sc = None
    petc_h = petc_steps = None
    if triggered:
        consts = design_constants(gains, coeffs, config.etc, config.c_margin)
    if mode == "petc":
        petc_h, petc_steps = _resolve_petc(config, consts, dt)
    if mode == "stc":
        sc = stc_constants(
            gains, bundle.R, coeffs,
            config.stc.delta_bar, config.stc.phi_u, config.stc.phi_v,
        )

    plant = initial_state(config, model, n_x)
    err = HyperbolicState(plant.u.copy(), plant.v.copy(), 0.0, coeffs.ell)
    c_samples = sample_coefficients(coeffs, n_x)
    w = line_weights(n_x, dx)
    vol = VolterraMap(bundle.K) if triggered else None
    transport_time = coeffs.ell / coeffs.lambda1 + coeffs.ell / coeffs.lambda2

    def observer(t: float) -> HyperbolicState:
        return HyperbolicState(plant.u - err.u, plant.v - err.v, t, coeffs.ell)

    obs = observer(0.0)
    U_cont = control_law(obs, gains)
    ts = TriggerState(
        U_held=0.0 if mode == "open_loop" else U_cont,
        d=0.0,
        m=config.etc.m0,
        last_event_time=0.0,
    )

    norm0 = l2_norm(plant)
    threshold = 0.01 * norm0
    time_to_1pct: float | None = None
    gamma_max = m_max = -math.inf

    events: list[tuple] = []
    next_stc_step = None
    norm_target_sq = alpha_ell_sq = beta0_sq = 0.0
    if triggered:
        tu, tv = vol.apply(obs.u, obs.v)
        norm_target_sq = float(w @ (tu**2 + tv**2))
        alpha_ell_sq = float(tu[-1] ** 2)
        beta0_sq = float(err.v[0] ** 2)
        if mode == "stc":
            target = HyperbolicState(tu, tv, 0.0, coeffs.ell)
            F0 = calF(0.0, vbar2(target, sc, coeffs), sc, coeffs, transport_time)
            G0 = next_event_gap(ts.m, F0, consts, config.etc, sc)
            Gbar0 = gap_bound(ts.m, F0, consts, config.etc, sc)
            next_stc_step = max(1, math.ceil(G0 / dt - 1e-9))
            events.append((0, 0.0, 0.0, ts.U_held, "stc", F0, G0, Gbar0))
        elif mode == "petc":
            events.append((0, 0.0, 0.0, ts.U_held, "petc"))
        else:
            events.append((0, 0.0, 0.0, ts.U_held))
        gamma_max = gamma_c(ts, consts, config.etc)
        m_max = ts.m

    traj_rows = [(0.0, norm0, l2_norm(obs), l2_norm(err), ts.U_held, U_cont)]
    monitor_rows = []
    if triggered:
        monitor_rows.append((0.0, gamma_c(ts, consts, config.etc), ts.m, ts.d))
    physical_rows = []
    probe_idx: list[int] = []
    if model is not None:
        for p in config.probes:
            if not 0.0 <= p <= coeffs.ell:
                raise ValueError(f"probe position {p} outside [0, {coeffs.ell}]")
            probe_idx.append(int(round(p / dx)))

        def physical_row(t: float) -> tuple:
            H, V = from_characteristic(plant, model)
            U_ell = gate_opening(ts.U_held, float(H[-1]), model, config.canal)
            vals = [H[i] for i in probe_idx] + [V[i] for i in probe_idx]
            return (t, *vals, U_ell)

        physical_rows.append(physical_row(0.0))

    n_steps = int(round(sim.t_end / dt))
    for n in range(n_steps):
        t_next = (n + 1) * dt
        if triggered:
            update_m(
                ts, dt, consts, config.etc,
                norm_target_sq, alpha_ell_sq, beta0_sq,
            )
        plant = step_plant(plant, ts.U_held, coeffs, dt, c_samples=c_samples)
        err = step_error(err, gains, coeffs, dt, c_samples=c_samples)
        obs = observer(t_next)
        U_cont = control_law(obs, gains)
        ts.d = ts.U_held - U_cont

        if triggered:
            tu, tv = vol.apply(obs.u, obs.v)
            norm_target_sq = float(w @ (tu**2 + tv**2))
            alpha_ell_sq = float(tu[-1] ** 2)
            beta0_sq = float(err.v[0] ** 2)

            if mode == "cetc":
                fire = cetc_should_trigger(ts, consts, config.etc)
            elif mode == "petc":
                fire = (n + 1) % petc_steps == 0 and gamma_p(
                    ts.d, ts.m, consts, config.etc, petc_h
                ) > 0.0
            else:
                fire = (n + 1) == next_stc_step
            if fire:
                ts.U_held = U_cont
                ts.d = 0.0
                dwell = t_next - ts.last_event_time
                ts.last_event_time = t_next
                k = len(events)
                if mode == "stc":
                    target = HyperbolicState(tu, tv, t_next, coeffs.ell)
                    Fk = calF(
                        t_next, vbar2(target, sc, coeffs), sc, coeffs,
                        transport_time,
                    )
                    Gk = next_event_gap(ts.m, Fk, consts, config.etc, sc)
                    Gbark = gap_bound(ts.m, Fk, consts, config.etc, sc)
                    next_stc_step = n + 1 + max(1, math.ceil(Gk / dt - 1e-9))
                    events.append(
                        (k, t_next, dwell, ts.U_held, "stc", Fk, Gk, Gbark)
                    )
                elif mode == "petc":
                    events.append((k, t_next, dwell, ts.U_held, "petc"))
                else:
                    events.append((k, t_next, dwell, ts.U_held))
            g_now = gamma_c(ts, consts, config.etc)
            gamma_max = max(gamma_max, g_now)
            m_max = max(m_max, ts.m)
        elif mode == "ctc":
            ts.U_held = U_cont
            ts.d = 0.0

        norm_plant = l2_norm(plant)
        if time_to_1pct is None and norm_plant <= threshold:
            time_to_1pct = t_next
        if (n + 1) % stride == 0:
            traj_rows.append(
                (t_next, norm_plant, l2_norm(obs), l2_norm(err), ts.U_held, U_cont)
            )
            if triggered:
                monitor_rows.append((t_next, g_now, ts.m, ts.d))
            if model is not None:
                physical_rows.append(physical_row(t_next))

    dwells = [row[2] for row in events[1:]]
    files: dict[str, str] = {}

    def rel(name: str) -> str:
        return os.path.join(config.mode, name)

    traj_header = [
        "t", "norm_plant", "norm_observer", "norm_error", "U_held", "U_continuous",
    ]
    _write_csv(os.path.join(run_dir, "trajectory.csv"), traj_header, traj_rows)
    files["trajectory"] = rel("trajectory.csv")

    event_header = ["k", "t_k", "dwell", "U_held"]
    if mode == "petc":
        event_header += ["mode"]
    elif mode == "stc":
        event_header += ["mode", "F_k", "G_k", "Gbar_k"]
    _write_csv(os.path.join(run_dir, "events.csv"), event_header, events)
    files["events"] = rel("events.csv")

    if triggered:
        _write_csv(
            os.path.join(run_dir, "monitor.csv"),
            ["t", "gamma_c", "m", "d"],
            monitor_rows,
        )
        files["monitor"] = rel("monitor.csv")
        payload = {"design": asdict(consts), "etc_params": asdict(config.etc)}
        if sc is not None:
            payload["stc"] = asdict(sc)
        _write_json(os.path.join(run_dir, "constants.json"), payload)
        files["constants"] = rel("constants.json")

    if model is not None:
        phys_header = (
            ["t"]
            + [f"H_{fmt(p)}" for p in config.probes]
            + [f"V_{fmt(p)}" for p in config.probes]
            + ["U_ell"]
        )
        _write_csv(os.path.join(run_dir, "physical.csv"), phys_header, physical_rows)
        files["physical"] = rel("physical.csv")

    files["summary"] = rel("summary.json")
    summary = RunSummary(
        mode=mode,
        n_events=len(events),
        initial_norm_plant=norm0,
        final_norm_plant=l2_norm(plant),
        final_norm_observer=l2_norm(observer(n_steps * dt)),
        final_norm_error=l2_norm(err),
        min_dwell=min(dwells) if dwells else None,
        mean_dwell=sum(dwells) / len(dwells) if dwells else None,
        time_to_1pct=time_to_1pct,
        gamma_c_max=gamma_max if triggered else None,
        m_max=m_max if triggered else None,
        tau=consts.tau if consts is not None else None,
        petc_h=petc_h,
        files=files,
    )
    _write_json(os.path.join(run_dir, "summary.json"), summary.to_dict())
    return summary


def _shared_key(config: RunConfig) -> tuple:
    return (config.canal, config.raw, config.initial, config.sim)


def compare_modes(configs: list[RunConfig]) -> list[dict]:
    """Run several modes on shared plant/initial data and tabulate them.

    Writes comparison.csv into the shared output root and returns the
    table rows.
    """
    if not configs:
        raise ValueError("compare_modes needs at least one config")
    key = _shared_key(configs[0])
    out_root = configs[0].out_dir
    for cfg in configs[1:]:
        if _shared_key(cfg) != key:
            raise ConfigMismatch(
                "configs must share plant, initial data, and horizon"
            )
        if cfg.out_dir != out_root:
            raise ConfigMismatch("configs must share the output root")

    rows = []
    for cfg in configs:
        summary = run_scenario(cfg)
        rows.append(
            {
                "mode": summary.mode,
                "events": summary.n_events,
                "mean_dwell": summary.mean_dwell,
                "time_to_1pct": summary.time_to_1pct,
            }
        )
    header = ["mode", "events", "mean_dwell", "time_to_1pct"]
    csv_rows = [
        (
            row["mode"],
            row["events"],
            math.nan if row["mean_dwell"] is None else row["mean_dwell"],
            math.nan if row["time_to_1pct"] is None else row["time_to_1pct"],
        )
        for row in rows
    ]
    _prepare_out_dir(out_root)
    _write_csv(os.path.join(out_root, "comparison.csv"), header, csv_rows)
    return rows
