"""Hand-built CSV fixtures matching the simulator's documented schemas."""

import math
import os

TRAJ_HEADER = "t,norm_plant,norm_observer,norm_error,U_held,U_continuous"
EVENT_HEADER = "k,t_k,dwell,U_held"

MODE_RATE = {"open_loop": 0.0, "ctc": 2.0, "cetc": 1.8, "petc": 1.6, "stc": 1.5}


def write_trajectory(path, rate=1.5, n=21, t_end=2.0):
    lines = [TRAJ_HEADER]
    for i in range(n):
        t = t_end * i / (n - 1)
        norm = 3.0 * math.exp(-rate * t)
        err = 0.5 * math.exp(-4.0 * t)
        u_cont = -0.2 * math.exp(-rate * t)
        u_held = round(u_cont, 2)
        lines.append(f"{t:.15g},{norm:.15g},{norm + err:.15g},{err:.15g},{u_held:.15g},{u_cont:.15g}")
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def write_events(path, rows, header=EVENT_HEADER):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as fh:
        fh.write("\n".join([header, *rows]) + "\n")
    return path


def event_rows(mode):
    if mode in ("open_loop", "ctc"):
        return []
    if mode == "petc":
        return [f"{k},{0.13 * k:.15g},{0.13 if k else 0.0:.15g},{-0.1 * k:.15g},petc" for k in range(4)]
    if mode == "stc":
        rows = [f"{k},{0.3 * k:.15g},{0.3 if k else 0.0:.15g},{-0.05 * k:.15g},stc,{1.0 / (k + 1):.15g},{0.3:.15g},"
                for k in range(4)]
        return [r + ("inf" if k == 0 else f"{0.4:.15g}") for k, r in enumerate(rows)]
    return [f"{k},{0.4 * k:.15g},{0.4 if k else 0.0:.15g},{0.1 * k:.15g}" for k in range(5)]


def event_header(mode):
    if mode == "petc":
        return EVENT_HEADER + ",mode"
    if mode == "stc":
        return EVENT_HEADER + ",mode,F_k,G_k,Gbar_k"
    return EVENT_HEADER


def make_results(root, modes=("open_loop", "ctc", "cetc", "petc", "stc")):
    for mode in modes:
        write_trajectory(os.path.join(root, mode, "trajectory.csv"), rate=MODE_RATE[mode])
        write_events(os.path.join(root, mode, "events.csv"), event_rows(mode), header=event_header(mode))
    return root
