"""Run artifacts on disk: diagnostics CSV, snapshot CSVs, summary JSON.

Formats:
* diagnostics CSV: header ``t,sup_norm,mass,local_l2,lyapunov`` and one row
  per recorded step; the lyapunov column is empty when disabled. Floats are
  written with repr so identical runs are byte-identical.
* snapshot CSV: ``# field t=<t> M=<M> N=<N> L=<L>``, then row-major values.
* summary JSON: parameters, termination, extrema and certificates.
"""

from __future__ import annotations

import json
import math
import os

import numpy as np

from .kernels import Domain
from .solver import RunRecord

__all__ = [
    "write_diagnostics_csv",
    "read_diagnostics_csv",
    "write_snapshot_csv",
    "read_snapshot_csv",
    "summary_dict",
    "write_run_artifacts",
]


def write_diagnostics_csv(path, record: RunRecord) -> None:
    with open(path, "w") as fh:
        fh.write("t,sup_norm,mass,local_l2,lyapunov\n")
        lyap = record.lyapunov
        for i, t in enumerate(record.t):
            ly = "" if lyap is None else repr(float(lyap[i]))
            fh.write(
                f"{float(t)!r},{float(record.sup_norm[i])!r},{float(record.mass[i])!r},"
                f"{float(record.local_l2[i])!r},{ly}\n"
            )


def read_diagnostics_csv(path) -> dict:
    cols: dict[str, list] = {"t": [], "sup_norm": [], "mass": [], "local_l2": [], "lyapunov": []}
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if header != list(cols):
            raise ValueError(f"{path}: unexpected diagnostics header {header}")
        for line in fh:
            parts = line.rstrip("\n").split(",")
            for name, val in zip(cols, parts):
                cols[name].append(float(val) if val != "" else math.nan)
    out = {k: np.array(v) for k, v in cols.items()}
    if np.all(np.isnan(out["lyapunov"])) and len(out["lyapunov"]):
        out["lyapunov"] = None
    return out


def write_snapshot_csv(path, dom: Domain, t: float, values: np.ndarray) -> None:
    with open(path, "w") as fh:
        fh.write(f"# field t={float(t)!r} M={dom.points} N={dom.dim} L={float(dom.half_width)!r}\n")
        for v in values.ravel():
            fh.write(f"{float(v)!r}\n")


def read_snapshot_csv(path) -> tuple[Domain, float, np.ndarray]:
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("# field"):
            raise ValueError(f"{path}: missing '# field' header")
        meta = dict(tok.split("=") for tok in header[len("# field") :].split())
        dom = Domain(dim=int(meta["N"]), half_width=float(meta["L"]), points=int(meta["M"]))
        vals = np.array([float(line) for line in fh if line.strip()])
    return dom, float(meta["t"]), vals.reshape(dom.shape)


def summary_dict(record: RunRecord, extra: dict | None = None) -> dict:
    p = record.params
    out = {
        "params": {
            "alpha": p.alpha,
            "mu": p.mu,
            "k": p.k,
            "gamma": p.gamma,
            "variant": p.variant,
            "m": p.m if p.variant == "nonlinear_diffusion" else None,
        },
        "domain": {
            "dim": record.domain.dim,
            "half_width": record.domain.half_width,
            "points": record.domain.points,
        },
        "integrator": record.integrator,
        "dt": record.dt,
        "t_final": float(record.t[-1]),
        "termination": {
            "kind": record.termination.kind,
            "t": record.termination.t,
            "detail": record.termination.detail,
        },
        "sup_norm_max": float(np.max(record.sup_norm)),
        "sup_norm_final": float(record.sup_norm[-1]),
        "mass_final": float(record.mass[-1]),
        "clamp_events": record.clamp_events,
        "seam_fraction_max": record.seam_fraction_max,
        "notes": record.notes,
        "probe_delta": record.probe_delta,
        "kernel_eta": record.kernel.eta if record.kernel is not None else None,
        "kernel_delta0": record.kernel.delta0 if record.kernel is not None else None,
    }
    if extra:
        out.update(extra)
    return out


def write_run_artifacts(outdir, record: RunRecord, extra: dict | None = None) -> dict:
    """Write diagnostics CSV, snapshot CSVs and summary JSON; returns paths."""
    os.makedirs(outdir, exist_ok=True)
    paths = {"diagnostics": os.path.join(outdir, "diagnostics.csv")}
    write_diagnostics_csv(paths["diagnostics"], record)
    snaps = []
    for i, (t, vals) in enumerate(record.snapshots):
        sp = os.path.join(outdir, f"snapshot_{i:03d}.csv")
        write_snapshot_csv(sp, record.domain, t, vals)
        snaps.append(sp)
    paths["snapshots"] = snaps
    paths["summary"] = os.path.join(outdir, "summary.json")
    with open(paths["summary"], "w") as fh:
        json.dump(summary_dict(record, extra), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return paths
