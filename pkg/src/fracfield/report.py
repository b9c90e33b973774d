"""Post-run reporting: JSON summary of derived quantities, optional figures.

``build_report`` consumes the artifacts written by a simulation (summary
JSON + diagnostics CSV + snapshots) and produces ``report.json`` with the
competition threshold, steady states, decay fit and termination verdict.
With figures enabled it also renders the sup-norm trace (with its decay
envelope when one applies) and the last stored snapshot to PNG files next
to the delimited output.
"""

from __future__ import annotations

import glob
import json
import math
import os

import numpy as np

from .diagnostics import C_GN_EMP, k_star, steady_states
from .mlf import ml_decay_envelope
from .outputs import read_diagnostics_csv, read_snapshot_csv
from .solver import ModelParams

__all__ = ["build_report", "render_figures"]


def _decay_fit_from_series(params: ModelParams, t: np.ndarray, sup: np.ndarray) -> dict:
    s0 = float(sup[0])
    if s0 == 0.0:
        return {"applicable": True, "sigma": params.gamma, "violation": 0.0}
    if np.any(np.diff(sup) > 1e-12 * s0):
        return {"applicable": False, "sigma": None, "violation": None,
                "reason": "sup-norm not monotone"}
    sigma = params.gamma - params.mu * float(sup.max())
    if sigma <= 0.0:
        return {"applicable": False, "sigma": sigma, "violation": None,
                "reason": "empirical decay rate nonpositive"}
    env = s0 * ml_decay_envelope(params.alpha, sigma, t)
    return {"applicable": True, "sigma": sigma, "violation": float(np.max(sup / env) - 1.0)}


def build_report(run_dir: str, c_gn: float = C_GN_EMP) -> dict:
    with open(os.path.join(run_dir, "summary.json")) as fh:
        summary = json.load(fh)
    diags = read_diagnostics_csv(os.path.join(run_dir, "diagnostics.csv"))
    pr = summary["params"]
    params = ModelParams(
        alpha=pr["alpha"], mu=pr["mu"], k=pr["k"], gamma=pr["gamma"],
        variant=pr["variant"], m=pr["m"] if pr["m"] is not None else 2.5,
    )
    dim = summary["domain"]["dim"]
    eta = summary.get("kernel_eta")
    if dim == 1:
        kstar = 0.0
    elif dim == 2 and eta is not None:
        kstar = k_star(2, params.mu, eta, C_GN=c_gn)
    else:
        kstar = None
    states = steady_states(params)
    fit = _decay_fit_from_series(params, diags["t"], diags["sup_norm"])
    lyap = diags["lyapunov"]
    lyap_max = None if lyap is None else float(np.nanmax(lyap))
    report = {
        "params": summary["params"],
        "k_star": kstar,
        "k_over_k_star": (params.k / kstar) if kstar else None,
        "steady_states": {
            "a": None if not states.valid else states.a,
            "A": None if not states.valid else states.A,
            "valid": states.valid,
        },
        "sup_norm_max": summary["sup_norm_max"],
        "decay_violation": fit.get("violation"),
        "decay_sigma": fit.get("sigma"),
        "decay_applicable": fit.get("applicable"),
        "lyapunov_max": lyap_max,
        "lyapunov_margin": summary.get("lyapunov_margin"),
        "termination": summary["termination"],
        "seam_fraction_max": summary.get("seam_fraction_max"),
        "clamp_events": summary.get("clamp_events"),
    }
    return report


def render_figures(run_dir: str, report: dict) -> list[str]:
    """Render the sup-norm trace and the last snapshot to PNG files."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    written = []
    diags = read_diagnostics_csv(os.path.join(run_dir, "diagnostics.csv"))
    t, sup = diags["t"], diags["sup_norm"]

    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.plot(t, sup, lw=1.5, label="sup norm")
    if report.get("decay_applicable") and report.get("decay_sigma"):
        pr = report["params"]
        env = sup[0] * ml_decay_envelope(pr["alpha"], report["decay_sigma"], t)
        ax.plot(t, env, "k--", lw=1.0, label="decay envelope")
    a_state = report["steady_states"]["a"]
    if a_state is not None and math.isfinite(a_state):
        ax.axhline(a_state, color="gray", ls=":", lw=0.8, label="threshold a")
    ax.set_xlabel("t")
    ax.set_ylabel("sup |u|")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    path = os.path.join(run_dir, "fig_sup_norm.png")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    snaps = sorted(glob.glob(os.path.join(run_dir, "snapshot_*.csv")))
    if snaps:
        dom, tsnap, vals = read_snapshot_csv(snaps[-1])
        fig, ax = plt.subplots(figsize=(6.0, 3.6))
        if dom.dim == 1:
            ax.plot(dom.axis_coords(), vals, lw=1.2)
            ax.set_xlabel("x")
            ax.set_ylabel("u")
        else:
            sl = vals if dom.dim == 2 else vals[:, :, dom.points // 2]
            im = ax.imshow(
                sl.T,
                origin="lower",
                extent=(-dom.half_width, dom.half_width, -dom.half_width, dom.half_width),
                cmap="viridis",
            )
            fig.colorbar(im, ax=ax, shrink=0.85)
            ax.set_xlabel("x")
            ax.set_ylabel("y")
        ax.set_title(f"state at t={tsnap:g}")
        fig.tight_layout()
        path = os.path.join(run_dir, "fig_state.png")
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written
