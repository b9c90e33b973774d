"""Experiment configuration: flat ``key = value`` text with dotted sections.

Example::

    schema_version = 1
    model.alpha = 0.5
    model.mu = 1.0
    model.k = 0.5
    model.gamma = 0.3
    domain.dim = 1
    domain.half_width = 16.0
    domain.points = 128
    kernel.shape = box
    kernel.radius = 1.0
    ic.kind = bump
    ic.center = 0.0
    ic.radius = 1.0
    ic.height = 1.0
    run.integrator = imex
    run.dt = 0.02
    run.t_final = 5.0
    output.dir = out
    seed = 0

Lines starting with ``#`` are comments. ``kernel.shape = global`` selects
the J == 1 coupling (no kernel). Unknown keys are rejected so typos fail
loudly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .kernels import Domain, Kernel, build_kernel, load_kernel_csv
from .solver import Field, ModelParams

__all__ = ["ConfigError", "ExperimentConfig", "parse_config_text", "load_config"]

SCHEMA_VERSION = 1

_KNOWN_KEYS = {
    "schema_version",
    "seed",
    "model.alpha",
    "model.mu",
    "model.k",
    "model.gamma",
    "model.variant",
    "model.m",
    "domain.dim",
    "domain.half_width",
    "domain.points",
    "kernel.shape",
    "kernel.radius",
    "kernel.scale",
    "kernel.cutoff",
    "kernel.file",
    "kernel.delta0",
    "ic.kind",
    "ic.center",
    "ic.radius",
    "ic.height",
    "ic.value",
    "ic.file",
    "run.integrator",
    "run.dt",
    "run.t_final",
    "run.snapshot_times",
    "run.blow_up_threshold",
    "run.seam_margin",
    "run.seam_tol",
    "diagnostics.probe_center",
    "diagnostics.probe_delta",
    "diagnostics.lyapunov",
    "output.dir",
}


class ConfigError(ValueError):
    """Invalid configuration; the message carries the offending key."""


def parse_config_text(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = val.strip()
    return out


def _get(raw: dict, key: str, conv, default=None, required: bool = False):
    if key not in raw or raw[key] == "":
        if required:
            raise ConfigError(f"{key}: required key missing")
        return default
    try:
        return conv(raw[key])
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"{key}: cannot parse {raw[key]!r} ({exc})") from exc


def _floats(s: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in s.split(",") if tok.strip() != "")


def _bool(s: str) -> bool:
    low = s.lower()
    if low in ("true", "1", "yes", "on"):
        return True
    if low in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


@dataclass
class ExperimentConfig:
    params: ModelParams
    dim: int
    half_width: float
    points: int
    kernel_shape: str
    kernel_args: dict
    ic_kind: str
    ic_args: dict
    integrator: str
    dt: float
    t_final: float
    snapshot_times: tuple = ()
    blow_up_threshold: float = 1e6
    seam_margin: float | None = None
    seam_tol: float = 1e-6
    probe_center: tuple = (0.0,)
    probe_delta: float | None = None
    lyapunov: bool = False
    output_dir: str = "out"
    seed: int = 0
    source: dict = field(default_factory=dict)

    def domain(self) -> Domain:
        return Domain(dim=self.dim, half_width=self.half_width, points=self.points)

    def kernel(self, dom: Domain | None = None) -> Kernel | None:
        dom = dom or self.domain()
        if self.kernel_shape == "global":
            return None
        if self.kernel_shape == "tabulated":
            J = load_kernel_csv(self.kernel_args["file"], delta0=self.kernel_args.get("delta0"))
            if J.domain != dom:
                raise ConfigError("kernel.file: tabulated kernel domain does not match domain.*")
            return J
        try:
            return build_kernel(dom, self.kernel_shape, **self.kernel_args)
        except ValueError as exc:
            raise ConfigError(f"kernel.shape: {exc}") from exc

    def initial_field(self, dom: Domain | None = None) -> Field:
        dom = dom or self.domain()
        if self.ic_kind == "constant":
            return Field(domain=dom, values=np.full(dom.shape, self.ic_args["value"]))
        if self.ic_kind == "bump":
            center = self.ic_args["center"]
            if len(center) != dom.dim:
                raise ConfigError("ic.center: needs one coordinate per dimension")
            radius = self.ic_args["radius"]
            height = self.ic_args["height"]
            r2 = np.zeros(dom.shape)
            for ax, grid in enumerate(dom.coord_grids()):
                d = (grid - center[ax] + dom.half_width) % (2 * dom.half_width) - dom.half_width
                r2 += d * d
            s2 = r2 / radius**2
            with np.errstate(divide="ignore", over="ignore"):
                vals = np.where(s2 < 1.0, height * np.exp(1.0 - 1.0 / np.maximum(1.0 - s2, 1e-300)), 0.0)
            return Field(domain=dom, values=vals)
        if self.ic_kind == "tabulated":
            from .outputs import read_snapshot_csv

            fdom, _, vals = read_snapshot_csv(self.ic_args["file"])
            if fdom != dom:
                raise ConfigError("ic.file: tabulated field domain does not match domain.*")
            return Field(domain=dom, values=vals)
        raise ConfigError(f"ic.kind: unknown kind {self.ic_kind!r}")

    def run_options(self) -> dict:
        opts = {
            "snapshot_times": self.snapshot_times,
            "probe_center": np.asarray(self.probe_center, dtype=float),
            "blow_up_threshold": self.blow_up_threshold,
            "seam_tol": self.seam_tol,
            "lyapunov": self.lyapunov,
        }
        if self.probe_delta is not None:
            opts["probe_delta"] = self.probe_delta
        if self.seam_margin is not None:
            opts["seam_margin"] = self.seam_margin
        return opts


def from_mapping(raw: dict[str, str]) -> ExperimentConfig:
    ver = _get(raw, "schema_version", int, required=True)
    if ver != SCHEMA_VERSION:
        raise ConfigError(f"schema_version: expected {SCHEMA_VERSION}, got {ver}")

    variant = _get(raw, "model.variant", str, default="standard")
    try:
        params = ModelParams(
            alpha=_get(raw, "model.alpha", float, required=True),
            mu=_get(raw, "model.mu", float, required=True),
            k=_get(raw, "model.k", float, required=True),
            gamma=_get(raw, "model.gamma", float, required=True),
            variant=variant,
            m=_get(raw, "model.m", float, default=2.5),
        )
    except ValueError as exc:
        raise ConfigError(f"model.*: {exc}") from exc

    dim = _get(raw, "domain.dim", int, required=True)
    shape = _get(raw, "kernel.shape", str, default="global" if variant != "standard" else None,
                 required=variant == "standard")
    kargs: dict = {}
    if shape == "box":
        kargs["radius"] = _get(raw, "kernel.radius", float, required=True)
    elif shape == "gaussian":
        kargs["scale"] = _get(raw, "kernel.scale", float, required=True)
        kargs["cutoff"] = _get(raw, "kernel.cutoff", float, required=True)
    elif shape == "tabulated":
        kargs["file"] = _get(raw, "kernel.file", str, required=True)
        kargs["delta0"] = _get(raw, "kernel.delta0", float)
    elif shape == "global":
        pass
    else:
        raise ConfigError(f"kernel.shape: unknown shape {shape!r}")
    d0 = _get(raw, "kernel.delta0", float)
    if d0 is not None and shape in ("box", "gaussian"):
        kargs["delta0"] = d0

    kind = _get(raw, "ic.kind", str, required=True)
    iargs: dict = {}
    if kind == "bump":
        iargs["center"] = _get(raw, "ic.center", _floats, default=(0.0,) * dim)
        iargs["radius"] = _get(raw, "ic.radius", float, required=True)
        iargs["height"] = _get(raw, "ic.height", float, required=True)
    elif kind == "constant":
        iargs["value"] = _get(raw, "ic.value", float, required=True)
    elif kind == "tabulated":
        iargs["file"] = _get(raw, "ic.file", str, required=True)
        if not os.path.exists(iargs["file"]):
            raise ConfigError(f"ic.file: no such file {iargs['file']!r}")
    else:
        raise ConfigError(f"ic.kind: unknown kind {kind!r}")
    if shape == "tabulated" and not os.path.exists(kargs["file"]):
        raise ConfigError(f"kernel.file: no such file {kargs['file']!r}")

    integrator = _get(raw, "run.integrator", str, default="imex")
    if integrator not in ("imex", "spectral"):
        raise ConfigError(f"run.integrator: unknown integrator {integrator!r}")
    dt = _get(raw, "run.dt", float, required=True)
    t_final = _get(raw, "run.t_final", float, required=True)
    if dt <= 0.0 or t_final <= 0.0:
        raise ConfigError("run.dt / run.t_final: must be positive")

    cfg = ExperimentConfig(
        params=params,
        dim=dim,
        half_width=_get(raw, "domain.half_width", float, required=True),
        points=_get(raw, "domain.points", int, required=True),
        kernel_shape=shape,
        kernel_args=kargs,
        ic_kind=kind,
        ic_args=iargs,
        integrator=integrator,
        dt=dt,
        t_final=t_final,
        snapshot_times=_get(raw, "run.snapshot_times", _floats, default=()),
        blow_up_threshold=_get(raw, "run.blow_up_threshold", float, default=1e6),
        seam_margin=_get(raw, "run.seam_margin", float),
        seam_tol=_get(raw, "run.seam_tol", float, default=1e-6),
        probe_center=_get(raw, "diagnostics.probe_center", _floats, default=(0.0,) * dim),
        probe_delta=_get(raw, "diagnostics.probe_delta", float),
        lyapunov=_get(raw, "diagnostics.lyapunov", _bool, default=False),
        output_dir=_get(raw, "output.dir", str, default="out"),
        seed=_get(raw, "seed", int, default=0),
        source=dict(raw),
    )
    try:
        cfg.domain()
    except ValueError as exc:
        raise ConfigError(f"domain.*: {exc}") from exc
    if len(cfg.probe_center) != dim:
        raise ConfigError("diagnostics.probe_center: needs one coordinate per dimension")
    return cfg


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    return from_mapping(parse_config_text(text))
