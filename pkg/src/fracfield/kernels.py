"""Periodic domains, competition kernels and the nonlocal coupling J*u.

The whole space is truncated to a periodic box (-L, L)^N sampled at M cell
centers per axis. Admissible kernels are nonnegative, have discrete unit
mass (h^N sum J = 1, enforced by renormalizing after discretization) and
carry a certified pair (eta, delta0): eta is a strict lower bound of J on
the cube ball B(0, delta0) = (-delta0, delta0)^N. The certified eta is
0.99x the attained lattice minimum so that strict inequality survives
refinement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Domain",
    "Kernel",
    "build_kernel",
    "ball_mask",
    "convolve",
    "convolve_direct",
    "global_mass",
    "save_kernel_csv",
    "load_kernel_csv",
]

ETA_SAFETY = 0.99


@dataclass(frozen=True)
class Domain:
    """Periodic box (-L, L)^dim with M cell centers per axis."""

    dim: int
    half_width: float
    points: int

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim={self.dim} not supported")
        if not self.half_width > 0.0:
            raise ValueError("half_width must be positive")
        if self.points < 8 or self.points % 2 != 0:
            raise ValueError("points must be even and >= 8")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points,) * self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    def axis_coords(self) -> np.ndarray:
        """Cell centers -L + (i + 1/2) h along one axis."""
        h = self.spacing
        return -self.half_width + (np.arange(self.points) + 0.5) * h

    def axis_offsets(self) -> np.ndarray:
        """Signed periodic displacements j*h wrapped into [-L, L)."""
        m = self.points
        k = (np.arange(m) + m // 2) % m - m // 2
        return k * self.spacing

    def offset_grids(self) -> list[np.ndarray]:
        off = self.axis_offsets()
        return list(np.meshgrid(*([off] * self.dim), indexing="ij"))

    def coord_grids(self) -> list[np.ndarray]:
        x = self.axis_coords()
        return list(np.meshgrid(*([x] * self.dim), indexing="ij"))


def ball_mask(dom: Domain, center, delta: float) -> np.ndarray:
    """Boolean mask of the cube ball: per-axis wrapped |x_i - c_i| <= delta."""
    center = np.atleast_1d(np.asarray(center, dtype=float))
    if center.shape != (dom.dim,):
        raise ValueError(f"center must have {dom.dim} coordinates")
    L = dom.half_width
    mask = np.ones(dom.shape, dtype=bool)
    for axis, grid in enumerate(dom.coord_grids()):
        d = np.abs((grid - center[axis] + L) % (2.0 * L) - L)
        mask &= d <= delta + 1e-12
    return mask


@dataclass(frozen=True)
class Kernel:
    """Discrete competition kernel on the displacement lattice of a Domain."""

    domain: Domain
    values: np.ndarray = field(repr=False)
    eta: float = 0.0
    delta0: float = 0.0
    support_radius: float = 0.0

    @property
    def fast_transform(self) -> np.ndarray:
        # cached lazily; frozen dataclass so stash via __dict__
        key = "_rfft"
        if key not in self.__dict__:
            self.__dict__[key] = np.fft.rfftn(self.values) * self.domain.cell_volume
        return self.__dict__[key]


def _certify(dom: Domain, values: np.ndarray, delta0: float) -> float:
    # kernel values live on the displacement lattice, so the ball around the
    # origin is cut from the offset grids, not from the cell centers
    mask = np.ones(dom.shape, dtype=bool)
    for off in dom.offset_grids():
        mask &= np.abs(off) <= delta0 + 1e-12
    mn = float(values[mask].min())
    if mn <= 0.0:
        raise ValueError(
            f"kernel vanishes on the ball of half-width {delta0}; "
            "no positive lower bound can be certified"
        )
    return ETA_SAFETY * mn


def build_kernel(
    dom: Domain,
    shape: str,
    radius: float | None = None,
    scale: float | None = None,
    cutoff: float | None = None,
    values: np.ndarray | None = None,
    delta0: float | None = None,
) -> Kernel:
    """Construct an admissible kernel: 'box', 'gaussian' or 'tabulated'.

    box:       uniform on (-radius, radius)^N
    gaussian:  exp(-|x|^2 / (2 scale^2)) truncated at |x|_2 <= cutoff
    tabulated: caller-provided nonnegative lattice values

    The discrete mass is renormalized to exactly 1. delta0 defaults to half
    the support radius; eta is certified as 0.99x the lattice minimum of J
    over B(0, delta0) and must be positive.
    """
    offs = dom.offset_grids()
    if shape == "box":
        if radius is None:
            raise ValueError("box kernel needs a radius")
        if not 0.0 < radius < dom.half_width:
            raise ValueError("box support must fit inside the domain")
        inside = np.ones(dom.shape, dtype=bool)
        for o in offs:
            inside &= np.abs(o) < radius
        vals = inside.astype(float)
        support = radius
    elif shape == "gaussian":
        if scale is None or cutoff is None:
            raise ValueError("gaussian kernel needs scale and cutoff")
        if not 0.0 < cutoff < dom.half_width:
            raise ValueError("gaussian cutoff must fit inside the domain")
        r2 = sum(o**2 for o in offs)
        vals = np.where(r2 <= cutoff**2, np.exp(-r2 / (2.0 * scale**2)), 0.0)
        support = cutoff
    elif shape == "tabulated":
        if values is None:
            raise ValueError("tabulated kernel needs values")
        vals = np.asarray(values, dtype=float).reshape(dom.shape).copy()
        if np.any(vals < 0.0):
            raise ValueError("kernel values must be nonnegative")
        if not np.any(vals > 0.0):
            raise ValueError("kernel is identically zero")
        supnorm = np.maximum.reduce([np.abs(o) for o in offs])
        support = float(supnorm[vals > 0.0].max())
    else:
        raise ValueError(f"unknown kernel shape {shape!r}")

    mass = vals.sum() * dom.cell_volume
    if mass <= 0.0:
        raise ValueError("kernel has zero mass")
    vals = vals / mass
    d0 = 0.5 * support if delta0 is None else float(delta0)
    eta = _certify(dom, vals, d0)
    return Kernel(
        domain=dom, values=vals, eta=eta, delta0=d0, support_radius=support
    )


def convolve(J: Kernel, u: np.ndarray) -> np.ndarray:
    """Periodic discrete convolution h^N sum_y J(x-y) u(y) (FFT path)."""
    if u.shape != J.domain.shape:
        raise ValueError(f"field shape {u.shape} does not match domain {J.domain.shape}")
    axes = tuple(range(u.ndim))
    out = np.fft.irfftn(J.fast_transform * np.fft.rfftn(u), s=J.domain.shape, axes=axes)
    return out


def convolve_direct(J: Kernel, u: np.ndarray) -> np.ndarray:
    """Reference path: direct summation over the kernel support."""
    if u.shape != J.domain.shape:
        raise ValueError(f"field shape {u.shape} does not match domain {J.domain.shape}")
    out = np.zeros_like(u)
    nz = np.argwhere(J.values != 0.0)
    for idx in nz:
        out += J.values[tuple(idx)] * np.roll(u, shift=idx, axis=tuple(range(u.ndim)))
    return out * J.domain.cell_volume


def global_mass(dom: Domain, u: np.ndarray) -> float:
    """h^N sum u: the J == 1 coupling of the globally coupled variant."""
    return float(u.sum() * dom.cell_volume)


def save_kernel_csv(path, J: Kernel) -> None:
    dom = J.domain
    header = f"# kernel M={dom.points} N={dom.dim} L={dom.half_width}"
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for v in J.values.ravel():
            fh.write(f"{float(v)!r}\n")


def load_kernel_csv(path, delta0: float | None = None) -> Kernel:
    """Load a tabulated kernel (one value per line, row-major)."""
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("# kernel"):
            raise ValueError(f"{path}: missing '# kernel' header")
        meta = dict(tok.split("=") for tok in header[len("# kernel") :].split())
        dom = Domain(
            dim=int(meta["N"]), half_width=float(meta["L"]), points=int(meta["M"])
        )
        vals = np.array([float(line) for line in fh if line.strip()])
    return build_kernel(dom, "tabulated", values=vals, delta0=delta0)
