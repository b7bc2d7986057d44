"""Uniform centered grids, quadrature, transforms and linear convolution.

Functions live on the half-open box [-L, L)^d sampled at N nodes per axis
(N a power of two, so the node set contains the origin exactly).  The
discrete transform approximates the continuous one under the convention

    fhat(k) = integral f(x) exp(-i 2 pi k . x) dx

with frequencies k_m = m / (2L), m = -N/2 .. N/2 - 1 per axis.  Convolution
is linear (zero padded to 2N per axis), never circular: wrap-around would
corrupt every tail diagnostic downstream.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

# Relative ceiling on the imaginary residue of an inverse transform whose
# result is contractually real; anything larger signals an FFT defect.
CONV_IMAG_TOL = 1e-9
IDFT_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class GridSpec:
    """Geometry of a centered uniform grid on [-extent, extent)^dim."""

    dim: int
    extent: float
    points_per_axis: int

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if not self.extent > 0:
            raise ValueError(f"extent must be positive, got {self.extent}")
        n = self.points_per_axis
        if n < 8 or (n & (n - 1)) != 0:
            raise ValueError(f"points_per_axis must be a power of two >= 8, got {n}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.extent / self.points_per_axis

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    def axis_nodes(self) -> np.ndarray:
        """Nodes -L + j h, j = 0..N-1; index N/2 is exactly 0."""
        return -self.extent + self.spacing * np.arange(self.points_per_axis)

    def axis_frequencies(self) -> np.ndarray:
        """Frequencies m/(2L), m = -N/2..N/2-1, in increasing order."""
        n = self.points_per_axis
        return (np.arange(n) - n // 2) / (2.0 * self.extent)

    def node_grids(self) -> tuple[np.ndarray, ...]:
        axes = (self.axis_nodes(),) * self.dim
        return tuple(np.meshgrid(*axes, indexing="ij"))

    def radii(self) -> np.ndarray:
        """Euclidean node distances |x_j| with the grid's shape."""
        grids = self.node_grids()
        r2 = grids[0] ** 2
        for g in grids[1:]:
            r2 = r2 + g**2
        return np.sqrt(r2)


@dataclass(frozen=True)
class GridFunction:
    """Real values sampled on a GridSpec; immutable after construction."""

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.shape != self.spec.shape:
            raise ValueError(
                f"values shape {values.shape} does not match grid shape {self.spec.shape}"
            )
        if not np.all(np.isfinite(values)):
            idx = np.unravel_index(int(np.argmin(np.isfinite(values))), values.shape)
            node = tuple(float(self.spec.axis_nodes()[i]) for i in idx)
            raise ValueError(f"non-finite value at node {node}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class Spectrum:
    """Complex frequency samples paired with the originating GridSpec."""

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.complex128)
        if values.shape != self.spec.shape:
            raise ValueError(
                f"values shape {values.shape} does not match grid shape {self.spec.shape}"
            )
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


def sample(spec: GridSpec, evaluator: Callable) -> GridFunction:
    """Sample a pointwise evaluator at the grid nodes.

    The evaluator receives one coordinate array per axis (meshgrid layout
    for dim > 1) and must return finite values at every node.  No
    normalization is applied.
    """
    values = np.asarray(evaluator(*spec.node_grids()), dtype=np.float64)
    values = np.broadcast_to(values, spec.shape).copy()
    return GridFunction(spec=spec, values=values)


def integrate(g: GridFunction) -> float:
    """Riemann sum h^d sum values over the grid window."""
    return float(g.values.sum() * g.spec.cell_volume)


def moment(g: GridFunction, order: float) -> float:
    """Truncated absolute moment h^d sum |x_j|^order values[j].

    order = 0 reproduces integrate (0^0 evaluates to 1).
    """
    if order < 0:
        raise ValueError(f"order must be nonnegative, got {order}")
    return float(np.sum(g.spec.radii() ** order * g.values) * g.spec.cell_volume)


def convolve(g1: GridFunction, g2: GridFunction) -> GridFunction:
    """Linear convolution approximating integral f(x-y) g(y) dy.

    Both inputs are zero padded to 2N per axis, transformed, multiplied,
    scaled by h^d and restricted back to the original window.  The result
    of the inverse transform must be real up to roundoff; an imaginary
    residue above CONV_IMAG_TOL relative to the peak aborts the call.
    """
    if g1.spec != g2.spec:
        raise ValueError("grid specs do not match")
    spec = g1.spec
    n = spec.points_per_axis
    axes = tuple(range(spec.dim))
    padded_shape = (2 * n,) * spec.dim
    fa = np.fft.fftn(g1.values, s=padded_shape, axes=axes)
    fb = np.fft.fftn(g2.values, s=padded_shape, axes=axes)
    conv = np.fft.ifftn(fa * fb) * spec.cell_volume
    peak = float(np.abs(conv).max())
    imag_peak = float(np.abs(conv.imag).max())
    if imag_peak > CONV_IMAG_TOL * peak:
        raise RuntimeError(
            f"imaginary residue {imag_peak:.3e} exceeds {CONV_IMAG_TOL:.0e} of peak "
            f"{peak:.3e}; this signals an FFT defect"
        )
    window = (slice(n // 2, n // 2 + n),) * spec.dim
    return GridFunction(spec=spec, values=conv.real[window])


def dft(g: GridFunction) -> Spectrum:
    """Scaled transform h^d sum values[j] exp(-i 2 pi k_m . x_j).

    The shift sandwich moves the origin-centered samples into standard
    FFT order and back, which realizes the phase factor exactly.
    """
    spec = g.spec
    out = np.fft.fftshift(np.fft.fftn(np.fft.ifftshift(g.values))) * spec.cell_volume
    return Spectrum(spec=spec, values=out)


def idft(s: Spectrum, allow_complex: bool = False):
    """Inverse transform with frequency weight 1/(2L)^d.

    Returns a GridFunction when the spectrum is conjugate symmetric (real
    result).  A non-symmetric spectrum is an error unless allow_complex is
    set, in which case the complex node values are returned as an array.
    """
    spec = s.spec
    out = np.fft.fftshift(np.fft.ifftn(np.fft.ifftshift(s.values))) / spec.cell_volume
    if allow_complex:
        return out
    peak = float(np.abs(out).max())
    imag_peak = float(np.abs(out.imag).max())
    if imag_peak > IDFT_IMAG_TOL * peak:
        raise ValueError(
            f"spectrum is not conjugate symmetric (imaginary residue {imag_peak:.3e} "
            f"vs peak {peak:.3e}); pass allow_complex=True for the complex result"
        )
    return GridFunction(spec=spec, values=out.real)


def restrict(g: GridFunction, extent: float) -> GridFunction:
    """Central sub-window of a GridFunction at the same spacing.

    The new extent must divide the old one by a power of two so the node
    set stays a valid centered grid (and keeps at least 8 points).
    """
    old = g.spec
    ratio = old.extent / extent
    per_axis = old.points_per_axis / ratio
    n_new = int(round(per_axis))
    if not (
        math.isclose(per_axis, n_new)
        and n_new >= 8
        and (n_new & (n_new - 1)) == 0
    ):
        raise ValueError(
            f"extent {extent} does not cut {old.extent} to a power-of-two grid "
            f"of at least 8 points per axis"
        )
    new_spec = GridSpec(dim=old.dim, extent=extent, points_per_axis=n_new)
    start = (old.points_per_axis - n_new) // 2
    window = (slice(start, start + n_new),) * old.dim
    return GridFunction(spec=new_spec, values=g.values[window].copy())


# ----------------------------------------------------------------------
# serialization: CSV (coordinates, value) and JSON (header + flat values)
# ----------------------------------------------------------------------


def to_csv(g: GridFunction, path) -> None:
    """Write one row per node: coordinates then value, full precision."""
    spec = g.spec
    grids = spec.node_grids()
    cols = [grid.ravel() for grid in grids] + [g.values.ravel()]
    header = ",".join([f"x{i + 1}" for i in range(spec.dim)] + ["value"])
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in zip(*cols):
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def from_csv(path) -> GridFunction:
    """Rebuild a GridFunction from to_csv output (bit-identical values)."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    dim = data.shape[1] - 1
    count = data.shape[0]
    n = round(count ** (1.0 / dim))
    if n**dim != count:
        raise ValueError(f"row count {count} is not a {dim}-dim grid")
    first_axis = data[:, 0].reshape((n,) * dim)
    nodes = first_axis[(slice(None),) + (0,) * (dim - 1)]
    extent = -float(nodes[0])
    spec = GridSpec(dim=dim, extent=extent, points_per_axis=n)
    return GridFunction(spec=spec, values=data[:, dim].reshape(spec.shape))


def to_json(g: GridFunction, path) -> None:
    doc = {
        "dim": g.spec.dim,
        "extent": g.spec.extent,
        "points_per_axis": g.spec.points_per_axis,
        "values": g.values.ravel().tolist(),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def from_json(path) -> GridFunction:
    with open(path) as fh:
        doc = json.load(fh)
    spec = GridSpec(
        dim=doc["dim"], extent=doc["extent"], points_per_axis=doc["points_per_axis"]
    )
    return GridFunction(spec=spec, values=np.array(doc["values"]).reshape(spec.shape))
