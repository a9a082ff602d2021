"""Primary and staggered meshes, halo filling and averaging operators.

Cell fields have ``n`` entries along an axis.  Face fields along that axis
have ``n + 1`` entries, face ``k`` sitting at the left edge of cell ``k``.
Under periodic boundaries the first and last face are the same physical face
and are kept equal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

PERIODIC = "periodic"
TRANSMISSIVE = "transmissive"
BOUNDARY_KINDS = (PERIODIC, TRANSMISSIVE)

HALO = 2


class Location(enum.Enum):
    CELL = "cell"
    XFACE = "x-face"
    YFACE = "y-face"
    CORNER = "corner"


def _check_bc(bc):
    if bc not in BOUNDARY_KINDS:
        raise ConfigError(f"unknown boundary condition {bc!r}")
    return bc


@dataclass(frozen=True)
class Mesh1D:
    """Possibly non-uniform 1D mesh given by its ``nx + 1`` cell edges."""

    edges: np.ndarray
    bc: str = TRANSMISSIVE

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=float)
        if edges.ndim != 1 or edges.size < 2:
            raise ConfigError("need at least two cell edges")
        if np.any(np.diff(edges) <= 0.0):
            raise ConfigError("cell widths must be positive")
        object.__setattr__(self, "edges", edges)
        _check_bc(self.bc)

    @classmethod
    def uniform(cls, nx, x_l, x_r, bc=TRANSMISSIVE):
        return cls(np.linspace(x_l, x_r, nx + 1), bc)

    @property
    def nx(self) -> int:
        return self.edges.size - 1

    @property
    def ndim(self) -> int:
        return 1

    @property
    def shape(self):
        return (self.nx,)

    @property
    def x_l(self) -> float:
        return float(self.edges[0])

    @property
    def x_r(self) -> float:
        return float(self.edges[-1])

    @property
    def dx(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def cell_volumes(self) -> np.ndarray:
        return self.dx

    def dx_padded(self, ng=1):
        """Cell widths including ``ng`` halo cells per side."""
        return apply_bc(self.dx, self.bc, ng, axis=0)

    @property
    def dx_dual(self) -> np.ndarray:
        """Dual widths ``(dx_i + dx_{i+1}) / 2`` at all ``nx + 1`` faces."""
        w = self.dx_padded(1)
        return 0.5 * (w[:-1] + w[1:])


@dataclass(frozen=True)
class Mesh2D:
    """Uniform Cartesian mesh with per-axis boundary conditions."""

    nx: int
    ny: int
    xlim: tuple = (0.0, 1.0)
    ylim: tuple = (0.0, 1.0)
    bc: tuple = field(default=(PERIODIC, PERIODIC))

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ConfigError("mesh needs at least one cell per direction")
        if not (self.xlim[1] > self.xlim[0] and self.ylim[1] > self.ylim[0]):
            raise ConfigError("empty domain")
        bc = self.bc
        if isinstance(bc, str):
            bc = (bc, bc)
        object.__setattr__(self, "bc", tuple(_check_bc(b) for b in bc))

    @property
    def ndim(self) -> int:
        return 2

    @property
    def shape(self):
        return (self.nx, self.ny)

    @property
    def dx(self) -> float:
        return (self.xlim[1] - self.xlim[0]) / self.nx

    @property
    def dy(self) -> float:
        return (self.ylim[1] - self.ylim[0]) / self.ny

    @property
    def spacing(self):
        return (self.dx, self.dy)

    @property
    def cell_volumes(self):
        return np.full(self.shape, self.dx * self.dy)

    @property
    def x_centers(self):
        return self.xlim[0] + (np.arange(self.nx) + 0.5) * self.dx

    @property
    def y_centers(self):
        return self.ylim[0] + (np.arange(self.ny) + 0.5) * self.dy

    @property
    def x_edges(self):
        return self.xlim[0] + np.arange(self.nx + 1) * self.dx

    @property
    def y_edges(self):
        return self.ylim[0] + np.arange(self.ny + 1) * self.dy

    def coordinates(self, loc=Location.CELL):
        """Meshgrid (``indexing='ij'``) of the points of a staggered location."""
        xs = self.x_edges if loc in (Location.XFACE, Location.CORNER) else self.x_centers
        ys = self.y_edges if loc in (Location.YFACE, Location.CORNER) else self.y_centers
        return np.meshgrid(xs, ys, indexing="ij")

    def field_shape(self, loc):
        nx, ny = self.shape
        return {
            Location.CELL: (nx, ny),
            Location.XFACE: (nx + 1, ny),
            Location.YFACE: (nx, ny + 1),
            Location.CORNER: (nx + 1, ny + 1),
        }[loc]


def apply_bc(f, bc, ng, axis=-1, face=False):
    """Return ``f`` extended by ``ng`` halo entries on both ends of ``axis``.

    Cell fields wrap (periodic) or repeat the boundary value (transmissive,
    zero gradient).  With ``face=True`` the axis holds ``n + 1`` face values;
    periodic wrapping then skips the duplicated seam face.
    """
    f = np.asarray(f)
    axis = axis % f.ndim
    n = f.shape[axis] - (1 if face else 0)
    if ng < 0 or ng > n:
        raise ConfigError(f"halo width {ng} invalid for {n} cells")
    if ng == 0:
        return f.copy()
    _check_bc(bc)

    def take(start, stop):
        sl = [slice(None)] * f.ndim
        sl[axis] = slice(start, stop)
        return f[tuple(sl)]

    if bc == PERIODIC:
        if face:
            left, right = take(n - ng, n), take(1, 1 + ng)
        else:
            left, right = take(n - ng, n), take(0, ng)
    else:
        m = f.shape[axis]
        left = np.repeat(take(0, 1), ng, axis=axis)
        right = np.repeat(take(m - 1, m), ng, axis=axis)
    return np.concatenate([left, f, right], axis=axis)


def pad_cells(f, bcs, ng, first_axis=0):
    """Halo-fill every spatial axis of a cell field (component axes lead)."""
    out = f
    for k, bc in enumerate(bcs):
        out = apply_bc(out, bc, ng, axis=first_axis + k)
    return out


def _slice(ndim, axis, sl):
    idx = [slice(None)] * ndim
    idx[axis] = sl
    return tuple(idx)


def avg_dual_to_main_1d(f, axis=-1):
    """Cell value as the mean of its two bounding faces."""
    f = np.asarray(f, dtype=float)
    a = axis % f.ndim
    return 0.5 * (f[_slice(f.ndim, a, slice(None, -1))] + f[_slice(f.ndim, a, slice(1, None))])


def avg_main_to_dual_1d(f, mesh, axis=-1):
    """Width-weighted face average ``(dx_i f_i + dx_{i+1} f_{i+1}) / (2 dx_{i+1/2})``.

    Returns all ``nx + 1`` faces, closing the boundary faces with the mesh
    boundary condition.
    """
    f = np.asarray(f, dtype=float)
    a = axis % f.ndim
    fp = apply_bc(f, mesh.bc, 1, axis=a)
    w = mesh.dx_padded(1)
    shape = [1] * f.ndim
    shape[a] = w.size
    w = w.reshape(shape)
    wf = fp * w
    lo = _slice(f.ndim, a, slice(None, -1))
    hi = _slice(f.ndim, a, slice(1, None))
    return 0.5 * (wf[lo] + wf[hi]) / (0.5 * (w[lo] + w[hi]))


def avg_main_to_dual_2d(f, mesh, direction):
    """Arithmetic face average along ``direction`` (0: x-faces, 1: y-faces).

    Spatial axes are the trailing two axes of ``f``.
    """
    f = np.asarray(f, dtype=float)
    a = f.ndim - 2 + direction
    fp = apply_bc(f, mesh.bc[direction], 1, axis=a)
    return 0.5 * (fp[_slice(f.ndim, a, slice(None, -1))] + fp[_slice(f.ndim, a, slice(1, None))])


def avg_dual_to_main_2d(f, direction):
    """Cell average of the two faces bounding each cell along ``direction``."""
    f = np.asarray(f, dtype=float)
    return avg_dual_to_main_1d(f, axis=f.ndim - 2 + direction)
