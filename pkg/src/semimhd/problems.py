"""Benchmark initial conditions, per-problem defaults and exact solutions."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

import numpy as np
from scipy.special import erf

from . import ct
from .driver import FlowState, Model
from .eos import IdealGas
from .errors import ConfigError
from .grid import PERIODIC, TRANSMISSIVE, Location, Mesh1D, Mesh2D
from .state import BX, BY, BZ, MX, MY, P, RHO, FluidParams, prim_to_cons

SQRT_4PI = np.sqrt(4.0 * np.pi)

SCHEMES = ("semi-implicit", "explicit-reference")


@dataclass(frozen=True)
class ProblemConfig:
    """Complete, flat description of a run."""

    problem: str
    xlim: tuple = (-0.5, 0.5)
    ylim: tuple = (-0.5, 0.5)
    nx: int = 100
    ny: int = 1
    bc_x: str = TRANSMISSIVE
    bc_y: str = TRANSMISSIVE
    gamma: float = 1.4
    c_v: float = 1.0
    mu: float = 0.0
    lambda_c: float = 0.0
    eta: float = 0.0
    cfl: float = 0.9
    t_final: float = 0.1
    fixed_dt: float | None = None
    order: int = 2
    scheme: str = "semi-implicit"
    r_max: int = 2
    cg_tol: float = 1e-10
    output_every: float = 0.0
    output_format: str = "csv"
    p_floor: float | None = None

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ConfigError(f"unknown problem id {self.problem!r}")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if self.order not in (1, 2):
            raise ConfigError("order must be 1 or 2")
        if self.r_max < 1:
            raise ConfigError("r_max must be at least 1")
        if not 0.0 < self.cfl < 1.0:
            raise ConfigError("CFL number must lie in (0, 1)")
        if self.nx < 1 or self.ny < 1:
            raise ConfigError("mesh needs at least one cell per direction")
        if self.ndim == 1 and self.ny != 1:
            raise ConfigError(f"problem {self.problem!r} is one-dimensional; ny must be 1")
        if self.output_format not in ("csv", "vtk"):
            raise ConfigError("output_format must be 'csv' or 'vtk'")

    @property
    def ndim(self) -> int:
        return PROBLEMS[self.problem].ndim

    @property
    def bc(self):
        return (self.bc_x,) if self.ndim == 1 else (self.bc_x, self.bc_y)


def config_fields():
    return {f.name: f for f in fields(ProblemConfig)}


@dataclass(frozen=True)
class _Problem:
    ndim: int
    defaults: dict
    description: str


def _riemann_defaults(t_final, nx=1000, **kw):
    d = dict(xlim=(-0.5, 0.5), nx=nx, ny=1, bc_x=TRANSMISSIVE, gamma=5.0 / 3.0, cfl=0.9,
             t_final=t_final)
    d.update(kw)
    return d


_PERIODIC2 = dict(bc_x=PERIODIC, bc_y=PERIODIC)
_TRANS2 = dict(bc_x=TRANSMISSIVE, bc_y=TRANSMISSIVE)
_SLCS = dict(xlim=(-1.0, 1.0), ylim=(-0.1, 0.1), nx=100, ny=10, bc_x=TRANSMISSIVE, bc_y=PERIODIC,
             gamma=1.4, c_v=1.0, mu=0.1, eta=0.1, lambda_c=0.1 * 1.4, t_final=0.1)

PROBLEMS = {
    "rp0": _Problem(1, _riemann_defaults(10.0, nx=100, fixed_dt=0.1), "isolated steady contact"),
    "rp1": _Problem(1, _riemann_defaults(0.1), "Brio-Wu shock tube"),
    "rp2": _Problem(1, _riemann_defaults(0.2), "seven-wave shock problem"),
    "rp3": _Problem(1, _riemann_defaults(0.15), "seven-wave problem with rarefactions"),
    "rp4": _Problem(1, _riemann_defaults(0.16), "strong normal field shock tube"),
    "field_loop": _Problem(2, dict(xlim=(-1.0, 1.0), ylim=(-0.5, 0.5), nx=500, ny=250, cfl=0.8,
                                   t_final=1.0, gamma=1.4, **_PERIODIC2),
                           "low Mach number field loop advection"),
    "rotor": _Problem(2, dict(nx=1000, ny=1000, t_final=0.25, gamma=1.4, **_TRANS2), "MHD rotor"),
    "blast": _Problem(2, dict(nx=1000, ny=1000, t_final=0.01, gamma=1.4, p_floor=1e-3, **_TRANS2),
                      "MHD blast wave"),
    "orszag_tang": _Problem(2, dict(xlim=(0.0, 2 * np.pi), ylim=(0.0, 2 * np.pi), nx=1000, ny=1000,
                                    t_final=5.0, gamma=5.0 / 3.0, **_PERIODIC2),
                            "ideal Orszag-Tang vortex"),
    "orszag_tang_viscous": _Problem(2, dict(xlim=(0.0, 2 * np.pi), ylim=(0.0, 2 * np.pi), nx=500,
                                            ny=500, t_final=2.0, gamma=5.0 / 3.0, mu=1e-2, eta=1e-2,
                                            lambda_c=1e-2 * 5.0 / 3.0, **_PERIODIC2),
                                    "viscous resistive Orszag-Tang vortex"),
    "shear_layer": _Problem(2, dict(_SLCS), "low Mach viscous shear layer"),
    "current_sheet": _Problem(2, dict(_SLCS), "low Mach resistive current sheet"),
    "kelvin_helmholtz": _Problem(2, dict(xlim=(0.0, 2.0), ylim=(-1.0, 1.0), nx=1000, ny=1000,
                                         t_final=4.0, gamma=5.0 / 3.0, mu=1e-3, eta=1e-3,
                                         lambda_c=0.0, **_PERIODIC2),
                                 "viscous resistive Kelvin-Helmholtz instability"),
}


def problem_ids():
    return list(PROBLEMS)


def default_config(problem, **overrides):
    """Configuration of ``problem`` with its registered defaults and ``overrides``."""
    if problem not in PROBLEMS:
        raise ConfigError(f"unknown problem id {problem!r}")
    values = dict(PROBLEMS[problem].defaults)
    values.update(overrides)
    unknown = set(values) - set(config_fields())
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    return ProblemConfig(problem=problem, **values)


def with_overrides(config, **overrides):
    return replace(config, **overrides)


def make_mesh(config):
    if config.ndim == 1:
        return Mesh1D.uniform(config.nx, config.xlim[0], config.xlim[1], config.bc_x)
    return Mesh2D(config.nx, config.ny, tuple(config.xlim), tuple(config.ylim),
                  (config.bc_x, config.bc_y))


def build_model(config):
    return Model(make_mesh(config), IdealGas(config.gamma, config.c_v),
                 FluidParams(config.mu, config.lambda_c, config.eta),
                 config.order, config.r_max, config.cg_tol, config.p_floor)


def output_times(config):
    if config.output_every <= 0.0:
        return []
    n = int(np.floor(config.t_final / config.output_every + 1e-9))
    return [k * config.output_every for k in range(1, n + 1) if k * config.output_every < config.t_final]


# --- Riemann problems ---------------------------------------------------------

RIEMANN_STATES = {
    "rp0": (0.0, (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0),
            (0.125, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0)),
    "rp1": (0.0, (1.0, 0.0, 0.0, 0.0, 1.0, 0.75 * SQRT_4PI, SQRT_4PI, 0.0),
            (0.125, 0.0, 0.0, 0.0, 0.1, 0.75 * SQRT_4PI, -SQRT_4PI, 0.0)),
    "rp2": (-0.1, (1.08, 1.2, 0.01, 0.5, 0.95, 2.0, 3.6, 2.0),
            (0.9891, -0.0131, 0.0269, 0.010037, 0.97159, 2.0, 4.0244, 2.0026)),
    "rp3": (-0.1, (1.7, 0.0, 0.0, 0.0, 1.7, 3.899398, 3.544908, 0.0),
            (0.2, 0.0, 0.0, -1.496891, 0.2, 3.899398, 2.785898, 2.192064)),
    "rp4": (0.0, (1.0, 0.0, 0.0, 0.0, 1.0, 1.3 * SQRT_4PI, SQRT_4PI, 0.0),
            (0.4, 0.0, 0.0, 0.0, 0.4, 1.3 * SQRT_4PI, -SQRT_4PI, 0.0)),
}


def init_riemann(problem, mesh):
    """Primitive 1D field ``(rho, u, v, w, p, Bx, By, Bz)`` of a Riemann problem."""
    try:
        x_d, left, right = RIEMANN_STATES[problem]
    except KeyError:
        raise ConfigError(f"unknown Riemann problem {problem!r}") from None
    is_left = mesh.centers <= x_d
    return np.where(is_left, np.array(left)[:, None], np.array(right)[:, None])


# --- 2D problems ----------------------------------------------------------------


def _blank(mesh):
    return np.zeros((8,) + mesh.shape)


def _uniform_faces(mesh, bx0=0.0, by0=0.0):
    return (np.full(mesh.field_shape(Location.XFACE), float(bx0)),
            np.full(mesh.field_shape(Location.YFACE), float(by0)))


def init_field_loop(mesh, a0=1e-3, radius=0.3, p0=1e5, velocity=(2.0, 1.0)):
    w = _blank(mesh)
    w[RHO] = 1.0
    w[MX], w[MY] = velocity
    w[P] = p0

    def potential(x, y):
        r = np.hypot(x, y)
        return np.where(r <= radius, a0 * (radius - r), 0.0)

    bx, by = ct.init_from_vector_potential(potential, mesh)
    return w, bx, by


def init_rotor(mesh, rho_in=10.0, omega=10.0, radius=0.1, b0=2.5, p0=1.0):
    x, y = mesh.coordinates()
    inside = np.hypot(x, y) <= radius
    w = _blank(mesh)
    w[RHO] = np.where(inside, rho_in, 1.0)
    w[MX] = np.where(inside, -omega * y, 0.0)
    w[MY] = np.where(inside, omega * x, 0.0)
    w[P] = p0
    bx, by = _uniform_faces(mesh, b0)
    return w, bx, by


def init_blast(mesh, p_in=1000.0, p_out=0.1, radius=0.1, b0=100.0):
    x, y = mesh.coordinates()
    w = _blank(mesh)
    w[RHO] = 1.0
    w[P] = np.where(np.hypot(x, y) < radius, p_in, p_out)
    bx, by = _uniform_faces(mesh, b0)
    return w, bx, by


def init_orszag_tang(mesh, viscous=False, gamma=5.0 / 3.0):
    """Orszag-Tang vortex; the face field is the curl of a corner potential."""
    x, y = mesh.coordinates()
    w = _blank(mesh)
    if viscous:
        w[RHO] = 1.0
        w[MX] = -SQRT_4PI * np.sin(y)
        w[MY] = SQRT_4PI * np.sin(x)
        w[P] = (15.0 / 4.0 + 0.25 * np.cos(4 * x) + 0.8 * np.cos(2 * x) * np.cos(y)
                - np.cos(x) * np.cos(y) + 0.25 * np.cos(2 * y))
        amp = 1.0
    else:
        w[RHO] = gamma ** 2
        w[MX] = -np.sin(y)
        w[MY] = np.sin(x)
        w[P] = gamma
        amp = SQRT_4PI
    bx, by = ct.init_from_vector_potential(
        lambda xc, yc: amp * (np.cos(yc) + 0.5 * np.cos(2 * xc)), mesh)
    return w, bx, by


def init_shear_or_sheet(kind, mesh, p0=1e5):
    """Stokes shear layer (``kind='shear'``) or current sheet (``'sheet'``)."""
    x, _ = mesh.coordinates()
    w = _blank(mesh)
    w[RHO] = 1.0
    w[P] = p0
    sign = np.where(x <= 0.0, 1.0, -1.0)
    bx, by = _uniform_faces(mesh)
    if kind == "shear":
        w[MY] = sign
    elif kind == "sheet":
        xf, _ = mesh.coordinates(Location.YFACE)
        by = np.where(xf <= 0.0, 1.0, -1.0)
    else:
        raise ConfigError(f"unknown kind {kind!r}")
    return w, bx, by


def exact_stokes(x, t, mu):
    """First Stokes problem: ``-erf(x / (2 sqrt(mu t)))``."""
    x = np.asarray(x, dtype=float)
    if t <= 0.0:
        return -np.sign(x)
    return -erf(0.5 * x / np.sqrt(mu * t))


def kh_field(y, a=1.0 / 25.0, b0=0.07):
    """Three-zone Kelvin-Helmholtz magnetic field ``(Bx, Bz)`` as functions of ``y``."""
    ay = np.abs(y)
    chi = 0.5 * np.pi * (ay - 0.5 + a) / (2.0 * a)
    bx = np.where(ay >= 0.5 + a, b0, np.where(ay > 0.5 - a, b0 * np.sin(chi), 0.0))
    bz = np.where(ay >= 0.5 + a, 0.0, np.where(ay > 0.5 - a, b0 * np.cos(chi), b0))
    return bx, bz


def init_kelvin_helmholtz(mesh, a=1.0 / 25.0, u0=1.0, dv=0.01, b0=0.07, p0=0.6):
    x, y = mesh.coordinates()
    w = _blank(mesh)
    w[RHO] = 1.0
    w[MX] = -0.5 * u0 * np.tanh((np.abs(y) - 0.5) / a)
    w[MY] = dv * np.sin(2 * np.pi * x) * np.sin(np.pi * np.abs(y))
    w[P] = p0
    _, w[BZ] = kh_field(y, a, b0)
    _, yf = mesh.coordinates(Location.XFACE)
    bx, _ = kh_field(yf, a, b0)
    by = np.zeros(mesh.field_shape(Location.YFACE))
    return w, bx, by


def error_norms(values, exact, mesh):
    """Volume-normalised ``(L1, L2, Linf)`` norms of ``values - exact``.

    ``exact`` is an array of cell values or a callable of the cell-centre
    coordinates.
    """
    if callable(exact):
        coords = (mesh.centers,) if mesh.ndim == 1 else mesh.coordinates()
        exact = exact(*coords)
    err = np.abs(np.asarray(values, dtype=float) - exact)
    vol = mesh.cell_volumes * np.ones_like(err)
    total = float(np.sum(vol))
    return (float(np.sum(err * vol)) / total,
            float(np.sqrt(np.sum(err ** 2 * vol) / total)),
            float(np.max(err)))


def _state_from_primitives(w, bx, by, eos):
    if bx is not None:
        w = w.copy()
        w[BX], w[BY] = ct.face_to_center_b(bx, by)
    q = prim_to_cons(w, eos)
    return FlowState(q, w[P].copy(), bx, by, 0.0)


def initial_primitives(config, mesh):
    """``(w, bx, by)`` for the configured problem; ``bx``/``by`` are ``None`` in 1D."""
    pid = config.problem
    if pid in RIEMANN_STATES:
        return init_riemann(pid, mesh), None, None
    if pid == "field_loop":
        return init_field_loop(mesh)
    if pid == "rotor":
        return init_rotor(mesh)
    if pid == "blast":
        return init_blast(mesh)
    if pid == "orszag_tang":
        return init_orszag_tang(mesh, viscous=False, gamma=config.gamma)
    if pid == "orszag_tang_viscous":
        return init_orszag_tang(mesh, viscous=True)
    if pid == "shear_layer":
        return init_shear_or_sheet("shear", mesh)
    if pid == "current_sheet":
        return init_shear_or_sheet("sheet", mesh)
    if pid == "kelvin_helmholtz":
        return init_kelvin_helmholtz(mesh)
    raise ConfigError(f"no initializer for {pid!r}")


def make_initial_state(config, mesh=None):
    mesh = make_mesh(config) if mesh is None else mesh
    w, bx, by = initial_primitives(config, mesh)
    return _state_from_primitives(w, bx, by, IdealGas(config.gamma, config.c_v))

