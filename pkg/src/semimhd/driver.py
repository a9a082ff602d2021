"""Time stepping: semi-implicit steps, the explicit reference and the run loop."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import ct
from .eos import IdealGas
from .errors import AdmissibilityError
from .explicit import explicit_update_1d, explicit_update_2d
from .pressure import run_pressure_stage_1d, run_pressure_stage_2d
from .state import (
    BX,
    BY,
    BZ,
    MX,
    MY,
    P,
    RHO,
    FluidParams,
    cons_to_prim,
    convective_speed,
    flux_full,
    full_speed,
)


@dataclass
class FlowState:
    """Solution at one time level.

    ``p`` is carried alongside ``q``: the semi-implicit scheme is pressure
    based and does not recover ``p`` from the total energy.  ``bx``/``by``
    are the face fields of a 2D run (``None`` in 1D).
    """

    q: np.ndarray
    p: np.ndarray
    bx: np.ndarray | None = None
    by: np.ndarray | None = None
    t: float = 0.0

    def copy(self):
        return FlowState(self.q.copy(), self.p.copy(),
                         None if self.bx is None else self.bx.copy(),
                         None if self.by is None else self.by.copy(), self.t)


@dataclass
class Model:
    """Everything a step needs besides the state."""

    mesh: object
    eos: object = field(default_factory=IdealGas)
    params: FluidParams = field(default_factory=FluidParams)
    order: int = 2
    r_max: int = 2
    cg_tol: float = 1e-10
    p_floor: float | None = None

    @property
    def ndim(self) -> int:
        return self.mesh.ndim


@dataclass
class StepReport:
    step: int
    t: float
    dt: float
    totals: np.ndarray
    max_div_b: float = 0.0
    picard_residuals: list = field(default_factory=list)
    cg_iterations: list = field(default_factory=list)
    boundary_change: np.ndarray = field(default_factory=lambda: np.zeros(8))
    wall_time: float = 0.0
    max_b: float = 0.0


def max_field_strength(q):
    return float(np.sqrt(np.max(q[BX] ** 2 + q[BY] ** 2 + q[BZ] ** 2)))


def conservation_totals(state, mesh):
    """Volume-weighted sums of the eight conserved components."""
    vol = mesh.cell_volumes
    return np.array([float(np.sum(state.q[k] * vol)) for k in range(8)])


def max_div_b(state, mesh):
    if state.bx is None:
        return 0.0
    return ct.max_abs_div_b(state.bx, state.by, mesh)


def compute_dt(q, mesh, params=None, cfl=0.9, eos=None, p=None, kind="convective"):
    """CFL time step from convective (or full, for the explicit reference) speeds.

    ``dt = cfl / (sum_a max(|lambda_a| / dx_a) + 2 (4 mu/(3 rho) + lambda/(c_v rho) + eta) sum_a 1/dx_a^2)``
    with global maxima; returns ``inf`` when every term vanishes.
    """
    params = params or FluidParams()
    if not 0.0 < cfl < 1.0:
        raise ValueError("CFL number must lie in (0, 1)")
    widths = (mesh.dx,) if mesh.ndim == 1 else mesh.spacing
    denom = 0.0
    inv_sq = 0.0
    for a, w in enumerate(widths):
        if kind == "convective":
            s = convective_speed(q, a)
        else:
            s = full_speed(q, eos, a, p)
        if not np.all(np.isfinite(s)):
            raise AdmissibilityError("non-finite wave speed")
        denom += float(np.max(s / w))
        inv_sq += float(np.max(1.0 / np.asarray(w) ** 2))
    if not params.inviscid:
        rho_min = float(np.min(q[RHO]))
        c_v = eos.c_v if eos is not None else 1.0
        nu = 4.0 * params.mu / (3.0 * rho_min) + params.lambda_c / (c_v * rho_min) + params.eta
        denom += 2.0 * nu * inv_sq
    if denom == 0.0:
        return np.inf
    return cfl / denom


def _check_state(q, p, p_floor):
    if np.any(~(q[RHO] > 0.0)):
        bad = np.argwhere(~(q[RHO] > 0.0))[0]
        raise AdmissibilityError("non-positive density", index=tuple(int(k) for k in bad),
                                 value=float(q[RHO][tuple(bad)]))
    if p_floor is not None:
        return np.maximum(p, p_floor)
    if np.any(~(p >= 0.0)):
        bad = np.argwhere(~(p >= 0.0))[0]
        raise AdmissibilityError("negative pressure", index=tuple(int(k) for k in bad),
                                 value=float(p[tuple(bad)]))
    return p


def _explicit_boundary_change(fluxes, dt, mesh):
    """Totals change through the outer faces in the explicit stage."""
    if mesh.ndim == 1:
        (f,) = fluxes
        return -dt * (f[:, -1] - f[:, 0])
    f, g = fluxes
    dx, dy = mesh.spacing
    return -dt * (dy * np.sum(f[:, -1, :] - f[:, 0, :], axis=1)
                  + dx * np.sum(g[:, :, -1] - g[:, :, 0], axis=1))


def _ct_boundary_change(ez, dt, mesh):
    """Change of the cell-averaged Bx, By totals from the boundary EMFs."""
    dx, dy = mesh.spacing
    d_i = ez[:, -1] - ez[:, 0]
    d_j = ez[-1, :] - ez[0, :]
    trap_i = 0.5 * (d_i[0] + d_i[-1]) + np.sum(d_i[1:-1])
    trap_j = 0.5 * (d_j[0] + d_j[-1]) + np.sum(d_j[1:-1])
    return -dt * dx * trap_i, dt * dy * trap_j


def _ct_stage(state, q_star, corners, dt, model, speed):
    mesh = model.mesh
    cells = corners["cells"]
    sx = ct.corner_max(speed(cells, 0))
    sy = ct.corner_max(speed(cells, 1))
    v = corners["v"]
    gx, gy = corners["grad"]
    eta = model.params.eta
    ez = ct.corner_emf(state.bx, state.by, v[MX], v[MY], sx, sy, mesh.bc,
                       eta=eta, dbydx=gx[BY], dbxdy=gy[BX])
    bx, by = ct.update_face_b(state.bx, state.by, ez, dt, mesh.dx, mesh.dy)
    q_star[BX], q_star[BY] = ct.face_to_center_b(bx, by)
    return bx, by, ez


def step_semi_implicit(state, dt, model, step=0):
    """One semi-implicit step: explicit stage, CT stage, pressure stage, audit."""
    t0 = time.perf_counter()
    mesh, eos = model.mesh, model.eos
    if model.ndim == 1:
        q_star, f = explicit_update_1d(state.q, dt, mesh, model.order)
        change = _explicit_boundary_change([f], dt, mesh)
        _check_state(q_star, np.zeros_like(q_star[RHO]), None)
        res = run_pressure_stage_1d(q_star, state.q, state.p, dt, mesh, eos, model.r_max, model.cg_tol,
                                    model.p_floor)
        bx = by = None
    else:
        q_star, fluxes, corners = explicit_update_2d(state.q, state.p, dt, mesh, eos,
                                                     model.params, model.order)
        change = _explicit_boundary_change(fluxes, dt, mesh)
        _check_state(q_star, np.zeros_like(q_star[RHO]), None)
        bx, by, ez = _ct_stage(state, q_star, corners, dt, model, convective_speed)
        change[BX], change[BY] = _ct_boundary_change(ez, dt, mesh)
        res = run_pressure_stage_2d(q_star, state.q, state.p, dt, mesh, eos, model.r_max, model.cg_tol,
                                    model.p_floor)
    p = _check_state(res.q, res.p, model.p_floor)
    new = FlowState(res.q, p, bx, by, state.t + dt)
    report = StepReport(step, new.t, dt, conservation_totals(new, mesh), max_div_b(new, mesh),
                        res.picard_residuals, res.cg_iterations, change + res.boundary_change,
                        time.perf_counter() - t0, max_field_strength(new.q))
    return new, report


def step_explicit_reference(state, dt, model, step=0):
    """Fully explicit density-based step with the unsplit flux and full wave speeds."""
    t0 = time.perf_counter()
    mesh, eos = model.mesh, model.eos

    def flux(q, a):
        return flux_full(q, eos, a)

    def speed(q, a):
        return full_speed(q, eos, a)

    if model.ndim == 1:
        q_new, f = explicit_update_1d(state.q, dt, mesh, model.order, flux=flux, speed=speed)
        change = _explicit_boundary_change([f], dt, mesh)
        bx = by = None
    else:
        q_new, fluxes, corners = explicit_update_2d(state.q, state.p, dt, mesh, eos, model.params,
                                                    model.order, flux=flux, speed=speed)
        change = _explicit_boundary_change(fluxes, dt, mesh)
        bx, by, ez = _ct_stage(state, q_new, corners, dt, model, speed)
        change[BX], change[BY] = _ct_boundary_change(ez, dt, mesh)
    p = cons_to_prim(q_new, eos, p_floor=model.p_floor)[P]
    new = FlowState(q_new, p, bx, by, state.t + dt)
    report = StepReport(step, new.t, dt, conservation_totals(new, mesh), max_div_b(new, mesh),
                        [], [], change, time.perf_counter() - t0, max_field_strength(new.q))
    return new, report


@dataclass
class RunResult:
    state: FlowState
    reports: list
    initial_totals: np.ndarray
    snapshots: list = field(default_factory=list)
    error: Exception | None = None
    wall_time: float = 0.0

    @property
    def steps(self) -> int:
        return len(self.reports)

    @property
    def ok(self) -> bool:
        return self.error is None

    def max_div_b(self) -> float:
        return max((r.max_div_b for r in self.reports), default=0.0)

    def conservation_drift(self, scale=None):
        """Per-component relative drift of the totals after boundary accounting.

        ``scale`` defaults to the sums of ``|q_k| * vol`` over the initial state.
        """
        if not self.reports:
            return np.zeros(8)
        expected = self.initial_totals + np.sum([r.boundary_change for r in self.reports], axis=0)
        err = np.abs(self.reports[-1].totals - expected)
        scale = self._scale if scale is None else scale
        return np.where(scale > 0.0, err / np.where(scale > 0.0, scale, 1.0), err)

    _scale: np.ndarray = field(default_factory=lambda: np.zeros(8), repr=False)


def integrate(state, model, t_final, cfl=0.9, scheme="semi-implicit", fixed_dt=None,
              output_times=(), on_output=None, max_steps=None):
    """Advance ``state`` to ``t_final``.

    The time step is clamped so that every output time and ``t_final`` are
    hit exactly.  A failing step stops the loop; the last good state is
    returned (and handed to ``on_output``) together with the error.
    """
    stepper = step_semi_implicit if scheme == "semi-implicit" else step_explicit_reference
    kind = "convective" if scheme == "semi-implicit" else "full"
    mesh = model.mesh
    scale = np.array([float(np.sum(np.abs(state.q[k]) * mesh.cell_volumes)) for k in range(8)])
    result = RunResult(state, [], conservation_totals(state, mesh), _scale=scale)
    pending = sorted(t for t in output_times if state.t < t < t_final)
    start = time.perf_counter()
    step = 0
    while state.t < t_final:
        if max_steps is not None and step >= max_steps:
            break
        try:
            dt = fixed_dt if fixed_dt is not None else compute_dt(
                state.q, mesh, model.params, cfl, model.eos, state.p, kind)
            target = pending[0] if pending else t_final
            clamped = not np.isfinite(dt) or state.t + dt >= target - 1e-12 * abs(target)
            if clamped:
                dt = target - state.t
            new, report = stepper(state, dt, model, step + 1)
            if clamped:
                new.t = target
        except (AdmissibilityError, ArithmeticError, RuntimeError, ValueError) as exc:
            result.error = exc
            if on_output is not None:
                on_output(state, None)
            break
        state = new
        step += 1
        report.t = state.t
        result.reports.append(report)
        if pending and state.t >= pending[0]:
            pending.pop(0)
            result.snapshots.append(state.copy())
            if on_output is not None:
                on_output(state, report)
    result.state = state
    result.wall_time = time.perf_counter() - start
    return result


def run(config, on_output=None, max_steps=None):
    """Set up a problem from its configuration and integrate it."""
    from .problems import build_model, make_initial_state, output_times

    model = build_model(config)
    state = make_initial_state(config, model.mesh)
    result = integrate(state, model, config.t_final, cfl=config.cfl, scheme=config.scheme,
                       fixed_dt=config.fixed_dt, output_times=output_times(config),
                       on_output=on_output, max_steps=max_steps)
    if result.ok and on_output is not None:
        on_output(result.state, result.reports[-1] if result.reports else None)
    return result
