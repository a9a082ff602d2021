"""Semi-implicit pressure stage.

Unknown: the cell pressure at the new time.  The system per cell reads

    vol * rho * e(p, rho) + (T p) = b,

with ``T p = -sum_a D_a(w_a G_a p)``, ``G_a`` the face difference along axis
``a`` and ``D_a`` the cell difference of face values.  In 1D the weights are
``dt^2 h / dx_dual`` and ``vol = dx``; in 2D the weights are
``dt^2 h / dx^2`` and ``vol = 1`` (the per-cell form).  Boundary faces of
transmissive directions carry zero weight (no pressure flux through the
boundary), which keeps ``T`` symmetric.

Newton's method on the diagonal nonlinearity wraps a matrix-free,
Jacobi-preconditioned conjugate-gradient solve of each linearised system.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AdmissibilityError, SolverError
from .grid import PERIODIC, apply_bc, avg_dual_to_main_1d, avg_main_to_dual_1d, avg_main_to_dual_2d
from .state import EN, MX, MY, MZ, RHO, magnetic_energy


def _face_slices(ndim, axis):
    lo = [slice(None)] * ndim
    hi = [slice(None)] * ndim
    lo[axis] = slice(None, -1)
    hi[axis] = slice(1, None)
    return tuple(lo), tuple(hi)


def face_gradient(p, bc, axis):
    """Undivided differences ``p_{k} - p_{k-1}`` at all ``n + 1`` faces."""
    pp = apply_bc(p, bc, 1, axis=axis)
    lo, hi = _face_slices(p.ndim, axis)
    return pp[hi] - pp[lo]


def face_difference(f, axis):
    """Cell difference ``f_{k+1/2} - f_{k-1/2}`` of a face field."""
    lo, hi = _face_slices(f.ndim, axis)
    return f[hi] - f[lo]


def _boundary_mask(shape, axis):
    """Boolean face field marking the first and last face along ``axis``."""
    mask = np.zeros(shape, dtype=bool)
    idx = [slice(None)] * len(shape)
    idx[axis] = 0
    mask[tuple(idx)] = True
    idx[axis] = -1
    mask[tuple(idx)] = True
    return mask


@dataclass
class PressureSystem:
    """Mildly nonlinear pressure system ``vol*rho*e(p) + T p = rhs``.

    Attributes
    ----------
    weights : list of ndarray
        Face weights per axis; ``weights[a]`` has ``n_a + 1`` faces along
        axis ``a``.
    bc : tuple
        Boundary condition per axis.
    vol : ndarray or float
        Factor in front of the internal energy density.
    rho : ndarray
        Density at the new time level.
    rhs : ndarray
        Right-hand side ``b``.
    eos : EquationOfState
    """

    weights: list
    bc: tuple
    vol: object
    rho: np.ndarray
    rhs: np.ndarray
    eos: object

    @property
    def shape(self):
        return self.rho.shape

    @property
    def size(self) -> int:
        return int(self.rho.size)

    def energy(self, p):
        return self.vol * self.rho * self.eos.internal_energy(p, self.rho)

    def energy_derivative(self, p):
        return self.vol * self.rho * self.eos.de_dp(p, self.rho)

    def operator_diagonal(self):
        d = np.zeros(self.shape)
        for a, w in enumerate(self.weights):
            lo, hi = _face_slices(w.ndim, a)
            d = d + w[lo] + w[hi]
        return d

    def residual(self, p):
        return self.energy(p) + apply_operator(self, p) - self.rhs


def apply_operator(sys, p):
    """Matrix-free product ``T p`` (the linear part only)."""
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    for a, (w, bc) in enumerate(zip(sys.weights, sys.bc)):
        out -= face_difference(w * face_gradient(p, bc, a), a)
    return out


def _face_weights(h, dt, width, bc, axis):
    w = dt * dt * h / width
    if bc != PERIODIC:
        w = np.where(_boundary_mask(w.shape, axis), 0.0, w)
    return w


def _check_enthalpy(h):
    h = np.asarray(h, dtype=float)
    if np.any(~(h >= 0.0)):
        bad = np.argwhere(~(h >= 0.0))[0]
        raise AdmissibilityError("negative interface enthalpy",
                                 index=tuple(int(k) for k in bad),
                                 value=float(h[tuple(bad)]))


def assemble_system_1d(q_star, mom_star, h_faces, rhok_faces, m_star, dt, mesh, eos):
    """Pressure system of one Picard iteration on a 1D mesh.

    ``mom_star``, ``h_faces`` and ``rhok_faces`` live on the ``nx + 1``
    faces; ``m_star`` is the cell magnetic energy.
    """
    _check_enthalpy(h_faces)
    dx = mesh.dx
    w = _face_weights(h_faces, dt, mesh.dx_dual, mesh.bc, 0)
    rhok = avg_dual_to_main_1d(rhok_faces)
    hm = h_faces * mom_star
    b = dx * (q_star[EN] - m_star - rhok) - dt * (hm[1:] - hm[:-1])
    return PressureSystem([w], (mesh.bc,), dx, q_star[RHO].copy(), b, eos)


def assemble_system_2d(q_star, mom_star, h_faces, rhok, m_new, dt, mesh, eos):
    """Pressure system of one Picard iteration on a uniform 2D mesh.

    ``mom_star = (Mx, My)`` and ``h_faces = (hx, hy)`` are face fields of
    shapes ``(nx + 1, ny)`` and ``(nx, ny + 1)``; ``rhok`` and ``m_new`` are
    cell fields.
    """
    weights = []
    b = q_star[EN] - m_new - rhok
    for a, width in enumerate(mesh.spacing):
        _check_enthalpy(h_faces[a])
        weights.append(_face_weights(h_faces[a], dt, width * width, mesh.bc[a], a))
        b = b - dt / width * face_difference(h_faces[a] * mom_star[a], a)
    return PressureSystem(weights, tuple(mesh.bc), 1.0, q_star[RHO].copy(), b, eos)


@dataclass
class CGResult:
    x: np.ndarray
    iterations: int
    residuals: list


def pcg(apply, rhs, diag, atol, maxiter, x0=None):
    """Jacobi-preconditioned conjugate gradients for an SPD operator.

    Iterates until ``||r||_2 <= atol``; raises :class:`SolverError` with the
    residual history after ``maxiter`` iterations.
    """
    x = np.zeros_like(rhs) if x0 is None else np.array(x0, dtype=float)
    r = rhs - apply(x) if x0 is not None else rhs.copy()
    norm = float(np.linalg.norm(r))
    history = [norm]
    if norm <= atol:
        return CGResult(x, 0, history)
    z = r / diag
    d = z.copy()
    rz = float(np.vdot(r, z))
    for k in range(1, maxiter + 1):
        ad = apply(d)
        dad = float(np.vdot(d, ad))
        if not dad > 0.0:
            raise SolverError("CG breakdown: operator not positive definite", history)
        alpha = rz / dad
        x += alpha * d
        r -= alpha * ad
        norm = float(np.linalg.norm(r))
        history.append(norm)
        if norm <= atol:
            return CGResult(x, k, history)
        z = r / diag
        rz_new = float(np.vdot(r, z))
        d = z + (rz_new / rz) * d
        rz = rz_new
    raise SolverError(f"CG did not converge in {maxiter} iterations", history)


def newton_step(sys, p, atol, maxiter=None):
    """One Newton correction ``dp`` solving ``(D + T) dp = -F(p)``."""
    diag_e = sys.energy_derivative(p) * np.ones(sys.shape)
    precond = diag_e + sys.operator_diagonal()

    def jac(v):
        return diag_e * v + apply_operator(sys, v)

    maxiter = 10 * sys.size if maxiter is None else maxiter
    res = pcg(jac, -sys.residual(p), precond, atol, maxiter)
    return res.x, res.iterations


@dataclass
class PressureSolution:
    p: np.ndarray
    newton_iterations: int
    cg_iterations: list = field(default_factory=list)
    residuals: list = field(default_factory=list)


def solve_pressure(sys, p_init, tol=1e-10, max_newton=25, cg_maxiter=None):
    """Newton solve of ``vol*rho*e(p) + T p = b``.

    Converged when ``||F(p)|| <= tol * ||b||``.  Each linear system is solved
    to half that tolerance, so an EOS that is linear in ``p`` (ideal gas)
    converges in a single Newton step.
    """
    scale = float(np.linalg.norm(sys.rhs)) or 1.0
    p = np.array(p_init, dtype=float) * np.ones(sys.shape)
    residuals = [float(np.linalg.norm(sys.residual(p)))]
    cg_its = []
    for k in range(max_newton + 1):
        if residuals[-1] <= tol * scale:
            return PressureSolution(p, k, cg_its, residuals)
        if k == max_newton:
            break
        dp, its = newton_step(sys, p, 0.5 * tol * scale, cg_maxiter)
        cg_its.append(its)
        p = p + dp
        residuals.append(float(np.linalg.norm(sys.residual(p))))
    raise SolverError("Newton iteration stagnated", residuals)


def picard_update_momentum(mom_star, p, dt, width, bc, axis=0):
    """``M = M* - dt/dx_face (p_{k} - p_{k-1})`` on all faces along ``axis``."""
    return mom_star - dt / width * face_gradient(p, bc, axis)


def picard_update_momentum_1d(mom_star, p, dt, mesh):
    return picard_update_momentum(mom_star, p, dt, mesh.dx_dual, mesh.bc, 0)


def refresh_coefficients_1d(p, mom_faces, q_star, mesh, eos, rho=None):
    """Face enthalpy and face kinetic energy density on a 1D mesh.

    ``h = e + p/rho`` from dual-averaged ``(p, rho)``; the kinetic energy
    uses the staggered normal momentum and dual-averaged transverse momenta.
    ``rho`` defaults to the new density ``q_star[RHO]``.
    """
    rho = q_star[RHO] if rho is None else rho
    p_f = avg_main_to_dual_1d(p, mesh)
    rho_f = avg_main_to_dual_1d(rho, mesh)
    h = eos.enthalpy(p_f, rho_f)
    mv = avg_main_to_dual_1d(q_star[MY], mesh)
    mw = avg_main_to_dual_1d(q_star[MZ], mesh)
    rhok = 0.5 * (mom_faces ** 2 + mv ** 2 + mw ** 2) / rho_f
    return h, rhok


def refresh_coefficients_2d(p, mom_faces, q_star, mesh, eos, rho=None):
    """Face enthalpies ``(hx, hy)`` and cell kinetic energy density in 2D."""
    rho = q_star[RHO] if rho is None else rho
    h = tuple(eos.enthalpy(avg_main_to_dual_2d(p, mesh, a), avg_main_to_dual_2d(rho, mesh, a))
              for a in range(2))
    mu = avg_dual_to_main_1d(mom_faces[0], axis=0)
    mv = avg_dual_to_main_1d(mom_faces[1], axis=1)
    rhok = 0.5 * (mu ** 2 + mv ** 2 + q_star[MZ] ** 2) / q_star[RHO]
    return h, rhok


def finalize_energy(rhoe_star, h_faces, mom_faces, dt, widths):
    """Conservative energy update with the final enthalpies and momenta."""
    out = np.array(rhoe_star, dtype=float)
    for a, (h, m, w) in enumerate(zip(h_faces, mom_faces, widths)):
        out -= dt / w * face_difference(h * m, a)
    return out


def finalize_energy_1d(rhoe_star, h_faces, mom_faces, dt, mesh):
    return finalize_energy(rhoe_star, [h_faces], [mom_faces], dt, [mesh.dx])


@dataclass
class PressureStageResult:
    """Outcome of the pressure stage.

    ``boundary_change`` is the change of the eight conserved totals caused by
    boundary faces during this stage (zero for periodic directions); the
    driver uses it to audit conservation on transmissive meshes.
    """

    q: np.ndarray
    p: np.ndarray
    mom_faces: list
    h_faces: list
    cg_iterations: list
    newton_residuals: list
    picard_residuals: list
    boundary_change: np.ndarray


def _take(f, axis, k):
    idx = [slice(None)] * f.ndim
    idx[axis] = k
    return f[tuple(idx)]


def _boundary_change(q_star, p, mom_faces, h_faces, dt, cell_widths, areas):
    """Totals change through the first/last faces of every axis."""
    change = np.zeros(8)
    for a, (m, h) in enumerate(zip(mom_faces, h_faces)):
        w = cell_widths[a]
        w_first = w[0] if np.ndim(w) else w
        w_last = w[-1] if np.ndim(w) else w
        area = areas[a]
        q = q_star[MX + a]
        dm = (0.5 * w_first * (_take(m, a, 0) - _take(q, a, 0))
              + 0.5 * w_last * (_take(m, a, -1) - _take(q, a, -1))
              - dt * (_take(p, a, -1) - _take(p, a, 0)))
        change[MX + a] = area * float(np.sum(dm))
        hm = h * m
        change[EN] -= dt * area * float(np.sum(_take(hm, a, -1) - _take(hm, a, 0)))
    return change


def run_pressure_stage_1d(q_star, q_n, p_n, dt, mesh, eos, r_max=2, tol=1e-10, p_floor=None):
    """Picard loop of the 1D pressure stage; returns the ``n+1`` state.

    With ``p_floor`` set, every Picard iterate is clipped from below.
    """
    m_star = magnetic_energy(q_star)
    mom_star = avg_main_to_dual_1d(q_star[MX], mesh)
    # r = 0 coefficients from the time-n solution
    h, rhok = refresh_coefficients_1d(p_n, avg_main_to_dual_1d(q_n[MX], mesh), q_n, mesh, eos)
    p = np.array(p_n, dtype=float)
    mom = mom_star
    cg_its, newton_res, picard_res = [], [], []
    for _ in range(r_max):
        sys = assemble_system_1d(q_star, mom_star, h, rhok, m_star, dt, mesh, eos)
        sol = solve_pressure(sys, p, tol=tol)
        picard_res.append(float(np.linalg.norm(sol.p - p) / max(np.linalg.norm(sol.p), 1e-300)))
        p = sol.p if p_floor is None else np.maximum(sol.p, p_floor)
        cg_its.extend(sol.cg_iterations)
        newton_res.extend(sol.residuals)
        mom = picard_update_momentum_1d(mom_star, p, dt, mesh)
        h, rhok = refresh_coefficients_1d(p, mom, q_star, mesh, eos)
    q = q_star.copy()
    q[EN] = finalize_energy_1d(q_star[EN], h, mom, dt, mesh)
    q[MX] = avg_dual_to_main_1d(mom)
    change = _boundary_change(q_star, p, [mom], [h], dt, [mesh.dx], [1.0])
    return PressureStageResult(q, p, [mom], [h], cg_its, newton_res, picard_res, change)


def run_pressure_stage_2d(q_star, q_n, p_n, dt, mesh, eos, r_max=2, tol=1e-10, p_floor=None):
    """Picard loop of the 2D pressure stage.

    ``q_star`` must already carry the cell magnetic field averaged from the
    constrained-transport faces, so that its magnetic energy is ``m^{n+1}``.
    """
    m_new = magnetic_energy(q_star)
    mom_star = [avg_main_to_dual_2d(q_star[MX + a], mesh, a) for a in range(2)]
    h = tuple(eos.enthalpy(avg_main_to_dual_2d(p_n, mesh, a), avg_main_to_dual_2d(q_n[RHO], mesh, a))
              for a in range(2))
    rhok = 0.5 * (q_n[MX] ** 2 + q_n[MY] ** 2 + q_n[MZ] ** 2) / q_n[RHO]
    p = np.array(p_n, dtype=float)
    mom = mom_star
    cg_its, newton_res, picard_res = [], [], []
    for _ in range(r_max):
        sys = assemble_system_2d(q_star, mom_star, h, rhok, m_new, dt, mesh, eos)
        sol = solve_pressure(sys, p, tol=tol)
        picard_res.append(float(np.linalg.norm(sol.p - p) / max(np.linalg.norm(sol.p), 1e-300)))
        p = sol.p if p_floor is None else np.maximum(sol.p, p_floor)
        cg_its.extend(sol.cg_iterations)
        newton_res.extend(sol.residuals)
        mom = [picard_update_momentum(mom_star[a], p, dt, mesh.spacing[a], mesh.bc[a], a)
               for a in range(2)]
        h, rhok = refresh_coefficients_2d(p, mom, q_star, mesh, eos)
    q = q_star.copy()
    q[EN] = finalize_energy(q_star[EN], h, mom, dt, mesh.spacing)
    q[MX] = avg_dual_to_main_1d(mom[0], axis=0)
    q[MY] = avg_dual_to_main_1d(mom[1], axis=1)
    dx, dy = mesh.spacing
    change = _boundary_change(q_star, p, mom, h, dt, [dx, dy], [dy, dx])
    return PressureStageResult(q, p, list(mom), list(h), cg_its, newton_res, picard_res, change)
