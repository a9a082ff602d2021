"""Conserved/primitive state algebra, split fluxes and wave speeds.

States are stored component-first: a conserved field is an array of shape
``(8, ...)`` holding ``(rho, rho*u, rho*v, rho*w, rho*E, Bx, By, Bz)`` in
Gaussian units.  Primitive fields use the same layout with the total energy
slot replaced by the pressure, ``(rho, u, v, w, p, Bx, By, Bz)``.

Directional fluxes take ``axis`` (0 for x, 1 for y, 2 for z) and are built
from the tensor form of the equations rather than by rotating states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError

RHO, MX, MY, MZ, EN, BX, BY, BZ = range(8)
P = EN  # pressure slot of a primitive array
TEMP = EN  # temperature slot of a viscous-primitive array

FOUR_PI = 4.0 * np.pi
EIGHT_PI = 8.0 * np.pi

_MOM = (MX, MY, MZ)
_MAG = (BX, BY, BZ)


@dataclass(frozen=True)
class FluidParams:
    """Transport coefficients of the viscous/resistive system."""

    mu: float = 0.0
    lambda_c: float = 0.0
    eta: float = 0.0

    def __post_init__(self):
        for name in ("mu", "lambda_c", "eta"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")

    def prandtl(self, eos):
        """Pr = mu gamma c_v / lambda (``inf`` without heat conduction)."""
        if self.lambda_c == 0.0:
            return np.inf
        return self.mu * eos.gamma * eos.c_v / self.lambda_c

    @property
    def inviscid(self) -> bool:
        return self.mu == 0.0 and self.lambda_c == 0.0 and self.eta == 0.0


def magnetic_energy(q):
    """m = B^2 / (8 pi)."""
    return (q[BX] ** 2 + q[BY] ** 2 + q[BZ] ** 2) / EIGHT_PI


def kinetic_energy(q):
    """rho k = |rho v|^2 / (2 rho)."""
    return 0.5 * (q[MX] ** 2 + q[MY] ** 2 + q[MZ] ** 2) / q[RHO]


def _first_bad(mask, values):
    idx = np.argwhere(mask)[0]
    return tuple(int(k) for k in idx), float(values[tuple(idx)])


def cons_to_prim(q, eos, p_floor=None):
    """Convert conserved to primitive variables.

    Raises :class:`AdmissibilityError` on non-positive density or negative
    internal energy, reporting the first offending cell.  With ``p_floor``
    set, pressures are clipped from below instead of raising on negative
    internal energy.
    """
    q = np.asarray(q, dtype=float)
    rho = q[RHO]
    if np.any(rho <= 0.0):
        idx, val = _first_bad(np.atleast_1d(rho <= 0.0), np.atleast_1d(rho))
        raise AdmissibilityError("non-positive density", index=idx, value=val)
    rho_e = q[EN] - kinetic_energy(q) - magnetic_energy(q)
    if p_floor is None and np.any(rho_e < 0.0):
        idx, val = _first_bad(np.atleast_1d(rho_e < 0.0), np.atleast_1d(rho_e))
        raise AdmissibilityError("negative internal energy", index=idx, value=val)
    w = np.empty_like(q)
    w[RHO] = rho
    w[MX] = q[MX] / rho
    w[MY] = q[MY] / rho
    w[MZ] = q[MZ] / rho
    w[P] = eos.pressure_from_energy(rho_e / rho, rho)
    if p_floor is not None:
        w[P] = np.maximum(w[P], p_floor)
    w[BX:] = q[BX:]
    return w


def prim_to_cons(w, eos):
    """Inverse of :func:`cons_to_prim`."""
    w = np.asarray(w, dtype=float)
    rho = w[RHO]
    q = np.empty_like(w)
    q[RHO] = rho
    q[MX] = rho * w[MX]
    q[MY] = rho * w[MY]
    q[MZ] = rho * w[MZ]
    q[BX:] = w[BX:]
    q[EN] = (rho * eos.internal_energy(w[P], rho)
             + 0.5 * rho * (w[MX] ** 2 + w[MY] ** 2 + w[MZ] ** 2)
             + magnetic_energy(w))
    return q


def viscous_primitives(q, p, eos):
    """V = (rho, u, v, w, T, Bx, By, Bz) used by the viscous fluxes."""
    v = np.empty_like(q)
    v[RHO] = q[RHO]
    v[MX] = q[MX] / q[RHO]
    v[MY] = q[MY] / q[RHO]
    v[MZ] = q[MZ] / q[RHO]
    v[TEMP] = eos.temperature(p, q[RHO])
    v[BX:] = q[BX:]
    return v


def flux_convective(q, axis=0):
    """Pressure-free part of the ideal MHD flux in direction ``axis``."""
    q = np.asarray(q, dtype=float)
    rho = q[RHO]
    vel = [q[k] / rho for k in _MOM]
    b = [q[k] for k in _MAG]
    un = vel[axis]
    bn = b[axis]
    m = magnetic_energy(q)
    vdotb = vel[0] * b[0] + vel[1] * b[1] + vel[2] * b[2]
    f = np.empty_like(q)
    f[RHO] = q[_MOM[axis]]
    for k in range(3):
        f[_MOM[k]] = q[_MOM[k]] * un - b[k] * bn / FOUR_PI
        f[_MAG[k]] = b[k] * un - vel[k] * bn
    f[_MOM[axis]] += m
    f[_MAG[axis]] = 0.0
    f[EN] = un * (kinetic_energy(q) + 2.0 * m) - bn * vdotb / FOUR_PI
    return f


def flux_pressure(q, p, eos, axis=0):
    """Pure pressure flux: ``p`` in the normal momentum, ``h rho u_n`` in energy."""
    q = np.asarray(q, dtype=float)
    f = np.zeros_like(q)
    f[_MOM[axis]] = p
    f[EN] = eos.enthalpy(p, q[RHO]) * q[_MOM[axis]]
    return f


def flux_full(q, eos, axis=0, p=None):
    """Unsplit ideal MHD flux, written directly from the conservation law."""
    q = np.asarray(q, dtype=float)
    if p is None:
        p = cons_to_prim(q, eos)[P]
    rho = q[RHO]
    u, v, w = q[MX] / rho, q[MY] / rho, q[MZ] / rho
    vel = (u, v, w)
    bx, by, bz = q[BX], q[BY], q[BZ]
    b = (bx, by, bz)
    b2 = bx * bx + by * by + bz * bz
    ptot = p + b2 / EIGHT_PI
    un, bn = vel[axis], b[axis]
    f = np.empty_like(q)
    f[RHO] = rho * un
    f[MX] = rho * u * un - bx * bn / FOUR_PI
    f[MY] = rho * v * un - by * bn / FOUR_PI
    f[MZ] = rho * w * un - bz * bn / FOUR_PI
    f[MX + axis] += ptot
    f[EN] = un * (q[EN] + ptot) - bn * (u * bx + v * by + w * bz) / FOUR_PI
    f[BX] = bx * un - u * bn
    f[BY] = by * un - v * bn
    f[BZ] = bz * un - w * bn
    f[BX + axis] = 0.0
    return f


def flux_viscous(v, grad, params, axis=0):
    """Viscous/resistive flux column ``F^v`` in direction ``axis``.

    Parameters
    ----------
    v : ndarray, shape (8, ...)
        Viscous primitives ``(rho, u, v, w, T, Bx, By, Bz)``.
    grad : sequence of ndarray
        ``grad[d]`` is the derivative of ``v`` along direction ``d``; missing
        directions are treated as zero (``len(grad) == 2`` in 2D).
    """
    zero = np.zeros_like(v[0])
    d = [grad[k] if k < len(grad) else np.zeros_like(v) for k in range(3)]
    # g[i][j] = d v_i / d x_j, likewise for B
    gv = [[d[j][_MOM[i]] for j in range(3)] for i in range(3)]
    gb = [[d[j][_MAG[i]] for j in range(3)] for i in range(3)]
    div = gv[0][0] + gv[1][1] + gv[2][2]
    f = np.zeros_like(v)
    work = zero
    magnetic = zero
    for i in range(3):
        sigma = params.mu * (gv[i][axis] + gv[axis][i])
        if i == axis:
            sigma = sigma - params.mu * (2.0 / 3.0) * div
        f[_MOM[i]] = sigma
        work = work + v[_MOM[i]] * sigma
        curl = gb[i][axis] - gb[axis][i]
        f[_MAG[i]] = params.eta * curl
        magnetic = magnetic + v[_MAG[i]] * curl
    f[EN] = work + params.lambda_c * d[axis][TEMP] + params.eta / FOUR_PI * magnetic
    return f


def _alfven_terms(q, axis):
    rho = q[RHO]
    b2 = (q[BX] ** 2 + q[BY] ** 2 + q[BZ] ** 2) / (FOUR_PI * rho)
    bn = q[BX + axis] / np.sqrt(FOUR_PI * rho)
    un = q[MX + axis] / rho
    return un, b2, bn


def magnetosonic_speeds(q, p, eos, axis=0):
    """Return ``(c_s, c_a, c_f)`` along ``axis`` (``c_a`` as a magnitude)."""
    un, b2, bn = _alfven_terms(q, axis)
    c2 = eos.sound_speed_sq(p, q[RHO])
    s = b2 + c2
    disc = np.sqrt(np.maximum(s * s - 4.0 * bn * bn * c2, 0.0))
    cf2 = 0.5 * (s + disc)
    cs2 = np.maximum(0.5 * (s - disc), 0.0)
    ca = np.abs(bn)
    # keep the nesting exact against rounding in the square roots
    cs = np.minimum(np.sqrt(cs2), ca)
    cf = np.maximum(np.sqrt(cf2), ca)
    return cs, ca, cf


def eigen_full(q, eos, axis=0, p=None):
    """Eight eigenvalues ``u-cf, u-ca, u-cs, u, 0, u+cs, u+ca, u+cf``."""
    q = np.asarray(q, dtype=float)
    if p is None:
        p = cons_to_prim(q, eos)[P]
    cs, ca, cf = magnetosonic_speeds(q, p, eos, axis)
    un = q[MX + axis] / q[RHO]
    zero = np.zeros_like(un)
    return np.stack([un - cf, un - ca, un - cs, un, zero, un + cs, un + ca, un + cf])


def eigen_convective(q, axis=0):
    """Eigenvalues of the pressure-free subsystem; independent of ``p``."""
    q = np.asarray(q, dtype=float)
    un, b2, bn = _alfven_terms(q, axis)
    b = np.sqrt(b2)
    ca = np.abs(bn)
    zero = np.zeros_like(un)
    return np.stack([un - b, un - ca, zero, zero, un, un, un + ca, un + b])


def eigen_pressure(u, c2):
    """Extreme eigenvalues of the pressure subsystem, always subsonic."""
    root = np.sqrt(np.asarray(u, dtype=float) ** 2 + 4.0 * np.asarray(c2, dtype=float))
    return 0.5 * (u - root), 0.5 * (u + root)


def convective_speed(q, axis=0):
    """max |lambda^c| of a state, i.e. ``|u_n| + |B| / sqrt(4 pi rho)``."""
    un, b2, _ = _alfven_terms(q, axis)
    return np.abs(un) + np.sqrt(b2)


def full_speed(q, eos, axis=0, p=None):
    """max |lambda| of the full system, ``|u_n| + c_f``."""
    if p is None:
        p = cons_to_prim(q, eos)[P]
    _, _, cf = magnetosonic_speeds(q, p, eos, axis)
    return np.abs(q[MX + axis] / q[RHO]) + cf


def max_convective_speed(q_left, q_right, axis=0):
    """Rusanov signal speed of the convective subsystem at an interface."""
    return np.maximum(convective_speed(q_left, axis), convective_speed(q_right, axis))
