"""Explicit MUSCL-Hancock / Rusanov update of the convective (and viscous) terms.

The result of this stage is the intermediate state ``Q*``.  Density,
transverse momenta and (in 1D) the magnetic field of ``Q*`` are already the
new-time values; normal momentum and total energy still lack the pressure
contribution added by :mod:`semimhd.pressure`.
"""

from __future__ import annotations

import numpy as np

from . import ct
from .grid import HALO, pad_cells
from .state import (
    BX,
    convective_speed,
    flux_convective,
    flux_viscous,
    viscous_primitives,
)


def minmod(a, b):
    """Zero for opposite signs, else the argument of smaller magnitude."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.where(a * b > 0.0, np.where(np.abs(a) < np.abs(b), a, b), 0.0)


def reconstruct(qm1, q0, qp1, dx_m, dx_0, dx_p, dt=None, axis=0, flux=None):
    """Limited slope and time derivative of one cell.

    ``dx_m, dx_0, dx_p`` are the widths of the left neighbour, the cell and
    the right neighbour.  Returns ``(dq, dqdt)`` with ``dq`` the limited
    undivided slope and ``dqdt = (f(q - dq/2) - f(q + dq/2)) / dx_0``.
    ``dt`` is accepted for symmetry with the half-step evaluation and unused.
    """
    flux = flux or flux_convective
    q0 = np.asarray(q0, dtype=float)
    right = (np.asarray(qp1, dtype=float) - q0) / (0.5 * (dx_0 + dx_p))
    left = (q0 - np.asarray(qm1, dtype=float)) / (0.5 * (dx_m + dx_0))
    dq = dx_0 * minmod(right, left)
    dqdt = (flux(q0 - 0.5 * dq, axis) - flux(q0 + 0.5 * dq, axis)) / dx_0
    return dq, dqdt


def rusanov_flux(q_minus, q_plus, flux=None, speed=None, axis=0):
    """Central flux with maximal-signal-speed dissipation.

    ``q_minus``/``q_plus`` are the left/right boundary-extrapolated states.
    The normal magnetic component carries no flux.
    """
    flux = flux or flux_convective
    speed = speed or convective_speed
    s = np.maximum(speed(q_minus, axis), speed(q_plus, axis))
    f = 0.5 * (flux(q_minus, axis) + flux(q_plus, axis)) - 0.5 * s * (q_plus - q_minus)
    f[BX + axis] = 0.0
    return f


def _shift(ndim, axis, lo, hi):
    idx = [slice(None)] + [slice(1, -1)] * ndim
    idx[1 + axis] = slice(lo, hi if hi != 0 else None)
    return tuple(idx)


def interface_fluxes(qp, widths, dt, order=2, flux=None, speed=None):
    """Rusanov fluxes at all interior faces of a halo-padded state.

    Parameters
    ----------
    qp : ndarray, shape (8, n0 + 2*HALO, ...)
        State padded with ``HALO`` ghost cells along every spatial axis.
    widths : sequence
        Per-axis cell widths: a scalar, or an array of padded widths.

    Returns
    -------
    list of ndarray
        ``fluxes[a]`` has ``n_a + 1`` faces along axis ``a`` and the interior
        extent along the others.
    """
    flux = flux or flux_convective
    speed = speed or convective_speed
    ndim = qp.ndim - 1
    core = (slice(None),) + (slice(1, -1),) * ndim
    q = qp[core]
    slopes = []
    dqdt = np.zeros_like(q)
    for a in range(ndim):
        w = widths[a]
        if np.ndim(w) == 0:
            wc = wl = wr = float(w)
        else:
            shape = [1] * (ndim + 1)
            shape[1 + a] = -1
            wfull = np.asarray(w, dtype=float)
            wc = wfull[1:-1].reshape(shape)
            wl = 0.5 * (wfull[:-2] + wfull[1:-1]).reshape(shape)
            wr = 0.5 * (wfull[1:-1] + wfull[2:]).reshape(shape)
        if order == 1:
            dq = np.zeros_like(q)
        else:
            fwd = qp[_shift(ndim, a, 2, 0)] - q
            bwd = q - qp[_shift(ndim, a, 0, -2)]
            dq = wc * minmod(fwd / wr, bwd / wl)
            dqdt += (flux(q - 0.5 * dq, a) - flux(q + 0.5 * dq, a)) / wc
        slopes.append(dq)
    if order == 1:
        dqdt[...] = 0.0
    fluxes = []
    for a in range(ndim):
        minus = q + 0.5 * slopes[a] + 0.5 * dt * dqdt
        plus = q - 0.5 * slopes[a] + 0.5 * dt * dqdt
        n = q.shape[1 + a] - 2
        left = [slice(None)] + [slice(1, -1)] * ndim
        right = list(left)
        left[1 + a] = slice(0, n + 1)
        right[1 + a] = slice(1, n + 2)
        fluxes.append(rusanov_flux(minus[tuple(left)], plus[tuple(right)],
                                   flux=flux, speed=speed, axis=a))
    return fluxes


def flux_divergence(fluxes, widths):
    """Sum over axes of ``(F_{i+1/2} - F_{i-1/2}) / dx``."""
    out = 0.0
    for a, (f, w) in enumerate(zip(fluxes, widths)):
        ax = 1 + a
        n = f.shape[ax] - 1
        hi = [slice(None)] * f.ndim
        lo = [slice(None)] * f.ndim
        hi[ax] = slice(1, n + 1)
        lo[ax] = slice(0, n)
        w = np.asarray(w, dtype=float)
        if w.ndim:
            shape = [1] * f.ndim
            shape[ax] = -1
            w = w.reshape(shape)
        out = out + (f[tuple(hi)] - f[tuple(lo)]) / w
    return out


def explicit_update_1d(q, dt, mesh, order=2, flux=None, speed=None):
    """Explicit convective update on a 1D mesh; returns ``(q_star, face_fluxes)``."""
    qp = pad_cells(q, (mesh.bc,), HALO, first_axis=1)
    widths = (mesh.dx_padded(HALO),)
    (f,) = interface_fluxes(qp, widths, dt, order, flux=flux, speed=speed)
    q_star = q - dt * flux_divergence([f], [mesh.dx])
    return q_star, f


def viscous_face_fluxes(corner_v, corner_grad, params):
    """Two-corner average of the viscous flux at x- and y-faces.

    ``corner_v``/``corner_grad`` live on the ``(nx + 1, ny + 1)`` corners.
    """
    fv_x = flux_viscous(corner_v, corner_grad, params, axis=0)
    fv_y = flux_viscous(corner_v, corner_grad, params, axis=1)
    fx = 0.5 * (fv_x[:, :, :-1] + fv_x[:, :, 1:])
    gy = 0.5 * (fv_y[:, :-1, :] + fv_y[:, 1:, :])
    return fx, gy


def explicit_update_2d(q, p, dt, mesh, eos, params, order=2, flux=None, speed=None):
    """Explicit convective + viscous update on a 2D mesh.

    Returns ``(q_star, fluxes, corners)`` where ``fluxes = (F, G)`` are the
    total (convective minus viscous) face fluxes and ``corners`` holds the
    corner primitives and gradients reused by the constrained-transport step.
    """
    qp = pad_cells(q, mesh.bc, HALO, first_axis=1)
    f, g = interface_fluxes(qp, mesh.spacing, dt, order, flux=flux, speed=speed)
    pp = pad_cells(p, mesh.bc, 1)
    inner = qp[:, 1:-1, 1:-1]
    v = viscous_primitives(inner, pp, eos)
    corner_v = ct.corner_value(v)
    corner_grad = ct.corner_gradient(v, mesh.dx, mesh.dy)
    if not params.inviscid:
        fv, gv = viscous_face_fluxes(corner_v, corner_grad, params)
        f = f - fv
        g = g - gv
    q_star = q - dt * flux_divergence([f, g], mesh.spacing)
    corners = {"v": corner_v, "grad": corner_grad, "cells": inner}
    return q_star, (f, g), corners

