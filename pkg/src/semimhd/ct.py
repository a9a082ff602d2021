"""Constrained transport of the face-centred magnetic field.

Face fields: ``bx`` has shape ``(nx + 1, ny)`` (``Bx`` at x-faces) and ``by``
has shape ``(nx, ny + 1)`` (``By`` at y-faces).  The electric field ``Ez``
lives on the ``(nx + 1, ny + 1)`` cell corners; corner ``(I, J)`` is the
lower-left corner of cell ``(I, J)``.

Corner operators take cell fields carrying one halo layer, shape
``(..., nx + 2, ny + 2)``, so that boundary corners are formed from
halo-filled cells for both periodic and transmissive meshes.
"""

from __future__ import annotations

import numpy as np

from .grid import PERIODIC, Location, apply_bc


def corner_value(v):
    """Four-cell average at every corner of a halo-padded cell field."""
    v = np.asarray(v, dtype=float)
    return 0.25 * (v[..., :-1, :-1] + v[..., 1:, :-1] + v[..., :-1, 1:] + v[..., 1:, 1:])


def corner_gradient(v, dx, dy):
    """Corner gradient ``(d/dx, d/dy)`` averaged over the two adjacent rows/columns."""
    v = np.asarray(v, dtype=float)
    gx = 0.5 * ((v[..., 1:, 1:] - v[..., :-1, 1:]) + (v[..., 1:, :-1] - v[..., :-1, :-1])) / dx
    gy = 0.5 * ((v[..., 1:, 1:] - v[..., 1:, :-1]) + (v[..., :-1, 1:] - v[..., :-1, :-1])) / dy
    return gx, gy


def corner_max(s):
    """Maximum over the four cells around each corner."""
    return np.maximum(np.maximum(s[..., :-1, :-1], s[..., 1:, :-1]),
                      np.maximum(s[..., :-1, 1:], s[..., 1:, 1:]))


def corner_emf(bx, by, u_c, v_c, sx, sy, bc, eta=0.0, dbydx=None, dbxdy=None):
    """Corner electric field ``Ez`` from a two-wave (Rusanov) corner flux.

    Parameters
    ----------
    bx, by : ndarray
        Face fields at time n.
    u_c, v_c : ndarray, shape (nx + 1, ny + 1)
        Corner velocities.
    sx, sy : ndarray or float
        Corner signal speeds in x and y.
    bc : tuple
        Boundary conditions ``(bc_x, bc_y)`` used to extend the faces.
    eta : float
        Resistivity; multiplies ``dbydx - dbxdy`` (corner gradients of the
        cell-centred field).
    """
    bxp = apply_bc(bx, bc[1], 1, axis=1)
    byp = apply_bc(by, bc[0], 1, axis=0)
    bx_lo, bx_hi = bxp[:, :-1], bxp[:, 1:]
    by_lo, by_hi = byp[:-1, :], byp[1:, :]
    ez = (0.5 * v_c * (bx_lo + bx_hi) - 0.5 * sy * (bx_hi - bx_lo)
          - 0.5 * u_c * (by_lo + by_hi) + 0.5 * sx * (by_hi - by_lo))
    if eta:
        ez = ez + eta * (dbydx - dbxdy)
    return ez


def update_face_b(bx, by, ez, dt, dx, dy):
    """Curl update of the face field; preserves the discrete divergence."""
    bx_new = bx - dt / dy * (ez[:, 1:] - ez[:, :-1])
    by_new = by + dt / dx * (ez[1:, :] - ez[:-1, :])
    return bx_new, by_new


def face_to_center_b(bx, by):
    """Cell-centred ``(Bx, By)`` as two-face averages."""
    return 0.5 * (bx[:-1, :] + bx[1:, :]), 0.5 * (by[:, :-1] + by[:, 1:])


def discrete_div_b(bx, by, dx, dy):
    """Face-difference divergence of the staggered field in every cell."""
    return (bx[1:, :] - bx[:-1, :]) / dx + (by[:, 1:] - by[:, :-1]) / dy


def sync_periodic_faces(bx, by, bc):
    """Make the duplicated seam faces of periodic directions identical."""
    bx = bx.copy()
    by = by.copy()
    if bc[0] == PERIODIC:
        bx[-1, :] = bx[0, :]
    if bc[1] == PERIODIC:
        by[:, -1] = by[:, 0]
    return bx, by


def init_from_vector_potential(a_func, mesh):
    """Face field ``B = curl(A e_z)`` from a potential sampled at corners.

    ``Bx = dA/dy`` and ``By = -dA/dx`` as corner differences, which makes the
    discrete divergence vanish identically.
    """
    xc, yc = mesh.coordinates(Location.CORNER)
    a = np.asarray(a_func(xc, yc), dtype=float) * np.ones_like(xc)
    bx = (a[:, 1:] - a[:, :-1]) / mesh.dy
    by = -(a[1:, :] - a[:-1, :]) / mesh.dx
    return sync_periodic_faces(bx, by, mesh.bc)


def max_abs_div_b(bx, by, mesh):
    return float(np.max(np.abs(discrete_div_b(bx, by, mesh.dx, mesh.dy))))
