import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from semimhd.errors import ConfigError
from semimhd.grid import (
    PERIODIC, TRANSMISSIVE, Location, Mesh1D, Mesh2D,
    apply_bc, avg_dual_to_main_1d, avg_dual_to_main_2d, avg_main_to_dual_1d, avg_main_to_dual_2d, pad_cells,
)

values = st.floats(-1e3, 1e3)


def test_dual_to_main_examples():
    assert avg_dual_to_main_1d(np.array([0.0, 2.0])) == pytest.approx([1.0])
    np.testing.assert_array_equal(avg_dual_to_main_1d(np.full(5, 3.0)), np.full(4, 3.0))
    faces = 2.0 * np.linspace(0, 1, 6) + 1.0
    centers = 2.0 * (np.arange(5) + 0.5) / 5 + 1.0
    np.testing.assert_allclose(avg_dual_to_main_1d(faces), centers, rtol=1e-15)


def test_main_to_dual_examples():
    mesh = Mesh1D.uniform(2, 0.0, 2.0, TRANSMISSIVE)
    assert avg_main_to_dual_1d(np.array([1.0, 3.0]), mesh)[1] == pytest.approx(2.0)
    mesh = Mesh1D(np.array([0.0, 1.0, 4.0]), TRANSMISSIVE)
    # (1*0 + 3*4) / 2 / ((1 + 3) / 2)
    assert avg_main_to_dual_1d(np.array([0.0, 4.0]), mesh)[1] == pytest.approx(3.0)
    assert np.all(avg_main_to_dual_1d(np.full(2, 7.0), mesh) == 7.0)


def test_main_to_dual_boundaries():
    mesh = Mesh1D.uniform(3, 0.0, 1.0, PERIODIC)
    np.testing.assert_allclose(avg_main_to_dual_1d(np.array([1.0, 2.0, 3.0]), mesh), [2.0, 1.5, 2.5, 2.0])
    mesh = Mesh1D.uniform(3, 0.0, 1.0, TRANSMISSIVE)
    np.testing.assert_allclose(avg_main_to_dual_1d(np.array([1.0, 2.0, 3.0]), mesh), [1.0, 1.5, 2.5, 3.0])


def test_2d_averages():
    mesh = Mesh2D(3, 2, bc=(PERIODIC, TRANSMISSIVE))
    f = np.arange(6.0).reshape(3, 2)
    fx = avg_main_to_dual_2d(f, mesh, 0)
    fy = avg_main_to_dual_2d(f, mesh, 1)
    assert fx.shape == (4, 2) and fy.shape == (3, 3)
    np.testing.assert_allclose(fx[1], 0.5 * (f[0] + f[1]))
    np.testing.assert_allclose(fx[0], fx[-1])
    np.testing.assert_allclose(fy[:, 0], f[:, 0])
    np.testing.assert_allclose(avg_dual_to_main_2d(fy, 1)[:, 0], 0.5 * (fy[:, 0] + fy[:, 1]))
    # component-leading arrays average over the trailing axes
    stack = np.stack([f, 2 * f])
    np.testing.assert_allclose(avg_main_to_dual_2d(stack, mesh, 0)[1], 2 * fx)


def test_apply_bc_examples():
    f = np.array([1.0, 2.0, 3.0])
    np.testing.assert_array_equal(apply_bc(f, PERIODIC, 1), [3, 1, 2, 3, 1])
    np.testing.assert_array_equal(apply_bc(f, TRANSMISSIVE, 1), [1, 1, 2, 3, 3])
    faces = np.array([5.0, 6.0, 7.0, 5.0])
    # the seam face is stored twice; halos skip the duplicate
    np.testing.assert_array_equal(apply_bc(faces, PERIODIC, 1, face=True), [7, 5, 6, 7, 5, 6])
    with pytest.raises(ConfigError):
        apply_bc(f, PERIODIC, 4)
    with pytest.raises(ConfigError):
        apply_bc(f, "reflective", 1)


def test_pad_cells_2d():
    f = np.arange(12.0).reshape(1, 3, 4)
    out = pad_cells(f, (PERIODIC, TRANSMISSIVE), 2, first_axis=1)
    assert out.shape == (1, 7, 8)
    np.testing.assert_array_equal(out[0, 0, 2:-2], f[0, 1])
    np.testing.assert_array_equal(out[0, 2:-2, 0], f[0, :, 0])


def test_mesh_geometry():
    m = Mesh2D(4, 2, (0.0, 2.0), (-1.0, 1.0))
    assert m.spacing == (0.5, 1.0)
    assert m.field_shape(Location.CORNER) == (5, 3)
    x, y = m.coordinates(Location.XFACE)
    assert x.shape == (5, 2) and x[0, 0] == 0.0 and y[0, 0] == -0.5
    with pytest.raises(ConfigError):
        Mesh2D(0, 2)
    with pytest.raises(ConfigError):
        Mesh1D(np.array([0.0, 1.0, 1.0]))
    m1 = Mesh1D(np.array([0.0, 1.0, 3.0]), PERIODIC)
    np.testing.assert_allclose(m1.dx_dual, [1.5, 1.5, 1.5])


@given(arrays(float, st.integers(3, 20), elements=st.floats(0.1, 10.0)), st.integers(3, 20), st.data())
def test_main_to_dual_conservative(widths, _, data):
    f = data.draw(arrays(float, widths.size, elements=values))
    mesh = Mesh1D(np.r_[0.0, np.cumsum(widths)], PERIODIC)
    faces = avg_main_to_dual_1d(f, mesh)
    # faces 0 and n coincide under periodicity; count the seam once
    lhs = np.sum(mesh.dx_dual[:-1] * faces[:-1])
    assert lhs == pytest.approx(np.sum(mesh.dx * f), rel=1e-12, abs=1e-9)


@given(st.floats(-10, 10), st.floats(-10, 10), st.integers(2, 30))
def test_linear_round_trip(a, b, n):
    mesh = Mesh1D.uniform(n, 0.0, 1.0, TRANSMISSIVE)
    f = a + b * mesh.centers
    back = avg_dual_to_main_1d(avg_main_to_dual_1d(f, mesh))
    # interior cells reproduce the linear field; boundary faces use zero gradient
    np.testing.assert_allclose(back[1:-1], f[1:-1], rtol=1e-12, atol=1e-12)


@given(arrays(float, st.integers(2, 12), elements=values), st.integers(1, 2))
def test_periodic_halo_idempotent(f, ng):
    ng = min(ng, f.size)
    once = apply_bc(f, PERIODIC, ng)
    twice = apply_bc(once[ng:-ng], PERIODIC, ng)
    np.testing.assert_array_equal(once, twice)
