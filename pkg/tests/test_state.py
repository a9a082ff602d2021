import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from semimhd.eos import IdealGas
from semimhd.errors import AdmissibilityError
from semimhd.state import (
    BX, BY, BZ, EN, MX, MY, MZ, P, RHO, TEMP,
    FluidParams, cons_to_prim, eigen_convective, eigen_full, eigen_pressure, flux_convective,
    flux_full, flux_pressure, flux_viscous, magnetosonic_speeds, max_convective_speed, prim_to_cons,
    viscous_primitives,
)

GAS = IdealGas(5.0 / 3.0)
S4PI = np.sqrt(4.0 * np.pi)


def prim(rho=1.0, u=0.0, v=0.0, w=0.0, p=1.0, bx=0.0, by=0.0, bz=0.0):
    return np.array([rho, u, v, w, p, bx, by, bz], dtype=float)


def reference_flux(w, gamma, axis):
    """Ideal MHD flux written component by component from the primitive state."""
    rho, u, v, ww, p, bx, by, bz = w
    vel = np.array([u, v, ww])
    b = np.array([bx, by, bz])
    b2 = b @ b
    E = p / (gamma - 1.0) + 0.5 * rho * vel @ vel + b2 / (8 * np.pi)
    pt = p + b2 / (8 * np.pi)
    un, bn = vel[axis], b[axis]
    f = np.zeros(8)
    f[0] = rho * un
    f[1:4] = rho * vel * un - b * bn / (4 * np.pi)
    f[1 + axis] += pt
    f[4] = un * (E + pt) - bn * (vel @ b) / (4 * np.pi)
    f[5:8] = b * un - vel * bn
    f[5 + axis] = 0.0
    return f


states = st.builds(
    prim,
    rho=st.floats(0.01, 100.0), u=st.floats(-10, 10), v=st.floats(-10, 10), w=st.floats(-10, 10),
    p=st.floats(1e-3, 1e5), bx=st.floats(-10, 10), by=st.floats(-10, 10), bz=st.floats(-10, 10),
)


# --- conversions ---------------------------------------------------------------------


@pytest.mark.parametrize("q, u, p", [
    ([1, 0, 0, 0, 1.5, 0, 0, 0], 0.0, 1.0),
    ([1, 1, 0, 0, 2.0, 0, 0, 0], 1.0, 1.0),
    ([1, 0, 0, 0, 1.5 + 4 * np.pi / (8 * np.pi), S4PI, 0, 0], 0.0, 1.0),
])
def test_cons_to_prim_examples(q, u, p):
    w = cons_to_prim(np.array(q, dtype=float), GAS)
    assert w[MX] == pytest.approx(u)
    assert w[P] == pytest.approx(p, rel=1e-14)
    np.testing.assert_allclose(prim_to_cons(w, GAS), q, rtol=1e-14)


def test_cons_to_prim_rejects_negative_energy():
    q = np.array([[1.0, 1.0], [0, 3.0], [0, 0], [0, 0], [1.0, 1.0], [0, 0], [0, 0], [0, 0]])
    with pytest.raises(AdmissibilityError) as err:
        cons_to_prim(q, GAS)
    assert err.value.index == (1,)
    assert err.value.value == pytest.approx(1.0 - 4.5)
    # a floor clips instead of raising
    assert cons_to_prim(q, GAS, p_floor=1e-3)[P][1] == 1e-3


def test_cons_to_prim_rejects_zero_density():
    with pytest.raises(AdmissibilityError):
        cons_to_prim(np.zeros(8), GAS)


def test_viscous_primitives_temperature():
    q = prim_to_cons(prim(rho=2.0, u=1.0, p=4.0 / 3.0), GAS)
    v = viscous_primitives(q, 4.0 / 3.0, GAS)
    assert v[TEMP] == pytest.approx(1.0)
    assert v[MX] == pytest.approx(1.0)


@given(states)
def test_round_trip(w):
    q = prim_to_cons(w, GAS)
    np.testing.assert_allclose(prim_to_cons(cons_to_prim(q, GAS), GAS), q, rtol=1e-13, atol=1e-13)
    back = cons_to_prim(q, GAS)
    # p is recovered by cancellation against rho*k + m, so it is exact relative to the total energy
    assert abs(back[P] - w[P]) <= 1e-13 * (GAS.gamma - 1.0) * q[EN]
    np.testing.assert_allclose(back[[RHO, MX, MY, MZ, BX, BY, BZ]], w[[RHO, MX, MY, MZ, BX, BY, BZ]], rtol=1e-13,
                               atol=1e-13)


# --- fluxes ---------------------------------------------------------------------------


def test_convective_flux_at_rest():
    q = prim_to_cons(prim(by=2.0, bz=1.0), GAS)
    f = flux_convective(q, 0)
    assert f[RHO] == 0.0
    assert f[MX] == pytest.approx(5.0 / (8 * np.pi))


def test_convective_flux_moving_unmagnetised():
    q = prim_to_cons(prim(u=1.0, p=3.0), GAS)
    np.testing.assert_allclose(flux_convective(q, 0), [1, 1, 0, 0, 0.5, 0, 0, 0], atol=1e-15)


def test_convective_flux_pressure_blind():
    a = prim_to_cons(prim(u=0.3, v=-1, by=2, bx=1, p=1.0), GAS)
    b = prim_to_cons(prim(u=0.3, v=-1, by=2, bx=1, p=50.0), GAS)
    for axis in range(3):
        np.testing.assert_array_equal(flux_convective(a, axis), flux_convective(b, axis))


def test_pressure_flux_examples():
    q = prim_to_cons(prim(), GAS)
    np.testing.assert_array_equal(flux_pressure(q, 1.0, GAS, 0), [0, 1, 0, 0, 0, 0, 0, 0])
    q = prim_to_cons(prim(u=1.0, by=3.0), GAS)
    f = flux_pressure(q, 1.0, GAS, 0)
    assert f[EN] == pytest.approx(2.5)
    assert np.all(f[BX:] == 0.0)
    # no dependence on B
    q0 = prim_to_cons(prim(u=1.0), GAS)
    np.testing.assert_array_equal(f, flux_pressure(q0, 1.0, GAS, 0))


def test_full_flux_static_unmagnetised():
    q = prim_to_cons(prim(p=2.0), GAS)
    for axis in range(3):
        expect = np.zeros(8)
        expect[MX + axis] = 2.0
        np.testing.assert_allclose(flux_full(q, GAS, axis), expect, atol=1e-15)


@given(states, st.sampled_from([0, 1, 2]))
def test_full_flux_matches_reference(w, axis):
    q = prim_to_cons(w, GAS)
    f = flux_full(q, GAS, axis, p=w[P])
    ref = reference_flux(w, GAS.gamma, axis)
    np.testing.assert_allclose(f, ref, rtol=1e-12, atol=1e-12 * np.abs(ref).max())
    assert f[BX + axis] == 0.0


@given(states, st.sampled_from([0, 1, 2]))
def test_splitting_consistency(w, axis):
    q = prim_to_cons(w, GAS)
    total = flux_convective(q, axis) + flux_pressure(q, w[P], GAS, axis)
    full = flux_full(q, GAS, axis, p=w[P])
    scale = np.abs(flux_convective(q, axis)) + np.abs(flux_pressure(q, w[P], GAS, axis)) + 1e-300
    assert np.all(np.abs(total - full) <= 1e-13 * scale)


def test_viscous_flux_zero_gradients():
    v = prim(u=1.0, bx=2.0)
    assert np.all(flux_viscous(v, [np.zeros(8), np.zeros(8)], FluidParams(1.0, 1.0, 1.0), 0) == 0.0)


def test_viscous_flux_shear():
    s, mu = 3.0, 0.2
    gy = np.zeros(8)
    gy[MX] = s
    f = flux_viscous(prim(), [np.zeros(8), gy], FluidParams(mu=mu), 1)
    assert f[MX] == pytest.approx(mu * s)
    assert f[MY] == 0.0


def test_viscous_flux_resistive():
    g, eta, bx = 2.0, 0.5, 1.5
    gy = np.zeros(8)
    gy[BX] = g
    f = flux_viscous(prim(bx=bx), [np.zeros(8), gy], FluidParams(eta=eta), 1)
    # enters as dQ/dt + div(F - F^v) = 0, so the diffusive sign is +eta*g
    assert f[BX] == pytest.approx(eta * g)
    assert f[EN] == pytest.approx(eta / (4 * np.pi) * bx * g)
    assert f[BY] == 0.0


def test_viscous_flux_is_diffusive():
    # one explicit step of dBx/dt = d/dy F^v_y on a sine profile must shrink its amplitude
    n, eta = 64, 0.1
    y = (np.arange(n) + 0.5) / n
    h = 1.0 / n
    v = np.zeros((8, n))
    v[RHO] = 1.0
    v[BX] = np.sin(2 * np.pi * y)
    gy = np.zeros((8, n + 1))
    gy[:, 1:-1] = np.diff(v, axis=1) / h
    gy[:, 0] = gy[:, -1] = (v[:, 0] - v[:, -1]) / h
    vf = np.zeros((8, n + 1))
    f = flux_viscous(vf, [np.zeros((8, n + 1)), gy], FluidParams(eta=eta), 1)
    bx_new = v[BX] + 0.2 * h * h / eta * np.diff(f[BX]) / h
    assert np.max(np.abs(bx_new)) < np.max(np.abs(v[BX]))


def test_viscous_flux_heat_conduction():
    gx = np.zeros(8)
    gx[TEMP] = 2.0
    f = flux_viscous(prim(), [gx], FluidParams(lambda_c=0.3), 0)
    assert f[EN] == pytest.approx(0.6)


# --- eigenvalues -----------------------------------------------------------------------


def test_eigen_unmagnetised():
    q = prim_to_cons(prim(p=1.0), GAS)
    cs, ca, cf = magnetosonic_speeds(q, 1.0, GAS)
    assert (cs, ca) == (0.0, 0.0)
    assert cf == pytest.approx(np.sqrt(5.0 / 3.0))


def test_eigen_hand_case():
    q = prim_to_cons(prim(bx=S4PI), GAS)
    cs, ca, cf = magnetosonic_speeds(q, 1.0, GAS)
    assert ca == pytest.approx(1.0)
    assert cs == pytest.approx(1.0)
    assert cf == pytest.approx(np.sqrt(5.0 / 3.0), rel=1e-12)
    lam = eigen_full(q, GAS)
    np.testing.assert_allclose(np.sort(lam), np.sort([-cf, -1, -1, 0, 0, 1, 1, cf]), atol=1e-12)


def test_eigen_convective():
    q = prim_to_cons(prim(u=0.5), GAS)
    assert set(np.round(eigen_convective(q), 12)) == {0.5, 0.0}
    q = prim_to_cons(prim(bx=S4PI), GAS)
    lam = eigen_convective(q)
    assert lam.min() == pytest.approx(-1.0) and lam.max() == pytest.approx(1.0)
    q2 = prim_to_cons(prim(bx=S4PI, p=100.0), GAS)
    np.testing.assert_array_equal(np.abs(eigen_convective(q2)), np.abs(lam))


def test_eigen_pressure():
    lo, hi = eigen_pressure(0.0, 5.0 / 3.0)
    assert (lo, hi) == (pytest.approx(-np.sqrt(5 / 3)), pytest.approx(np.sqrt(5 / 3)))
    assert eigen_pressure(2.0, 0.0) == (0.0, 2.0)
    assert eigen_pressure(-2.0, 0.0) == (-2.0, 0.0)


@given(st.floats(-100, 100), st.floats(1e-6, 1e4))
def test_eigen_pressure_subsonic(u, c2):
    lo, hi = eigen_pressure(u, c2)
    assert lo < 0.0 < hi
    assert lo * hi == pytest.approx(-c2, rel=1e-9)


@given(states, st.sampled_from([0, 1, 2]))
def test_wave_speed_ordering(w, axis):
    q = prim_to_cons(w, GAS)
    cs, ca, cf = magnetosonic_speeds(q, w[P], GAS, axis)
    assert cs <= ca <= cf
    # sorted full eigenvalues reproduce the nesting
    lam = eigen_full(q, GAS, axis, p=w[P])
    un = q[MX + axis] / q[RHO]
    assert lam[0] <= lam[1] <= lam[2] <= un <= lam[5] <= lam[6] <= lam[7]


def test_max_convective_speed():
    a = prim_to_cons(prim(u=0.5, by=S4PI), GAS)
    b = prim_to_cons(prim(u=-2.0), GAS)
    assert max_convective_speed(a, a) == pytest.approx(1.5)
    assert max_convective_speed(prim_to_cons(prim(), GAS), prim_to_cons(prim(), GAS)) == 0.0
    assert max_convective_speed(a, b) == pytest.approx(2.0)
