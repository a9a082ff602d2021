import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from semimhd.eos import IdealGas
from semimhd.errors import AdmissibilityError, ConfigError

g53 = IdealGas(5.0 / 3.0)
g14 = IdealGas(1.4)

positive = st.floats(1e-6, 1e6)
nonneg = st.floats(0.0, 1e6)


@pytest.mark.parametrize("eos, p, rho, e", [(g53, 1.0, 1.0, 1.5), (g14, 2.0, 0.5, 10.0), (g14, 0.0, 1.0, 0.0)])
def test_internal_energy(eos, p, rho, e):
    assert eos.internal_energy(p, rho) == pytest.approx(e, rel=1e-15)


@pytest.mark.parametrize("eos, e, rho, p", [(g53, 1.5, 1.0, 1.0), (g14, 10.0, 0.5, 2.0)])
def test_pressure_from_energy(eos, e, rho, p):
    assert eos.pressure_from_energy(e, rho) == pytest.approx(p, rel=1e-15)


@pytest.mark.parametrize("eos, p, rho, h", [(g53, 1.0, 1.0, 2.5), (g14, 0.0, 1.0, 0.0), (g14, 2.0, 0.5, 14.0)])
def test_enthalpy(eos, p, rho, h):
    assert eos.enthalpy(p, rho) == pytest.approx(h, rel=1e-15)


@pytest.mark.parametrize("eos, p, rho, c2", [(g53, 1.0, 1.0, 5.0 / 3.0), (g14, 0.0, 1.0, 0.0), (g14, 1.0, 2.0, 0.7)])
def test_sound_speed(eos, p, rho, c2):
    assert eos.sound_speed_sq(p, rho) == pytest.approx(c2, rel=1e-15, abs=0.0)


@pytest.mark.parametrize("eos, p, rho, T", [(g14, 0.4, 1.0, 1.0), (g53, 2.0 / 3.0, 1.0, 1.0), (g53, 0.0, 3.0, 0.0)])
def test_temperature(eos, p, rho, T):
    assert eos.temperature(p, rho) == pytest.approx(T, rel=1e-14)


@pytest.mark.parametrize("eos, rho, d", [(g53, 1.0, 1.5), (g14, 2.0, 1.25)])
def test_de_dp(eos, rho, d):
    assert eos.de_dp(0.3, rho) == pytest.approx(d, rel=1e-15)


@pytest.mark.parametrize("rho", [0.0, -1.0])
def test_non_positive_density_rejected(rho):
    with pytest.raises(AdmissibilityError):
        g14.internal_energy(1.0, rho)
    with pytest.raises(AdmissibilityError):
        g14.enthalpy(1.0, rho)


def test_invalid_parameters():
    with pytest.raises(ConfigError):
        IdealGas(gamma=1.0)
    with pytest.raises(ConfigError):
        IdealGas(c_v=0.0)


def test_array_broadcast():
    p = np.array([1.0, 2.0])
    rho = np.array([1.0, 0.5])
    np.testing.assert_allclose(g53.internal_energy(p, rho), [1.5, 6.0])
    assert g53.de_dp(p, rho).shape == (2,)


@given(nonneg, nonneg, positive)
def test_monotone(p1, p2, rho):
    lo, hi = sorted((p1, p2))
    assert g53.internal_energy(lo, rho) <= g53.internal_energy(hi, rho)


@given(nonneg, positive, st.sampled_from([g53, g14]))
def test_inverse_consistency(p, rho, eos):
    back = eos.pressure_from_energy(eos.internal_energy(p, rho), rho)
    assert back == pytest.approx(p, rel=1e-14, abs=1e-300)


@given(positive, positive)
def test_de_dp_matches_central_difference(p, rho):
    d = 1e-6 * max(p, 1.0)
    fd = (g14.internal_energy(p + d, rho) - g14.internal_energy(p - d, rho)) / (2.0 * d)
    assert fd == pytest.approx(float(g14.de_dp(p, rho)), rel=1e-8)
