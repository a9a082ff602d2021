"""Acceptance criteria 1-9; each test prints one line per check."""

import pytest

from semimhd.problems import default_config
from semimhd.verification import (
    check_contact, check_divergence, check_manufactured, check_pressure_operator, check_riemann,
    check_splitting, check_step_ratio, check_stokes,
)

# desk-scale versions of the 2D benchmarks
DESK = {
    "field_loop": dict(nx=128, ny=64, t_final=0.1),
    "rotor": dict(nx=128, ny=128, t_final=0.25),
    "blast": dict(nx=128, ny=128, t_final=0.01),
    "orszag_tang": dict(nx=128, ny=128, t_final=2.0),
    "kelvin_helmholtz": dict(nx=128, ny=128, t_final=4.0),
}


@pytest.fixture
def report(capsys):
    def emit(checks):
        with capsys.disabled():
            print()
            for c in checks:
                print(c.line())
        failed = [c.line() for c in checks if not c.passed]
        assert not failed, "\n".join(failed)
    return emit


def test_criterion_1_contact(report):
    report(check_contact(default_config("rp0")))


@pytest.mark.parametrize("pid", ["shear_layer", "current_sheet"])
def test_criterion_2_stokes(report, pid):
    report(check_stokes(default_config(pid)))


@pytest.mark.parametrize("pid", list(DESK))
def test_criteria_3_4_divergence_and_conservation(report, pid):
    checks, _ = check_divergence(default_config(pid, **DESK[pid]))
    report(checks)


@pytest.mark.slow
def test_criterion_5_step_ratio(report):
    report(check_step_ratio(default_config("field_loop", **DESK["field_loop"])))


def test_criterion_6_pressure_operator(report):
    report(check_pressure_operator())


def test_criterion_7_splitting(report):
    report(check_splitting())


@pytest.mark.parametrize("pid", ["rp1", "rp2", "rp3", "rp4"])
def test_criterion_8_riemann(report, pid):
    report(check_riemann(default_config(pid)))


def test_criterion_9_manufactured(report):
    report(check_manufactured())
