import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from semimhd.errors import ConfigError
from semimhd.io import (
    CSV_COLUMNS, OUTPUT_ENV, RunManifest, Snapshot, config_to_text, load_config, output_dir, parse_config,
    parse_overrides, read_csv_snapshot, write_snapshot,
)
from semimhd.problems import default_config, make_initial_state, make_mesh


def test_minimal_config_inherits_defaults():
    c = parse_config("problem = rp1")
    assert (c.gamma, c.nx, c.cfl, c.t_final) == (5.0 / 3.0, 1000, 0.9, 0.1)
    assert parse_config("problem=rp1", {}) == default_config("rp1")


def test_sections_and_overrides():
    text = "[problem]\nproblem = rotor\n[mesh]\nnx = 64\n"
    c = parse_config(text, {"ny": "32"})
    assert (c.nx, c.ny) == (64, 32)
    assert parse_config("problem = rotor").nx == 1000
    assert parse_config(text, {"nx": "16"}).nx == 16
    assert parse_config("problem = rotor\nfixed_dt = none").fixed_dt is None


@pytest.mark.parametrize("text,overrides", [
    ("problem = rp1\nbogus = 1", None),
    ("[weird]\nproblem = rp1", None),
    ("problem = nosuch", None),
    ("problem = rp1\nny = 4", None),
    ("[mesh]\nproblem = rp1", None),
    ("nx = 10", None),
    ("problem = rp1\nnx = ten", None),
    ("problem = rp1", {"banana": "1"}),
])
def test_config_errors(text, overrides):
    with pytest.raises(ConfigError):
        parse_config(text, overrides)


def test_load_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "absent.cfg")


def test_parse_overrides():
    assert parse_overrides(["nx=64", " cfl = 0.5"]) == {"nx": "64", "cfl": "0.5"}
    with pytest.raises(ConfigError):
        parse_overrides(["nx"])


@given(
    st.sampled_from(["rp1", "rotor", "orszag_tang", "field_loop"]),
    st.integers(2, 300),
    st.floats(0.05, 1.0, exclude_max=True),
    st.floats(1e-3, 5.0),
    st.one_of(st.none(), st.floats(1e-6, 1e-2)),
)
def test_config_text_round_trip(pid, n, cfl, t_final, fixed_dt):
    ny = 1 if pid == "rp1" else n
    c = default_config(pid, nx=n, ny=ny, cfl=cfl, t_final=t_final, fixed_dt=fixed_dt)
    assert parse_config(config_to_text(c)) == c


def test_output_dir_env(monkeypatch, tmp_path):
    monkeypatch.delenv(OUTPUT_ENV, raising=False)
    assert str(output_dir()) == "output"
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path))
    assert output_dir() == tmp_path


def _snapshot(nx=2, ny=2):
    c = default_config("orszag_tang", nx=nx, ny=ny)
    mesh = make_mesh(c)
    return Snapshot.from_state(make_initial_state(c, mesh), mesh)


def test_csv_rows_and_header(tmp_path):
    path = write_snapshot(_snapshot(), tmp_path / "s.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 5


def test_csv_round_trip_is_exact(tmp_path):
    snap = _snapshot(6, 4)
    data = read_csv_snapshot(write_snapshot(snap, tmp_path / "s.csv"))
    cols = snap.cell_columns()
    for name in CSV_COLUMNS:
        np.testing.assert_array_equal(data[name], cols[name])


def test_csv_deterministic(tmp_path):
    a = write_snapshot(_snapshot(8, 8), tmp_path / "a.csv").read_bytes()
    b = write_snapshot(_snapshot(8, 8), tmp_path / "b.csv").read_bytes()
    assert a == b


def test_csv_one_dimensional(tmp_path):
    c = default_config("rp1", nx=10)
    mesh = make_mesh(c)
    data = read_csv_snapshot(write_snapshot(Snapshot.from_state(make_initial_state(c, mesh), mesh),
                                            tmp_path / "r.csv"))
    assert len(data["x"]) == 10 and np.all(data["y"] == 0.0)
    assert data["rho"][0] == 1.0 and data["rho"][-1] == 0.125


def test_vtk(tmp_path):
    path = write_snapshot(_snapshot(3, 2), tmp_path / "s.vtk", "vtk")
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# vtk DataFile Version")
    assert "DIMENSIONS 3 2 1" in lines and "POINT_DATA 6" in lines
    assert lines.count("LOOKUP_TABLE default") == 3


def test_unknown_format_and_unwritable(tmp_path):
    with pytest.raises(ConfigError):
        write_snapshot(_snapshot(), tmp_path / "s.xyz", "xyz")
    with pytest.raises(ConfigError, match="cannot write"):
        write_snapshot(_snapshot(), tmp_path / "missing" / "s.csv")


def test_manifest_round_trip(tmp_path):
    m = RunManifest("problem = rp1\n", "semi-implicit", "0.1.0", steps=10, cells=100, wall_time=0.5,
                    snapshots=["a.csv"])
    assert m.us_per_cell_step == pytest.approx(500.0)
    m.write(tmp_path / "m.json")
    assert RunManifest.read(tmp_path / "m.json") == m
    assert json.loads((tmp_path / "m.json").read_text())["us_per_cell_step"] == pytest.approx(500.0)
    assert RunManifest("", "explicit-reference", "0").us_per_cell_step == 0.0
