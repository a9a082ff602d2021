"""Configuration files, snapshot writers and run manifests.

Configuration files are flat ``key = value`` text with optional sections
``[problem]``, ``[mesh]``, ``[fluid]``, ``[scheme]`` and ``[output]``.  Keys
may also appear before the first section.  Every key not set explicitly
takes the registered default of the selected problem.
"""

from __future__ import annotations

import configparser
import csv
import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import ct
from .errors import ConfigError
from .problems import PROBLEMS, ProblemConfig, default_config
from .state import BX, BY, BZ, MX, MY, MZ, RHO

OUTPUT_ENV = "SEMIMHD_OUTPUT_DIR"

SECTIONS = {
    "problem": ("problem", "t_final"),
    "mesh": ("nx", "ny", "x_min", "x_max", "y_min", "y_max", "bc_x", "bc_y"),
    "fluid": ("gamma", "c_v", "mu", "lambda_c", "eta", "prandtl"),
    "scheme": ("scheme", "order", "cfl", "fixed_dt", "r_max", "cg_tol", "p_floor"),
    "output": ("output_every", "output_format"),
}
_HOME = {key: sec for sec, keys in SECTIONS.items() for key in keys}
_TOP = "__top__"

_INT = ("nx", "ny", "order", "r_max")
_OPTIONAL = ("fixed_dt", "p_floor")
_STR = ("problem", "bc_x", "bc_y", "scheme", "output_format")

CSV_COLUMNS = ("x", "y", "rho", "u", "v", "w", "p", "Bx", "By", "Bz", "divB")


def _convert(key, text):
    text = text.strip()
    if key in _STR:
        return text
    if key in _OPTIONAL and text.lower() in ("none", "off", ""):
        return None
    try:
        return int(text) if key in _INT else float(text)
    except ValueError:
        raise ConfigError(f"invalid value for {key!r}: {text!r}") from None


def parse_overrides(pairs):
    """``["nx=64", "cfl=0.5"]`` -> ``{"nx": "64", "cfl": "0.5"}``."""
    out = {}
    for item in pairs:
        if "=" not in item:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def parse_config(text, overrides=None):
    """Build a :class:`ProblemConfig` from configuration text.

    ``overrides`` maps keys to string values and takes precedence over the
    text.  Unknown keys or sections raise :class:`ConfigError`.
    """
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__")
    parser.optionxform = str
    try:
        parser.read_string(f"[{_TOP}]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed configuration: {exc}") from None
    raw = {}
    for section in parser.sections():
        if section != _TOP and section not in SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
        for key, value in parser.items(section):
            if key not in _HOME:
                raise ConfigError(f"unknown key {key!r}")
            if section != _TOP and _HOME[key] != section:
                raise ConfigError(f"key {key!r} belongs in section [{_HOME[key]}]")
            raw[key] = value
    for key, value in (overrides or {}).items():
        if key not in _HOME:
            raise ConfigError(f"unknown key {key!r}")
        raw[key] = value
    if "problem" not in raw:
        raise ConfigError("configuration must name a problem")
    values = {k: _convert(k, v) for k, v in raw.items()}
    problem = values.pop("problem")
    if problem not in PROBLEMS:
        raise ConfigError(f"unknown problem id {problem!r}")
    base = PROBLEMS[problem].defaults
    xlim = list(base.get("xlim", ProblemConfig.xlim))
    ylim = list(base.get("ylim", ProblemConfig.ylim))
    for i, key in enumerate(("x_min", "x_max")):
        if key in values:
            xlim[i] = values.pop(key)
    for i, key in enumerate(("y_min", "y_max")):
        if key in values:
            ylim[i] = values.pop(key)
    prandtl = values.pop("prandtl", None)
    kwargs = dict(values, xlim=tuple(xlim), ylim=tuple(ylim))
    if prandtl is not None:
        if "lambda_c" in values:
            raise ConfigError("set either prandtl or lambda_c, not both")
        cfg = default_config(problem, **kwargs)
        kwargs["lambda_c"] = cfg.mu * cfg.gamma * cfg.c_v / prandtl if prandtl > 0 else 0.0
    return default_config(problem, **kwargs)


def load_config(path, overrides=None):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {str(path)!r}: {exc.strerror}") from None
    return parse_config(text, overrides)


def config_to_text(config):
    """Configuration text that parses back to ``config``."""
    values = asdict(config)
    flat = {"problem": values.pop("problem")}
    xlim, ylim = values.pop("xlim"), values.pop("ylim")
    flat.update(x_min=xlim[0], x_max=xlim[1], y_min=ylim[0], y_max=ylim[1])
    flat.update(values)
    lines = []
    for section, keys in SECTIONS.items():
        lines.append(f"[{section}]")
        for key in keys:
            if key not in flat:
                continue
            value = flat[key]
            lines.append(f"{key} = {'none' if value is None else repr(value) if isinstance(value, float) else value}")
        lines.append("")
    return "\n".join(lines)


def output_dir(default="output"):
    """Output directory, overridable through ``$SEMIMHD_OUTPUT_DIR``."""
    return Path(os.environ.get(OUTPUT_ENV) or default)


# --- snapshots ---------------------------------------------------------------------


@dataclass
class Snapshot:
    """Self-describing solution dump (Gaussian units)."""

    t: float
    mesh: object
    q: np.ndarray
    p: np.ndarray
    bx: np.ndarray | None = None
    by: np.ndarray | None = None
    totals: np.ndarray | None = None
    max_div_b: float = 0.0
    units: str = "Gaussian"

    @classmethod
    def from_state(cls, state, mesh, report=None):
        totals = None if report is None else report.totals
        div = 0.0 if report is None else report.max_div_b
        return cls(state.t, mesh, state.q, state.p, state.bx, state.by, totals, div)

    def cell_columns(self):
        """Flattened cell fields keyed by :data:`CSV_COLUMNS`."""
        q = self.q
        if self.mesh.ndim == 1:
            x = self.mesh.centers
            y = np.zeros_like(x)
            div = np.zeros_like(x)
        else:
            x, y = self.mesh.coordinates()
            div = ct.discrete_div_b(self.bx, self.by, self.mesh.dx, self.mesh.dy)
        rho = q[RHO]
        cols = (x, y, rho, q[MX] / rho, q[MY] / rho, q[MZ] / rho, self.p, q[BX], q[BY], q[BZ], div)
        return {name: np.ravel(c) for name, c in zip(CSV_COLUMNS, cols)}


def _fmt(v):
    return "%.17g" % v


def write_csv(snapshot, path):
    cols = snapshot.cell_columns()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in zip(*(cols[c] for c in CSV_COLUMNS)):
            writer.writerow([_fmt(v) for v in row])


def read_csv_snapshot(path):
    """Columns of a CSV snapshot as float arrays."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    data = np.array(rows, dtype=float).reshape(-1, len(header))
    return {name: data[:, k] for k, name in enumerate(header)}


def write_vtk(snapshot, path):
    """Legacy ASCII ``STRUCTURED_POINTS`` file, x index fastest."""
    mesh = snapshot.mesh
    if mesh.ndim == 1:
        nx, ny = mesh.nx, 1
        origin = (mesh.centers[0], 0.0)
        spacing = (float(mesh.dx[0]), 1.0)
    else:
        nx, ny = mesh.shape
        origin = (mesh.x_centers[0], mesh.y_centers[0])
        spacing = mesh.spacing
    cols = snapshot.cell_columns()

    def ordered(name):
        return np.asarray(cols[name]).reshape(nx, ny).T.ravel()

    lines = [
        "# vtk DataFile Version 3.0",
        f"semimhd snapshot t={_fmt(snapshot.t)} units={snapshot.units}",
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {nx} {ny} 1",
        f"ORIGIN {_fmt(origin[0])} {_fmt(origin[1])} 0",
        f"SPACING {_fmt(spacing[0])} {_fmt(spacing[1])} 1",
        f"POINT_DATA {nx * ny}",
    ]
    for name in ("rho", "p", "divB"):
        lines += [f"SCALARS {name} double 1", "LOOKUP_TABLE default"]
        lines += [_fmt(v) for v in ordered(name)]
    for name, comps in (("velocity", ("u", "v", "w")), ("B", ("Bx", "By", "Bz"))):
        lines.append(f"VECTORS {name} double")
        data = [ordered(c) for c in comps]
        lines += [" ".join(_fmt(v) for v in trip) for trip in zip(*data)]
    Path(path).write_text("\n".join(lines) + "\n")


def write_snapshot(snapshot, path, fmt="csv"):
    """Write ``snapshot`` as ``csv`` or ``vtk``; returns the path."""
    path = Path(path)
    try:
        if fmt == "csv":
            write_csv(snapshot, path)
        elif fmt in ("vtk", "vtk-structured"):
            write_vtk(snapshot, path)
        else:
            raise ConfigError(f"unknown snapshot format {fmt!r}")
    except OSError as exc:
        raise ConfigError(f"cannot write snapshot {str(path)!r}: {exc.strerror}") from None
    return path


# --- manifest ---------------------------------------------------------------------


@dataclass
class RunManifest:
    config: str
    scheme: str
    version: str
    steps: int = 0
    cells: int = 0
    wall_time: float = 0.0
    ok: bool = True
    error: str | None = None
    snapshots: list = field(default_factory=list)

    @property
    def us_per_cell_step(self):
        if self.steps == 0 or self.cells == 0:
            return 0.0
        return 1e6 * self.wall_time / (self.steps * self.cells)

    def to_json(self):
        data = asdict(self)
        data["us_per_cell_step"] = self.us_per_cell_step
        return json.dumps(data, indent=2)

    def write(self, path):
        Path(path).write_text(self.to_json() + "\n")
        return Path(path)

    @classmethod
    def read(cls, path):
        data = json.loads(Path(path).read_text())
        data.pop("us_per_cell_step", None)
        return cls(**data)
