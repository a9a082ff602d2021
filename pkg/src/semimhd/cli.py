"""Command line front end: ``semimhd run|list-problems|verify|compare``."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .driver import integrate
from .errors import ConfigError
from .io import RunManifest, Snapshot, config_to_text, load_config, output_dir, parse_overrides, write_snapshot
from .problems import PROBLEMS, build_model, make_initial_state, output_times, problem_ids


def _parser():
    parser = argparse.ArgumentParser(prog="semimhd", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def with_config(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="configuration file")
        p.add_argument("--override", "-o", action="append", default=[], metavar="KEY=VALUE",
                       help="override one configuration key (repeatable)")
        return p

    p = with_config("run", "integrate a problem and write snapshots")
    p.add_argument("--output-dir", help="output directory (default: $SEMIMHD_OUTPUT_DIR or ./output)")
    p.add_argument("--quiet", "-q", action="store_true")
    sub.add_parser("list-problems", help="print the registered problem ids")
    with_config("verify", "run the acceptance checks that apply to a problem")
    p = with_config("compare", "run the semi-implicit and explicit schemes side by side")
    p.add_argument("--max-steps", type=int, default=None, help="cap on steps per scheme")
    return parser


def _config(args):
    return load_config(args.config, parse_overrides(args.override))


def cmd_run(args):
    config = _config(args)
    out = output_dir() if args.output_dir is None else Path(args.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {str(out)!r}: {exc.strerror}") from None
    model = build_model(config)
    ext = "csv" if config.output_format == "csv" else "vtk"
    written = []

    def on_output(state, report):
        name = out / f"{config.problem}_{len(written):04d}.{ext}"
        write_snapshot(Snapshot.from_state(state, model.mesh, report), name, config.output_format)
        written.append(name.name)
        if not args.quiet:
            print(f"t={state.t:.6g} -> {name}")

    state = make_initial_state(config, model.mesh)
    result = integrate(state, model, config.t_final, cfl=config.cfl, scheme=config.scheme,
                       fixed_dt=config.fixed_dt, output_times=output_times(config), on_output=on_output)
    # on failure result.state is the last good state
    on_output(result.state, result.reports[-1] if result.reports else None)
    manifest = RunManifest(config_to_text(config), config.scheme, __version__, result.steps,
                           int(np.prod(model.mesh.shape)), result.wall_time, result.ok,
                           None if result.ok else str(result.error), written)
    manifest.write(out / f"{config.problem}_manifest.json")
    if not args.quiet:
        print(f"{result.steps} steps, {result.wall_time:.2f} s, "
              f"{manifest.us_per_cell_step:.2f} us/cell/step, max|divB| {result.max_div_b():.3e}")
    if not result.ok:
        print(f"error: run stopped at t={result.state.t:.6g}: {result.error}", file=sys.stderr)
        return 1
    return 0


def cmd_list(args):
    for pid in problem_ids():
        print(f"{pid:22s} {PROBLEMS[pid].description}")
    return 0


def cmd_verify(args):
    from .verification import generic_checks, problem_checks

    config = _config(args)
    checks = problem_checks(config) + generic_checks()
    for c in checks:
        print(c.line())
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 0 if failed == 0 else 1


def cmd_compare(args):
    config = _config(args)
    model = build_model(config)
    runs = {}
    for scheme in ("semi-implicit", "explicit-reference"):
        state = make_initial_state(config, model.mesh)
        t0 = time.perf_counter()
        # a fixed step tuned for the semi-implicit scheme is usually unstable for the explicit one
        fixed = config.fixed_dt if scheme == "semi-implicit" else None
        res = integrate(state, model, config.t_final, cfl=config.cfl, scheme=scheme,
                        fixed_dt=fixed, max_steps=args.max_steps)
        runs[scheme] = (res, time.perf_counter() - t0)
    print(f"{'scheme':20s} {'steps':>8s} {'dt min':>12s} {'dt max':>12s} {'wall s':>9s} {'t reached':>10s}")
    for scheme, (res, wall) in runs.items():
        dts = [r.dt for r in res.reports] or [0.0]
        print(f"{scheme:20s} {res.steps:8d} {min(dts):12.4e} {max(dts):12.4e} {wall:9.2f} {res.state.t:10.4g}")
    (si, wsi), (ex, wex) = runs["semi-implicit"], runs["explicit-reference"]
    print(f"step ratio (explicit/semi-implicit): {ex.steps / max(si.steps, 1):.1f}")
    print(f"wall-clock ratio: {wex / max(wsi, 1e-300):.1f}")
    failed = [(s, r.error) for s, (r, _) in runs.items() if not r.ok]
    for scheme, err in failed:
        print(f"error: {scheme} run failed: {err}", file=sys.stderr)
    return 1 if failed else 0


COMMANDS = {"run": cmd_run, "list-problems": cmd_list, "verify": cmd_verify, "compare": cmd_compare}


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
