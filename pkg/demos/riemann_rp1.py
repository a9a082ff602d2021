"""Brio-Wu type shock tube (rp1) with the semi-implicit scheme.

Prints a coarse profile of rho and By at the final time and the audited
conservation drift.  Pass ``--csv out.csv`` to keep the full snapshot.
"""

import argparse

import numpy as np

from semimhd.driver import run
from semimhd.io import Snapshot, write_snapshot
from semimhd.problems import default_config, make_mesh
from semimhd.state import BY, RHO


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nx", type=int, default=1000)
    ap.add_argument("--csv")
    args = ap.parse_args()

    config = default_config("rp1", nx=args.nx)
    res = run(config)
    if not res.ok:
        raise SystemExit(f"run failed: {res.error}")
    q = res.state.q
    x = make_mesh(config).centers
    print(f"t = {res.state.t:.4f} after {res.steps} steps ({res.wall_time:.2f} s)")
    print(f"{'x':>8s} {'rho':>10s} {'By':>10s}")
    for i in np.linspace(0, config.nx - 1, 21).astype(int):
        print(f"{x[i]:8.3f} {q[RHO][i]:10.5f} {q[BY][i]:10.5f}")
    print("max relative conservation drift:", float(np.max(res.conservation_drift())))
    if args.csv:
        write_snapshot(Snapshot.from_state(res.state, make_mesh(config)), args.csv)


if __name__ == "__main__":
    main()
