"""Time step count of the semi-implicit scheme against the explicit reference.

The field loop moves at Mach ~0.006, so the acoustic CFL limit of a fully
explicit scheme is a couple of hundred times tighter than the convective one.
"""

import argparse
from dataclasses import replace

from semimhd.driver import run
from semimhd.problems import default_config


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nx", type=int, default=64)
    ap.add_argument("--t-final", type=float, default=0.02)
    args = ap.parse_args()

    config = default_config("field_loop", nx=args.nx, ny=args.nx // 2, t_final=args.t_final)
    rows = []
    for scheme in ("semi-implicit", "explicit-reference"):
        res = run(replace(config, scheme=scheme))
        rows.append((scheme, res.steps, res.wall_time, res.max_div_b()))
        print(f"{scheme:20s} steps={res.steps:6d} wall={res.wall_time:7.2f}s max|divB|={res.max_div_b():.2e}")
    print(f"step ratio {rows[1][1] / rows[0][1]:.0f}, wall-clock ratio {rows[1][2] / rows[0][2]:.0f}")


if __name__ == "__main__":
    main()
