"""Grid study for the viscous shear layer and the resistive current sheet."""

from dataclasses import replace

from semimhd.problems import default_config
from semimhd.verification import _stokes_error


def main():
    for pid in ("shear_layer", "current_sheet"):
        base = default_config(pid)
        prev = None
        print(pid)
        for nx in (50, 100, 200):
            (l1, l2, linf), _ = _stokes_error(replace(base, nx=nx))
            ratio = "" if prev is None else f"  L1 ratio {prev / l1:.2f}"
            print(f"  nx={nx:4d}  L1={l1:.3e}  L2={l2:.3e}  Linf={linf:.3e}{ratio}")
            prev = l1


if __name__ == "__main__":
    main()
