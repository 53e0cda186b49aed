"""Measured Wronskian of the fundamental pair against its closed form.

For random admissible modes, print the relative spread of the finite-difference
Wronskian over z and its deviation from the closed-form constant.
"""

from __future__ import annotations

import argparse

import numpy as np

from calabi_liouville.calabi_ode import Mode, fundamental_pair, wronskian_fd


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--modes", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--zmax", type=float, default=20.0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    zs = np.geomspace(1.0, args.zmax, 25)
    print(f"{'n':>2} {'j':>2} {'lambda':>9} {'closed form':>14} {'rel std':>10} {'rel dev':>10}")
    for _ in range(args.modes):
        n = int(rng.integers(2, 5))
        j = int(rng.integers(0, 4))
        lam = (n - 1) * j / 2.0 + float(rng.uniform(0.2, 15.0))
        pair = fundamental_pair(Mode(1, j, lam), n)
        ws = np.array([wronskian_fd(pair, z) for z in zs])
        spread = np.std(ws) / abs(np.mean(ws))
        dev = np.max(np.abs(ws / pair.w_const - 1.0))
        print(f"{n:>2} {j:>2} {lam:>9.4f} {pair.w_const:>14.7g} {spread:>10.2e} {dev:>10.2e}")


if __name__ == "__main__":
    main()
