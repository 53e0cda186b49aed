"""Recover the decay rate of zero-weight modes from sampled values.

Samples the decaying solution of each mode on the window where the Bessel
argument runs over [xmin, xmax], fits log|u| against z^(n/2), and compares
the fitted rate with 2 sqrt(lambda/n).
"""

from __future__ import annotations

import argparse
import math

import numpy as np

from calabi_liouville.calabi_ode import Mode, fundamental_pair
from calabi_liouville.poisson import decompose_harmonic
from calabi_liouville.spectral import CalabiParams


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--lam", type=float, nargs="+", default=[1.0, 2.0, 5.0, 20.0])
    ap.add_argument("--xmin", type=float, default=10.0)
    ap.add_argument("--xmax", type=float, default=50.0)
    ap.add_argument("--points", type=int, default=40)
    args = ap.parse_args()

    print(f"{'n':>2} {'lambda':>7} {'expected':>10} {'fitted':>10} {'rel dev':>9}")
    for n in args.n:
        params = CalabiParams(n, 1.0, min(args.lam), 1.0)
        for lam in args.lam:
            mode = Mode(1, 0, lam)
            rate = 2.0 * math.sqrt(lam / n)
            zs = np.linspace((args.xmin / rate) ** (2.0 / n), (args.xmax / rate) ** (2.0 / n), args.points)
            pair = fundamental_pair(mode, n)
            vals = [pair.eval_D(z).to_float() for z in zs]
            res = decompose_harmonic([(Mode(0, 0, 0.0), zs, np.zeros_like(zs)), (mode, zs, vals)], params)
            dev = res.decay_exponent / rate - 1.0
            print(f"{n:>2} {lam:>7g} {rate:>10.5f} {res.decay_exponent:>10.5f} {dev:>9.2e}")


if __name__ == "__main__":
    main()
