"""Sweep the hypergeometric envelope certificates over the large parameter.

Prints one row per (n, q, certificate) with the observed two-sided constants,
so the q-dependence of the constants can be eyeballed or plotted.

    python3 scripts/certificate_sweep.py --n 2 3 --q 0.5 1 2 5 10 20 50
"""

from __future__ import annotations

import argparse

from calabi_liouville.calabi_ode import HypergeomParams
from calabi_liouville.estimates import (
    certify_caseB,
    certify_product,
    certify_tri_ku_caseA,
    default_y_grid,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--q", type=float, nargs="+", default=[0.5, 1, 2, 5, 10, 20, 50])
    ap.add_argument("--points", type=int, default=64)
    ap.add_argument("--ymax", type=float, default=100.0)
    args = ap.parse_args()

    ys = default_y_grid(1.0, args.ymax, args.points)
    print(f"{'n':>2} {'q':>7} {'certificate':<22} {'lower':>12} {'upper':>12} pass")
    for n in args.n:
        for q in args.q:
            p = HypergeomParams.from_q(n, q)
            certs = []
            if q >= 1.0:
                certs += [certify_tri_ku_caseA(p, ys), certify_product(p, ys)]
            if q <= 1.0:
                certs.append(certify_caseB(p, ys))
            for cert in certs:
                for part in (cert, *cert.parts):
                    print(
                        f"{n:>2} {q:>7g} {part.name:<22} {part.observed_lower_const:>12.5g} "
                        f"{part.observed_upper_const:>12.5g} {part.passed}"
                    )


if __name__ == "__main__":
    main()
