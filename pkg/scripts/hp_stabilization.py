"""Print the image-rank history of HP for a few algebras as the truncation grows."""

import argparse
import time

from cyclochern.algebra import direct_power, matrix_units, truncated_polynomial
from cyclochern.homology import hp_dims
from cyclochern.morita import cyclic_group, group_algebra, symmetric_group

ALGEBRAS = {
    "x2": lambda: truncated_polynomial(2),
    "x3": lambda: truncated_polynomial(3),
    "c3": lambda: direct_power(3),
    "m2": lambda: matrix_units(2),
    "z4": lambda: group_algebra(cyclic_group(4)),
    "s3": lambda: group_algebra(symmetric_group(3)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=["x2", "c3", "m2", "z4"],
                    help="any of " + ", ".join(sorted(ALGEBRAS)))
    ap.add_argument("--N", type=int, default=6)
    args = ap.parse_args()
    unknown = set(args.names) - set(ALGEBRAS)
    if unknown:
        ap.error(f"unknown algebra {sorted(unknown)}")
    for name in args.names:
        A = ALGEBRAS[name]()
        t0 = time.perf_counter()
        rep = hp_dims(A, args.N)
        dt = time.perf_counter() - t0
        hist = " ".join(f"{M}:{e}/{o}" for M, (e, o) in sorted(rep.history.items()))
        print(f"{A.name:12s} HP=({rep.even},{rep.odd}) stable={rep.stabilized} "
              f"history[{hist}] {dt:.1f}s")


if __name__ == "__main__":
    main()
