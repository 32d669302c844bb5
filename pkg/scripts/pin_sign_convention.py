"""Pair the Bott projection with the sphere current under both sign conventions.

The convention that yields the same integer on the Connes-Quillen and the
Chern-Weil routes, and whose chain is a periodic cycle, is the default.
"""

import argparse

from cyclochern.algebra import AlgMatrix
from cyclochern.chern import ch_cq_even, verify_cycle
from cyclochern.derham import SPHERE, compare_cq_cw
from cyclochern.presented import sphere


def bott(S):
    return AlgMatrix.from_rows(S, [[S.parse("1/2 + z/2"), S.parse("(x - i*y)/2")],
                                   [S.parse("(x + i*y)/2"), S.parse("1/2 - z/2")]])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=2, help="highest even degree is 2N")
    args = ap.parse_args()
    S = sphere()
    e = bott(S)
    for name, flag in (("plain", False), ("alternating", True)):
        rep = compare_cq_cw(e, SPHERE, N=1, alternating_sign=flag)
        cyc = verify_cycle(ch_cq_even(e, args.N, flag), S)
        print(f"{name:12s} cw={rep.cw_value!s:>3} cq={rep.cq_value!s:>3} "
              f"agree={rep.ok} cycle={cyc}")


if __name__ == "__main__":
    main()
