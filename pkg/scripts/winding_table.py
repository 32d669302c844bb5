"""Winding numbers of u^k on the circle via both routes, with the 2*pi*i bookkeeping."""

import argparse

from cyclochern.algebra import AlgMatrix
from cyclochern.derham import CIRCLE, CIRCLE_NORMALIZED, compare_cq_cw
from cyclochern.presented import laurent


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=3)
    args = ap.parse_args()
    L = laurent()
    for k in range(-args.kmax, args.kmax + 1):
        g = AlgMatrix.from_rows(L, [[L.parse(f"u^{k}")]])
        rep = compare_cq_cw(g, CIRCLE_NORMALIZED, tau_cq=CIRCLE, N=0)
        print(f"k={k:+d}  cw={rep.cw_value}  cq={rep.cq_value}  ok={rep.ok}")


if __name__ == "__main__":
    main()
