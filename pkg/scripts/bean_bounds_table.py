#!/usr/bin/env python3
"""Table of lower bounds on min x1 over the bean's relaxed hulls.

The true minimum of x1 over the convex hull is 0 (the triple point at the
origin is the leftmost point of the curve); the relaxations approach it
from below as the order grows.

Usage: python3 scripts/bean_bounds_table.py [max_order]
"""

import sys
import time

from quartichull import curves, relaxation


def main():
    max_order = int(sys.argv[1]) if len(sys.argv) > 1 else 8
    bean = curves.lookup("bean")
    print("k;bound;status;seconds")
    for k in range(2, max_order + 1):
        t0 = time.time()
        rows = relaxation.minimize_linear(bean.implicit, (1.0, 0.0), [k])
        _, bound, status = rows[0]
        shown = "" if bound is None else f"{bound:.12g}"
        print(f"{k};{shown};{status};{time.time() - t0:.2f}")


if __name__ == "__main__":
    main()
