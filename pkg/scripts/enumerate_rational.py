"""Enumerate rational perfect forms for a range of dimensions.

Usage: python scripts/enumerate_rational.py 2 3 4 5
"""

import sys
import time

from blochforms.field import nf_create
from blochforms.qforms import TSubspace
from blochforms.voronoi import enumerate_perfect, first_perfect_form


def main():
    dims = [int(a) for a in sys.argv[1:]] or [2, 3, 4, 5]
    q = nf_create([0, 1], label="Q")
    for m in dims:
        t0 = time.time()
        t = TSubspace(q, m)
        g = enumerate_perfect(t, a0=first_perfect_form(m), budget=64)
        print("m=%d: %d classes, %d edges, %d dead ends, %.1fs"
              % (m, len(g.classes), len(g.edges), len(g.dead_ends),
                 time.time() - t0))
        for i, cls in enumerate(g.classes):
            print("  class %d: |Min| = %d, det = %s"
                  % (i, len(cls.min_data.vectors), cls.form.det()))


if __name__ == "__main__":
    main()
