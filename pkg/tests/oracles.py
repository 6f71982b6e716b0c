"""Shared brute-force oracles for the test-suite."""

from fractions import Fraction
from itertools import product
from math import gcd

from blochforms.linalg import inverse
from blochforms.numutil import floor_sqrt


def brute_short_vectors(q, cap):
    """All nonzero x (one per +-pair) with Q[x] <= cap, by box enumeration.

    Box: |x_i| <= sqrt(cap * (G^{-1})_ii), the standard sound bound.
    """
    n = q.n
    ginv = inverse([list(r) for r in q.gram])
    radii = [floor_sqrt(Fraction(cap) * ginv[i][i]) + 1 for i in range(n)]
    den = 1
    for row in q.gram:
        for e in row:
            den = den * e.denominator // gcd(den, e.denominator)
    gi = [[int(e * den) for e in row] for row in q.gram]
    capi = Fraction(cap) * den
    out = set()
    for v in product(*[range(-r, r + 1) for r in radii]):
        if any(v):
            tot = 0
            for i in range(n):
                if v[i]:
                    s = 0
                    gr = gi[i]
                    for j in range(n):
                        if v[j]:
                            s += gr[j] * v[j]
                    tot += v[i] * s
            if tot <= capi:
                out.add(v if next(x for x in v if x) > 0
                        else tuple(-x for x in v))
    return sorted(out)
