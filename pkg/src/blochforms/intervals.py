"""Certified real/complex interval arithmetic.

Thin layer over mpmath's interval context (`mpmath.iv`), which implements
outward-rounded endpoint arithmetic.  All analytic quantities in the
package (embeddings, dilogarithms, zeta values, volumes) flow through
these wrappers so that every reported number carries a rigorous enclosure.

Precision is the mpmath working precision in bits; callers pass it
explicitly and we scope it with `set_prec`.
"""

from fractions import Fraction

from mpmath import iv, mp
from mpmath.libmp import from_man_exp, to_rational

GUARD_BITS = 16


def set_prec(bits):
    iv.prec = bits + GUARD_BITS
    mp.prec = bits + GUARD_BITS


def riv(x):
    """Build an interval from int / Fraction / float / existing interval."""
    if isinstance(x, RIv):
        return x
    if isinstance(x, Fraction):
        return RIv(iv.mpf(x.numerator) / iv.mpf(x.denominator))
    return RIv(iv.mpf(x))


def riv_between(lo, hi):
    """Interval [lo, hi] from Fractions, outward rounded."""
    lo, hi = Fraction(lo), Fraction(hi)
    a = iv.mpf(lo.numerator) / iv.mpf(lo.denominator)
    b = iv.mpf(hi.numerator) / iv.mpf(hi.denominator)
    return RIv(iv.mpf([a.a, b.b]))


class RIv:
    """A real interval; arithmetic is outward rounded, containment certified."""

    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __add__(self, o):
        return RIv(self.v + riv(o).v)

    __radd__ = __add__

    def __sub__(self, o):
        return RIv(self.v - riv(o).v)

    def __rsub__(self, o):
        return RIv(riv(o).v - self.v)

    def __mul__(self, o):
        return RIv(self.v * riv(o).v)

    __rmul__ = __mul__

    def __truediv__(self, o):
        return RIv(self.v / riv(o).v)

    def __rtruediv__(self, o):
        return RIv(riv(o).v / self.v)

    def __neg__(self):
        return RIv(-self.v)

    def __abs__(self):
        return RIv(abs(self.v))

    def __pow__(self, k):
        return RIv(self.v ** k)

    def sqrt(self):
        return RIv(iv.sqrt(self.v))

    def log(self):
        return RIv(iv.log(self.v))

    def exp(self):
        return RIv(iv.exp(self.v))

    def lo(self):
        p, q = to_rational(self.v._mpi_[0])
        return Fraction(int(p), int(q))

    def hi(self):
        p, q = to_rational(self.v._mpi_[1])
        return Fraction(int(p), int(q))

    def mid(self):
        return (self.lo() + self.hi()) / 2

    def width(self):
        return self.hi() - self.lo()

    def contains(self, x):
        return self.lo() <= Fraction(x) <= self.hi()

    def contains_interval(self, other):
        return self.lo() <= other.lo() and other.hi() <= self.hi()

    def overlaps(self, other):
        return not (self.hi() < other.lo() or other.hi() < self.lo())

    def intersect(self, other):
        lo = max(self.lo(), other.lo())
        hi = min(self.hi(), other.hi())
        if lo > hi:
            raise ValueError("empty interval intersection")
        return riv_between(lo, hi)

    def is_positive(self):
        return self.lo() > 0

    def is_negative(self):
        return self.hi() < 0

    def hull(self, other):
        return RIv(iv.mpf([min(self.v.a, other.v.a), max(self.v.b, other.v.b)]))

    def __repr__(self):
        return "RIv(%s)" % self.v

    def __float__(self):
        return float(self.mid())


def pi_interval():
    return RIv(iv.pi)


def atan2_interval(y, x):
    return RIv(iv.atan2(riv(y).v, riv(x).v))


class CIv:
    """Complex interval as a rectangle (re, im), built on RIv."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = riv(re)
        self.im = riv(im)

    def __add__(self, o):
        o = civ(o)
        return CIv(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = civ(o)
        return CIv(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return civ(o) - self

    def __mul__(self, o):
        o = civ(o)
        return CIv(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = civ(o)
        d = o.re * o.re + o.im * o.im
        return CIv((self.re * o.re + self.im * o.im) / d,
                   (self.im * o.re - self.re * o.im) / d)

    def __neg__(self):
        return CIv(-self.re, -self.im)

    def conj(self):
        return CIv(self.re, -self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return self.abs2().sqrt()

    def contains_zero(self):
        return self.re.contains(0) and self.im.contains(0)

    def log_abs(self):
        return RIv(iv.log(self.abs2().v)) * Fraction(1, 2)

    def arg(self):
        """Principal argument; requires the rectangle to avoid the origin."""
        if self.contains_zero():
            raise ValueError("argument of an interval containing 0")
        return atan2_interval(self.im, self.re)

    def width(self):
        return max(self.re.width(), self.im.width())

    def __repr__(self):
        return "CIv(%r, %r)" % (self.re, self.im)


def civ(x):
    if isinstance(x, CIv):
        return x
    if isinstance(x, complex):
        return CIv(riv(x.real), riv(x.imag))
    return CIv(riv(x), riv(0))
