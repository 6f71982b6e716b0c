"""Exact integer and rational helpers shared across the package.

Everything here is deterministic and allocation-light: these routines sit
inside the innermost loops of the lattice enumeration and the polyhedral
conversions.
"""

from fractions import Fraction
from math import gcd, isqrt


def floor_sqrt(fr):
    """Largest integer t with t*t <= fr, for a nonnegative Fraction."""
    if fr < 0:
        raise ValueError("negative radicand")
    n, d = fr.numerator, fr.denominator
    # floor(sqrt(n/d)) = floor(sqrt(n*d)/d)
    return isqrt(n * d) // d


def floor_plus_sqrt(c, r):
    """floor(c + sqrt(r)) for Fractions c and r >= 0, exactly."""
    if r < 0:
        # Guard against tiny negative r from callers; treat as 0.
        if -r < Fraction(1, 10**30):
            r = Fraction(0)
        else:
            raise ValueError("negative radicand")
    t = int(c) + floor_sqrt(r) + 2
    while not _le_sqrt(t, c, r):
        t -= 1
    return t


def ceil_minus_sqrt(c, r):
    """ceil(c - sqrt(r)) for Fractions c and r >= 0, exactly."""
    return -floor_plus_sqrt(-c, r)


def _le_sqrt(t, c, r):
    """Decide t <= c + sqrt(r) exactly."""
    lhs = t - c
    if lhs <= 0:
        return True
    return lhs * lhs <= r


def primes_upto(n):
    """Prime sieve, ascending list."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i in range(2, n + 1) if sieve[i]]


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin for n < 3.3e24 (fixed base set)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n):
    if n % 2 == 0:
        return 2
    x, c = 2, 1
    while True:
        y, d = x, 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d
        x, c = 2, c + 1


def factorint(n):
    """Factor a positive integer into {prime: exponent}."""
    if n <= 0:
        raise ValueError("factorint wants a positive integer")
    out = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return out


def bernoulli_numbers(count):
    """First `count` Bernoulli numbers B_0..B_{count-1} (B_1 = -1/2), exact."""
    # Akiyama-Tanigawa scheme over Fractions.
    out = []
    a = []
    for m in range(count):
        a.append(Fraction(1, m + 1))
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    if count > 1:
        out[1] = Fraction(-1, 2)
    return out


def vec_content(v):
    """gcd of an integer vector, 0 for the zero vector."""
    g = 0
    for x in v:
        g = gcd(g, abs(x))
        if g == 1:
            return 1
    return g


def primitive_signed(v):
    """Scale a rational/integer vector by a positive rational to primitive
    integer form, preserving direction (for rays and inequality functionals)."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = vec_content(ints)
    if g == 0:
        return tuple(0 for _ in ints)
    return tuple(x // g for x in ints)


def primitive_vector(v):
    """Primitive integer vector with canonical sign (first nonzero positive).

    Only for data where v and -v are equivalent (lines, +- vector pairs).
    """
    ints = list(primitive_signed(v))
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    return tuple(ints)


def lcm(a, b):
    return a * b // gcd(a, b)
