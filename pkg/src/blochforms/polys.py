"""Univariate polynomial arithmetic over Q, plus Sturm-based real root tools.

Polynomials are coefficient lists, lowest degree first, Fractions inside.
"""

from fractions import Fraction
from math import gcd

from .numutil import factorint


def trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def padd(p, q):
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return trim(out)


def pneg(p):
    return [-c for c in p]


def pmul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    out[i + j] += a * b
    return trim(out)


def pdivmod(p, q):
    p = [Fraction(c) for c in p]
    q = [Fraction(c) for c in q]
    if not q:
        raise ZeroDivisionError
    quot = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    while len(p) >= len(q) and p:
        c = p[-1] / q[-1]
        k = len(p) - len(q)
        quot[k] = c
        for i, b in enumerate(q):
            p[i + k] -= c * b
        trim(p)
    return trim(quot), p


def pmod(p, q):
    return pdivmod(p, q)[1]


def deriv(p):
    return [i * c for i, c in enumerate(p)][1:]


def peval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def peval_generic(p, x, zero):
    """Horner over any ring given its zero (used for intervals, field elts)."""
    acc = zero
    for c in reversed(p):
        acc = acc * x + c
    return acc


def sturm_chain(p):
    chain = [[Fraction(c) for c in p], deriv([Fraction(c) for c in p])]
    while chain[-1]:
        r = pneg(pmod(chain[-2], chain[-1]))
        if not r:
            break
        chain.append(r)
    return chain


def _sign_changes(chain, x):
    signs = []
    for q in chain:
        v = peval(q, x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p, lo=None, hi=None):
    """Number of distinct real roots in (lo, hi]; whole line by default."""
    chain = sturm_chain(p)
    if lo is None:
        bound = cauchy_bound(p)
        lo, hi = -bound, bound
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def cauchy_bound(p):
    lead = abs(p[-1])
    m = max((abs(c) for c in p[:-1]), default=Fraction(0))
    return Fraction(1) + m / lead


def isolate_real_roots(p):
    """Disjoint rational intervals (a, b], one distinct real root each."""
    chain = sturm_chain(p)
    bound = cauchy_bound(p)
    out = []

    def recurse(a, b, count):
        if count == 0:
            return
        if count == 1:
            out.append((a, b))
            return
        m = (a + b) / 2
        cl = _sign_changes(chain, a) - _sign_changes(chain, m)
        recurse(a, m, cl)
        recurse(m, b, count - cl)

    total = _sign_changes(chain, -bound) - _sign_changes(chain, bound)
    recurse(-bound, bound, total)
    return sorted(out)


def squarefree_part_int(n):
    """Squarefree kernel of a nonzero integer, keeping the sign."""
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return sign * out


def cyclotomic_poly(k):
    """Phi_k as an integer coefficient list."""
    # x^k - 1 divided by Phi_d for proper divisors d.
    p = [Fraction(-1)] + [Fraction(0)] * (k - 1) + [Fraction(1)]
    for d in range(1, k):
        if k % d == 0:
            q, r = pdivmod(p, cyclotomic_poly(d))
            assert not r
            p = q
    return p


def int_coeffs(p):
    out = []
    for c in p:
        c = Fraction(c)
        if c.denominator != 1:
            raise ValueError("non-integer coefficient")
        out.append(c.numerator)
    return out


def poly_content_primitive(p):
    """Integer content and primitive part of an integer polynomial."""
    ints = int_coeffs(p)
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    if g == 0:
        return 0, []
    return g, [c // g for c in ints]


# --- irreducibility over Q (monic integer input) ---------------------------

def _poly_mod_p(coeffs, p):
    return [c % p for c in coeffs]


def _pm_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pm_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pm_trim(out)


def _pm_mod(a, m, p):
    a = list(a)
    inv = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv % p
        k = len(a) - len(m)
        for i, y in enumerate(m):
            a[i + k] = (a[i + k] - c * y) % p
        _pm_trim(a)
    return a


def _pm_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pm_mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _pm_powmod(base, e, m, p):
    result = [1]
    base = _pm_mod(list(base), m, p)
    while e:
        if e & 1:
            result = _pm_mod(_pm_mul(result, base, p), m, p)
        base = _pm_mod(_pm_mul(base, base, p), m, p)
        e >>= 1
    return result


def factor_degrees_mod_p(f, p):
    """Multiset of irreducible factor degrees of a squarefree f mod p."""
    f = _pm_trim(_poly_mod_p(f, p))
    n = len(f) - 1
    fp = _pm_trim([(i * c) % p for i, c in enumerate(f)][1:])
    if _pm_gcd(f, fp, p):
        g = _pm_gcd(f, fp, p)
        if len(g) > 1:
            return None  # not squarefree mod p
    degrees = []
    rem = list(f)
    d = 0
    while len(rem) - 1 > 0:
        d += 1
        if 2 * d > len(rem) - 1:
            degrees.append(len(rem) - 1)
            break
        xq = _pm_powmod([0, 1], p ** d, rem, p)
        g = _pm_gcd(padd_mod(xq, [0, p - 1], p), rem, p)
        while len(g) > 1:
            degrees.extend([d] * ((len(g) - 1) // d))
            rem = _pm_quot(rem, g, p)
            xq = _pm_mod(xq, rem, p) if len(rem) > 1 else []
            if len(rem) - 1 == 0:
                break
            g = _pm_gcd(padd_mod(xq, [0, p - 1], p), rem, p) if rem else []
    return sorted(degrees)


def padd_mod(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = (out[i] + c) % p
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _pm_trim(out)


def _pm_quot(a, b, p):
    a = list(a)
    inv = pow(b[-1], p - 2, p)
    quot = [0] * (len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        k = len(a) - len(b)
        quot[k] = c
        for i, y in enumerate(b):
            a[i + k] = (a[i + k] - c * y) % p
        _pm_trim(a)
    return quot


def is_irreducible(f):
    """Exact irreducibility over Q for a monic integer polynomial.

    Strategy: accept if irreducible mod some small prime; otherwise combine
    mod-p factor patterns to rule out factor degrees, with a complete
    integer factor search for degree <= 4.  Raises ValueError when the
    answer cannot be certified (degree > 4 pattern ambiguity).
    """
    coeffs = int_coeffs(f)
    n = len(coeffs) - 1
    if n <= 1:
        return n == 1
    if coeffs[0] == 0:
        return False
    # rational (hence integer) roots
    for d in _divisors_signed(coeffs[0]):
        if peval([Fraction(c) for c in coeffs], Fraction(d)) == 0:
            return False
    if n <= 3:
        return True
    possible = set(range(1, n))
    from .numutil import primes_upto

    for p in primes_upto(200):
        degs = factor_degrees_mod_p(coeffs, p)
        if degs is None:
            continue
        if degs == [n]:
            return True
        reachable = {0}
        for d in degs:
            reachable |= {r + d for r in reachable}
        possible &= {d for d in reachable if 0 < d < n}
        if not possible:
            return True
    if n == 4:
        # candidate quadratic factors x^2+ax+b with b | f0
        f0, f1, f2, f3 = coeffs[0], coeffs[1], coeffs[2], coeffs[3]
        for b in _divisors_signed(f0):
            if f0 % b:
                continue
            d = f0 // b
            # a+c = f3, ac = f2-b-d, ad+bc = f1
            s, q = f3, f2 - b - d
            disc = s * s - 4 * q
            if disc < 0:
                continue
            r = int(disc ** 0.5)
            while r * r < disc:
                r += 1
            while r * r > disc:
                r -= 1
            if r * r != disc:
                continue
            for a in ((s + r) // 2, (s - r) // 2):
                c = s - a
                if a + c == f3 and a * c == q and a * d + b * c == f1:
                    return False
        return True
    raise ValueError("cannot certify irreducibility at this degree")


def _divisors_signed(n):
    n = abs(n)
    if n == 0:
        return []
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.update({d, -d, n // d, -(n // d)})
        d += 1
    return sorted(out, key=abs)
