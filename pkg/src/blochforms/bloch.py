"""Pre-Bloch elements, cross-ratios, the wedge map, and exact verification.

A pre-Bloch element is an integer combination of [x], x in F \\ {0, 1}.
Its image under delta_2 is sum n_k (1-x_k) wedge~ x_k in the modified wedge
square of F^* modulo {+-1} wedge~ F^*; vanishing is decided exactly by
factoring every argument over a prime-and-unit basis of F^* (class number
one), with torsion bookkeeping for the mu wedge~ prime coordinates.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .cells import cusp_lift, extended_gcd
from .numutil import factorint
from .polys import cyclotomic_poly, peval_generic


class PreBlochElement:
    """Finite integer combination of [x], x in F-flat; like terms merged."""

    __slots__ = ("field", "terms")

    def __init__(self, field, terms=()):
        self.field = field
        acc = {}
        for x, c in terms:
            x = field.coerce(x)
            if not c:
                continue
            if not x or x == field.one():
                raise ValueError("pre-Bloch argument must avoid 0 and 1")
            key = x.coords
            acc[key] = acc.get(key, 0) + int(c)
        self.terms = {k: v for k, v in sorted(acc.items()) if v}

    def items(self):
        return [(self.field.element(k), v) for k, v in self.terms.items()]

    def __add__(self, other):
        assert self.field is other.field
        return PreBlochElement(self.field, self.items() + other.items())

    def scale(self, c):
        return PreBlochElement(self.field, [(x, v * c) for x, v in self.items()])

    def __neg__(self):
        return self.scale(-1)

    def __eq__(self, other):
        return isinstance(other, PreBlochElement) and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return "PreBloch(%d terms)" % len(self.terms)


@dataclass
class WedgeElement:
    """Formal sum of a wedge~ b before reduction."""
    field: object
    pairs: tuple  # ((a, b, coeff), ...)

    def __add__(self, other):
        return WedgeElement(self.field, self.pairs + other.pairs)

    def scale(self, c):
        return WedgeElement(self.field, tuple((a, b, c * k) for a, b, k in self.pairs))

    def __neg__(self):
        return self.scale(-1)


def cr3(field, cusps):
    """Cross-ratio of four cusps; None for degenerate tuples (value 0).

    Normalized so that (inf, 0, 1, x) evaluates to x: the determinant
    pairing is det(v0 v2) det(v1 v3) / (det(v0 v3) det(v1 v2)).  The value
    is independent of the lifts since each vertex appears once in the
    numerator and once in the denominator.
    """
    v = [cusp_lift(field, c) for c in cusps]

    def dt(i, j):
        return v[i][0] * v[j][1] - v[i][1] * v[j][0]

    d03, d12, d02, d13 = dt(0, 3), dt(1, 2), dt(0, 2), dt(1, 3)
    if not d03 or not d12:
        return None
    val = (d02 * d13) / (d03 * d12)
    if not val or val == field.one():
        return None
    return val


def cr2(field, p0, p1, p2):
    """cr_2(p0,p1,p2) = a wedge~ b where (p0 p1)^{-1} p2 = (a, b)^T.

    Inputs are lifted vectors in F^2; degenerate triples give the zero
    wedge element.
    """
    det = p0[0] * p1[1] - p0[1] * p1[0]
    if not det:
        return WedgeElement(field, ())
    a = (p2[0] * p1[1] - p2[1] * p1[0]) / det
    b = (p0[0] * p2[1] - p0[1] * p2[0]) / det
    if not a or not b:
        return WedgeElement(field, ())
    return WedgeElement(field, ((a, b, 1),))


def delta2(element):
    """delta_2: [x] -> (1-x) wedge~ x, extended additively."""
    f = element.field
    pairs = []
    for x, c in element.items():
        pairs.append((f.one() - x, x, c))
    return WedgeElement(f, tuple(pairs))


def five_term_element(field, x, y):
    """[x]-[y]+[y/x]-[(1-1/x)/(1-1/y)]+[(1-x)/(1-y)], all in F-flat."""
    x, y = field.coerce(x), field.coerce(y)
    one = field.one()
    if not x or not y or x == one or y == one or x == y:
        raise ValueError("five-term needs x != y both in F-flat")
    args = [
        (x, 1), (y, -1), (y / x, 1),
        ((one - one / x) / (one - one / y), -1),
        ((one - x) / (one - y), 1),
    ]
    for a, _ in args:
        if not a or a == one:
            raise ValueError("degenerate five-term configuration")
    return PreBlochElement(field, args)


def c_f_element(field, x):
    """c_F = [x] + [1-x]."""
    x = field.coerce(x)
    return PreBlochElement(field, [(x, 1), (field.one() - x, 1)])


# --- exact wedge reduction ----------------------------------------------------


class FactorBasis:
    """Multiplicative basis of the subgroup of F^* generated by the seen
    elements: the torsion generator, optional fundamental units, and primes.

    Exact for class-number-one fields with finite unit group (imaginary
    quadratic, Q); for Q(zeta_5) the bundled cyclotomic unit 1+zeta is a
    fundamental unit, which makes the reduction exact there as well.
    """

    def __init__(self, field):
        self.field = field
        self.torsion_order = field.mu_order
        self.units = []  # infinite-order unit generators
        if field.n == 4 and _is_zeta5(field):
            z = field.gen()
            self.units = [field.one() + z]
        elif field.r1 + field.r2 - 1 > 0:
            raise NotImplementedError(
                "exact wedge reduction needs a known unit basis for this field")
        self.primes = []       # canonical prime generators, in discovery order
        self._prime_index = {}

    def exponents(self, x):
        """(torsion exponent, unit exponents, {prime index: exponent})."""
        f = self.field
        if f.n == 4:
            u, uexp, primes = _factor_zeta5(f, x, self.units[0])
        else:
            u, primes = f.factor_element(x)
            uexp = []
        tors = _torsion_exponent(f, u)
        out = {}
        for g, e in primes:
            key = g.coords
            if key not in self._prime_index:
                self._prime_index[key] = len(self.primes)
                self.primes.append(g)
            out[self._prime_index[key]] = e
        return tors, uexp, out


def _torsion_exponent(field, u):
    v = field.one()
    for k in range(field.mu_order):
        if v == u:
            return k
        v = v * field.mu_gen
    raise ArithmeticError("element is not a torsion unit")


def _is_zeta5(field):
    return tuple(field.min_poly) == (1, 1, 1, 1, 1)


def _factor_zeta5(field, x, eps):
    """Factor x in Q(zeta_5)^*: (torsion unit, [eps exponent], [(prime, e)]).

    Primes over p via the cyclotomic splitting law and Euclidean gcds; the
    leftover unit is resolved against the cyclotomic unit eps = 1 + zeta
    by a logarithmic exponent estimate verified exactly.
    """
    x = field.coerce(x)
    if not x:
        raise ZeroDivisionError
    den = x.denominator()
    y = x * den
    nm = abs(int(y.norm()))
    ps = set(factorint(nm)) if nm != 1 else set()
    if den != 1:
        ps |= set(factorint(den))
    found = []
    for p in sorted(ps):
        for g, e, f in _primes_over_zeta5(field, p):
            v = _val(field, y, g) - e * _intval(den, p)
            if v:
                found.append((g, v))
    u = x
    for g, v in found:
        u = u / g ** v
    # resolve u = torsion * eps^b via the first embedding's magnitude
    b = _unit_exponent(field, u, eps)
    tors = u / eps ** b
    for t in field.torsion_units():
        if t == tors:
            return t, [b], sorted(found, key=lambda gv: gv[0].coords)
    raise ArithmeticError("unit not generated by torsion and 1+zeta")


def _unit_exponent(field, u, eps):
    import math
    if abs(u.norm()) != 1:
        raise ArithmeticError("not a unit")
    eu = field.embed(u, 0, 80)
    ee = field.embed(eps, 0, 80)
    lu = math.log(float(abs(eu).mid()))
    le = math.log(float(abs(ee).mid()))
    b = 0 if abs(lu) < 1e-12 else round(lu / le)
    for cand in (b, b - 1, b + 1):
        t = u / eps ** cand
        if any(t == tu for tu in field.torsion_units()):
            return cand
    raise ArithmeticError("unit exponent resolution failed")


def _primes_over_zeta5(field, p):
    cache = getattr(field, "_z5_prime_cache", None)
    if cache is None:
        cache = {}
        field._z5_prime_cache = cache
    if p in cache:
        return cache[p]
    z = field.gen()
    if p == 5:
        out = [(_canon(field, field.one() - z), 4, 1)]
    elif p % 5 == 1:
        g = _primitive_root(p)
        r = pow(g, (p - 1) // 5, p)
        roots = sorted(pow(r, k, p) for k in range(1, 5))
        out = []
        for rt in roots:
            gg, _, _ = extended_gcd(field, field.coerce(p), z - field.coerce(rt))
            out.append((_canon(field, gg), 1, 1))
    elif p % 5 == 4:
        # Phi_5 = prod of two quadratics x^2 - c x + 1, c = zeta + 1/zeta mod p,
        # where c solves c^2 + c - 1 = 0 mod p
        from .field import _mod_sqrt
        r = _mod_sqrt(5 % p, p)
        out = []
        for sgn in (1, -1):
            c = (-1 + sgn * r) * pow(2, p - 2, p) % p
            elt = z * z - field.coerce(c) * z + field.one()
            gg, _, _ = extended_gcd(field, field.coerce(p), elt)
            out.append((_canon(field, gg), 1, 2))
    else:
        out = [(field.coerce(p), 1, 4)]
    seen = {}
    for g, e, f in out:
        seen[g.coords] = (g, e, f)
    out = sorted(seen.values(), key=lambda gef: gef[0].coords)
    cache[p] = out
    return out


def _canon(field, g):
    cands = [(u * g) for u in field.torsion_units()]
    return min(cands, key=lambda e: e.coords)


def _primitive_root(p):
    fac = factorint(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in fac):
            return g
    raise ArithmeticError


def _val(field, y, g):
    v = 0
    cur = y
    while True:
        nxt = cur / g
        if nxt.is_integral():
            v += 1
            cur = nxt
        else:
            return v


def _intval(m, p):
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


@dataclass
class WedgeResidue:
    """Reduced coordinates of a wedge element mod {+-1} wedge~ F^*."""
    zero: bool
    prime_pairs: dict      # (i, j) i<j -> int
    torsion_parts: dict    # generator index -> residue mod torsion_order/2
    torsion_modulus: int
    basis_labels: list

    def __bool__(self):
        return not self.zero


def wedge_reduce(wedge):
    """Exact reduction of a wedge element; certifies vanishing mod nu = {+-1}.

    Coordinates: g_i wedge~ g_j (i < j) over Z for the free generators, and
    mu wedge~ g_j over Z/(t/2) where t = |mu_F| (the class of (-1) wedge~ x
    dies in the nu-quotient).  g wedge~ g reduces to (-1) wedge~ g.
    """
    f = wedge.field
    basis = FactorBasis(f)
    t = basis.torsion_order
    half_t = t // 2
    nunits = len(basis.units)

    def expo(x):
        tors, uexp, primes = basis.exponents(x)
        vec = {0: tors}
        for k, e in enumerate(uexp):
            if e:
                vec[1 + k] = e
        for idx, e in primes.items():
            if e:
                vec[1 + nunits + idx] = e
        return vec

    pair_coords = {}
    tors_coords = {}

    def add_pair(i, j, c):
        if not c:
            return
        if i == j:
            # g wedge~ g = (-1) wedge~ g = (t/2) (mu wedge~ g)
            if i == 0:
                return  # mu wedge~ mu = (-1) wedge~ mu == 0 mod nu
            tors_coords[i] = (tors_coords.get(i, 0) + c * half_t) % half_t \
                if half_t else 0
            return
        if i > j:
            i, j, c = j, i, -c
        if i == 0:
            tors_coords[j] = (tors_coords.get(j, 0) + c) % half_t if half_t else 0
            return
        pair_coords[(i, j)] = pair_coords.get((i, j), 0) + c

    for a, b, coeff in wedge.pairs:
        ea = expo(a)
        eb = expo(b)
        for i, ci in ea.items():
            for j, cj in eb.items():
                add_pair(i, j, coeff * ci * cj)

    pair_coords = {k: v for k, v in pair_coords.items() if v}
    tors_coords = {k: v % half_t for k, v in tors_coords.items() if half_t and v % half_t}
    labels = ["mu"] + ["u%d" % k for k in range(nunits)] + \
             [repr(g) for g in basis.primes]
    return WedgeResidue(zero=not pair_coords and not tors_coords,
                        prime_pairs=pair_coords, torsion_parts=tors_coords,
                        torsion_modulus=half_t, basis_labels=labels)


@dataclass
class BlochCertificate:
    ok: bool
    regime: str
    residue: object = None

    def __bool__(self):
        return self.ok


def verify_bloch(element, nu="pm1"):
    """Certify delta_2(element) = 0 in wedge~^2 F^* / {+-1} wedge~ F^*.

    Exact for fields with a complete factor basis (Q, imaginary quadratic
    with class number one, Q(zeta_5) with its cyclotomic unit); raises
    NotImplementedError otherwise.
    """
    f = element.field
    for _, c in element.items():
        if int(c) != c:
            raise ValueError("verification needs integer coefficients")
    res = wedge_reduce(delta2(element))
    regime = "exact" if (f.n <= 2 and f.has_exact_factorization()) \
        else "exact (bundled unit basis)"
    return BlochCertificate(ok=res.zero, regime=regime,
                            residue=None if res.zero else res)


# --- Bloch elements from homology cycles ---------------------------------------


def bloch_from_cycle(t, cycle):
    """beta = 2 sum_cells weight * sum_simplices sign [cr3(simplex)].

    cycle: [(CellRep, integer weight)]; the weights already carry N/|stab|.
    Degenerate cross-ratios (flat simplices) contribute nothing.
    """
    f = t.field
    terms = []
    for cell, w in cycle:
        for s, sign in cell.triang:
            val = cr3(f, [cell.cusps[i] for i in s])
            if val is None:
                continue
            terms.append((val, 2 * w * sign))
    return PreBlochElement(f, terms)


def chain_compatibility_check(field, tuples):
    """f2 d3 = delta2 f3 on 4-tuples of lifted vectors (diagram square).

    Tuples live over L = (F^2 - 0) / {+-1}: entries with the same image in
    P^1(F) must be equal up to sign (repeated points), otherwise the tuple
    is outside the domain and skipped.  Returns (ok, counterexample).
    """
    from .cells import cusp_of_vector
    for tup in tuples:
        try:
            cusps = [cusp_of_vector(field, v) for v in tup]
        except ValueError:
            continue  # zero vector: not a point of L
        if len(set(cusps)) < 4:
            in_domain = True
            for a in range(4):
                for b in range(a + 1, 4):
                    if cusps[a] == cusps[b]:
                        same = all(tup[a][k] == tup[b][k] for k in range(2))
                        neg = all(tup[a][k] == -tup[b][k] for k in range(2))
                        if not (same or neg):
                            in_domain = False
            if not in_domain:
                continue
            x = None
        else:
            x = cr3(field, cusps)
        left = WedgeElement(field, ())
        for i in range(4):
            tri = [tup[j] for j in range(4) if j != i]
            w = cr2(field, *tri)
            left = left + (w if i % 2 == 0 else -w)
        if x is None:
            right = WedgeElement(field, ())
        else:
            right = delta2(PreBlochElement(field, [(x, 1)]))
        diff = left + (-right)
        if not wedge_reduce(diff).zero:
            return False, tup
    return True, None


# --- torsion of the Bloch group -------------------------------------------------


def nu_p_exponent(field, p):
    """Largest nu with mu_{p^nu} + mu_{p^nu}^{-1} in F."""
    nu = 0
    while field._contains_2cos(p ** (nu + 1)):
        nu += 1
        if nu > 20:
            raise ArithmeticError("runaway torsion exponent")
    return nu


def d_p_exponent(field, p):
    """Largest d with mu_{p^d} in F (from the computed mu_F)."""
    d = 0
    m = field.mu_order
    while m % p == 0:
        m //= p
        d += 1
    return d


def torsion_generator(field, p):
    """Generator data for the p-part of the extended Bloch group.

    Returns (element or None, {orders}).  The summand of the published
    formula is symmetrized so every factor lies in the real subfield; the
    transcription ambiguity in the summation index is resolved by letting
    it run over the full exponent range.
    """
    nu = nu_p_exponent(field, p)
    d = d_p_exponent(field, p)
    orders = _bloch_torsion_orders(field, p, d)
    if nu == 0:
        return None, orders
    # c_k = 2 cos(2 pi k / p^nu) in F; the formula's arguments are rational
    # expressions in c_k: (x^{k+1}+x^{-k-1})(x^{k-1}+x^{-k+1})/(x^k+x^{-k})^2
    if p == 2:
        return None, orders  # even-torsion generator formula not transcribed
    m = p ** nu
    cos_cache = _cos_elements(field, m)
    if cos_cache is None:
        return None, orders
    terms = []
    for k in range(1, m + 1):
        num = cos_cache[k + 1] * cos_cache[abs(k - 1)]
        den = cos_cache[k] * cos_cache[k]
        if not den:
            continue
        arg = num / den
        if not arg or arg == field.one():
            continue
        terms.append((arg, 1))
    if not terms:
        return None, orders
    return PreBlochElement(field, terms), orders


def _cos_elements(field, m):
    """{k: x^k + x^{-k}} for x = mu_m, as elements of F, or None."""
    phi = cyclotomic_poly(m)

    def verify(c):
        from .field import _resultant_x2
        return _resultant_x2(field, phi, c) == field.zero()

    base = None
    if field._contains_2cos(m):
        # solve 2cos(2 pi /m) directly
        from itertools import product as iproduct
        import mpmath
        from .intervals import CIv, RIv, riv, set_prec
        units = [a for a in range(1, m) if gcd(a, m) == 1]
        set_prec(160)
        pi = riv(mpmath.iv.pi)
        from .field import _cos_iv
        for assign in iproduct(units, repeat=max(0, field.num_places() - 1)):
            exps = (1,) + assign
            targets = []
            for j in range(field.num_places()):
                ang = pi * Fraction(2 * exps[j], m)
                targets.append(CIv(_cos_iv(ang) * 2, riv(0)))
            cand = field.element_from_embeddings(targets, integral=True, verify=verify)
            if cand is not None:
                base = cand
                break
    if base is None:
        return None
    # Chebyshev recursion: s_{k+1} = base * s_k - s_{k-1}; s_k = x^k + x^{-k}
    out = {0: field.coerce(2), 1: base}
    for k in range(2, m + 2):
        out[k] = base * out[k - 1] - out[k - 2]
    return out


def _bloch_torsion_orders(field, p, d):
    """|B(F)_p| and |Bbar(F)_p| per the published order table."""
    has_i = field._find_primitive_root_of_unity(4) is not None
    has_mu3 = field.mu_order % 3 == 0
    has_mu_p = field.mu_order % p == 0
    if p == 2:
        if has_i:
            return {"B_p": 1, "Bbar_p": 1}
        b = 2 ** max(0, d - 1)
        return {"B_p": b, "Bbar_p": max(1, b // 2)}
    if p == 3:
        if has_mu3:
            return {"B_p": 1, "Bbar_p": 1}
        b = 3 ** d
        return {"B_p": b, "Bbar_p": max(1, b // 3)}
    if has_mu_p:
        return {"B_p": 1, "Bbar_p": 1}
    return {"B_p": p ** d, "Bbar_p": p ** d}


def in_five_term_span(element, pool):
    """Is the element an integer combination of the pool of five-term
    elements?  Exact membership in the generated lattice via SNF."""
    from .snf import smith_normal_form
    f = element.field
    support = sorted({k for e in pool for k in e.terms} | set(element.terms))
    idx = {k: i for i, k in enumerate(support)}
    if not pool:
        return not element.terms
    mat = [[0] * len(pool) for _ in support]
    for j, e in enumerate(pool):
        for k, c in e.terms.items():
            mat[idx[k]][j] = c
    target = [element.terms.get(k, 0) for k in support]
    res = smith_normal_form(mat)
    # solve U M V y = U target with diag system
    ut = [sum(res.left[i][r] * target[r] for r in range(len(target)))
          for i in range(len(res.left))]
    y = [0] * len(pool)
    for i in range(len(res.diag)):
        if ut[i] % res.diag[i]:
            return False
        y[i] = ut[i] // res.diag[i]
    if any(ut[i] for i in range(len(res.diag), len(ut))):
        return False
    return True
