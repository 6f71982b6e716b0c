"""Exact arithmetic in an algebraic number field, with certified embeddings.

A field is described by a monic irreducible integer polynomial f and an
integral basis given in power-basis coordinates.  Elements are stored by
their integral-basis coordinates; multiplication goes through a cached
structure-constant table.  Embeddings are isolated once (Sturm for the
real roots, certified interval Newton boxes for the complex ones) and
refined on demand, so every numeric quantity downstream is an enclosure.
"""

from fractions import Fraction
from itertools import product
from math import gcd, isqrt

import mpmath
from mpmath.libmp import to_rational

from . import polys
from .intervals import CIv, RIv, riv, riv_between, set_prec
from .linalg import det, identity, inverse, mat_vec, solve, transpose
from .numutil import factorint

HEIGHT_DEFAULT = 20
PAIR_SEARCH_BUDGET = 300000

# class-number-1 imaginary quadratic field discriminants
H1_IMAG_QUAD_DISCS = {-3, -4, -7, -8, -11, -19, -43, -67, -163}


class FieldElement:
    """An element of a NumberField, coordinates over the integral basis."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = tuple(Fraction(c) for c in coords)

    def __add__(self, other):
        other = self.field.coerce(other)
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self.field.coerce(other)
        return FieldElement(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __rsub__(self, other):
        return self.field.coerce(other) - self

    def __mul__(self, other):
        other = self.field.coerce(other)
        return self.field._mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self.field.coerce(other)
        return self.field._div(self, other)

    def __rtruediv__(self, other):
        return self.field.coerce(other) / self

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __pow__(self, k):
        if k < 0:
            return self.field.one() / self ** (-k)
        acc = self.field.one()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self == self.field.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def is_rational(self):
        return all(c == 0 for c in self.coords[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("not a rational element")
        return self.coords[0]

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coords)

    def conj(self):
        return self.field.conjugate(self)

    def trace(self):
        return self.field.trace(self)

    def norm(self):
        return self.field.norm(self)

    def denominator(self):
        d = 1
        for c in self.coords:
            d = d * c.denominator // gcd(d, c.denominator)
        return d

    def __repr__(self):
        return "Elt(%s)" % (",".join(str(c) for c in self.coords))


class NumberField:
    """Number field Q[x]/(f) with a fixed integral basis.

    `integral_basis` rows are power-basis coordinates; the first basis
    element must be 1.  Default: the power basis, except for imaginary
    quadratic fields which get the standard maximal-order basis.
    """

    def __init__(self, min_poly, integral_basis=None, label=None):
        self.min_poly = tuple(int(c) for c in min_poly)
        if self.min_poly[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        self.n = len(self.min_poly) - 1
        if self.n < 1:
            raise ValueError("constant polynomial")
        if not polys.is_irreducible(list(self.min_poly)):
            raise ValueError("reducible polynomial")
        self.label = label

        if integral_basis is None:
            basis, flag = self._default_basis()
        else:
            basis = [[Fraction(c) for c in row] for row in integral_basis]
            for row in basis:
                while len(row) < self.n:
                    row.append(Fraction(0))
            flag = "user-supplied"
        if len(basis) != self.n:
            raise ValueError("integral basis must have %d elements" % self.n)
        self.basis = basis
        self.basis_flag = flag
        if self.basis[0] != [Fraction(1)] + [Fraction(0)] * (self.n - 1):
            raise ValueError("first integral basis element must be 1")
        try:
            self.basis_from_power = inverse(transpose(self.basis))
        except ZeroDivisionError:
            raise ValueError("integral basis is linearly dependent")

        self._build_tables()
        self._check_basis_closure()

        self.r1, self.r2 = self._signature()
        self.discriminant = self._discriminant()
        self._root_boxes = None
        self._root_prec = 0
        self._conj_matrix = None
        self.mu_order, self.mu_gen = self._roots_of_unity()
        self._prime_cache = {}
        self._square_unit_cache = None
        self._small_unit_cache = None

    # --- construction ----------------------------------------------------

    def _default_basis(self):
        n = self.n
        if n == 2:
            b, c = self.min_poly[1], self.min_poly[0]
            d0 = b * b - 4 * c
            if d0 < 0:
                s = polys.squarefree_part_int(d0)
                delta = s if s % 4 == 1 or s % 4 == -3 else 4 * s
                f0 = isqrt(d0 // delta)
                assert f0 * f0 == d0 // delta
                # sqrt(delta) = (2*theta + b)/f0
                if delta % 2 != 0:
                    w = [Fraction(1, 2) + Fraction(b, 2 * f0), Fraction(1, f0)]
                else:
                    w = [Fraction(b, 2 * f0), Fraction(1, f0)]
                return [[Fraction(1), Fraction(0)], w], "standard imaginary quadratic"
        return identity(n), "power-basis (maximality unverified)"

    def _build_tables(self):
        n = self.n
        f = [Fraction(c) for c in self.min_poly]
        powers = [[Fraction(int(i == k)) for i in range(n)] for k in range(n)]
        cur = list(powers[-1])
        for _ in range(n - 1):
            shifted = [Fraction(0)] + cur
            lead = shifted[n] if len(shifted) > n else Fraction(0)
            red = [shifted[i] - lead * f[i] for i in range(n)]
            powers.append(red)
            cur = red
        self._theta_powers = powers  # theta^k reduced, k = 0..2n-2

        def pmul_mod(a, b):
            out = [Fraction(0)] * n
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        if y:
                            pw = powers[i + j]
                            xy = x * y
                            for t in range(n):
                                if pw[t]:
                                    out[t] += xy * pw[t]
            return out

        self._pmul_mod = pmul_mod
        table = []
        for i in range(n):
            row = []
            for j in range(n):
                prod_pow = pmul_mod(self.basis[i], self.basis[j])
                row.append(tuple(mat_vec(self.basis_from_power, prod_pow)))
            table.append(row)
        self._mult_table = table

    def _check_basis_closure(self):
        for row in self._mult_table:
            for coords in row:
                for c in coords:
                    if c.denominator != 1:
                        raise ValueError("integral basis not closed under multiplication")

    def _signature(self):
        if self.n == 1:
            return 1, 0
        r1 = polys.count_real_roots([Fraction(c) for c in self.min_poly])
        return r1, (self.n - r1) // 2

    def _discriminant(self):
        n = self.n
        basis_elts = [self.element(self._basis_coords(i)) for i in range(n)]
        gram = [[(basis_elts[i] * basis_elts[j]).trace() for j in range(n)] for i in range(n)]
        d = det(gram)
        assert d.denominator == 1
        return int(d)

    def _basis_coords(self, i):
        return [Fraction(int(j == i)) for j in range(self.n)]

    # --- element plumbing --------------------------------------------------

    def element(self, coords):
        return FieldElement(self, coords)

    def zero(self):
        return FieldElement(self, [0] * self.n)

    def one(self):
        return FieldElement(self, [1] + [0] * (self.n - 1))

    def gen(self):
        if self.n == 1:
            return self.coerce(Fraction(-self.min_poly[0]))
        return self.from_power_coords([Fraction(0), Fraction(1)] + [Fraction(0)] * (self.n - 2))

    def coerce(self, x):
        if isinstance(x, FieldElement):
            if x.field is not self:
                raise TypeError("element of a different field")
            return x
        if isinstance(x, (int, Fraction)):
            return FieldElement(self, [Fraction(x)] + [Fraction(0)] * (self.n - 1))
        raise TypeError("cannot coerce %r" % (x,))

    def _mul(self, a, b):
        n = self.n
        out = [Fraction(0)] * n
        tab = self._mult_table
        for i, x in enumerate(a.coords):
            if x:
                for j, y in enumerate(b.coords):
                    if y:
                        row = tab[i][j]
                        xy = x * y
                        for t in range(n):
                            if row[t]:
                                out[t] += xy * row[t]
        return FieldElement(self, out)

    def _div(self, a, b):
        if not b:
            raise ZeroDivisionError("division by zero field element")
        x = solve(self.mult_matrix(b), list(a.coords))
        if x is None:
            raise ZeroDivisionError("inconsistent division")
        return FieldElement(self, x)

    def mult_matrix(self, b):
        """Matrix of y -> b*y on coordinates (column j = coords of b*w_j)."""
        cols = [list((b * self.element(self._basis_coords(j))).coords) for j in range(self.n)]
        return transpose(cols)

    def trace(self, x):
        m = self.mult_matrix(x)
        return sum(m[i][i] for i in range(self.n))

    def norm(self, x):
        return det(self.mult_matrix(x))

    def power_coords(self, x):
        out = [Fraction(0)] * self.n
        for c, row in zip(x.coords, self.basis):
            if c:
                for t in range(self.n):
                    if row[t]:
                        out[t] += c * row[t]
        return out

    def from_power_coords(self, pc):
        pc = list(pc) + [Fraction(0)] * (self.n - len(pc))
        return FieldElement(self, mat_vec(self.basis_from_power, pc))

    # --- embeddings ----------------------------------------------------------

    def num_places(self):
        return self.r1 + self.r2

    def _isolate_roots(self, prec):
        """Certified root enclosures, ordered: real ascending, then complex
        by ascending real part with positive imaginary part."""
        if self._root_boxes is not None and self._root_prec >= prec:
            return self._root_boxes
        set_prec(prec + 32)
        f = [Fraction(c) for c in self.min_poly]
        fp = polys.deriv(f)
        target = Fraction(1, 2 ** (prec + 8))

        real_boxes = []
        if self.r1:
            if self.n == 1:
                v = Fraction(-self.min_poly[0])
                real_boxes.append(CIv(riv_between(v, v), riv(0)))
            else:
                for (a, b) in polys.isolate_real_roots(f):
                    lo, hi = a, b
                    fl = polys.peval(f, lo)
                    assert fl != 0  # irreducible of degree >= 2: no rational roots
                    while hi - lo > target:
                        mid = (lo + hi) / 2
                        fm = polys.peval(f, mid)
                        if fm == 0:  # cannot happen, guard anyway
                            lo, hi = mid - target / 4, mid + target / 4
                            break
                        if (fm > 0) == (fl > 0):
                            lo, fl = mid, fm
                        else:
                            hi = mid
                    real_boxes.append(CIv(riv_between(lo, hi), riv(0)))

        complex_boxes = []
        if self.r2:
            mpmath.mp.prec = max(160, prec + 64)
            approx = mpmath.polyroots(list(reversed(self.min_poly)),
                                      maxsteps=200, extraprec=120)
            ups = [z for z in approx if z.imag > 0]
            assert len(ups) == self.r2, "complex root pairing failed"
            ups.sort(key=lambda z: (z.real, z.imag))
            for z in ups:
                rad = Fraction(1, 2 ** 30)
                box = CIv(
                    riv_between(_fr(z.real) - rad, _fr(z.real) + rad),
                    riv_between(_fr(z.imag) - rad, _fr(z.imag) + rad),
                )
                box = _newton_refine(f, fp, box, target)
                complex_boxes.append(box)

        self._root_boxes = real_boxes + complex_boxes
        self._root_prec = prec
        return self._root_boxes

    def embed(self, x, place, prec=53):
        """Certified complex interval for sigma_place(x) (0-based place).

        Guarantee: width <= 2^(1-prec) * max(1, |sigma(x)|).
        """
        x = self.coerce(x)
        pc = self.power_coords(x)
        work = prec + 16
        for _ in range(12):
            set_prec(work)
            root = self._isolate_roots(work)[place]
            val = _horner_civ(pc, root)
            scale = max(Fraction(1), abs(val).lo())
            if val.width() <= Fraction(1, 2 ** (prec - 1)) * scale:
                return val
            work *= 2
        raise RuntimeError("embedding did not converge to requested precision")

    def embed_all(self, x, prec=53):
        return [self.embed(x, j, prec) for j in range(self.num_places())]

    # --- conjugation (CM involution) ------------------------------------------

    def is_totally_real(self):
        return self.r2 == 0

    def conjugate(self, x):
        x = self.coerce(x)
        if self.r2 == 0:
            return x
        if self._conj_matrix is None:
            self._conj_matrix = self._find_conjugation()
        return FieldElement(self, mat_vec(self._conj_matrix, list(x.coords)))

    def _find_conjugation(self):
        if self.r1 != 0:
            raise ValueError("conjugation automorphism needs a totally imaginary field")
        targets = [self.embed(self.gen(), j, 96).conj() for j in range(self.r2)]
        cand = self.element_from_embeddings(targets, integral=True,
                                            verify=lambda e: _is_other_root(self, e))
        if cand is None:
            raise ValueError("no conjugation automorphism found (field not CM)")
        cols = [list(_apply_hom(self, self.basis[i], cand).coords) for i in range(self.n)]
        m = transpose(cols)
        for i in range(self.n):
            if mat_vec(m, mat_vec(m, self._basis_coords(i))) != self._basis_coords(i):
                raise ValueError("conjugation candidate is not an involution")
        return m

    def is_cm(self):
        if self.r1 != 0 or self.r2 == 0:
            return False
        try:
            self.conjugate(self.gen())
            return True
        except ValueError:
            return False

    # --- solving for elements from numeric targets ------------------------------

    def element_from_embeddings(self, targets, integral=True, verify=None,
                                denom_bound=1, prec=96):
        """Find x with sigma_j(x) = targets[j], rounding a numeric solve and
        verifying exactly; None if no verified candidate appears."""
        for attempt in range(3):
            p = prec << attempt
            set_prec(p)
            rows, rhs = [], []
            for j in range(self.num_places()):
                emb = [self.embed(self.element(self._basis_coords(a)), j, p)
                       for a in range(self.n)]
                tj = targets[j]
                tre, tim = _target_parts(tj)
                rows.append([e.re.mid() for e in emb])
                rhs.append(tre)
                if j >= self.r1:
                    rows.append([e.im.mid() for e in emb])
                    rhs.append(tim)
            sol = solve(rows, rhs)
            if sol is None:
                continue
            if integral:
                coords = [Fraction(int(round(c))) for c in sol]
            else:
                coords = [c.limit_denominator(denom_bound) for c in sol]
            cand = self.element(coords)
            if verify is None or verify(cand):
                return cand
        return None

    # --- roots of unity -----------------------------------------------------------

    def _roots_of_unity(self):
        if self.r1 > 0 or self.n == 1:
            return 2, self.coerce(-1)
        best_k, best = 2, self.coerce(-1)
        ks = sorted(k for k in range(3, 2 * self.n * self.n + 3)
                    if k % 2 == 0 and _phi(k) <= self.n and self.n % _phi(k) == 0)
        for k in ks:
            z = self._find_primitive_root_of_unity(k)
            if z is not None and k > best_k:
                best_k, best = k, z
        return best_k, best

    def _find_primitive_root_of_unity(self, k):
        if self.r1 > 0 and k > 2:
            return None
        if k == 1:
            return self.one()
        if k == 2:
            return self.coerce(-1)
        phi = polys.cyclotomic_poly(k)

        def verify(e):
            return bool(e) and polys.peval_generic(phi, e, self.zero()) == self.zero()

        units = [a for a in range(1, k) if gcd(a, k) == 1]
        set_prec(160)
        pi = riv(mpmath.iv.pi)
        for assign in product(units, repeat=max(0, self.r2 - 1)):
            exps = (1,) + assign
            targets = []
            for j in range(self.r2):
                ang = pi * Fraction(2 * exps[j], k)
                targets.append(CIv(_cos_iv(ang), _sin_iv(ang)))
            cand = self.element_from_embeddings(targets, integral=True, verify=verify)
            if cand is not None:
                return cand
        return None

    def torsion_units(self):
        out = []
        u = self.one()
        for _ in range(self.mu_order):
            out.append(u)
            u = u * self.mu_gen
        return out

    def square_units(self):
        if self._square_unit_cache is None:
            self._square_unit_cache = sorted({(u * u).coords for u in self.torsion_units()})
        return [self.element(c) for c in self._square_unit_cache]

    def is_square_torsion_unit(self, u):
        u = self.coerce(u)
        return any(u == s for s in self.square_units())

    # --- special element searches -----------------------------------------------

    def contains_sqrt(self, q):
        """Return s in F with s*s = q (q rational), or None."""
        q = Fraction(q)
        if q == 0:
            return self.zero()
        return self.field_sqrt(self.coerce(q))

    def sqrt5_in_f(self):
        return self.contains_sqrt(5) is not None

    def cos_orders(self, bound=None):
        """All r with 2*cos(2*pi/r) in F."""
        if bound is None:
            bound = 4 * self.n * self.n + 6
        out = []
        for r in range(1, bound + 1):
            half_phi = max(1, _phi(r) // 2)
            if r > 6 and self.n % half_phi != 0:
                continue  # [Q(cos 2pi/r):Q] = phi(r)/2 must divide n
            if self._contains_2cos(r):
                out.append(r)
        return out

    def _contains_2cos(self, r):
        if r in (1, 2):
            return True
        if r in (3, 4, 6):
            return True  # 2cos is -1, 0, 1
        phi = polys.cyclotomic_poly(r)

        def verify(c):
            return _resultant_x2(self, phi, c) == self.zero()

        units = [a for a in range(1, r) if gcd(a, r) == 1]
        set_prec(160)
        pi = riv(mpmath.iv.pi)
        for assign in product(units, repeat=max(0, self.num_places() - 1)):
            exps = (1,) + assign
            targets = []
            for j in range(self.num_places()):
                ang = pi * Fraction(2 * exps[j], r)
                targets.append(CIv(_cos_iv(ang) * 2, riv(0)))
            cand = self.element_from_embeddings(targets, integral=True, verify=verify)
            if cand is not None:
                return True
        return False

    def minus_one_sum_of_two_squares(self, height=HEIGHT_DEFAULT):
        """Decide -1 = a^2 + b^2 in F by bounded certificate search.

        Returns (True, (a, b)), (False, reason), or (None, reason).
        """
        if self.r1 > 0:
            return (False, "field has a real embedding")
        i_elt = self._find_primitive_root_of_unity(4)
        if i_elt is not None:
            return (True, (i_elt, self.zero()))
        budget = PAIR_SEARCH_BUDGET
        minus_one = self.coerce(-1)
        for den in (1, 2):
            seen_sq = {}
            for h in range(0, height + 1):
                for ca in _shell(self.n, h):
                    a = self.element([Fraction(c, den) for c in ca])
                    asq = a * a
                    key = asq.coords
                    seen_sq[key] = a
                for key, a in list(seen_sq.items()):
                    want = minus_one - self.element(key)
                    b = seen_sq.get(want.coords)
                    if b is not None:
                        return (True, (a, seen_sq[want.coords]))
                budget -= len(seen_sq)
                if budget < 0:
                    return (None, "undecided within search budget")
        return (None, "undecided within height %d" % height)

    def field_sqrt(self, x, denom_bound=64):
        """Return s with s*s = x, or None; verification is exact."""
        x = self.coerce(x)
        if not x:
            return self.zero()
        for u in self.torsion_units():
            if u * u == x:
                return u
        set_prec(160)
        embs = [self.embed(x, j, 160) for j in range(self.num_places())]
        db = max(denom_bound, 4 * x.denominator())
        for signs in product((1, -1), repeat=self.num_places()):
            targets = [_complex_sqrt_mid(e) * signs[j] for j, e in enumerate(embs)]
            cand = self.element_from_embeddings(
                targets, integral=x.is_integral(), denom_bound=db,
                verify=lambda s: s * s == x)
            if cand is not None:
                return cand
        return None

    # --- O_F ideal arithmetic (degree <= 2) ----------------------------------------

    def has_exact_factorization(self):
        return self.n == 1 or (self.n == 2 and self.discriminant in H1_IMAG_QUAD_DISCS)

    def elements_of_norm(self, d):
        """All O_F elements with |norm| == d, imaginary quadratic (n=2)."""
        if self.n != 2:
            raise NotImplementedError
        w = self.element(self._basis_coords(1))
        t = int((w + w.conj()).rational_value())
        nm = int((w * w.conj()).rational_value())
        # N(x + y w) = x^2 + t x y + nm y^2; 4N = (2x+ty)^2 + |disc| y^2
        absd = abs(self.discriminant)
        out = []
        ymax = isqrt(4 * d // absd)
        for y in range(-ymax, ymax + 1):
            rest = 4 * d - absd * y * y
            if rest < 0:
                continue
            r = isqrt(rest)
            if r * r != rest:
                continue
            for sgn in ((r,) if r == 0 else (r, -r)):
                num = sgn - t * y
                if num % 2 == 0:
                    out.append(self.element([num // 2, y]))
        return out

    def ideal_gcd(self, a, b):
        """Generator of the ideal (a, b) for class-number-one fields.

        Degree 2: exact via the norm-form lattice.  Higher degree: Euclidean
        descent with coordinate rounding (sufficient for the norm-Euclidean
        fields in scope, e.g. Q(zeta_5)).
        """
        a, b = self.coerce(a), self.coerce(b)
        if self.n == 1:
            va = abs(int(a.coords[0])) if a else 0
            vb = abs(int(b.coords[0])) if b else 0
            return self.coerce(gcd(va, vb))
        if self.n != 2:
            return self._canonical_associate(self._euclid_gcd(a, b))
        if not a:
            return self._canonical_associate(b)
        if not b:
            return self._canonical_associate(a)
        gens = []
        for x in (a, b):
            for j in range(2):
                gens.append([int(c) for c in (x * self.element(self._basis_coords(j))).coords])
        lat = _hnf_2d(gens)
        d = abs(lat[0][0] * lat[1][1])
        for g in self.elements_of_norm(d):
            if (a / g).is_integral() and (b / g).is_integral():
                return self._canonical_associate(g)
        raise ArithmeticError("no ideal generator found (class number > 1?)")

    def _canonical_associate(self, x):
        if not x:
            return x
        return self.element(min((u * x).coords for u in self.torsion_units()))

    def _euclid_gcd(self, a, b, max_steps=200):
        """Euclidean gcd by rounding division, with offset fallback."""
        from itertools import product as iproduct
        r0, r1 = a, b
        for _ in range(max_steps):
            if not r1:
                return r0
            x = r0 / r1
            q = self.element([Fraction(round(c)) for c in x.coords])
            r2 = r0 - q * r1
            if r2 and abs(r2.norm()) >= abs(r1.norm()):
                found = None
                target = abs(r1.norm())
                for off in iproduct((-1, 0, 1), repeat=self.n):
                    q2 = q + self.element(off)
                    cand = r0 - q2 * r1
                    if abs(cand.norm()) < target:
                        found = cand
                        break
                if found is None:
                    raise ArithmeticError(
                        "Euclidean descent stalled (field not norm-Euclidean?)")
                r2 = found
            r0, r1 = r1, r2
        raise ArithmeticError("gcd did not terminate")

    def primes_over(self, p):
        """[(generator, e, f)] for primes of O_F over p; n<=2 with h=1."""
        if p in self._prime_cache:
            return self._prime_cache[p]
        if self.n == 1:
            out = [(self.coerce(p), 1, 1)]
        else:
            if not self.has_exact_factorization():
                raise NotImplementedError("prime splitting needs h=1 imaginary quadratic")
            w = self.element(self._basis_coords(1))
            t = int((w + w.conj()).rational_value())
            nm = int((w * w.conj()).rational_value())
            disc = self.discriminant
            if p == 2:
                roots = [r for r in (0, 1) if (r * r - t * r + nm) % 2 == 0]
                if not roots:
                    out = [(self.coerce(2), 1, 2)]
                else:
                    g = self.ideal_gcd(self.coerce(2), w - self.coerce(roots[0]))
                    if disc % 2 == 0:
                        out = [(g, 2, 1)]
                    else:
                        g2 = self._canonical_associate(g.conj())
                        out = [(g, 1, 1), (g2, 1, 1)]
            else:
                ls = _legendre(disc % p, p)
                if ls == -1:
                    out = [(self.coerce(p), 1, 2)]
                else:
                    r = _mod_sqrt(disc % p, p)
                    root = (t + r) * pow(2, p - 2, p) % p
                    g = self.ideal_gcd(self.coerce(p), w - self.coerce(root))
                    if ls == 0:
                        out = [(g, 2, 1)]
                    else:
                        g2 = self._canonical_associate(g.conj())
                        out = [(g, 1, 1), (g2, 1, 1)]
        out.sort(key=lambda gef: gef[0].coords)
        self._prime_cache[p] = out
        return out

    def factor_element(self, x):
        """x in F* as torsion unit * prod(prime^e); exact, h=1, n <= 2.

        Returns (unit, [(prime, exponent), ...]), primes canonical associates.
        """
        x = self.coerce(x)
        if not x:
            raise ZeroDivisionError("factoring zero")
        den = x.denominator()
        y = x * den
        nm = abs(int(y.norm())) if self.n > 1 else abs(int(y.coords[0]))
        ps = set()
        if nm != 1:
            ps |= set(factorint(nm))
        if den != 1:
            ps |= set(factorint(den))
        found = []
        for p in sorted(ps):
            for g, e, f in self.primes_over(p):
                v = _valuation(self, y, g) - (e * _int_valuation(den, p) if den != 1 else 0)
                if v:
                    found.append((g, v))
        u = x
        for g, v in found:
            u = u / g ** v
        for tu in self.torsion_units():
            if tu == u:
                return tu, sorted(found, key=lambda gv: gv[0].coords)
        raise ArithmeticError("non-torsion unit left over in factorization")

    def small_units(self, height=2):
        """Non-torsion units of small coordinate height, cached.

        For Q(zeta_5) this finds the cyclotomic unit 1 + zeta, which
        generates the units modulo torsion; used by the PSL_2 membership
        tests for fields with infinite unit group.
        """
        if self._small_unit_cache is not None:
            return self._small_unit_cache
        out = []
        tors = {u.coords for u in self.torsion_units()}
        for coords in product(range(-height, height + 1), repeat=self.n):
            if not any(coords):
                continue
            e = self.element(coords)
            if abs(e.norm()) == 1 and e.coords not in tors:
                out.append(e)
        self._small_unit_cache = out
        return out

    def __repr__(self):
        return "NumberField(%s)" % (self.label or list(self.min_poly),)


def nf_create(min_poly, integral_basis=None, label=None):
    """Build a NumberField; validates irreducibility and basis closure."""
    return NumberField(min_poly, integral_basis, label)


# --- module helpers --------------------------------------------------------


def _shell(n, h):
    """Integer coordinate vectors of L-infinity norm exactly h."""
    if h == 0:
        yield (0,) * n
        return
    for v in product(range(-h, h + 1), repeat=n):
        if max(abs(c) for c in v) == h:
            yield v


def _int_valuation(m, p):
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def _valuation(field, y, g):
    v = 0
    cur = y
    while True:
        nxt = cur / g
        if nxt.is_integral():
            v += 1
            cur = nxt
        else:
            return v


def _apply_hom(field, power_coords, theta_image):
    acc = field.zero()
    for c in reversed(power_coords):
        acc = acc * theta_image + field.coerce(Fraction(c))
    return acc


def _is_other_root(field, e):
    f = [Fraction(c) for c in field.min_poly]
    return polys.peval_generic(f, e, field.zero()) == field.zero() and e != field.gen()


def _resultant_x2(field, phi, c):
    """Zero iff x^2 - c*x + 1 shares a root with phi (phi rational coeffs)."""
    a, b = field.zero(), field.zero()  # running remainder a*x + b
    for coeff in reversed(phi):
        a, b = a * c + b, -a
        b = b + field.coerce(Fraction(coeff))
    if not a:
        return b
    x0 = -b / a
    return x0 * x0 - c * x0 + field.one()


def _phi(k):
    if k == 1:
        return 1
    out = k
    for p in factorint(k):
        out = out // p * (p - 1)
    return out


def _fr(x):
    p, q = to_rational(mpmath.mpf(x)._mpf_)
    return Fraction(int(p), int(q))


def _target_parts(tj):
    if isinstance(tj, CIv):
        return tj.re.mid(), tj.im.mid()
    if isinstance(tj, RIv):
        return tj.mid(), Fraction(0)
    return Fraction(tj), Fraction(0)


def _horner_civ(coeffs, x):
    acc = CIv(riv(0), riv(0))
    for c in reversed(coeffs):
        acc = acc * x + CIv(riv(Fraction(c)), riv(0))
    return acc


def _newton_refine(f, fp, box, target):
    """Interval Newton contraction of a complex root box; certified."""
    for _ in range(100):
        if box.width() <= target:
            return box
        mre, mim = box.re.mid(), box.im.mid()
        fre, fim = _eval_rat_complex(f, mre, mim)
        fpb = _horner_civ(fp, box)
        if fpb.contains_zero():
            raise ArithmeticError("derivative contains zero during Newton refinement")
        quot = CIv(riv(fre), riv(fim)) / fpb
        new_re = riv(mre) - quot.re
        new_im = riv(mim) - quot.im
        lo_re, hi_re = max(new_re.lo(), box.re.lo()), min(new_re.hi(), box.re.hi())
        lo_im, hi_im = max(new_im.lo(), box.im.lo()), min(new_im.hi(), box.im.hi())
        if lo_re > hi_re or lo_im > hi_im:
            raise ArithmeticError("Newton step left the certification box")
        shrunk = CIv(riv_between(lo_re, hi_re), riv_between(lo_im, hi_im))
        if shrunk.width() >= box.width():
            return box
        box = shrunk
    return box


def _eval_rat_complex(f, re, im):
    are, aim = Fraction(0), Fraction(0)
    for c in reversed(f):
        are, aim = are * re - aim * im + Fraction(c), are * im + aim * re
    return are, aim


def _cos_iv(ang):
    return RIv(mpmath.iv.cos(ang.v))


def _sin_iv(ang):
    return RIv(mpmath.iv.sin(ang.v))


def _complex_sqrt_mid(z):
    """Midpoint square root as a solve target; exactness comes from verify."""
    m = mpmath.mpc(str(float(z.re.mid())), str(float(z.im.mid())))
    s = mpmath.sqrt(m)
    return CIv(riv(_fr(s.real)), riv(_fr(s.imag)))


def _legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _mod_sqrt(a, p):
    """Tonelli-Shanks square root mod an odd prime."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    z = 2
    while _legendre(z, p) != -1:
        z += 1
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _hnf_2d(rows):
    """2-column integer row HNF (upper triangular, positive pivots)."""
    rows = [list(r) for r in rows if any(r)]
    # reduce first column by gcd steps
    while True:
        nz = sorted((r for r in rows if r[0] != 0), key=lambda r: abs(r[0]))
        if len(nz) <= 1:
            break
        a = nz[0]
        done = True
        for r in nz[1:]:
            q = r[0] // a[0]
            r[0] -= q * a[0]
            r[1] -= q * a[1]
            if r[0] != 0:
                done = False
        rows = [r for r in rows if any(r)]
        if done:
            break
    first = [r for r in rows if r[0] != 0]
    rest = [r for r in rows if r[0] == 0]
    g = 0
    for r in rest:
        g = gcd(g, abs(r[1]))
    if not first:
        return [[0, 0], [0, g]]
    a = list(first[0])
    if a[0] < 0:
        a = [-a[0], -a[1]]
    if g:
        a[1] %= g
    return [a, [0, g]]
