"""Hermitian forms over a number field and their rational trace avatars.

The bridge identity is A[x] = Tr_{F/Q}(x* A x): a Hermitian m x m matrix
over F becomes an (m*n)-ary rational quadratic form on the coordinates of
x over the integral basis.  Everything below is exact; the minimal-vector
enumeration is Fincke-Pohst with rational LDL^T data and integer-rounded
interval bounds.
"""

from dataclasses import dataclass
from fractions import Fraction

from .field import FieldElement
from .linalg import det, rank, solve
from .numutil import ceil_minus_sqrt, floor_plus_sqrt


class RationalQForm:
    """Symmetric positive (semi)definite rational Gram matrix wrapper."""

    __slots__ = ("gram", "n", "_ldl", "_det", "_ff")

    def __init__(self, gram):
        g = [tuple(Fraction(x) for x in row) for row in gram]
        self.gram = tuple(g)
        self.n = len(g)
        for i in range(self.n):
            if len(g[i]) != self.n:
                raise ValueError("gram matrix not square")
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise ValueError("gram matrix not symmetric")
        self._ldl = None
        self._det = None
        self._ff = None

    def apply(self, x):
        """Q[x] for an integer/rational vector x."""
        total = Fraction(0)
        g = self.gram
        n = self.n
        for i in range(n):
            xi = x[i]
            if xi:
                row = g[i]
                s = Fraction(0)
                for j in range(n):
                    if x[j]:
                        s += row[j] * x[j]
                total += xi * s
        return total

    def bilinear(self, x, y):
        total = Fraction(0)
        for i in range(self.n):
            if x[i]:
                row = self.gram[i]
                s = sum((row[j] * y[j] for j in range(self.n) if y[j]), Fraction(0))
                total += x[i] * s
        return total

    def det(self):
        if self._det is None:
            self._det = det([list(r) for r in self.gram])
        return self._det

    def scale(self, c):
        c = Fraction(c)
        return RationalQForm([[c * x for x in row] for row in self.gram])

    def add(self, other, c=1):
        c = Fraction(c)
        return RationalQForm([[a + c * b for a, b in zip(ra, rb)]
                              for ra, rb in zip(self.gram, other.gram)])

    def ldlt(self):
        """Q[x] = sum_i d[i] * (x_i + sum_{j>i} u[i][j] x_j)^2, or None if a
        pivot fails (form not positive definite)."""
        if self._ldl is not None:
            return self._ldl
        n = self.n
        a = [[Fraction(x) for x in row] for row in self.gram]
        d = [Fraction(0)] * n
        u = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            piv = a[i][i]
            if piv <= 0:
                return None
            d[i] = piv
            for j in range(i + 1, n):
                u[i][j] = a[i][j] / piv
            for r in range(i + 1, n):
                for c in range(r, n):
                    a[r][c] -= a[i][r] * a[i][c] / piv
                    a[c][r] = a[r][c]
        self._ldl = (d, u)
        return self._ldl

    def is_positive_definite(self):
        return self.ldlt() is not None

    def __eq__(self, other):
        return isinstance(other, RationalQForm) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return "RationalQForm(%d)" % self.n


def is_positive_definite(q):
    return q.is_positive_definite()


def is_positive_semidefinite(gram):
    """Exact PSD test by pivoting with zero-row handling."""
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    i = 0
    idx = list(range(n))
    while idx:
        k = idx[0]
        piv = a[k][k]
        if piv < 0:
            return False
        if piv == 0:
            if any(a[k][j] != 0 for j in idx):
                return False
            idx = idx[1:]
            continue
        for r in idx[1:]:
            f = a[k][r] / piv
            for c in idx[1:]:
                a[r][c] -= f * a[k][c]
        idx = idx[1:]
    return True


def _ff_data(q):
    """Fraction-free completing-the-square data of the integer-scaled form.

    With G0 = L * gram integral, L*Q[x] = sum_k y_k^2/(p_k p_{k-1}) where
    y_k = sum_{j>=k} B[k][j] x_j, p_k the leading principal minors of G0
    (p_0 = 1) and B the Bareiss elimination rows.  Returns (L, p, B) or
    None when a pivot fails (not positive definite).
    """
    if q._ff == "notpd":
        return None
    if q._ff is not None:
        return q._ff
    n = q.n
    den = 1
    from math import gcd as _g
    for row in q.gram:
        for e in row:
            den = den * e.denominator // _g(den, e.denominator)
    a = [[int(e * den) for e in row] for row in q.gram]
    p = [1]
    brows = []
    prev = 1
    for k in range(n):
        if a[k][k] <= 0:
            q._ff = "notpd"
            return None
        brows.append(list(a[k]))
        p.append(a[k][k])
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (piv * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = piv
    q._ff = (den, p, brows)
    return q._ff


def fincke_pohst(q, bound, include_equal=True):
    """Nonzero integer vectors x with Q[x] <= bound, one per +-pair.

    Canonical representative: first nonzero coordinate positive.  Output
    sorted lexicographically.  Exact integer arithmetic per node.
    """
    bound = Fraction(bound)
    if bound <= 0:
        raise ValueError("bound must be positive")
    ff = _ff_data(q)
    if ff is None:
        raise ValueError("form is not positive definite")
    scale, p, b = ff
    n = q.n
    cap = bound * scale
    out = []
    x = [0] * n

    def descend(i, partial):
        # level i: y = p_{i+1} x_i + c with y^2 <= p_{i+1} p_i (cap - partial)
        rem = cap - partial
        if rem < 0:
            return
        row = b[i]
        c = 0
        for j in range(i + 1, n):
            if x[j]:
                c += row[j] * x[j]
        rbound = p[i + 1] * p[i] * rem
        s = _isqrt_fraction(rbound)
        piv = p[i + 1]
        lo = -((s + c) // piv)
        hi = (s - c) // piv
        for xi in range(lo, hi + 1):
            y = piv * xi + c
            term = Fraction(y * y, piv * p[i])
            if term > rem:
                continue
            x[i] = xi
            if i == 0:
                first = next((v for v in x if v != 0), 0)
                if first > 0:
                    out.append(tuple(x))
            else:
                descend(i - 1, partial + term)
        x[i] = 0

    descend(n - 1, Fraction(0))
    if not include_equal:
        out = [v for v in out if q.apply(v) < bound]
    return sorted(out)


def _isqrt_fraction(fr):
    """floor(sqrt(fr)) for a nonnegative Fraction."""
    from math import isqrt
    if fr < 0:
        return -1
    return isqrt(fr.numerator * fr.denominator) // fr.denominator


@dataclass(frozen=True)
class MinData:
    minimum: Fraction
    vectors: tuple  # canonical +-representatives, sorted


def shortest_vectors(q, cap):
    """(min value, +-reps achieving it) among nonzero x with Q[x] <= cap.

    Exact Fincke-Pohst whose cap shrinks to the best value found, so probes
    deep inside the Ryshkov boundary stay cheap.  Returns (None, ()) when
    no nonzero vector reaches the cap.
    """
    cap = Fraction(cap)
    ff = _ff_data(q)
    if ff is None:
        raise ValueError("form is not positive definite")
    scale, p, b = ff
    n = q.n
    best = [cap * scale]  # tracked at the integer-scaled level
    out = []
    x = [0] * n

    def descend(i, partial):
        rem = best[0] - partial
        if rem < 0:
            return
        row = b[i]
        c = 0
        for j in range(i + 1, n):
            if x[j]:
                c += row[j] * x[j]
        piv = p[i + 1]
        s = _isqrt_fraction(piv * p[i] * rem)
        lo = -((s + c) // piv)
        hi = (s - c) // piv
        for xi in range(lo, hi + 1):
            y = piv * xi + c
            term = Fraction(y * y, piv * p[i])
            val = partial + term
            if val > best[0]:
                continue
            x[i] = xi
            if i == 0:
                first = next((v for v in x if v != 0), 0)
                if first > 0:
                    if val < best[0]:
                        best[0] = val
                        out.clear()
                        out.append(tuple(x))
                    elif val == best[0]:
                        out.append(tuple(x))
            else:
                descend(i - 1, val)
        x[i] = 0

    descend(n - 1, Fraction(0))
    if not out:
        return None, ()
    return best[0] / scale, tuple(sorted(set(out)))


def minimum(q):
    """Minimum and full minimal-vector set (up to sign) of a PD form."""
    c = min(q.gram[i][i] for i in range(q.n))
    val, vecs = shortest_vectors(q, c)
    return MinData(val, vecs)


def hermite_bound_ok(q, mindata=None):
    """Check min(Q)^N <= det(Q) * (4/3)^(N(N-1)/2), exactly."""
    md = mindata or minimum(q)
    n = q.n
    return md.minimum ** n <= q.det() * Fraction(4, 3) ** (n * (n - 1) // 2)


# --- Hermitian forms over F --------------------------------------------------


class HermitianFormF:
    """m x m matrix over F with A = A^* (conjugate transpose)."""

    __slots__ = ("field", "m", "entries")

    def __init__(self, field, entries):
        self.field = field
        self.m = len(entries)
        ent = []
        for i in range(self.m):
            row = [field.coerce(x) for x in entries[i]]
            if len(row) != self.m:
                raise ValueError("matrix not square")
            ent.append(tuple(row))
        self.entries = tuple(ent)
        for i in range(self.m):
            for j in range(self.m):
                if self.entries[i][j] != field.conjugate(self.entries[j][i]):
                    raise ValueError("matrix is not Hermitian")

    def __eq__(self, other):
        return (isinstance(other, HermitianFormF)
                and self.field is other.field and self.entries == other.entries)

    def __hash__(self):
        return hash(tuple(tuple(e.coords for e in row) for row in self.entries))

    def apply_field(self, vec):
        """x* A x as a field element, for a vector over F."""
        f = self.field
        total = f.zero()
        for i in range(self.m):
            for j in range(self.m):
                total = total + f.conjugate(vec[i]) * self.entries[i][j] * vec[j]
        return total

    def __repr__(self):
        return "HermitianFormF(m=%d over %r)" % (self.m, self.field)


def q_map(vec, field):
    """Rank-one form v v^* for a nonzero vector over F."""
    vec = [field.coerce(x) for x in vec]
    if not any(vec):
        raise ValueError("zero vector")
    m = len(vec)
    ent = [[vec[i] * field.conjugate(vec[j]) for j in range(m)] for i in range(m)]
    return HermitianFormF(field, ent)


def trace_form(a):
    """Rational Gram of x -> Tr_{F/Q}(x* A x) on integral-basis coordinates.

    Coordinate layout: component i of the F-vector contributes coordinates
    i*n .. i*n + n - 1.
    """
    f = a.field
    n = f.n
    m = a.m
    basis = [f.element(f._basis_coords(t)) for t in range(n)]
    basis_conj = [f.conjugate(b) for b in basis]
    size = m * n
    gram = [[Fraction(0)] * size for _ in range(size)]
    for i in range(m):
        for j in range(m):
            aij = a.entries[i][j]
            for s in range(n):
                ws_a = basis_conj[s] * aij
                for t in range(n):
                    gram[i * n + s][j * n + t] = f.trace(ws_a * basis[t])
    return RationalQForm(gram)


def field_vector_coords(f, vec):
    """Flatten a vector over F into rational coordinates (layout as above)."""
    out = []
    for x in vec:
        out.extend(f.coerce(x).coords)
    return out


def coords_to_field_vector(f, coords, m):
    n = f.n
    return [f.element(coords[i * n:(i + 1) * n]) for i in range(m)]


class TSubspace:
    """Image of Her_m(F) inside Sym_N(Q) under the trace form."""

    def __init__(self, field, m):
        if field.r1 > 0 and field.r2 > 0:
            raise ValueError("mixed signature: field must be totally real or CM")
        if field.r2 > 0 and not field.is_cm():
            raise ValueError("totally imaginary field is not CM")
        self.field = field
        self.m = m
        self.n = field.n
        self.size = m * field.n
        self.herm_basis = self._hermitian_basis()
        self.basis = [trace_form(h) for h in self.herm_basis]
        self.dim = len(self.basis)
        expected = (m * m * field.r2 if field.r2 else m * (m + 1) // 2 * field.r1)
        if self.dim != expected:
            raise AssertionError("T dimension %d != expected %d" % (self.dim, expected))
        self._flat = [_sym_flatten(b.gram) for b in self.basis]
        if rank(self._flat) != self.dim:
            raise AssertionError("trace images of Hermitian basis are dependent")

    def _hermitian_basis(self):
        f = self.field
        m = self.m
        out = []
        if f.r2 == 0:
            diag_elems = [f.element(f._basis_coords(t)) for t in range(f.n)]
        else:
            # fixed space of conjugation
            from .linalg import kernel_basis
            conj = f._conj_matrix if f._conj_matrix is not None else None
            f.conjugate(f.gen())  # force conj matrix
            conj = f._conj_matrix
            rows = [[conj[i][j] - Fraction(int(i == j)) for j in range(f.n)]
                    for i in range(f.n)]
            diag_elems = [f.element(v) for v in kernel_basis(rows)]
        zero = f.zero()
        for i in range(m):
            for e in diag_elems:
                ent = [[zero] * m for _ in range(m)]
                ent[i][i] = e
                out.append(HermitianFormF(f, ent))
        all_elems = [f.element(f._basis_coords(t)) for t in range(f.n)]
        for i in range(m):
            for j in range(i + 1, m):
                for e in all_elems:
                    ent = [[zero] * m for _ in range(m)]
                    ent[i][j] = e
                    ent[j][i] = f.conjugate(e)
                    out.append(HermitianFormF(f, ent))
        return out

    def coords_of(self, q):
        """Coordinates of a RationalQForm in the T basis, or None."""
        target = _sym_flatten(q.gram)
        cols = self._flat
        mat = [[cols[k][idx] for k in range(self.dim)] for idx in range(len(target))]
        return solve(mat, target)

    def contains(self, q):
        return self.coords_of(q) is not None

    def form_from_coords(self, coords):
        size = self.size
        gram = [[Fraction(0)] * size for _ in range(size)]
        for c, b in zip(coords, self.basis):
            if c:
                for i in range(size):
                    row = b.gram[i]
                    for j in range(size):
                        if row[j]:
                            gram[i][j] += c * row[j]
        return RationalQForm(gram)

    def hermitian_from_coords(self, coords):
        f = self.field
        m = self.m
        ent = [[f.zero()] * m for _ in range(m)]
        for c, h in zip(coords, self.herm_basis):
            if c:
                for i in range(m):
                    for j in range(m):
                        ent[i][j] = ent[i][j] + f.coerce(Fraction(c)) * h.entries[i][j]
        return HermitianFormF(f, ent)

    def evaluation_rows(self, vectors):
        """Rows (B_k[v])_k for v in vectors: the functionals cutting P_T."""
        return [[b.apply(v) for b in self.basis] for v in vectors]


def full_sym_subspace(m):
    """T = all of Sym_m(Q), presented through the rational field."""
    from .field import nf_create
    return TSubspace(nf_create([0, 1], label="Q"), m)


def _sym_flatten(gram):
    n = len(gram)
    out = []
    for i in range(n):
        for j in range(i, n):
            out.append(gram[i][j])
    return out


def is_perfect(q, t):
    """Is Q a vertex of the Ryshkov polyhedron cut to span(T)?

    Exact: the functionals R -> R[v], v in Min(Q), must span T^*.
    """
    if not q.is_positive_definite():
        raise ValueError("form is not positive definite")
    if t.coords_of(q) is None:
        raise ValueError("form does not lie in span(T)")
    md = minimum(q)
    rows = t.evaluation_rows(md.vectors)
    return rank(rows) == t.dim
