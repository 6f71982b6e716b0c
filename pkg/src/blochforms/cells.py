"""Cusps, Moebius transformations, and PSL_2(O_F) membership machinery.

Cusps are points of P^1(F), stored as the boundary value y/x (or infinity)
of a primitive vector (x, y); the rank-one form q(v) = v v^* maps to the
cusp (y : x).  Group elements are 2x2 matrices over F; membership in
PSL_2(O_F) is decided exactly by clearing content and testing whether the
determinant is a square torsion unit.
"""

from fractions import Fraction
from itertools import permutations

from .qforms import q_map, trace_form
from .numutil import primitive_signed


class Cusp:
    """A point of P^1(F): finite value z in F, or infinity (z = None)."""

    __slots__ = ("z",)

    def __init__(self, z=None):
        self.z = z

    @property
    def is_infinity(self):
        return self.z is None

    def key(self):
        if self.z is None:
            return (0,)
        return (1,) + tuple(self.z.coords)

    def __eq__(self, other):
        return isinstance(other, Cusp) and (
            (self.z is None and other.z is None)
            or (self.z is not None and other.z is not None and self.z == other.z))

    def __hash__(self):
        return hash(None if self.z is None else self.z.coords)

    def __repr__(self):
        return "Cusp(inf)" if self.z is None else "Cusp(%r)" % (self.z,)


def cusp_of_vector(field, v):
    """Cusp (y : x) of the vector v = (x, y) over F."""
    x, y = field.coerce(v[0]), field.coerce(v[1])
    if not x:
        if not y:
            raise ValueError("zero vector has no cusp")
        return Cusp(None)
    return Cusp(y / x)


def cusp_lift(field, cusp):
    """A primitive integral vector (x, y) with cusp (y : x); deterministic."""
    if cusp.is_infinity:
        return (field.zero(), field.one())
    z = cusp.z
    den = z.denominator()
    num = z * den
    denom = field.coerce(den)
    g = field.ideal_gcd(num, denom)
    return (denom / g, num / g)


def cusp_of_ray(t, hermitian_rank1):
    """Boundary cusp of a rank-one PSD Hermitian form v v^*."""
    a = hermitian_rank1.entries
    f = t.field
    if a[0][0]:
        v = (a[0][0], a[1][0])
    elif a[1][1]:
        v = (a[0][1], a[1][1])
    else:
        raise ValueError("matrix is zero or not rank one")
    return cusp_of_vector(f, v)


def apply_matrix_to_cusp(field, g, cusp):
    """Action of g = ((a,b),(c,d)) on a cusp, through lifts (x,y) -> g(x,y)."""
    x, y = cusp_lift(field, cusp)
    (a, b), (c, d) = g
    nx = a * x + b * y
    ny = c * x + d * y
    if not nx and not ny:
        raise ValueError("singular matrix action")
    return cusp_of_vector(field, (nx, ny))


def matrix_det(g):
    (a, b), (c, d) = g
    return a * d - b * c


def matrix_mul(f, g, h):
    (a, b), (c, d) = g
    (e, s), (u, v) = h
    return ((a * e + b * u, a * s + b * v), (c * e + d * u, c * s + d * v))


def matrix_inv(f, g):
    (a, b), (c, d) = g
    det = a * d - b * c
    if not det:
        raise ZeroDivisionError("singular matrix")
    return ((d / det, -b / det), (-c / det, a / det))


def moebius_through(field, src, dst):
    """g in GL_2(F) (up to scale) sending the 3 cusps src to dst in order.

    Construction: with lifts v0, v1, v2 and v2 = alpha v0 + beta v1, the
    matrix (alpha v0 | beta v1) maps (1:0), (0:1), (1:1) to the triple;
    compose one such for src and dst.
    """
    def standard(triple):
        v0 = cusp_lift(field, triple[0])
        v1 = cusp_lift(field, triple[1])
        v2 = cusp_lift(field, triple[2])
        det = v0[0] * v1[1] - v0[1] * v1[0]
        if not det:
            return None
        # solve (alpha, beta): alpha v0 + beta v1 = v2
        alpha = (v2[0] * v1[1] - v2[1] * v1[0]) / det
        beta = (v0[0] * v2[1] - v0[1] * v2[0]) / det
        if not alpha or not beta:
            return None
        return ((alpha * v0[0], beta * v1[0]), (alpha * v0[1], beta * v1[1]))

    ms = standard(src)
    md = standard(dst)
    if ms is None or md is None:
        return None
    return matrix_mul(field, md, matrix_inv(field, ms))


def scale_to_integral_primitive(field, g):
    """Scale g by lambda in F* so entries are integral with unit content."""
    entries = [g[0][0], g[0][1], g[1][0], g[1][1]]
    den = 1
    for e in entries:
        d = e.denominator()
        den = den * d // _int_gcd(den, d)
    ints = [e * den for e in entries]
    content = field.zero()
    for e in ints:
        content = field.ideal_gcd(content, e)
    ints = [e / content for e in ints]
    return ((ints[0], ints[1]), (ints[2], ints[3]))


def _int_gcd(a, b):
    from math import gcd
    return gcd(a, b)


def psl2_normalize(field, g):
    """Return h in SL_2(O_F) inducing the same Moebius map as g, or None.

    After primitive integral scaling the determinant is a unit u; scaling
    by a torsion unit mu multiplies det by mu^2, so membership holds iff u
    is a square torsion unit.  (For fields with infinite unit groups, small
    non-torsion units are also tried; exactness then depends on the unit
    list covering O_F^* / torsion, which holds for the bundled fields.)
    """
    gp = scale_to_integral_primitive(field, g)
    u = matrix_det(gp)
    if abs(u.norm()) != 1:
        return None
    candidates = list(field.torsion_units())
    if field.r1 + field.r2 - 1 > 0:
        candidates = candidates + field.small_units()
    for lam in candidates:
        if lam * lam * u == field.one():
            (a, b), (c, d) = gp
            return ((lam * a, lam * b), (lam * c, lam * d))
    return None


def psl2_canonical(field, h):
    """Canonical representative of {h, -h} for hashing PSL_2 elements."""
    (a, b), (c, d) = h
    t1 = (a.coords, b.coords, c.coords, d.coords)
    na, nb, nc, nd = -a, -b, -c, -d
    t2 = (na.coords, nb.coords, nc.coords, nd.coords)
    return t1 if t1 <= t2 else t2


def cell_maps(field, src_cusps, dst_cusps, first_only=False):
    """All h in PSL_2(O_F) with h(src set) = dst set (as SL_2 matrices).

    src and dst need at least 3 cusps; a Moebius map is fixed by the images
    of the first three.
    """
    src = sorted(src_cusps, key=lambda c: c.key())
    dst_set = set(dst_cusps)
    if len(src) != len(dst_set):
        return []
    if len(src) < 3:
        raise ValueError("cell_maps needs at least 3 cusps")
    anchors = tuple(src[:3])
    out = []
    seen = set()
    for triple in permutations(sorted(dst_set, key=lambda c: c.key()), 3):
        g = moebius_through(field, anchors, triple)
        if g is None:
            continue
        h = psl2_normalize(field, g)
        if h is None:
            continue
        try:
            images = {apply_matrix_to_cusp(field, h, c) for c in src}
        except ValueError:
            continue
        if images != dst_set:
            continue
        key = psl2_canonical(field, h)
        if key not in seen:
            seen.add(key)
            out.append(h)
            if first_only:
                return out
    return out


# --- edge (two-cusp cell) machinery -----------------------------------------


def transitive_to_infinity(field, cusp):
    """s in SL_2(O_F) with s(cusp) = infinity (class number one)."""
    if cusp.is_infinity:
        one, zero = field.one(), field.zero()
        return ((one, zero), (zero, one))
    q, p = cusp_lift(field, cusp)  # cusp = p/q
    g, alpha, beta = extended_gcd(field, q, p)
    if not (g == field.one() or abs(g.norm()) == 1):
        raise ArithmeticError("cusp lift not primitive")
    alpha, beta = alpha / g, beta / g
    # alpha*q + beta*p = 1; s = ((-p, q), (-alpha, -beta)) has det 1
    s = ((-p, q), (-alpha, -beta))
    det = matrix_det(s)
    assert det == field.one(), "Bezout completion failed"
    return s


def extended_gcd(field, a, b, max_steps=200):
    """(g, alpha, beta) with alpha*a + beta*b = g generating (a, b).

    Euclidean descent with coordinate rounding; falls back to trying the
    nearest lattice offsets.  Works for the norm-Euclidean fields in scope.
    """
    a, b = field.coerce(a), field.coerce(b)
    one, zero = field.one(), field.zero()
    r0, r1 = a, b
    s0, s1 = one, zero
    t0, t1 = zero, one
    for _ in range(max_steps):
        if not r1:
            return r0, s0, t0
        q = _round_div(field, r0, r1)
        r2 = r0 - q * r1
        if r2 and abs(r2.norm()) >= abs(r1.norm()):
            q2 = _best_offset(field, r0, r1, q)
            if q2 is None:
                raise ArithmeticError("Euclidean descent stalled (field not norm-Euclidean?)")
            q = q2
            r2 = r0 - q * r1
        r0, r1 = r1, r2
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    raise ArithmeticError("extended gcd did not terminate")


def _round_div(field, a, b):
    x = a / b
    return field.element([Fraction(round(c)) for c in x.coords])


def _best_offset(field, r0, r1, q):
    from itertools import product
    best = None
    bestn = abs((r0 - q * r1).norm())
    target = abs(r1.norm())
    for off in product((-1, 0, 1), repeat=field.n):
        q2 = q + field.element(off)
        n2 = abs((r0 - q2 * r1).norm())
        if n2 < target and (best is None or n2 < bestn):
            best, bestn = q2, n2
    return best


def _edge_units(field):
    """Units u to scan in the edge procedures (u^2 classes)."""
    units = list(field.torsion_units())
    if field.r1 + field.r2 - 1 > 0:
        extra = field.small_units()
        units = units + extra + [field.one() / e for e in extra]
    return units


def edge_map(field, edge_src, edge_dst):
    """h in PSL_2(O_F) mapping the 2-cusp set edge_src onto edge_dst, or None."""
    a, b = sorted(edge_src, key=lambda c: c.key())
    c, d = sorted(edge_dst, key=lambda c: c.key())
    s = transitive_to_infinity(field, a)
    t = transitive_to_infinity(field, c)
    z1 = apply_matrix_to_cusp(field, s, b)
    z2 = apply_matrix_to_cusp(field, t, d)
    assert not z1.is_infinity and not z2.is_infinity
    core = _affine_or_swap(field, z1.z, z2.z)
    if core is None:
        return None
    return matrix_mul(field, matrix_mul(field, matrix_inv(field, t), core), s)


def _affine_or_swap(field, z1, z2):
    """h in PSL_2(O) with h({inf, z1}) = {inf, z2}, or None.

    Case A: h fixes infinity: h(z) = u z + w, u a square unit, w integral.
    Case B: h(inf) = z2, h(z1) = inf: matrix [[-z1, 1], [c, z2]] scaled by
    lambda with lambda^2 det = 1; integrality forces lambda = L * unit with
    L = lcm of the cusp denominators.
    """
    one = field.one()
    for u in _edge_units(field):
        usq = u * u
        w = z2 - usq * z1
        if w.is_integral():
            # z -> u^2 z + w is induced by [[1,0],[w*u^{-1}, u]] after scaling
            lam = one / u
            h = ((lam, field.zero()), (lam * w, lam * usq))
            hn = psl2_normalize(field, h)
            if hn is not None:
                return hn
    l_gen = _lcm_denominator(field, z1, z2)
    for unit in _edge_units(field):
        lam = l_gen * unit
        if not lam:
            continue
        c_entry = -lam * z1 * z2 - one / lam
        if (lam * z1).is_integral() and (lam * z2).is_integral() \
                and lam.is_integral() and c_entry.is_integral():
            h = ((-lam * z1, lam), (c_entry, lam * z2))
            if matrix_det(h) == one:
                return h
    return None


def _lcm_denominator(field, z1, z2):
    q1 = _denominator_elt(field, z1)
    q2 = _denominator_elt(field, z2)
    g = field.ideal_gcd(q1, q2)
    return q1 * q2 / g


def _denominator_elt(field, z):
    den = field.coerce(z.denominator())
    num = z * den.rational_value()
    g = field.ideal_gcd(num, den)
    return den / g


def edge_is_flippable(field, edge):
    """Does some element of PSL_2(O_F) swap the two cusps of the edge?"""
    a, b = sorted(edge, key=lambda c: c.key())
    s = transitive_to_infinity(field, a)
    z1 = apply_matrix_to_cusp(field, s, b)
    one = field.one()
    l_gen = _denominator_elt(field, z1.z)
    for unit in _edge_units(field):
        lam = l_gen * unit
        c_entry = -lam * z1.z * z1.z - one / lam
        if (lam * z1.z).is_integral() and lam.is_integral() and c_entry.is_integral():
            h = ((-lam * z1.z, lam), (c_entry, lam * z1.z))
            if matrix_det(h) == one:
                return True
    return False


def edge_stabilizer_order(field, edge):
    """Order of the setwise stabilizer of an ideal edge in PSL_2(O_F)."""
    a, b = sorted(edge, key=lambda c: c.key())
    s = transitive_to_infinity(field, a)
    z1 = apply_matrix_to_cusp(field, s, b).z
    rotations = 0
    seen = set()
    for u in _edge_units(field):
        usq = u * u
        if usq.coords in seen:
            continue
        seen.add(usq.coords)
        w = z1 - usq * z1
        if w.is_integral():
            rotations += 1
    return rotations * (2 if edge_is_flippable(field, edge) else 1)


def cusps_equivalent(field, c1, c2):
    """All cusps are PSL_2(O_F)-equivalent for class number one fields."""
    s1 = transitive_to_infinity(field, c1)
    s2 = transitive_to_infinity(field, c2)
    return matrix_mul(field, matrix_inv(field, s2), s1)


def ray_coords_of_cusp(t, cusp):
    """T-coordinates (primitive) of the rank-one ray q(lift(cusp))."""
    cache = getattr(t, "_ray_cache", None)
    if cache is None:
        cache = {}
        t._ray_cache = cache
    key = cusp.key()
    if key in cache:
        return cache[key]
    v = cusp_lift(t.field, cusp)
    herm = q_map(v, t.field)
    coords = t.coords_of(trace_form(herm))
    if coords is None:
        raise ArithmeticError("rank-one ray not in span(T)")
    out = primitive_signed(coords)
    cache[key] = out
    return out
