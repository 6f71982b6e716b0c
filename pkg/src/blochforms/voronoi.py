"""Graph-traversal enumeration of perfect and T-perfect forms.

The Ryshkov polyhedron {Q : Q[x] >= 1} is walked vertex to vertex: at a
perfect form A the tangent cone P_T(A) = {R in T : R[v] >= 0 for v in
Min(A)} is converted to rays, and each non-PSD extreme ray R yields a
contiguous perfect form A + rho*R.  rho is found by the bisection with
exact rational jumps; equivalence of vertices is decided by a
Gram-pruned assignment search on minimal vectors, verified by explicit
transformation matrices.
"""

from dataclasses import dataclass, field as dfield
from fractions import Fraction
from math import gcd

from .linalg import inverse, kernel_basis, rank, transpose
from .polyhedra import HRep, dd_convert
from .qforms import (MinData, RationalQForm, coords_to_field_vector,
                     is_positive_semidefinite, minimum, shortest_vectors)


class BudgetExceeded(RuntimeError):
    def __init__(self, graph):
        super().__init__("class budget exhausted")
        self.graph = graph


class DeadEnd(RuntimeError):
    pass


def first_perfect_form(m):
    """Voronoi's first perfect form (A_m root form), scaled to minimum 1."""
    gram = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        gram[i][i] = Fraction(1)
        if i + 1 < m:
            gram[i][i + 1] = Fraction(-1, 2)
            gram[i + 1][i] = Fraction(-1, 2)
    return RationalQForm(gram)


def min_upto(q, cap):
    """(min value, minimal vectors) among nonzero x with Q[x] <= cap."""
    return shortest_vectors(q, cap)


def neighbor_rho(a, r, min_a, min_vecs, max_iter=400):
    """Smallest rho > 0 with min(A + rho R) = min(A) and new minimal vectors.

    a: perfect form; r: direction form (extreme ray of P_T(A), not PSD);
    min_a, min_vecs: minimum data of a.  Exact rational output.
    """
    if is_positive_semidefinite(r.gram):
        raise DeadEnd("positive semidefinite ray has no contiguous form")
    old_set = frozenset(min_vecs)

    def data(t):
        b = a.add(r, t)
        if not b.is_positive_definite():
            return None
        mv, vecs = min_upto(b, min_a)
        return b, mv, frozenset(vecs)

    l, u = Fraction(0), Fraction(1)
    for _ in range(max_iter):
        d = data(u)
        if d is None:
            u = (l + u) / 2
        elif d[1] == min_a and d[2] <= old_set:
            l, u = u, 2 * u
        else:
            break
    else:
        raise RuntimeError("no upper bound found for neighbor step")

    for _ in range(max_iter):
        dl = data(l)
        assert dl is not None and dl[1] == min_a
        if not (dl[2] <= old_set):
            return l, MinData(dl[1], tuple(sorted(dl[2])))
        gamma = (l + u) / 2
        du = data(u)
        if du is not None and du[1] == min_a and not (du[2] <= old_set):
            l = u
            continue
        dg = data(gamma)
        assert dg is not None
        if dg[1] >= min_a:
            l = gamma
        else:
            cands = [gamma]
            for v in dg[2]:
                rv = r.apply(v)
                if rv < 0:
                    cands.append((min_a - a.apply(v)) / rv)
            new_u = min(cands)
            assert new_u <= gamma
            u = new_u
    raise RuntimeError("neighbor bisection failed to terminate")


def tangent_cone_rays(t, min_vecs):
    """Extreme rays of P_T(A) in T coordinates, deterministic order."""
    rows = t.evaluation_rows(min_vecs)
    h = HRep.make(t.dim, rows)
    v = dd_convert(h)
    if v.lineality:
        raise ValueError("tangent cone has lineality: form is not T-perfect")
    return v.rays


def invariant_key(q, md):
    """Cheap GL-invariant fingerprint of a perfect class (min normalized).

    Uses the integer-scaled Gram so the profile computation stays in int
    arithmetic: (|Min|, det, sorted multiset of per-vector |<v, w>| rows).
    """
    vecs = md.vectors
    den = 1
    for row in q.gram:
        for e in row:
            den = den * e.denominator // gcd(den, e.denominator)
    gi = [[int(e * den) for e in row] for row in q.gram]
    n = q.n

    def bil(v, w):
        tot = 0
        for a in range(n):
            va = v[a]
            if va:
                ra = gi[a]
                s = 0
                for b in range(n):
                    if w[b]:
                        s += ra[b] * w[b]
                tot += va * s
        return abs(tot)

    pair_values = []
    for i in range(len(vecs)):
        profile = [bil(vecs[i], vecs[j]) for j in range(len(vecs)) if j != i]
        profile.sort()
        pair_values.append(tuple(profile))
    return (len(vecs), q.det(), tuple(sorted(pair_values)))


@dataclass
class PerfectClass:
    form: RationalQForm
    min_data: MinData
    key: tuple
    discovered_from: tuple  # (parent class index, ray index) or None

    @staticmethod
    def build(form, discovered_from=None, min_data=None):
        md = min_data if min_data is not None else minimum(form)
        if md.minimum != 1:
            form = form.scale(1 / md.minimum)
            md = MinData(Fraction(1), md.vectors)
        return PerfectClass(form, md, invariant_key(form, md), discovered_from)


@dataclass
class VoronoiGraph:
    tspace: object
    classes: list = dfield(default_factory=list)
    edges: list = dfield(default_factory=list)   # (src, ray_idx, rho, dst)
    dead_ends: list = dfield(default_factory=list)
    processed: list = dfield(default_factory=list)
    complete: bool = False

    def key_index(self):
        d = {}
        for i, c in enumerate(self.classes):
            d.setdefault(c.key, []).append(i)
        return d


# --- equivalence testing ------------------------------------------------------


def _independent_subset(vectors, size):
    chosen, mats = [], []
    for v in vectors:
        if len(chosen) == size:
            break
        if rank(mats + [list(map(Fraction, v))]) > len(mats):
            chosen.append(v)
            mats.append(list(map(Fraction, v)))
    return chosen if len(chosen) == size else None


def rational_equivalence(cls_a, cls_b, max_nodes=2000000):
    """U in GL_N(Z) with U^T A U = B, or None.  Exact and exhaustive.

    Assignment search sending an independent subset of Min(B) into
    +-Min(A), pruned by Gram values.
    """
    a, b = cls_a.form, cls_b.form
    n = a.n
    if cls_a.key != cls_b.key:
        return None
    vb = _independent_subset(cls_b.min_data.vectors, n)
    if vb is None:
        raise ValueError("minimal vectors do not span (unexpected for perfect forms)")
    targets = []
    for w in cls_a.min_data.vectors:
        targets.append(w)
        targets.append(tuple(-x for x in w))
    gram_b = [[b.bilinear(vb[i], vb[j]) for j in range(n)] for i in range(n)]
    vb_inv = inverse(transpose([list(map(Fraction, v)) for v in vb]))

    assign = [None] * n
    budget = [max_nodes]

    def backtrack(k):
        if budget[0] <= 0:
            raise RuntimeError("equivalence search budget exhausted")
        if k == n:
            w_mat = transpose([list(map(Fraction, assign[i])) for i in range(n)])
            u = _matmul(w_mat, vb_inv)
            for row in u:
                for x in row:
                    if Fraction(x).denominator != 1:
                        return None
            from .linalg import det as _det
            if abs(_det(u)) != 1:
                return None
            return [[int(x) for x in row] for row in u]
        for w in targets:
            budget[0] -= 1
            ok = True
            for i in range(k):
                if a.bilinear(assign[i], w) != gram_b[i][k]:
                    ok = False
                    break
            if ok:
                assign[k] = w
                res = backtrack(k + 1)
                if res is not None:
                    return res
                assign[k] = None
        return None

    u = backtrack(0)
    if u is None:
        return None
    # verify U^T A U = B exactly
    ut = transpose(u)
    am = [list(row) for row in a.gram]
    prod = _matmul(_matmul(ut, am), u)
    assert prod == [list(row) for row in b.gram], "equivalence verification failed"
    return u


def _matmul(a, b):
    n, k, p = len(a), len(b), len(b[0])
    out = [[Fraction(0)] * p for _ in range(n)]
    for i in range(n):
        for t in range(k):
            c = a[i][t]
            if c:
                for j in range(p):
                    if b[t][j]:
                        out[i][j] += c * b[t][j]
    return out


def hermitian_min_vectors(t, md):
    """Minimal vectors as field vectors, expanded over torsion units."""
    f = t.field
    units = f.torsion_units()
    out = []
    seen = set()
    for v in md.vectors:
        fv = coords_to_field_vector(f, [Fraction(x) for x in v], t.m)
        for u in units:
            w = tuple(u * x for x in fv)
            key = tuple(x.coords for x in w)
            if key not in seen:
                seen.add(key)
                out.append(w)
    return out


def hermitian_equivalences(cls_a, cls_b, t, first_only=True, want_dets=False):
    """P in GL_m(O_F) with P^* A P = B (forms via their Hermitian avatars).

    Yields the transformation(s); with want_dets, also scans all solutions
    and returns the set of determinants (needed for SL equivalence tests).
    """
    f = t.field
    m = t.m
    if m != 2:
        raise NotImplementedError("Hermitian equivalence implemented for m = 2")
    a_h = t.hermitian_from_coords(t.coords_of(cls_a.form))
    b_h = t.hermitian_from_coords(t.coords_of(cls_b.form))
    vecs_b = hermitian_min_vectors(t, cls_b.min_data)
    vecs_a = hermitian_min_vectors(t, cls_a.min_data)

    # independent pair from Min(B)
    pair = None
    for i in range(len(vecs_b)):
        for j in range(i + 1, len(vecs_b)):
            d = vecs_b[i][0] * vecs_b[j][1] - vecs_b[i][1] * vecs_b[j][0]
            if d:
                pair = (vecs_b[i], vecs_b[j])
                break
        if pair:
            break
    if pair is None:
        raise ValueError("minimal vectors do not span F^2")
    v1, v2 = pair

    def herm_pair(hform, x, y):
        fconj = f.conjugate
        total = f.zero()
        for i in range(2):
            for j in range(2):
                total = total + fconj(x[i]) * hform.entries[i][j] * y[j]
        return total

    g11 = herm_pair(b_h, v1, v1)
    g12 = herm_pair(b_h, v1, v2)
    g22 = herm_pair(b_h, v2, v2)
    vmat_det = v1[0] * v2[1] - v1[1] * v2[0]
    # V^{-1} for V = columns (v1 v2)
    vinv = [[v2[1] / vmat_det, -v2[0] / vmat_det],
            [-v1[1] / vmat_det, v1[0] / vmat_det]]

    results = []
    dets = set()
    for w1 in vecs_a:
        if herm_pair(a_h, w1, w1) != g11:
            continue
        for w2 in vecs_a:
            if herm_pair(a_h, w2, w2) != g22:
                continue
            if herm_pair(a_h, w1, w2) != g12:
                continue
            # P columns: P v1 = w1, P v2 = w2  =>  P = W V^{-1}
            p = [[w1[0] * vinv[0][0] + w2[0] * vinv[1][0],
                  w1[0] * vinv[0][1] + w2[0] * vinv[1][1]],
                 [w1[1] * vinv[0][0] + w2[1] * vinv[1][0],
                  w1[1] * vinv[0][1] + w2[1] * vinv[1][1]]]
            if not all(x.is_integral() for row in p for x in row):
                continue
            pdet = p[0][0] * p[1][1] - p[0][1] * p[1][0]
            if abs(pdet.norm()) != 1:
                continue
            results.append(p)
            dets.add(pdet)
            if first_only and not want_dets:
                return results, dets
    return results, dets


def equivalence_test(cls_a, cls_b, t, group="auto"):
    """Transformation between two perfect classes, or None.

    group: 'glz' for GL_N(Z) on trace coordinates, 'glof' for GL_m(O_F),
    'slof' for SL_m(O_F); 'auto' picks glz over Q and glof otherwise.
    """
    if cls_a.key != cls_b.key:
        return None
    if group == "auto":
        group = "glz" if t.field.n == 1 else "glof"
    if group == "glz":
        return rational_equivalence(cls_a, cls_b)
    if group == "slof":
        f = t.field
        res, _ = hermitian_equivalences(cls_a, cls_b, t, first_only=False,
                                        want_dets=True)
        for p in res:
            pdet = p[0][0] * p[1][1] - p[0][1] * p[1][0]
            for lam in f.torsion_units():
                if lam * lam * pdet == f.one():
                    return [[lam * x for x in row] for row in p]
        return None
    res, _ = hermitian_equivalences(cls_a, cls_b, t, first_only=True)
    return res[0] if res else None


def sl_equivalence_exists(cls_a, cls_b, t):
    """Is there P in SL_m(O_F) with P^* A P = B?

    A GL solution P can be rescaled by a torsion unit u (which leaves the
    form fixed since u*conj(u) = 1) changing det by u^2; so SL-equivalence
    holds iff some GL solution has det in the squares of torsion units.
    """
    res, dets = hermitian_equivalences(cls_a, cls_b, t, first_only=False,
                                       want_dets=True)
    if not res:
        return False
    f = t.field
    return any(f.is_square_torsion_unit(d) for d in dets)


# --- the traversal -------------------------------------------------------------


def initial_t_perfect(q0, t, max_steps=200):
    """Walk an arbitrary PD form in span(T) to a T-perfect one (same minimum
    after normalization to 1)."""
    if t.coords_of(q0) is None:
        raise ValueError("starting form does not lie in span(T)")
    md = minimum(q0)
    a = q0.scale(1 / md.minimum)
    md = MinData(Fraction(1), md.vectors)
    for _ in range(max_steps):
        rows = t.evaluation_rows(md.vectors)
        lin = kernel_basis(rows)
        if not lin:
            return PerfectClass.build(a)
        r_coords = lin[0]
        r = t.form_from_coords(r_coords)
        if is_positive_semidefinite(r.gram):
            r = t.form_from_coords([-c for c in r_coords])
            if is_positive_semidefinite(r.gram):
                raise ArithmeticError("lineality direction and its negative both PSD")
        rho = _step_rho(a, r, md)
        a = a.add(r, rho)
        new_md = minimum(a)
        assert new_md.minimum == 1
        assert set(md.vectors) < set(new_md.vectors), "no progress in Algorithm 4 step"
        md = new_md
    raise RuntimeError("initial T-perfect walk exceeded its step budget")


def _step_rho(a, r, md):
    """Algorithm-2 stepping reused for lineality directions (R[v] = 0
    on all current minimal vectors, R not PSD)."""
    old_set = frozenset(md.vectors)
    min_a = md.minimum

    def data(tpar):
        b = a.add(r, tpar)
        if not b.is_positive_definite():
            return None
        mv, vecs = min_upto(b, min_a)
        return b, mv, frozenset(vecs)

    l, u = Fraction(0), Fraction(1)
    for _ in range(400):
        d = data(u)
        if d is None:
            u = (l + u) / 2
        elif d[1] == min_a and d[2] <= old_set:
            l, u = u, 2 * u
        else:
            break
    for _ in range(400):
        dl = data(l)
        if not (dl[2] <= old_set):
            return l
        gamma = (l + u) / 2
        du = data(u)
        if du is not None and du[1] == min_a and not (du[2] <= old_set):
            l = u
            continue
        dg = data(gamma)
        if dg[1] >= min_a:
            l = gamma
        else:
            cands = [gamma]
            for v in dg[2]:
                rv = r.apply(v)
                if rv < 0:
                    cands.append((min_a - a.apply(v)) / rv)
            u = min(cands)
    raise RuntimeError("lineality step failed to terminate")


def enumerate_perfect(t, a0=None, budget=64, order="fifo", group="auto",
                      resume=None):
    """Complete list of T-inequivalent T-perfect forms with contiguity edges.

    a0: starting T-perfect form (defaults to walking trace_form(identity)).
    resume: a partial VoronoiGraph to continue (unprocessed classes re-enter
    the worklist).  Raises BudgetExceeded (with the partial graph attached)
    past `budget` classes.
    """
    if resume is not None:
        graph = resume
        pending = [i for i, done in enumerate(graph.processed) if not done]
        keyidx = graph.key_index()
    else:
        if a0 is None:
            from .qforms import HermitianFormF, trace_form
            f = t.field
            ident = HermitianFormF(f, [[1 if i == j else 0 for j in range(t.m)]
                                       for i in range(t.m)])
            start = initial_t_perfect(trace_form(ident), t)
        else:
            start = PerfectClass.build(a0) if isinstance(a0, RationalQForm) else a0
        graph = VoronoiGraph(tspace=t, classes=[start], processed=[False])
        pending = [0]
        keyidx = {start.key: [0]}
    while pending:
        idx = pending.pop(0) if order == "fifo" else pending.pop()
        graph.processed[idx] = True
        cls = graph.classes[idx]
        rays = tangent_cone_rays(t, cls.min_data.vectors)
        for ray_i, ray in enumerate(rays):
            r = t.form_from_coords(ray)
            if is_positive_semidefinite(r.gram):
                graph.dead_ends.append((idx, ray_i))
                continue
            rho, nbr_md = neighbor_rho(cls.form, r, cls.min_data.minimum,
                                       cls.min_data.vectors)
            neighbor = PerfectClass.build(cls.form.add(r, rho),
                                          discovered_from=(idx, ray_i),
                                          min_data=nbr_md)
            found = None
            for j in keyidx.get(neighbor.key, []):
                if equivalence_test(neighbor, graph.classes[j], t, group) is not None:
                    found = j
                    break
            if found is None:
                graph.classes.append(neighbor)
                graph.processed.append(False)
                found = len(graph.classes) - 1
                keyidx.setdefault(neighbor.key, []).append(found)
                pending.append(found)
                if len(graph.classes) > budget:
                    raise BudgetExceeded(graph)
            graph.edges.append((idx, ray_i, rho, found))
    graph.complete = True
    return graph
