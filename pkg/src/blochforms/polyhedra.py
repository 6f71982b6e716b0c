"""Exact rational polyhedral cones: H <-> V conversion and face lattices.

Double description with incremental constraint insertion.  All data is
integer (primitive vectors); adjacency of rays is certified by the rank of
their common tight constraints.  Cones may carry lineality; the pointed
part is handled in a quotient and lifted back.
"""

from dataclasses import dataclass, field as dfield
from fractions import Fraction

from .linalg import (inverse, kernel_basis, mat_vec, rank, rank_int,
                     row_space_basis, solve, transpose)
from .numutil import primitive_signed, primitive_vector


@dataclass(frozen=True)
class HRep:
    dim: int
    inequalities: tuple  # primitive integer functionals, l(x) >= 0
    equalities: tuple = ()

    @staticmethod
    def make(dim, inequalities, equalities=()):
        ineqs = sorted({primitive_signed(l) for l in inequalities if any(l)})
        eqs = sorted({primitive_vector(l) for l in equalities if any(l)})
        return HRep(dim, tuple(ineqs), tuple(eqs))

    def contains(self, x):
        return (all(_dot(l, x) >= 0 for l in self.inequalities)
                and all(_dot(l, x) == 0 for l in self.equalities))


@dataclass(frozen=True)
class VRep:
    dim: int
    rays: tuple       # primitive integer vectors, pairwise non-proportional
    lineality: tuple  # basis of the maximal linear subspace


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def linearity_space(h):
    """Basis of {x : l(x) = 0 for every constraint}, primitive and sorted."""
    rows = [list(l) for l in h.inequalities] + [list(l) for l in h.equalities]
    if not rows:
        return [tuple(int(i == j) for j in range(h.dim)) for i in range(h.dim)]
    basis = kernel_basis(rows)
    return sorted(primitive_vector(v) for v in basis)


def dd_convert(h):
    """Extreme rays and lineality of {x : ineqs >= 0, eqs = 0}."""
    d = h.dim
    eq_rows = [list(l) for l in h.equalities]
    if eq_rows:
        u_basis = kernel_basis(eq_rows)  # columns of the section into {eqs=0}
    else:
        u_basis = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    if not u_basis:
        return VRep(d, (), ())
    k = len(u_basis)
    # inequalities restricted to the equality subspace
    restricted = []
    for l in h.inequalities:
        restricted.append([_dot(l, u) for u in u_basis])
    restricted = [r for r in (primitive_signed(r) for r in restricted) if any(r)]
    restricted = sorted(set(restricted))

    lin_sub = kernel_basis([list(r) for r in restricted]) if restricted else \
        [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    lineality = sorted(primitive_vector(_combine(u_basis, v)) for v in lin_sub)

    if not restricted:
        return VRep(d, (), tuple(lineality))

    # quotient to a pointed cone: coordinates on the row space
    p_rows = row_space_basis([list(r) for r in restricted])
    kp = len(p_rows)
    # express each restricted functional in the quotient coordinates
    quot_rows = []
    p_cols = transpose(p_rows)
    for r in restricted:
        sol = solve(p_cols, list(r))  # r = sol . p_rows
        assert sol is not None
        quot_rows.append(primitive_signed(sol))
    quot_rows = sorted(set(quot_rows))

    rays_q = _dd_pointed(quot_rows, kp)

    # lift: section s with P s = id on R^kp
    ppt = [[_dot(a, b) for b in p_rows] for a in p_rows]
    ppt_inv = inverse(ppt)
    rays = []
    for rq in rays_q:
        w = mat_vec(ppt_inv, list(rq))
        lift_k = [sum(Fraction(p_rows[t][j]) * w[t] for t in range(kp)) for j in range(k)]
        rays.append(primitive_signed(_combine(u_basis, lift_k)))
    return VRep(d, tuple(sorted(set(rays))), tuple(lineality))


def _combine(basis, coeffs):
    d = len(basis[0])
    out = [Fraction(0)] * d
    for c, b in zip(coeffs, basis):
        if c:
            for j in range(d):
                out[j] += Fraction(c) * Fraction(b[j])
    return out


def _dd_pointed(rows, dim):
    """Extreme rays of a pointed cone {x in R^dim : rows >= 0}.

    rows must have rank == dim.  Incremental double description; adjacency
    via rank of common tight constraints (popcount prefilter first).
    """
    # initial simplicial subset: first `dim` independent rows
    init, rest = [], []
    cur = []
    for idx, r in enumerate(rows):
        if len(init) < dim and rank(cur + [list(r)]) > len(cur):
            init.append(idx)
            cur.append(list(r))
        else:
            rest.append(idx)
    if len(init) < dim:
        raise ValueError("constraint system is not pointed")
    minv = inverse([list(rows[i]) for i in init])
    rays = []
    for col in range(dim):
        v = [minv[r][col] for r in range(dim)]
        rays.append(primitive_signed(v))

    inserted = list(init)
    tight = []
    for r in rays:
        mask = 0
        for pos, ci in enumerate(inserted):
            if _dot(rows[ci], r) == 0:
                mask |= 1 << pos
        tight.append(mask)

    for ci in rest:
        l = rows[ci]
        vals = [_dot(l, r) for r in rays]
        if all(v >= 0 for v in vals):
            inserted.append(ci)
            tight = [m | ((1 << (len(inserted) - 1)) if vals[i] == 0 else 0)
                     for i, m in enumerate(tight)]
            continue
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        new_rays, new_tight_sets = [], []
        for ip in pos:
            for iq in neg:
                common = tight[ip] & tight[iq]
                if common.bit_count() < dim - 2:
                    continue
                if not _adjacent(rows, inserted, common, dim):
                    continue
                comb = [vals[ip] * rays[iq][j] - vals[iq] * rays[ip][j]
                        for j in range(dim)]
                nr = primitive_signed(comb)
                new_rays.append(nr)
                new_tight_sets.append(common)
        keep_idx = pos + zero
        merged, merged_tight = [], []
        seen = {}
        for i in keep_idx:
            seen[rays[i]] = tight[i]
        for nr, tset in zip(new_rays, new_tight_sets):
            if nr not in seen:
                seen[nr] = tset
        inserted.append(ci)
        newbit = 1 << (len(inserted) - 1)
        for r, m in seen.items():
            v = _dot(l, r)
            assert v >= 0
            merged.append(r)
            merged_tight.append(m | (newbit if v == 0 else 0))
        rays, tight = merged, merged_tight
        # recompute tight masks for the new rays against all inserted rows
        for i, r in enumerate(rays):
            mask = 0
            for posn, cj in enumerate(inserted):
                if _dot(rows[cj], r) == 0:
                    mask |= 1 << posn
            tight[i] = mask
    return sorted(set(rays))


def _adjacent(rows, inserted, common_mask, dim):
    sel = []
    pos = 0
    m = common_mask
    while m:
        if m & 1:
            sel.append(rows[inserted[pos]])
        m >>= 1
        pos += 1
    return rank_int(sel) == dim - 2


def hrep_of_rays(dim, rays):
    """H-description of the cone generated by the rays (duality twice)."""
    if not rays:
        return HRep.make(dim, [], [tuple(int(i == j) for j in range(dim))
                                   for i in range(dim)])
    dual = dd_convert(HRep.make(dim, rays))
    ineqs = list(dual.rays)
    eqs = list(dual.lineality)
    return HRep.make(dim, ineqs, eqs)


def ray_tight_masks(h, rays):
    masks = []
    for r in rays:
        mask = 0
        for i, l in enumerate(h.inequalities):
            if _dot(l, r) == 0:
                mask |= 1 << i
        masks.append(mask)
    return masks


def face_lattice(v, h):
    """All faces of the cone as frozensets of ray indices, keyed by dimension.

    Requires trivial lineality.  The improper face (all rays) is included
    at the cone's dimension; the zero face is frozenset() at dimension 0.
    """
    if v.lineality:
        raise ValueError("face lattice needs a pointed cone")
    rays = v.rays
    nrays = len(rays)
    if nrays == 0:
        return {0: [frozenset()]}
    masks = ray_tight_masks(h, rays)
    facet_sets = []
    for i, l in enumerate(h.inequalities):
        s = frozenset(j for j in range(nrays) if masks[j] >> i & 1)
        if len(s) < nrays:
            facet_sets.append(s)
    facet_sets = sorted(set(facet_sets), key=lambda s: (len(s), sorted(s)))

    def face_dim(s):
        return rank([list(rays[i]) for i in s]) if s else 0

    all_face = frozenset(range(nrays))
    seen = {all_face}
    frontier = [all_face]
    while frontier:
        nxt = []
        for f in frontier:
            for fs in facet_sets:
                g = f & fs
                if g != f and g not in seen:
                    seen.add(g)
                    nxt.append(g)
        frontier = nxt
    latt = {}
    for f in seen:
        latt.setdefault(face_dim(f), []).append(f)
    for d in latt:
        latt[d].sort(key=lambda s: sorted(s))
    return latt


def vrep_faces(v, h, k):
    """All k-dimensional faces, as sorted tuples of ray indices."""
    cone_dim = rank([list(r) for r in v.rays]) if v.rays else 0
    if k < 0 or k > cone_dim:
        raise ValueError("face dimension out of range")
    latt = face_lattice(v, h)
    return [tuple(sorted(f)) for f in latt.get(k, [])]


def cone_debug_json(h, v):
    """Debug dump of a cone's two descriptions."""
    return {"dim": h.dim,
            "inequalities": [list(l) for l in h.inequalities],
            "equalities": [list(l) for l in h.equalities],
            "rays": [list(r) for r in v.rays],
            "lineality": [list(l) for l in v.lineality]}
