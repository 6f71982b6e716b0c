import random
from fractions import Fraction as Fr
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from blochforms.qforms import (HermitianFormF, RationalQForm, TSubspace,
                               coords_to_field_vector, field_vector_coords,
                               fincke_pohst, hermite_bound_ok,
                               is_positive_semidefinite, is_perfect, minimum,
                               q_map, shortest_vectors, trace_form)

A2 = RationalQForm([[1, Fr(-1, 2)], [Fr(-1, 2), 1]])


def brute_vectors(q, cap):
    from tests.oracles import brute_short_vectors
    return brute_short_vectors(q, cap)


def test_q_map_examples(field_gauss):
    f = field_gauss
    i = f.gen()
    one, zero = f.one(), f.zero()
    a = q_map([1, 0], f)
    assert a.entries[0][0] == one and a.entries[1][1] == zero
    b = q_map([1, i], f)
    assert b.entries[0][1] == -i and b.entries[1][0] == i
    c = q_map([1, 1 + i], f)
    assert c.entries[1][1] == f.coerce(2) and c.entries[0][1] == 1 - i
    with pytest.raises(ValueError):
        q_map([0, 0], f)


def test_trace_form_examples(field_q, field_gauss):
    tf = trace_form(HermitianFormF(field_gauss, [[1, 0], [0, 1]]))
    assert tf.gram == tuple(tuple(Fr(2) if i == j else Fr(0) for j in range(4))
                            for i in range(4))
    t1 = trace_form(HermitianFormF(field_gauss, [[1]]))
    assert t1.gram == ((Fr(2), Fr(0)), (Fr(0), Fr(2)))  # Tr(x conj(x)) = 2|x|^2
    tq = trace_form(HermitianFormF(field_q, [[1]]))
    assert tq.gram == ((Fr(1),),)


def test_trace_form_agrees_with_field_trace(field_gauss, field_zeta5):
    # oracle: Tr(x* A x) computed through field arithmetic
    random.seed(7)
    for f in (field_gauss, field_zeta5):
        t = TSubspace(f, 2)
        for _ in range(20):
            coords = [Fr(random.randint(-3, 3)) for _ in range(len(t.herm_basis))]
            if not any(coords):
                continue
            herm = t.hermitian_from_coords(coords)
            tf = trace_form(herm)
            x = [f.element([random.randint(-4, 4) for _ in range(f.n)])
                 for _ in range(2)]
            lhs = tf.apply(field_vector_coords(f, x))
            rhs = f.trace(herm.apply_field(x))
            assert lhs == rhs


def test_t_subspace_dimensions(field_q, field_gauss, field_zeta5):
    assert TSubspace(field_gauss, 2).dim == 4
    assert TSubspace(field_q, 2).dim == 3
    assert TSubspace(field_zeta5, 2).dim == 8


def test_t_subspace_rejects_mixed_signature():
    from blochforms.field import nf_create
    mixed = nf_create([-2, 0, 0, 1], label="Q(cbrt2)")  # x^3 - 2: r1=1, r2=1
    with pytest.raises(ValueError):
        TSubspace(mixed, 2)


def test_positive_definite():
    assert RationalQForm([[1, 0], [0, 1]]).is_positive_definite()
    assert not RationalQForm([[1, 2], [2, 1]]).is_positive_definite()
    assert RationalQForm([[2, -1], [-1, 2]]).is_positive_definite()
    assert is_positive_semidefinite([[1, 1], [1, 1]])
    assert not is_positive_semidefinite([[0, 1], [1, 0]])


def test_fincke_pohst_examples():
    assert fincke_pohst(RationalQForm([[1, 0], [0, 1]]), 1) == [(0, 1), (1, 0)]
    assert fincke_pohst(A2, 1) == [(0, 1), (1, 0), (1, 1)]
    assert fincke_pohst(RationalQForm([[2, 0], [0, 3]]), 1) == []
    with pytest.raises(ValueError):
        fincke_pohst(RationalQForm([[1, 2], [2, 1]]), 1)


def test_fincke_pohst_brute_force():
    random.seed(3)
    for _ in range(60):
        n = random.randint(1, 4)
        while True:
            m = [[random.randint(-6, 6) for _ in range(n)] for _ in range(n)]
            g = [[Fr(m[i][j] + m[j][i], 2) if i != j
                  else Fr(abs(m[i][i]) + random.randint(1, 8))
                  for j in range(n)] for i in range(n)]
            q = RationalQForm(g)
            if q.is_positive_definite():
                break
        cap = Fr(random.randint(1, 8))
        assert fincke_pohst(q, cap) == brute_vectors(q, cap)


def test_minimum_examples():
    md = minimum(RationalQForm([[1, 0], [0, 1]]))
    assert md.minimum == 1 and len(md.vectors) == 2
    md = minimum(A2)
    assert md.minimum == 1 and len(md.vectors) == 3
    md = minimum(RationalQForm([[2, 0], [0, 3]]))
    assert md.minimum == 2 and md.vectors == ((1, 0),)


def test_minimum_scaling():
    random.seed(5)
    for _ in range(10):
        c = Fr(random.randint(1, 9), random.randint(1, 9))
        md = minimum(A2)
        md_scaled = minimum(A2.scale(c))
        assert md_scaled.minimum == c * md.minimum
        assert md_scaled.vectors == md.vectors


def test_shortest_vectors_cap_too_small():
    val, vecs = shortest_vectors(RationalQForm([[2, 0], [0, 3]]), Fr(1, 2))
    assert val is None and vecs == ()


def test_hermite_bound():
    assert hermite_bound_ok(A2)
    assert hermite_bound_ok(RationalQForm([[5, 1], [1, 3]]))


def test_is_perfect(field_q):
    t = TSubspace(field_q, 2)
    assert is_perfect(A2, t)
    assert not is_perfect(RationalQForm([[1, 0], [0, 1]]), t)
    from blochforms.voronoi import first_perfect_form
    t3 = TSubspace(field_q, 3)
    assert is_perfect(first_perfect_form(3), t3)


def test_field_vector_roundtrip(field_gauss):
    f = field_gauss
    vec = [f.element([1, 2]), f.element([-3, 5])]
    coords = field_vector_coords(f, vec)
    assert coords_to_field_vector(f, coords, 2) == vec


@settings(max_examples=30, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_trace_value_rational(field_gauss, a, b, c, d):
    # A[x] lands in Q for integral x (trace of a Hermitian value)
    f = field_gauss
    t = TSubspace(f, 2)
    herm = t.hermitian_from_coords([Fr(1), Fr(1), Fr(1, 2), Fr(-1, 3)])
    x = [f.element([a, b]), f.element([c, d])]
    val = f.trace(herm.apply_field(x))
    assert val.denominator in (1, 2, 3, 6)
