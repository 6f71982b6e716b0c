from fractions import Fraction

import pytest

from blochforms.field import nf_create


def test_gaussian_invariants(field_gauss):
    f = field_gauss
    assert (f.n, f.r1, f.r2) == (2, 0, 1)
    assert f.discriminant == -4
    assert f.mu_order == 4


def test_eisenstein_basis_and_disc(field_eis):
    f = field_eis
    assert f.discriminant == -3
    assert f.mu_order == 6
    assert f.basis_flag == "standard imaginary quadratic"
    # supplied basis variant: {1, (1+sqrt-3)/2} given explicitly
    g = nf_create([3, 0, 1], [[1, 0], [Fraction(1, 2), Fraction(1, 2)]])
    assert g.discriminant == -3


def test_zeta5(field_zeta5):
    f = field_zeta5
    assert (f.r1, f.r2) == (0, 2)
    assert f.discriminant == 125
    z = f.gen()
    assert z ** 5 == f.one()
    assert f.mu_order == 10
    assert f.sqrt5_in_f()
    assert f.conjugate(z) == z ** 4


def test_reducible_rejected():
    with pytest.raises(ValueError):
        nf_create([1, 2, 1])  # (x+1)^2
    with pytest.raises(ValueError):
        nf_create([-1, 0, 1])  # (x-1)(x+1)


def test_bad_basis_rejected():
    # {1, i/2} is not closed under multiplication into its Z-span
    with pytest.raises(ValueError):
        nf_create([1, 0, 1], [[1, 0], [0, Fraction(1, 2)]])


def test_arithmetic_examples(field_gauss, field_zeta5):
    f = field_gauss
    i = f.gen()
    assert (1 + i) * (1 - i) == f.coerce(2)
    assert 1 / i == -i
    z = field_zeta5.gen()
    assert z ** 5 == field_zeta5.one()
    with pytest.raises(ZeroDivisionError):
        f.one() / f.zero()


def test_embed_examples(field_gauss, field_eis, field_zeta5):
    i = field_gauss.gen()
    e = field_gauss.embed(i, 0, 60)
    assert e.re.contains(0) and e.im.contains(1)
    # sqrt(-3) ~ 1.7320508i
    s3 = field_eis.element([-1, 2])  # 2w - 1 = sqrt(-3)
    v = field_eis.embed(s3, 0, 60)
    assert v.re.contains(0)
    assert abs(float(v.im.mid()) - 3 ** 0.5) < 1e-12
    # zeta5 at the second place is a primitive root on the unit circle
    z = field_zeta5.gen()
    w = field_zeta5.embed(z, 1, 60)
    assert abs(float(abs(w).mid()) - 1) < 1e-12


def test_embedding_soundness_product(field_zeta5):
    # embed(x*y) inside embed(x)*embed(y)
    f = field_zeta5
    x = f.element([1, 2, 0, -1])
    y = f.element([0, 1, 1, 1])
    for place in range(f.num_places()):
        ex = f.embed(x, place, 70)
        ey = f.embed(y, place, 70)
        exy = f.embed(x * y, place, 70)
        prod = ex * ey
        assert prod.re.overlaps(exy.re) and prod.im.overlaps(exy.im)


def test_embedding_order_deterministic(field_zeta5):
    f = field_zeta5
    boxes1 = [f.embed(f.gen(), j, 53) for j in range(2)]
    boxes2 = [f.embed(f.gen(), j, 53) for j in range(2)]
    for a, b in zip(boxes1, boxes2):
        assert a.re.mid() == b.re.mid() and a.im.mid() == b.im.mid()
    # ascending real parts
    assert boxes1[0].re.mid() < boxes1[1].re.mid()


def test_mu_group_properties(field_gauss, field_eis):
    for f in (field_gauss, field_eis):
        mu = f.mu_gen
        assert mu ** f.mu_order == f.one()
        for k in range(1, f.mu_order):
            assert mu ** k != f.one()


def test_sum_of_two_squares(field_q, field_gauss, field_eis):
    ok, cert = field_gauss.minus_one_sum_of_two_squares()
    assert ok is True
    a, b = cert
    assert a * a + b * b == field_gauss.coerce(-1)
    ok, reason = field_q.minus_one_sum_of_two_squares()
    assert ok is False
    ok, cert = field_eis.minus_one_sum_of_two_squares()
    assert ok is True
    a, b = cert
    assert a * a + b * b == field_eis.coerce(-1)


def test_sqrt5(field_gauss, field_zeta5):
    assert not field_gauss.sqrt5_in_f()
    s = field_zeta5.contains_sqrt(5)
    assert s is not None and s * s == field_zeta5.coerce(5)


def test_trace_norm(field_gauss):
    i = field_gauss.gen()
    assert (1 + i).trace() == 2
    assert (1 + i).norm() == 2
    assert i.norm() == 1


def test_factor_element_roundtrip(field_gauss, field_eis):
    import random
    random.seed(11)
    for f in (field_gauss, field_eis):
        for _ in range(25):
            coords = [Fraction(random.randint(-9, 9), random.choice((1, 2, 3)))
                      for _ in range(2)]
            x = f.element(coords)
            if not x:
                continue
            unit, fac = f.factor_element(x)
            prod = unit
            for g, e in fac:
                prod = prod * g ** e
            assert prod == x


def test_primes_over(field_gauss, field_eis):
    (g, e, _), = field_gauss.primes_over(2)
    assert e == 2 and abs(g.norm()) == 2
    split = field_gauss.primes_over(5)
    assert len(split) == 2 and all(abs(g.norm()) == 5 for g, _, _ in split)
    (g, e, fdeg), = field_eis.primes_over(2)
    assert fdeg == 2 and g == field_eis.coerce(2)


def test_ideal_gcd(field_gauss):
    f = field_gauss
    i = f.gen()
    g = f.ideal_gcd(f.coerce(2), 1 + i)
    assert abs(g.norm()) == 2
    g2 = f.ideal_gcd(f.coerce(6), f.coerce(4))
    assert abs(g2.norm()) == 4  # (2) has norm 4


def test_cos_orders(field_gauss, field_eis, field_zeta5):
    assert field_gauss.cos_orders() == [1, 2, 3, 4, 6]
    assert field_eis.cos_orders() == [1, 2, 3, 4, 6]
    assert 5 in field_zeta5.cos_orders() and 10 in field_zeta5.cos_orders()


def test_field_sqrt(field_gauss):
    f = field_gauss
    i = f.gen()
    assert f.field_sqrt(f.coerce(-1)) in (i, -i)
    assert f.field_sqrt(2 * i) is not None
    assert f.field_sqrt(f.coerce(3)) is None
