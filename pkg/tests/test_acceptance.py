"""Acceptance suite: one test per criterion, each printing PASS/FAIL.

Criteria 1 (m <= 5), 2-8 run in the default suite; the m = 6 extended run
and the Q(zeta_5) stretch are guarded by BLOCHFORMS_EXTENDED=1 since they
need an hour-plus of compute (both reported, neither quick).
"""

import json
import os
import random
import time
from fractions import Fraction as Fr
from itertools import product

import pytest

from blochforms.field import nf_create
from blochforms.qforms import RationalQForm, TSubspace, fincke_pohst
from blochforms.voronoi import enumerate_perfect, first_perfect_form

EXTENDED = os.environ.get("BLOCHFORMS_EXTENDED") == "1"


def _report(name, ok, detail=""):
    print("ACCEPTANCE %s: %s %s" % (name, "PASS" if ok else "FAIL", detail))
    assert ok, "%s failed: %s" % (name, detail)


# -- 1. rational perfect-form counts ------------------------------------------


def test_criterion_1_rational_counts(field_q):
    t0 = time.time()
    expected = {2: 1, 3: 1, 4: 2, 5: 3}
    counts = {}
    for m, want in expected.items():
        for order in ("fifo", "lifo"):
            t = TSubspace(field_q, m)
            g = enumerate_perfect(t, a0=first_perfect_form(m), budget=40,
                                  order=order)
            counts[(m, order)] = len(g.classes)
            assert g.complete
    ok = all(counts[(m, o)] == expected[m] for m in expected
             for o in ("fifo", "lifo"))
    elapsed = time.time() - t0
    _report("1 (m<=5 class counts, both traversals)", ok and elapsed < 300,
            "counts=%s %.1fs" % (sorted(counts.items()), elapsed))


@pytest.mark.skipif(not EXTENDED, reason="m=6 extended run: set BLOCHFORMS_EXTENDED=1")
def test_criterion_1_extended_m6(field_q):
    t0 = time.time()
    t = TSubspace(field_q, 6)
    g = enumerate_perfect(t, a0=first_perfect_form(6), budget=40)
    elapsed = time.time() - t0
    _report("1-extended (m=6)", len(g.classes) == 7 and elapsed < 7200,
            "%d classes in %.0fs" % (len(g.classes), elapsed))


# -- 2. Hermite ratio for m = 2 -----------------------------------------------


def test_criterion_2_hermite_ratio(field_q):
    t = TSubspace(field_q, 2)
    g = enumerate_perfect(t, a0=first_perfect_form(2), budget=8)
    cls = g.classes[0]
    ratio = cls.min_data.minimum ** 2 / cls.form.det()
    _report("2 (Hermite ratio m=2)", ratio == Fr(4, 3), "min^2/det = %s" % ratio)


# -- 3. Fincke-Pohst against brute force ----------------------------------------




def test_criterion_3_fincke_pohst_oracle():
    t0 = time.time()
    rng = random.Random(2024)
    trials = 0
    while trials < 200:
        n = rng.randint(1, 4)
        m = [[rng.randint(-10, 10) for _ in range(n)] for _ in range(n)]
        g = [[Fr(m[i][j] + m[j][i], 2) if i != j
              else Fr(abs(m[i][i]) + rng.randint(1, 10))
              for j in range(n)] for i in range(n)]
        q = RationalQForm(g)
        if not q.is_positive_definite():
            continue
        trials += 1
        cap = Fr(rng.randint(1, 10))
        from tests.oracles import brute_short_vectors
        assert fincke_pohst(q, cap) == brute_short_vectors(q, cap)
    elapsed = time.time() - t0
    _report("3 (Fincke-Pohst oracle, 200 forms)", elapsed < 60, "%.1fs" % elapsed)


# -- 4. double description against subset enumeration ---------------------------


def test_criterion_4_dd_oracle():
    from blochforms.polyhedra import HRep, dd_convert
    from tests.test_polyhedra import oracle_rays
    t0 = time.time()
    rng = random.Random(77)
    done = 0
    while done < 100:
        d = rng.randint(2, 4)
        ncons = rng.randint(2, 10)
        rows = [tuple(rng.randint(-3, 3) for _ in range(d)) for _ in range(ncons)]
        h = HRep.make(d, rows)
        if not h.inequalities:
            continue
        v = dd_convert(h)
        if v.lineality:
            continue
        done += 1
        assert list(v.rays) == oracle_rays(h)
    elapsed = time.time() - t0
    _report("4 (double description oracle, 100 cones)", elapsed < 60,
            "%.1fs" % elapsed)


# -- 5. Smith normal form against minors oracle ----------------------------------


def test_criterion_5_snf_oracle():
    from blochforms.snf import smith_normal_form
    from tests.test_snf import check_against_minors
    t0 = time.time()
    rng = random.Random(555)
    for _ in range(500):
        rows = rng.randint(1, 6)
        cols = rng.randint(1, 6)
        m = [[rng.randint(-20, 20) for _ in range(cols)] for _ in range(rows)]
        res = smith_normal_form(m)
        check_against_minors(m, res)
    elapsed = time.time() - t0
    _report("5 (SNF vs minors oracle, 500 matrices)", elapsed < 60,
            "%.1fs" % elapsed)


# -- 6. dilogarithm suite ----------------------------------------------------------


def test_criterion_6_dilogarithm():
    from blochforms.intervals import CIv, riv
    from blochforms.regulator import bloch_wigner, catalan_constant
    t0 = time.time()
    rng = random.Random(60)

    def D(z):
        return bloch_wigner(CIv(riv(z[0]), riv(z[1])), 60)

    def cdiv(a, b):
        den = b[0] * b[0] + b[1] * b[1]
        return ((a[0] * b[0] + a[1] * b[1]) / den,
                (a[1] * b[0] - a[0] * b[1]) / den)

    one = (Fr(1), Fr(0))
    worst_ft = 0.0
    pairs = 0
    while pairs < 1000:
        x = (Fr(rng.randint(-200, 200), 100), Fr(rng.randint(2, 200), 100))
        y = (Fr(rng.randint(-200, 200), 100), Fr(rng.randint(2, 200), 100))
        if x == y:
            continue
        pairs += 1
        invx, invy = cdiv(one, x), cdiv(one, y)
        a3 = cdiv(y, x)
        a4 = cdiv((1 - invx[0], -invx[1]), (1 - invy[0], -invy[1]))
        a5 = cdiv((1 - x[0], -x[1]), (1 - y[0], -y[1]))
        val = D(x) - D(y) + D(a3) - D(a4) + D(a5)
        worst_ft = max(worst_ft, abs(float(val.mid())) + float(val.width()) / 2)

    worst_sym = 0.0
    for _ in range(200):
        x = Fr(rng.randint(-300, 300), 100)
        y = Fr(rng.randint(2, 300), 100)
        d = D((x, y))
        m = x * x + y * y
        for other in (D((1 - x, -y)), D((x / m, -y / m)), D((x, -y))):
            worst_sym = max(worst_sym, abs(float((d + other).mid())))

    d_i = D((Fr(0), Fr(1)))
    cat = catalan_constant(Fr(1, 10 ** 13))
    cat_err = abs(float(d_i.mid()) - float(cat.mid()))
    elapsed = time.time() - t0
    ok = worst_ft < 1e-12 and worst_sym < 1e-12 and cat_err < 1e-12 \
        and elapsed < 60
    _report("6 (dilogarithm suite)", ok,
            "five-term %.1e, symmetry %.1e, Catalan %.1e, %.1fs"
            % (worst_ft, worst_sym, cat_err, elapsed))


# -- 7. end-to-end imaginary quadratic runs -----------------------------------------


@pytest.mark.parametrize("minpoly,label,vol_expect", [
    ([1, 0, 1], "Q(i)", 0.3053218647),
    ([3, 0, 1], "Q(sqrt-3)", 0.1691562),
])
def test_criterion_7_end_to_end(minpoly, label, vol_expect):
    from blochforms.bloch import bloch_from_cycle, verify_bloch
    from blochforms.complexbuild import build_complex, compute_n, h3_cycle_data
    from blochforms.regulator import index_report, interval_det, regulator_matrix
    t0 = time.time()
    f = nf_create(minpoly, label=label)
    t = TSubspace(f, 2)
    g = enumerate_perfect(t, budget=20)
    qc = build_complex(t, g.classes)      # build asserts d.d = 0 exactly
    rank, _, cycles = h3_cycle_data(qc)
    n_val, _, _ = compute_n(qc)
    beta = bloch_from_cycle(t, cycles[0])
    cert = verify_bloch(beta)
    m = regulator_matrix(f, [beta.items()], prec=60)
    det = interval_det(m)
    rep = index_report(f, det, n_val, 1, 24, prec=60)
    elapsed = time.time() - t0
    ok = (rank == 1 and cert.ok and cert.regime == "exact"
          and rep.verdict_volume == "pass" and rep.rel_error_volume < 1e-6
          and abs(float(rep.volume.mid()) - vol_expect) < 1e-5
          and rep.matching_constant.startswith("corollary")
          and elapsed < 600)
    _report("7 (%s end-to-end)" % label, ok,
            "rank=%d verify=%s vol=%.8f relerr=%.1e index~%s matches %s %.0fs"
            % (rank, cert.ok, float(rep.volume.mid()), rep.rel_error_volume,
               float(rep.measured_index.mid()), rep.matching_constant, elapsed))


# -- 8. triangulation independence ----------------------------------------------------


def test_criterion_8_triangulation_independence():
    from blochforms.complexbuild import build_complex, homology
    ok = True
    detail = []
    for minpoly, label in [([1, 0, 1], "Q(i)"), ([3, 0, 1], "Q(sqrt-3)")]:
        f = nf_create(minpoly, label=label)
        t = TSubspace(f, 2)
        g = enumerate_perfect(t, budget=20)

        def alt_key(c):
            k = c.key()
            return (-k[0],) + tuple(-x for x in k[1:])

        qc1 = build_complex(t, g.classes)
        qc2 = build_complex(t, g.classes, order_key=alt_key)
        for k in range(4):
            h1 = homology(qc1, k)[:2]
            h2 = homology(qc2, k)[:2]
            if h1 != h2:
                ok = False
                detail.append("%s H_%d %s vs %s" % (label, k, h1, h2))
    _report("8 (triangulation independence)", ok, "; ".join(detail))


# -- 9. stretch: Q(zeta_5) ---------------------------------------------------------


@pytest.mark.skipif(not EXTENDED, reason="stretch run: set BLOCHFORMS_EXTENDED=1")
def test_criterion_9_zeta5_stretch():
    from blochforms.complexbuild import build_complex
    t0 = time.time()
    z5 = nf_create([1, 1, 1, 1, 1], label="Q(zeta5)")
    t = TSubspace(z5, 2)
    assert t.dim == 8
    g = enumerate_perfect(t, budget=30)
    elapsed = time.time() - t0
    enum_ok = g.complete and elapsed < 3600
    h3_status = "unavailable"
    try:
        build_complex(t, g.classes)
    except NotImplementedError as exc:
        h3_status = "not computed: %s" % exc
    # non-gating: the enumeration half is asserted, the H3 half reported.
    # Over r2 >= 2 a cusp does not determine a ray (lifts differ by
    # relative norms), so the (H_3)^2 descent needs data this build does
    # not implement; the cone-level machinery is covered by the property
    # suites instead.
    _report("9 (zeta5 stretch, non-gating)", enum_ok,
            "classes=%d enum %.0fs; H3 %s" % (len(g.classes), elapsed, h3_status))
