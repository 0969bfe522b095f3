import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from segrelc.algebra import QQ, Ring
from segrelc.cech import (
    INF,
    Box,
    MonomialModule,
    UnsupportedRouteError,
    cech_table,
    cd_detect,
    count_with_sum,
    grade_detect,
    saturation_table,
)
from segrelc.groebner import Ideal, ModulePresentation
from segrelc.kunneth import verify_asymptotic_nonvanishing
from segrelc.linalg import rank
from segrelc.resolution import ext_module

M2 = [(1, 0), (0, 1)]


def test_maximal_ideal_on_plane():
    t = cech_table(MonomialModule.free(2), M2, Box.uniform(2, -4, 3))
    for a in Box.uniform(2, -4, 3).points():
        expected = 1 if a[0] <= -1 and a[1] <= -1 else 0
        assert t.dim(2, a) == expected
        assert t.dim(0, a) == 0 and t.dim(1, a) == 0


def test_principal_ideal_on_plane():
    t = cech_table(MonomialModule.free(2), [(1, 0)], Box.uniform(2, -4, 4))
    for a in Box.uniform(2, -4, 4).points():
        assert t.dim(1, a) == (1 if a[0] <= -1 and a[1] >= 0 else 0)
        assert t.dim(0, a) == 0


def test_principal_ideal_on_torsion_quotient():
    # every element of QQ[x,y]/(x^2) is killed by x^2, so H^0 is the whole module
    M = MonomialModule(2, ((2, 0),))
    t = cech_table(M, [(1, 0)], Box.uniform(2, -3, 4))
    for a in Box.uniform(2, -3, 4).points():
        expected = 1 if a[0] in (0, 1) and a[1] >= 0 else 0
        assert t.dim(0, a) == expected
        assert t.dim(1, a) == 0


def test_from_ring_rejects_non_monomial():
    R = Ring(["x", "y"])
    with pytest.raises(UnsupportedRouteError):
        MonomialModule.from_ring(R, Ideal(R, ["x^2 - y^2"]))


def test_twist_shifts_support():
    R = Ring(["x", "y"])
    M = MonomialModule.from_ring(R, None, twist=2)
    t = cech_table(M, M2, Box.uniform(2, -5, 2))
    # R(2) has H^2 in total degrees <= -4
    agg = t.aggregate(2)
    assert agg[-4] == (1, True)
    assert agg[-3][0] == 0


def test_aggregate_and_exact_totals():
    t = cech_table(MonomialModule.free(2), M2, Box.uniform(2, -4, 2))
    agg = t.aggregate(2)
    assert agg[-4] == (3, True)
    assert agg[-2] == (1, True)
    assert t.total_dim(2, -10) == 9
    # the principal-ideal table is infinite in every total degree
    t1 = cech_table(MonomialModule.free(2), [(1, 0)], Box.uniform(2, -3, 3))
    assert t1.total_dim(1, 0) == INF
    assert t1.aggregate(1)[0][1] is False


def test_thread_pool_gives_same_table():
    box = Box.uniform(3, -2, 2)
    mod = MonomialModule(3, ((2, 0, 0), (1, 1, 0)))
    gens = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert cech_table(mod, gens, box).entries == cech_table(mod, gens, box, threads=4).entries


# -- saturation --------------------------------------------------------------------


def test_saturation_examples():
    box = Box.uniform(2, -3, 3)
    st_m = saturation_table(MonomialModule.free(2), M2, box)
    assert all(st_m.dim(a) == st_m.module_dims[a] for a in box.points())
    st1 = saturation_table(MonomialModule.free(1), [(1,)], Box.uniform(1, -6, 6))
    assert all(st1.dim(a) == 1 for a in Box.uniform(1, -6, 6).points())
    stx = saturation_table(MonomialModule.free(2), [(1, 0)], box)
    for a in box.points():
        assert stx.dim(a) == (1 if a[1] >= 0 else 0)


@settings(max_examples=20)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)).filter(any), max_size=2),
       st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)).filter(any), min_size=1, max_size=2))
def test_comparison_map_kernel_and_cokernel(relations, gens):
    # M_a -> (M^sat)_a has kernel H^0_a and cokernel H^1_a
    table = saturation_table(MonomialModule(2, tuple(relations)), gens, Box.uniform(2, -2, 2))
    t = table.table
    for a in t.entries:
        mat, _ = table.comparison_map(a)
        r = rank(mat, QQ) if mat and mat[0] else 0
        assert table.module_dims[a] - r == t.dim(0, a)
        assert table.dim(a) - r == t.dim(1, a)


monomial = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))


@settings(max_examples=25)
@given(
    st.lists(monomial.filter(any), max_size=3),
    st.lists(monomial.filter(any), min_size=1, max_size=3),
)
def test_four_term_identity(relations, gens):
    mod = MonomialModule(3, tuple(relations))
    table = saturation_table(mod, gens, Box.uniform(3, -2, 2))
    t = table.table
    for a in t.entries:
        lhs = table.module_dims[a] - table.dim(a)
        assert lhs == t.dim(0, a) - t.dim(1, a)


# -- vanishing laws -----------------------------------------------------------------


@settings(max_examples=25)
@given(st.lists(monomial.filter(any), min_size=1, max_size=3), st.integers(1, 3))
def test_torsion_module_has_only_h0(gens, power):
    # R/I^power is I-torsion
    R = Ring(["x", "y", "z"])
    I = Ideal(R, [R.monomial(g) for g in gens]).power(power)
    mod = MonomialModule.from_ring(R, I)
    t = cech_table(mod, gens, Box.uniform(3, -2, 3))
    assert all(not any(d[1:]) for d in t.entries.values())


@settings(max_examples=25)
@given(st.lists(monomial.filter(any), min_size=1, max_size=3), st.lists(monomial.filter(any), max_size=2))
def test_invertible_generator_kills_everything(gens, relations):
    # localise at the support of the first generator so it acts invertibly
    support = [v for v, e in enumerate(gens[0]) if e]
    mod = MonomialModule(3, tuple(relations)).localized(support)
    t = cech_table(mod, gens, Box.uniform(3, -2, 2))
    assert all(not any(d) for d in t.entries.values())


# -- count_with_sum ------------------------------------------------------------------


interval = st.tuples(st.integers(-4, 4), st.integers(0, 4)).map(lambda p: (p[0], p[0] + p[1]))


@given(st.lists(interval, min_size=1, max_size=4), st.integers(-12, 12))
def test_count_with_sum_brute_force(ivs, total):
    brute = sum(1 for p in itertools.product(*(range(a, b + 1) for a, b in ivs)) if sum(p) == total)
    assert count_with_sum(ivs, total) == brute


def test_count_with_sum_unbounded():
    assert count_with_sum([(-INF, -1), (-INF, -1)], -5) == 4
    assert count_with_sum([(0, INF), (0, INF)], 3) == 4
    assert count_with_sum([(-INF, -1), (0, INF)], 0) == INF
    assert count_with_sum([(-INF, INF), (0, 2)], 7) == 3
    assert count_with_sum([(0, INF), (0, INF)], -1) == 0
    assert math.isinf(count_with_sum([(-INF, INF), (-INF, INF)], 0))


# -- detection -------------------------------------------------------------------------


@pytest.mark.parametrize(
    "nvars,gens,grade,cd",
    [
        (3, [(1, 0, 0), (0, 1, 0)], 2, 2),
        (2, [(1, 0)], 1, 1),
        (2, M2, 2, 2),
        (3, [(1, 1, 0), (0, 1, 1)], 1, 2),
    ],
)
def test_grade_and_cd(nvars, gens, grade, cd):
    t = cech_table(MonomialModule.free(nvars), gens, Box.uniform(nvars, -3, 3))
    g = grade_detect(t)
    assert g.value == grade and g.certainty == "certified-vanishing-below"
    c = cd_detect(t)
    assert c.value == cd and c.certainty == "certified"
    assert t.dim(c.value, c.witness["multidegree"]) > 0


def test_grade_detect_reports_window_limits():
    # the box only sees nonnegative degrees, where H^1_(x) vanishes
    t = cech_table(MonomialModule.free(2), [(1, 0)], Box.uniform(2, 0, 3))
    d = grade_detect(t)
    assert d.value is None and d.certainty == "window-limited"
    zero = cech_table(MonomialModule(2, ((0, 0),)), [(1, 0)], Box.uniform(2, -1, 1))
    assert grade_detect(zero).certainty == "certified-vanishing-below"


KOSZUL_CASES = [
    (["x", "y"], ["x", "y"]),
    (["x", "y"], ["x"]),
    (["x", "y", "z"], ["x", "y"]),
    (["x", "y", "z"], ["x*y", "y*z"]),
    (["x", "y", "z"], ["x*y", "x*z", "y*z"]),
    (["x", "y", "u"], ["x", "y"]),
]


@pytest.mark.parametrize("names,gens", KOSZUL_CASES)
def test_grade_matches_least_nonvanishing_ext(names, gens):
    R = Ring(names)
    I = Ideal(R, gens)
    quotient = ModulePresentation.cyclic(I)
    ext_grade = next(i for i in range(len(names) + 1) if not ext_module(quotient, i).is_zero())
    t = cech_table(MonomialModule.free(len(names)), I.monomial_exponents(), Box.uniform(len(names), -3, 2))
    assert grade_detect(t).value == ext_grade


@pytest.mark.parametrize("names,gens", [c for c in KOSZUL_CASES if len(c[1]) < len(c[0]) or c[0] != ["x", "y"]])
def test_asymptotic_nonvanishing_at_height(names, gens):
    R = Ring(names)
    I = Ideal(R, gens)
    if I.height() >= R.ngens:
        pytest.skip("pattern needs height below the dimension")
    v = verify_asymptotic_nonvanishing(R, I, Box.uniform(R.ngens, -4, 4))
    assert v.status == "verified-on-box", v.detail
