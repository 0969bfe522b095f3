from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from segrelc.algebra import Ring
from segrelc.groebner import Ideal
from segrelc.hilbert import HilbertSeries, hadamard_product, hf_value, monomial_quotient_series

POLY2 = HilbertSeries({0: 1}, 2)
POLY3 = HilbertSeries({0: 1}, 3)
LINE = HilbertSeries({0: 1}, 1)


def test_hf_examples():
    assert hf_value(POLY2, 3) == 4
    quad = HilbertSeries({0: 1, 1: 1}, 3)
    assert hf_value(quad, 2) == 9
    assert all(hf_value(quad, n) == (n + 1) ** 2 for n in range(60))
    finite = HilbertSeries.from_values({2: 3, 3: 1})
    assert hf_value(finite, 1) == 0 and hf_value(finite, -5) == 0 and hf_value(finite, 2) == 3


def test_canonical_form_cancels_one_minus_t():
    assert HilbertSeries({0: 1, 1: -1}, 3) == POLY2
    assert HilbertSeries({0: 1, 2: -1}, 2) == HilbertSeries({0: 1, 1: 1}, 1)
    assert HilbertSeries({}, 4).d == 0


@pytest.mark.parametrize(
    "a,b,expected",
    [
        (POLY2, POLY2, HilbertSeries({0: 1, 1: 1}, 3)),
        (LINE, HilbertSeries({0: 1, 1: 2, 3: 1}, 2), HilbertSeries({0: 1, 1: 2, 3: 1}, 2)),
        (POLY2, POLY3, HilbertSeries({0: 1, 1: 2}, 4)),
    ],
)
def test_hadamard_examples(a, b, expected):
    h = hadamard_product(a, b)
    assert h == expected
    for n in range(51):
        assert hf_value(h, n) == hf_value(a, n) * hf_value(b, n)


def test_hadamard_matches_quadric_presentation():
    A = Ring(list("abcd"))
    assert Ideal(A, ["a*d - b*c"]).hilbert_series() == hadamard_product(POLY2, POLY2)


def test_monomial_quotient_series():
    # QQ[x,y]/(x^2, xy): dims 1, 2, 1, 1, 1, ...
    s = monomial_quotient_series([(2, 0), (1, 1)], 2)
    assert [s(n) for n in range(6)] == [1, 2, 1, 1, 1, 1]


series = st.builds(
    lambda num, d, shift: HilbertSeries({k + shift: v for k, v in enumerate(num)}, d),
    st.lists(st.integers(1, 4), min_size=1, max_size=3),
    st.integers(1, 3),
    st.integers(0, 2),
)


@settings(max_examples=40)
@given(series, series)
def test_hadamard_pointwise_and_commutative(a, b):
    h = hadamard_product(a, b)
    for n in range(51):
        assert hf_value(h, n) == hf_value(a, n) * hf_value(b, n)
    assert h == hadamard_product(b, a)


@settings(max_examples=20)
@given(series, series, series)
def test_hadamard_associative(a, b, c):
    assert hadamard_product(hadamard_product(a, b), c) == hadamard_product(a, hadamard_product(b, c))


def test_polynomial_ring_values():
    for d in range(1, 5):
        s = HilbertSeries({0: 1}, d)
        assert [s(n) for n in range(20)] == [comb(n + d - 1, d - 1) for n in range(20)]
