import random

import pytest

from segrelc.algebra import GF, QQ, Polynomial, Ring, generalized_binomial
from segrelc.cech import Box, MonomialModule, cech_table
from segrelc.dmodule import (
    DividedPowerOperator,
    EulerOperator,
    annihilator_witness,
    apply_divided_power,
    classify_degree_support,
    frobenius_descent_check,
    leibniz_check,
    leibniz_rhs,
    random_polynomial,
    verify_eulerian,
)

D = DividedPowerOperator


def test_divided_power_examples():
    R = Ring(["x", "y"])
    assert apply_divided_power(D(0, 2), R("x^2")) == R.one()
    f = R.monomial((-1, 1), laurent=True)
    assert apply_divided_power(D(0, 1), f) == R.monomial((-2, 1), -1, laurent=True)
    R3 = Ring(["x"], field=GF(3))
    assert apply_divided_power(D(0, 3), R3("x^6")) == R3("2*x^3")


def test_negative_order_rejected():
    with pytest.raises(ValueError):
        D(0, -1)


def test_leibniz_examples():
    R = Ring(["x"])
    x = R.gens()[0]
    lhs = apply_divided_power(D(0, 1), x * x)
    assert lhs == leibniz_rhs(1, 1, 0, x) == 2 * x
    assert apply_divided_power(D(0, 2), x**3) == leibniz_rhs(2, 3, 0, R.one()) == 3 * x
    R2 = Ring(["x"], field=GF(2))
    assert leibniz_rhs(2, 2, 0, R2.one()) == R2.one()
    assert leibniz_check(2, 2, 0, [R2.one()]).ok


def test_leibniz_random_instances():
    rng = random.Random(7)
    for k in range(100):
        field = QQ if k % 2 else GF(rng.choice([2, 3, 5]))
        R = Ring(["x", "y"], field=field)
        f = random_polynomial(R, rng, laurent=bool(k % 3 == 0))
        v = leibniz_check(rng.randint(0, 6), rng.randint(0, 6), rng.randrange(2), [f])
        assert v.ok, v.witness


def test_frobenius_examples():
    R = Ring(["x"], field=GF(2))
    assert frobenius_descent_check(2, 1, R("x"), 0).ok
    R3 = Ring(["x1", "x2"], field=GF(3))
    g = R3("x1^2 + x2")
    assert frobenius_descent_check(3, 1, g, 0).ok
    assert apply_divided_power(D(0, 3), g.substitute([v**3 for v in R3.gens()])) == R3("2*x1^3")
    R2 = Ring(["x1", "x2"], field=GF(2))
    assert frobenius_descent_check(2, 2, R2("x1*x2"), 0).ok
    assert apply_divided_power(D(0, 4), R2("x1^4*x2^4")) == R2("x2^4")
    with pytest.raises(ValueError):
        frobenius_descent_check(2, 1, Ring(["x"])("x"), 0)


def test_frobenius_random_instances():
    rng = random.Random(13)
    for _ in range(200):
        p, e = rng.choice([2, 3, 5]), rng.choice([1, 2])
        R = Ring(["x1", "x2", "x3"], field=GF(p))
        g = random_polynomial(R, rng, max_terms=5, max_exp=3)
        for i in range(3):
            assert frobenius_descent_check(p, e, g, i).ok


@pytest.mark.parametrize("field", [QQ, GF(3), GF(2)])
def test_composition_law(field):
    rng = random.Random(field.characteristic)
    R = Ring(["x", "y"], field=field)
    for _ in range(200):
        a = (rng.randint(-8, 12), rng.randint(0, 5))
        m = R.monomial(a, laurent=True)
        s, t = rng.randint(0, 5), rng.randint(0, 5)
        i = rng.randrange(2)
        lhs = apply_divided_power(D(i, s), apply_divided_power(D(i, t), m))
        c = generalized_binomial(s + t, t, field.characteristic)
        rhs = apply_divided_power(D(i, s + t), m).scale(c)
        assert lhs == rhs


def test_euler_expansion_counts_compositions():
    assert len(EulerOperator(2, 2).expansion()) == 3
    assert len(EulerOperator(3, 3).expansion()) == 10


def test_euler_scalars():
    R = Ring(["x", "y"])
    assert EulerOperator(1, 2).scalar_on_monomial((-1, -1), R) == -2
    assert EulerOperator(2, 2).scalar_on_monomial((-1, -1), R) == 3
    assert EulerOperator(1, 2).scalar_on_monomial((-1, 0), R) == -1
    rng = random.Random(1)
    for _ in range(100):
        a = (rng.randint(-6, 6), rng.randint(-6, 6))
        for t in (1, 2, 3):
            assert EulerOperator(t, 2).scalar_on_monomial(a, R) == generalized_binomial(sum(a), t)


def test_euler_classes_on_tables():
    top = cech_table(MonomialModule.free(2), [(1, 0), (0, 1)], Box.uniform(2, -5, 1))
    assert verify_eulerian(top, [1, 2]).ok
    principal = cech_table(MonomialModule.free(2), [(1, 0)], Box.uniform(2, -4, 4))
    assert verify_eulerian(principal, [1, 2, 3]).ok
    quotient = cech_table(MonomialModule(3, ((2, 0, 0), (1, 1, 0))), [(1, 0, 0), (0, 1, 0), (0, 0, 1)], Box.uniform(3, -3, 2))
    assert verify_eulerian(quotient, [1, 2]).ok


def test_euler_in_positive_characteristic():
    table = cech_table(MonomialModule.free(2), [(1, 0), (0, 1)], Box.uniform(2, -5, 1), field=GF(3))
    assert verify_eulerian(table, [1, 2, 3]).ok


def test_degree_support_patterns():
    top = cech_table(MonomialModule.free(2), [(1, 0), (0, 1)], Box.uniform(2, -11, 1))
    v = classify_degree_support(top, 2, 2, (-10, 4))
    assert v.ok and v.data["support_dim"] == 0
    principal = cech_table(MonomialModule.free(2), [(1, 0)], Box.uniform(2, -8, 8))
    v = classify_degree_support(principal, 2, 1, (-8, 8))
    assert v.ok and v.data["support_dim"] == 1
    assert all(w["annihilator"] is not None for w in v.data["annihilated"])
    top3 = cech_table(MonomialModule.free(3), [(1, 0, 0), (0, 1, 0), (0, 0, 1)], Box.uniform(3, -6, 1))
    assert classify_degree_support(top3, 3, 3, (-6, 3)).ok


def test_support_pattern_catches_wrong_dimension():
    top = cech_table(MonomialModule.free(2), [(1, 0), (0, 1)], Box.uniform(2, -4, 1))
    v = classify_degree_support(top, 2, 2, (-4, 2), support_dim=1)
    assert v.status == "refuted" and "total_degree" in v.witness


def test_annihilator_witness():
    t = cech_table(MonomialModule.free(2), [(1, 0)], Box.uniform(2, -3, 3))
    k, N = annihilator_witness(t, 1, (-2, 0))
    assert k == 0 and N == 2
