import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from thetacycles.qseries import (FourierSeries, add, mul, scale, compare, eval_at, eval_many,
                                 eval_mp, tail_bound)
from thetacycles.modcheck import theta_std


def _series(draw_terms, prec):
    return FourierSeries.from_exponents(draw_terms, prec)


series = st.builds(
    _series,
    st.dictionaries(st.fractions(0, 6, max_denominator=4), st.fractions(-9, 9, max_denominator=5),
                    max_size=8),
    st.sampled_from([F(4), F(6), F(13, 2)]))


@given(series, series)
def test_addition_commutes(a, b):
    assert a + b == b + a


@given(series, series, series)
def test_addition_associates(a, b, c):
    assert (a + b) + c == a + (b + c)


@given(series, series)
def test_product_commutes(a, b):
    assert a * b == b * a


@given(series, series, series)
def test_product_associates(a, b, c):
    assert ((a * b) * c).truncate(2) == (a * (b * c)).truncate(2)


@given(series, series, series)
def test_distributive(a, b, c):
    lhs = a * (b + c)
    rhs = a * b + a * c
    p = min(lhs.prec, rhs.prec)
    assert lhs.truncate(p) == rhs.truncate(p)


@given(series)
def test_identities(a):
    assert a + FourierSeries.zero(a.prec) == a
    assert a * FourierSeries.one(a.prec) == a
    assert (a - a).is_zero()


@given(series)
def test_json_roundtrip(a):
    assert FourierSeries.from_json(a.dumps()) == a
    assert FourierSeries.from_json(a.to_json()) == a


def test_minimal_denominator():
    s = FourierSeries(12, {6: 1, 18: 2}, 3)
    assert s.denom == 2 and s.coeff(F(3, 2)) == 2


def test_store_above_prec_rejected():
    with pytest.raises(ValueError):
        FourierSeries(1, {5: 1}, 5)
    with pytest.raises(ValueError):
        FourierSeries.zero(3).coeff(3)


def test_theta_squared_counts_sums_of_two_squares(oracles):
    t2 = theta_std(10) * theta_std(10)
    assert t2.coeff(2) == oracles["r2_of_2"]
    assert [t2.coeff(n) for n in range(6)] == [1, 4, 4, 0, 4, 8]


def test_product_precision():
    a = FourierSeries.from_exponents({1: 1}, 5)
    b = FourierSeries.from_exponents({0: 1, 2: 3}, 4)
    assert (a * b).prec == 5


def test_compare_first_difference():
    a = FourierSeries.from_exponents({1: 1, 2: 2}, 5)
    b = FourierSeries.from_exponents({1: 1, 2: 3}, 5)
    assert compare(a, b) == 2
    assert compare(a, a) is None
    assert compare(a, b, window=2) is None


def test_eval_examples():
    th = theta_std(40)
    v, _ = eval_at(th, 0.5j)
    # sum of exp(-pi k^2) = pi^(1/4) / Gamma(3/4)
    assert abs(v - math.pi ** 0.25 / math.gamma(0.75)) < 1e-14
    w = eval_many(th, [0.5j, 2j])
    assert abs(w[0] - v) < 1e-14
    assert abs(complex(eval_mp(th, 0.5j)) - v) < 1e-14
    with pytest.raises(ValueError):
        eval_at(th, -1j)


def test_tail_bound_dominates():
    # all-ones series above prec 3 at y = 1
    exact = sum(math.exp(-2 * math.pi * e) for e in range(3, 60))
    assert exact <= tail_bound(3, 1.0, 1.0, 0.0) < 1.01 * exact


def test_scale():
    a = FourierSeries.from_exponents({F(1, 3): 2}, 2)
    assert scale(a, F(1, 2)).coeff(F(1, 3)) == 1
    assert add(a, -a).is_zero() and mul(a, a).coeff(F(2, 3)) == 4
