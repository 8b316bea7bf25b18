import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphmax import DivergenceError, InvalidParameterError, TailBound, conjectured_constant, cp_constant
from graphmax.series import jump_series, jump_tail, jump_terms, tail_bound


def brute_terms(p, a, b):
    return [2.0 ** p / ((2 * k + 1) * (2 * k + 3)) ** p for k in range(a, b)]


def crude_rest(p, m):
    # sum_{k>=m} 2^p (2k+1)^(-2p) <= int_{m-1/2}^inf 2^p (2x+1)^(-2p) dx
    return 2.0 ** p * (2.0 * m) ** (1 - 2 * p) / (2 * (2 * p - 1))


class TestTelescoping:
    def test_cp1_is_two(self):
        c = cp_constant(1, 1e-9)
        assert abs(c.value - 2) <= 1e-9
        assert c.error <= 1e-9 and c.lower <= 2 <= c.upper

    def test_series_at_one(self):
        s = jump_series(1.0, 1e-12)
        assert abs(s.value - 1) <= 1e-12 and s.lower <= 1 <= s.upper

    @pytest.mark.parametrize("start", [1, 2, 7, 40, 1000])
    def test_tails_at_one(self, start):
        t = tail_bound(1.0, start)
        assert t.lower <= 1 / (2 * start + 1) <= t.upper

    def test_conjectured_at_one(self):
        assert conjectured_constant(1, 1e-10).value == pytest.approx(1, abs=1e-10)


class TestSquareCase:
    # 4/((2k+1)(2k+3))^2 splits into 1/(2k+1)^2 + 1/(2k+3)^2 - (1/(2k+1) - 1/(2k+3))
    EXACT = math.pi ** 2 / 4 - 2

    def test_full_series(self):
        s = jump_series(2.0, 1e-13)
        assert s.lower - 1e-15 <= self.EXACT <= s.upper + 1e-15
        assert s.value == pytest.approx(self.EXACT, abs=1e-13)

    @pytest.mark.parametrize("start", [1, 3, 50, 400])
    def test_tails(self, start):
        exact = self.EXACT - math.fsum(brute_terms(2.0, 0, start))
        t = tail_bound(2.0, start)
        assert t.lower - 1e-15 <= exact <= t.upper + 1e-15


@settings(max_examples=60, deadline=None)
@given(p=st.floats(0.55, 3.0), start=st.integers(1, 200))
def test_tail_enclosure_brackets_brute_sums(p, start):
    t = tail_bound(p, start)
    m = start + 5000
    partial = math.fsum(brute_terms(p, start, m))
    assert partial <= t.upper * (1 + 1e-12)
    assert t.lower <= partial + crude_rest(p, m) + 1e-15


@settings(max_examples=30, deadline=None)
@given(p=st.floats(0.6, 2.0), start=st.integers(1, 100))
def test_tail_enclosure_narrows(p, start):
    errs = [tail_bound(p, start * 2 ** j).error for j in range(5)]
    assert all(b < a for a, b in zip(errs, errs[1:]))


@pytest.mark.parametrize("p", [0.75, 0.9])
def test_series_against_long_brute_sum(p):
    m = 1 << 21
    partial = math.fsum(jump_terms(p, np.arange(m)))
    s = jump_series(p, 1e-10)
    assert partial <= s.upper + 1e-12
    assert s.lower <= partial + crude_rest(p, m)


def test_jump_tail_consistent():
    p = 0.8
    t = jump_tail(p, 10, 1e-11)
    exact_head = math.fsum(brute_terms(p, 0, 10))
    assert t.value + exact_head == pytest.approx(jump_series(p, 1e-11).value, abs=1e-12)
    assert jump_tail(p, 0, 1e-11) == jump_series(p, 1e-11)


def test_cp_examples_and_monotonicity():
    c75 = cp_constant(0.75)
    # the k = 0 term alone already gives (2 t(0))^(1/p)
    assert c75.value > (2 * 2 ** 0.75 / 3 ** 0.75) ** (1 / 0.75)
    assert c75.value == pytest.approx(5.157885355632, abs=1e-9)
    ps = [0.6, 0.7, 0.8, 0.9, 1.0]
    vals = [cp_constant(p, 1e-10).value for p in ps]
    assert all(b < a for a, b in zip(vals, vals[1:]))


class TestErrors:
    @pytest.mark.parametrize("p", [0.5, 0.3, -1.0])
    def test_divergent(self, p):
        with pytest.raises(DivergenceError):
            jump_series(p)
        with pytest.raises(DivergenceError):
            cp_constant(p)

    def test_outside_established_range(self):
        with pytest.raises(InvalidParameterError):
            cp_constant(1.5)

    def test_bad_tolerance_and_start(self):
        with pytest.raises(InvalidParameterError):
            cp_constant(0.8, 0)
        with pytest.raises(InvalidParameterError):
            tail_bound(0.8, 0)

    def test_tail_bound_record(self):
        tb = TailBound(1.5, 0.25, 8)
        assert (tb.lower, tb.upper) == (1.25, 1.75)
        assert TailBound.from_dict(tb.to_dict()) == tb
        with pytest.raises(InvalidParameterError):
            TailBound(1.0, -1e-3, 0)
