import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphmax import (
    DivergenceError,
    InvalidParameterError,
    InvariantViolation,
    LatticeFunction,
    SearchConfig,
    centered_lipschitz_ratio,
    centered_maximal_z,
    check_lipschitz_half,
    check_var_norm_bound,
    conjecture_scan,
    conjectured_constant,
    delta,
    indicator,
    lattice_variation,
    tent,
    uncentered_maximal_z,
    z_variation,
)
from graphmax.zline import BoundReport, conjecture_candidates, z_variation_power


def brute_centered(f, n, slack=20):
    a, b = f.support
    best = 0.0
    for r in range(max(abs(n - a), abs(n - b)) + slack):
        ks = np.arange(n - r, n + r + 1)
        best = max(best, float(np.abs(f(ks)).sum()) / (2 * r + 1))
    return best


def brute_uncentered(f, n, slack=6):
    a, b = f.support
    lo_min, hi_max = min(a, n) - slack, max(b, n) + slack
    best = 0.0
    for lo in range(lo_min, n + 1):
        for hi in range(n, hi_max + 1):
            ks = np.arange(lo, hi + 1)
            best = max(best, float(np.abs(f(ks)).sum()) / (hi - lo + 1))
    return best


@st.composite
def lattice_functions(draw, max_len=6):
    vals = draw(st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=max_len))
    vals[0] = vals[0] or 1.0
    return LatticeFunction(draw(st.integers(-10, 10)), np.array(vals))


class TestLatticeFunction:
    def test_trimming_and_support(self):
        f = LatticeFunction(3, np.array([0, 0, 2.0, 0, 1.5, 0]))
        assert f.offset == 5 and f.support == (5, 7)
        assert f(np.array([4, 5, 6, 7, 8])).tolist() == [0, 2, 0, 1.5, 0]
        assert LatticeFunction(0, np.zeros(3)).is_zero

    def test_read_only(self):
        with pytest.raises(ValueError):
            delta().values[0] = 3

    def test_arithmetic(self):
        f = indicator(0, 2) + delta(5, 2)
        assert f.support == (0, 5) and f(5) == 2
        assert f.scaled(2).shifted(1)(6) == 4
        assert (delta() + delta().scaled(-1)).is_zero
        assert delta().difference() == LatticeFunction(-1, np.array([1.0, -1.0]))

    def test_json_round_trip(self):
        f = LatticeFunction(-4, np.array([0.25, 0, -3.5]))
        assert LatticeFunction.from_json(f.to_json()) == f
        assert LatticeFunction.from_dict(f.to_dict()) == f
        rep = check_lipschitz_half(f)
        assert BoundReport.from_dict(rep.to_dict()) == rep

    def test_bad_values(self):
        with pytest.raises(InvalidParameterError):
            LatticeFunction(0, np.array([1.0, np.nan]))
        with pytest.raises(InvalidParameterError):
            indicator(0, 0)
        with pytest.raises(InvalidParameterError):
            LatticeFunction(0, np.zeros(2)).support


class TestMaximalOnIntegers:
    def test_delta_closed_forms(self):
        ns = np.arange(-50, 51)
        assert np.allclose(centered_maximal_z(delta(), ns), 1 / (2 * np.abs(ns) + 1), rtol=1e-15)
        assert np.allclose(uncentered_maximal_z(delta(), ns), 1 / (np.abs(ns) + 1), rtol=1e-15)

    def test_examples(self):
        assert centered_maximal_z(delta(), [2])[0] == pytest.approx(0.2)
        assert centered_maximal_z(delta(), [-3])[0] == pytest.approx(1 / 7)
        assert uncentered_maximal_z(delta(), [3])[0] == pytest.approx(0.25)
        pair = indicator(0, 2)
        assert centered_maximal_z(pair, [-1])[0] == pytest.approx(0.4)
        assert uncentered_maximal_z(pair, [-1])[0] == pytest.approx(2 / 3)

    def test_zero_function(self):
        zero = LatticeFunction(0, np.zeros(3))
        assert centered_maximal_z(zero, range(-3, 4)).tolist() == [0.0] * 7

    def test_far_window(self):
        f = LatticeFunction(0, np.array([1.0, 0, 3.0]))
        ns = np.arange(-400, 400, 37)
        assert np.allclose(centered_maximal_z(f, ns), [brute_centered(f, n) for n in ns],
                           rtol=1e-13)


@settings(max_examples=60, deadline=None)
@given(f=lattice_functions())
def test_maximal_against_brute_windows(f):
    a, b = f.support
    ns = np.arange(a - 8, b + 9)
    mc = centered_maximal_z(f, ns)
    mu = uncentered_maximal_z(f, ns)
    assert np.allclose(mc, [brute_centered(f, n) for n in ns], rtol=1e-12, atol=1e-14)
    assert np.allclose(mu, [brute_uncentered(f, n) for n in ns], rtol=1e-12, atol=1e-14)
    absf = np.abs(f(ns))
    assert np.all(mc >= absf - 1e-12) and np.all(mu >= mc - 1e-12)


@settings(max_examples=60, deadline=None)
@given(f=lattice_functions(), h=lattice_functions(), c=st.floats(-4, 4, allow_nan=False))
def test_operator_properties(f, h, c):
    ns = np.arange(-25, 26)
    mf, mh = centered_maximal_z(f, ns), centered_maximal_z(h, ns)
    assert np.all(centered_maximal_z(f + h, ns) <= mf + mh + 1e-11)
    assert np.allclose(centered_maximal_z(f.scaled(c), ns), abs(c) * mf, atol=1e-12)
    # translation covariance
    assert np.allclose(centered_maximal_z(f.shifted(3), ns + 3), mf, atol=1e-13)
    uf, uh = uncentered_maximal_z(f, ns), uncentered_maximal_z(h, ns)
    assert np.all(uncentered_maximal_z(f + h, ns) <= uf + uh + 1e-11)


class TestVariation:
    def test_delta_at_one(self):
        v = z_variation(delta(), 1, 1e-10)
        assert abs(v.value - 2) <= 1e-6 and v.lower <= 2 + 1e-12 <= v.upper + 2e-12

    def test_lattice_variation(self):
        assert lattice_variation(delta(), 1) == 2
        assert lattice_variation(indicator(0, 5), 0.8) == pytest.approx(2 ** 1.25)
        assert lattice_variation(LatticeFunction(0, np.zeros(1)), 1) == 0

    def test_rejects_divergent_exponent(self):
        with pytest.raises(DivergenceError):
            z_variation(delta(), 0.5)
        with pytest.raises(InvalidParameterError):
            z_variation(LatticeFunction(0, np.zeros(2)), 1)

    @pytest.mark.parametrize("f", [delta(), indicator(0, 3), LatticeFunction(0, np.array([1, 0, 0, 2.0])),
                                   tent(4)], ids=["delta", "ind3", "gap", "tent"])
    def test_p1_matches_monotone_tail_oracle(self, f):
        # beyond +-N the maximal function decreases to 0, so the tail jumps sum to Mf(+-N)
        big = 3000
        ns = np.arange(-big, big + 1)
        m = centered_maximal_z(f, ns)
        exact = math.fsum(np.abs(np.diff(m))) + m[0] + m[-1]
        assert z_variation(f, 1, 1e-11).value == pytest.approx(exact, abs=1e-10)

    @pytest.mark.parametrize("p", [0.7, 0.8, 0.95])
    def test_fractional_against_brute_partial(self, p):
        f = LatticeFunction(-1, np.array([1.0, 0.5, 0.0, 2.0]))
        big = 20000
        ns = np.arange(-big, big + 1)
        partial = math.fsum(np.abs(np.diff(centered_maximal_z(f, ns))) ** p)
        total_mass = 3.5
        # jumps beyond +-big are at most F^p 2^p (2k)^(-2p) each
        crude = 2 * total_mass ** p * 2 ** p * (2 * (big - 3)) ** (1 - 2 * p) / (2 * (2 * p - 1))
        power, _ = z_variation_power(f, p, 1e-12)
        assert partial <= power.upper + 1e-12
        assert power.lower <= partial + crude

    @pytest.mark.parametrize("extra", [1, 7, 100, 2000])
    def test_head_length_does_not_matter(self, extra):
        f = LatticeFunction(0, np.array([0.3, 0, 1.0, 0.2]))
        base = z_variation(f, 0.8, 1e-11)
        moved = z_variation(f, 0.8, 1e-11, extra_head=extra)
        assert abs(base.value - moved.value) <= base.error + moved.error + 1e-12


class TestVarNormBound:
    def test_delta_is_extremal(self):
        assert check_var_norm_bound(delta(), 1).ratio == pytest.approx(1, abs=1e-6)
        assert check_var_norm_bound(delta(4, 3.0), 0.8).ratio == pytest.approx(1, abs=1e-6)

    def test_indicator_is_strict(self):
        assert check_var_norm_bound(indicator(0, 2), 1).ratio < 1 - 1e-3

    def test_random_sparse(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            f = LatticeFunction(0, rng.uniform(0.01, 1.0, 5))
            assert check_var_norm_bound(f, 0.8, 1e-9).ratio <= 1 + 1e-9

    def test_rejects_p_above_one(self):
        with pytest.raises(InvalidParameterError):
            check_var_norm_bound(delta(), 1.5)


class TestLipschitz:
    def test_delta_and_tent(self):
        assert check_lipschitz_half(delta()).ratio == 1.0
        rep = check_lipschitz_half(tent(10))
        assert rep.lhs == pytest.approx(0.5) and rep.ratio <= 1 + 1e-12

    def test_seeded_random(self):
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(1000):
            length = int(rng.integers(1, 10))
            f = LatticeFunction(int(rng.integers(-5, 5)), rng.uniform(-1, 1, length))
            if f.is_zero:
                continue
            worst = max(worst, check_lipschitz_half(f).ratio)
            assert centered_lipschitz_ratio(f).ratio <= 1 + 1e-12
        assert worst <= 1 + 1e-12

    def test_window_is_wide_enough(self):
        # compare against jumps over a much larger window
        rng = np.random.default_rng(11)
        for _ in range(200):
            f = LatticeFunction(0, rng.uniform(0, 1, int(rng.integers(1, 7))))
            a, b = f.support
            ns = np.arange(a - 40, b + 41)
            wide = float(np.max(np.abs(np.diff(uncentered_maximal_z(f, ns)))))
            assert check_lipschitz_half(f).lhs == pytest.approx(wide, abs=1e-15)

    def test_centered_tent_attains_one(self):
        assert centered_lipschitz_ratio(tent(10)).ratio == pytest.approx(1.0)

    def test_violation_is_reported(self, monkeypatch):
        import graphmax.zline as z
        monkeypatch.setattr(z, "_sup_jump", lambda values: 10.0)
        with pytest.raises(InvariantViolation):
            check_lipschitz_half(delta())


class TestConjectureScan:
    def test_candidates_are_seeded(self):
        a = conjecture_candidates(SearchConfig(seed=3), 20)
        b = conjecture_candidates(SearchConfig(seed=3), 20)
        assert [f for _, f in a] == [f for _, f in b]
        assert a[0] == ("delta", delta())

    def test_p1_delta_attains(self):
        rep = conjecture_scan(1.0, n_random=100)
        assert not rep.violated
        assert rep.max_ratio <= rep.conjectured_constant + 1e-9
        assert abs(rep.delta_ratio - conjectured_constant(1).value) <= 1e-6
        assert 0 in rep.delta_like

    def test_kind_filter_and_range(self):
        rep = conjecture_scan(0.9, n_random=0, kinds=("delta",))
        assert rep.candidates == 2 and rep.argmax_kind == "delta"
        with pytest.raises(InvalidParameterError):
            conjecture_scan(1.2)
