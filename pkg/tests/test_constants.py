import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphmax import (
    InvalidParameterError,
    build_named,
    delta_variation_ratio,
    grid_oracle_norm,
    kn_limit,
    kn_lower_bound,
    kn_var_constant,
    max_delta_variation_ratio,
    p_variation,
    graph_maximal,
    soria_tradacete_star_bounds,
    star_limit,
    star_lower_bound,
    star_norm_star,
    star_var2_constant,
    star_var2_extremizer,
)
from graphmax.constants import LOG4_LOG6, ConstantReport, _kn_limit_objective


def brute_kn_limit(n, k, alphas):
    """Limit objective straight from its defining ratio, no log rescaling."""
    a = np.asarray(alphas, float)
    top = a ** (n / k)
    return (k * top + a * (n - k)) / (k * top + n - k)


class TestSimpleStarBounds:
    def test_examples(self):
        assert soria_tradacete_star_bounds(4, 1) == (2.5, 4.5)
        assert soria_tradacete_star_bounds(2, 1) == (1.5, 3.5)

    @pytest.mark.parametrize("n", [3, 4, 5])
    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0])
    def test_bracket_grid_oracle(self, n, p):
        lo, hi = soria_tradacete_star_bounds(n, p)
        est = grid_oracle_norm(build_named("star", n), p, 0.05).best_value ** p
        assert lo - 1e-12 <= est <= hi

    def test_rejects_small_p(self):
        with pytest.raises(InvalidParameterError):
            soria_tradacete_star_bounds(4, 0.5)


class TestCompleteGraphLowerBound:
    def test_example(self):
        assert kn_lower_bound(2, 1, 2, 1) == pytest.approx(1.25, abs=1e-15)

    def test_trivial_cases(self):
        assert kn_lower_bound(4, 2, 3, 4) == 1.0
        assert kn_lower_bound(4, 2, 1 + 1e-12, 1) == pytest.approx(1.0, abs=1e-9)

    def test_errors(self):
        with pytest.raises(InvalidParameterError):
            kn_lower_bound(4, 2, 1.0, 1)
        with pytest.raises(InvalidParameterError):
            kn_lower_bound(4, 2, 2.0, 0)
        with pytest.raises(InvalidParameterError):
            kn_lower_bound(4, 0.5, 2.0, 1)

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_direct_ratio(self, n):
        # evaluate the two-level function through the operator itself
        p, alpha, k = 3.0, 1.7, 1
        top = (n * alpha ** (1 / p) - (n - k)) / k
        f = np.array([top] * k + [1.0] * (n - k))
        g = build_named("complete", n)
        mf = graph_maximal(g, f).values
        assert kn_lower_bound(n, p, alpha, k) == pytest.approx(
            np.sum(mf ** p) / np.sum(f ** p), rel=1e-12)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_converges_to_limit_from_above(self, n):
        lim = kn_limit(n)
        gaps = [kn_lower_bound(n, p, lim.alpha_star, lim.k_star) - lim.value
                for p in (50, 100, 1000, 1e4, 1e5)]
        assert all(gap >= -1e-12 for gap in gaps)
        assert all(b < a for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 1e-5


class TestCompleteGraphLimit:
    def test_n3_cubic_oracle(self):
        lim = kn_limit(3)
        assert lim.k_star == 1
        assert lim.value == pytest.approx(1.2043, abs=1e-3)
        roots = np.roots([2, -3, 0, -2])
        alpha = max(r.real for r in roots if abs(r.imag) < 1e-12)
        assert lim.alpha_star == pytest.approx(alpha, abs=1e-6)
        assert lim.value == pytest.approx(float(brute_kn_limit(3, 1, alpha)), abs=1e-12)

    def test_n3_beats_k2(self):
        alphas = np.linspace(1.0001, 20, 20001)
        assert kn_limit(3).value > brute_kn_limit(3, 2, alphas).max()
        assert brute_kn_limit(3, 2, alphas).max() == pytest.approx(1.1773, abs=1e-4)

    def test_n4_at_least_explicit_point(self):
        assert kn_limit(4).value >= 22 / 19 - 1e-15

    @pytest.mark.parametrize("n", [3, 4, 5, 7, 25])
    def test_dense_scan_oracle(self, n):
        alphas = np.exp(np.linspace(1e-6, 8, 40001))
        scan = max(brute_kn_limit(n, k, alphas).max() for k in range(1, n))
        assert kn_limit(n).value >= scan - 1e-9
        assert kn_limit(n).value <= scan + 1e-4

    def test_large_n_terminates_and_scales(self):
        # the objective depends on n/k only, so doubling n cannot lower the limit
        for n in (10, 30, 60):
            assert kn_limit(2 * n).value >= kn_limit(n).value - 1e-12

    def test_log_form_matches_direct(self):
        t = np.linspace(0.01, 3, 50)
        for n, k in [(3, 1), (5, 2), (6, 4)]:
            assert np.allclose(_kn_limit_objective(n, k, t), brute_kn_limit(n, k, np.exp(t)),
                               rtol=1e-12)


class TestStarLowerBound:
    def test_monotone_and_limit(self):
        for n in (3, 9, 25):
            ps = [1, 1.5, 2, 4, 10, 100, 1e4]
            vals = [star_lower_bound(n, p) for p in ps]
            assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
            assert vals[-1] == pytest.approx((1 + math.sqrt(n)) / 2, rel=1e-3)
            assert star_lower_bound(n, math.inf) == (1 + math.sqrt(n)) / 2

    @pytest.mark.parametrize("n,p", [(3, 1.5), (3, 2), (4, 2), (4, 3)])
    def test_below_grid_norm(self, n, p):
        est = grid_oracle_norm(build_named("star", n), p, 0.02).best_value ** p
        assert star_lower_bound(n, p) <= est + 1e-9


class TestStarNormStar:
    def test_example_range(self):
        r = star_norm_star(9, 200)
        assert 1.8 <= r.ratio <= 2.05
        assert r.value ** 200 == pytest.approx(r.ratio, rel=1e-9)

    def test_large_p_near_limit(self):
        assert abs(star_norm_star(25, 400).ratio - 3) <= 0.02

    def test_p1_is_the_boundary_limit(self):
        r = star_norm_star(5, 1)
        assert r.y_star == math.inf and r.ratio == pytest.approx(1 + 4 / 2)

    @pytest.mark.parametrize("n,p", [(3, 2), (4, 2), (4, 3)])
    def test_below_grid_norm(self, n, p):
        est = grid_oracle_norm(build_named("star", n), p, 0.02).best_value
        assert star_norm_star(n, p).value <= est + 0.005

    @pytest.mark.parametrize("n,p", [(5, 3.0), (9, 20.0), (16, 60.0)])
    def test_against_direct_scan(self, n, p):
        ys = np.exp(np.linspace(0, min(12.0, 600.0 / p), 200001))
        direct = (ys ** p + (n - 1) * ((1 + ys) / 2) ** p) / (ys ** p + n - 1)
        r = star_norm_star(n, p)
        assert r.ratio >= direct.max() - 1e-9
        assert r.ratio <= max(direct.max(), 1 + (n - 1) / 2 ** p) + 1e-6


class TestStarLimit:
    def test_exact_range(self):
        assert star_limit(25) == (3.0, True, None, None)
        lim = star_limit(26)
        assert lim.exact and lim.value == pytest.approx(3.049510, abs=1e-6)

    def test_small_n_flagged(self):
        lim = star_limit(9)
        assert not lim.exact and lim.value >= 2.0
        assert lim.sup_constrained is not None

    def test_rejects_small_n(self):
        with pytest.raises(InvalidParameterError):
            star_limit(2)


class TestStarVariation:
    @pytest.mark.parametrize("n", range(3, 13))
    @pytest.mark.parametrize("x,c", [(1, 0.5), (2, 1), (10, 0.1)])
    def test_extremizer_attains(self, n, x, c):
        g = build_named("star", n)
        f = star_var2_extremizer(n, x, c)
        mf = graph_maximal(g, f).values
        ratio = p_variation(g, mf, 2) / p_variation(g, f, 2)
        assert ratio == pytest.approx(star_var2_constant(n), abs=1e-12)

    def test_example_vector(self):
        assert star_var2_extremizer(5, 2, 1).tolist() == [2, 6, 1, 1, 1]

    def test_bad_parameters(self):
        with pytest.raises(InvalidParameterError):
            star_var2_extremizer(4, 1, 1)
        with pytest.raises(InvalidParameterError):
            star_var2_constant(2)

    def test_monotone_below_one(self):
        vals = [star_var2_constant(n) for n in range(3, 200)]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1


class TestDeltaRatios:
    def test_star_examples(self):
        s4 = build_named("star", 4)
        assert delta_variation_ratio(s4, 1, 1) == pytest.approx(0.75)
        assert delta_variation_ratio(s4, 1, 0) == pytest.approx(0.5)
        assert max_delta_variation_ratio(s4, 1) == (pytest.approx(0.75), 1)

    @pytest.mark.parametrize("n", range(2, 9))
    @pytest.mark.parametrize("p", [LOG4_LOG6, 1.0, 2.0])
    def test_complete_graph(self, n, p):
        g = build_named("complete", n)
        for v in range(n):
            assert delta_variation_ratio(g, p, v) == pytest.approx(kn_var_constant(n), abs=1e-12)

    def test_bad_vertex(self):
        with pytest.raises(InvalidParameterError):
            delta_variation_ratio(build_named("star", 3), 1, 3)

    @pytest.mark.parametrize("family,size", [("star", 5), ("path", 4), ("path", 6), ("cycle", 5),
                                             ("cycle", 6), ("hypercube", 2), ("hypercube", 3)])
    @pytest.mark.parametrize("p", [0.5, 0.75, 1.0])
    def test_floor_for_structured_families(self, family, size, p):
        g = build_named(family, size)
        ratio, _ = max_delta_variation_ratio(g, p)
        assert ratio >= 1 - 1 / g.n - 1e-12


@settings(max_examples=50, deadline=None)
@given(n=st.integers(3, 12), x=st.floats(0.1, 50), frac=st.floats(0.01, 0.99))
def test_star_extremizer_property(n, x, frac):
    g = build_named("star", n)
    f = star_var2_extremizer(n, x, frac * x)
    mf = graph_maximal(g, f).values
    assert p_variation(g, mf, 2) / p_variation(g, f, 2) == pytest.approx(
        star_var2_constant(n), rel=1e-9)


def test_constant_report_rounds_value():
    row = ConstantReport("kn_var", 4, 0.1 + 0.2, True).to_dict()
    assert row == {"name": "kn_var", "n": 4, "value": 0.3, "exact": True}
