"""Statistical kernel tests, mostly against independent scipy oracles."""

import math
import random

import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from paintscope import stats


class TestStudentTCdf:
    def test_symmetry_at_zero(self):
        assert stats.student_t_cdf(0.0, 5) == pytest.approx(0.5, abs=1e-15)

    def test_normal_limit(self):
        assert stats.student_t_cdf(1.96, 10000) == pytest.approx(0.975, abs=1e-3)

    def test_frozen_value(self):
        # against numerical integration of the t density (and scipy)
        assert stats.student_t_cdf(2.0, 10) == pytest.approx(0.96331, abs=1e-4)

    @pytest.mark.parametrize("df", [1, 2, 3, 10, 30, 317, 5000])
    @pytest.mark.parametrize("t", [-8.0, -3.197, -1.0, -0.1, 0.3, 2.5, 6.0])
    def test_against_scipy(self, t, df):
        assert stats.student_t_cdf(t, df) == pytest.approx(
            scipy.stats.t.cdf(t, df), abs=1e-12
        )

    @given(
        st.floats(-30, 30, allow_nan=False),
        st.integers(min_value=1, max_value=2000),
    )
    @settings(max_examples=200, deadline=None)
    def test_symmetry_property(self, t, df):
        total = stats.student_t_cdf(t, df) + stats.student_t_cdf(-t, df)
        assert abs(total - 1.0) < 1e-12

    @given(
        st.floats(-20, 20, allow_nan=False),
        st.floats(-20, 20, allow_nan=False),
        st.integers(min_value=1, max_value=500),
    )
    @settings(max_examples=200, deadline=None)
    def test_monotone(self, a, b, df):
        lo, hi = sorted((a, b))
        assert stats.student_t_cdf(lo, df) <= stats.student_t_cdf(hi, df) + 1e-15

    def test_paper_t_statistic(self):
        p = stats.two_sided_p(-3.197, 317)
        assert p == pytest.approx(0.002, abs=0.0005)


class TestQuantile:
    @pytest.mark.parametrize("df", [1, 2, 5, 30, 317])
    @pytest.mark.parametrize("q", [0.6, 0.9, 0.975, 0.999])
    def test_against_scipy(self, q, df):
        assert stats.student_t_quantile(q, df) == pytest.approx(
            scipy.stats.t.ppf(q, df), abs=1e-8
        )

    def test_roundtrip(self):
        for df in (3, 50):
            for q in (0.55, 0.8, 0.975):
                t = stats.student_t_quantile(q, df)
                assert stats.student_t_cdf(t, df) == pytest.approx(q, abs=1e-9)


class TestOls:
    def test_exact_line(self):
        rep = stats.ols([1.0, 2.0, 3.0], [2.0, 4.0, 6.0])
        assert rep.slope == pytest.approx(2.0, abs=1e-12)
        assert rep.intercept == pytest.approx(0.0, abs=1e-12)
        assert rep.r_squared == pytest.approx(1.0, abs=1e-12)

    def test_too_few_points(self):
        with pytest.raises(stats.DegenerateInputError):
            stats.ols([0.0, 1.0], [1.0, 2.0])

    def test_zero_x_variance(self):
        with pytest.raises(stats.DegenerateInputError):
            stats.ols([2.0, 2.0, 2.0], [1.0, 2.0, 3.0])

    def test_against_scipy_linregress(self):
        rng = random.Random(42)
        xs = [rng.uniform(0, 50) for _ in range(40)]
        ys = [3.0 + 0.4 * x + rng.gauss(0, 2) for x in xs]
        rep = stats.ols(xs, ys)
        ref = scipy.stats.linregress(xs, ys)
        assert rep.slope == pytest.approx(ref.slope, abs=1e-10)
        assert rep.intercept == pytest.approx(ref.intercept, abs=1e-10)
        assert rep.r_squared == pytest.approx(ref.rvalue**2, abs=1e-10)
        # CI from scipy's stderr and exact t quantile
        tq = scipy.stats.t.ppf(0.975, len(xs) - 2)
        assert rep.slope_ci95[0] == pytest.approx(ref.slope - tq * ref.stderr, abs=1e-9)
        assert rep.slope_ci95[1] == pytest.approx(ref.slope + tq * ref.stderr, abs=1e-9)
        # intercept p against scipy's own t-test formulation
        t_int = ref.intercept / ref.intercept_stderr
        p_ref = 2 * scipy.stats.t.cdf(-abs(t_int), len(xs) - 2)
        assert rep.intercept_p == pytest.approx(p_ref, abs=1e-10)

    def test_ci_brackets_slope(self):
        rng = random.Random(9)
        xs = [rng.uniform(0, 10) for _ in range(20)]
        ys = [1 + 2 * x + rng.gauss(0, 1) for x in xs]
        rep = stats.ols(xs, ys)
        assert rep.slope_ci95[0] <= rep.slope <= rep.slope_ci95[1]

    def test_equivariance_in_y(self):
        rng = random.Random(5)
        xs = [rng.uniform(0, 10) for _ in range(15)]
        ys = [0.5 + 1.5 * x + rng.gauss(0, 0.3) for x in xs]
        a = stats.ols(xs, ys)
        c = -2.5
        b = stats.ols(xs, [c * y for y in ys])
        assert b.slope == pytest.approx(c * a.slope, rel=1e-12)
        assert b.intercept == pytest.approx(c * a.intercept, rel=1e-12)
        assert b.residual_se == pytest.approx(abs(c) * a.residual_se, rel=1e-12)
        assert sorted(b.slope_ci95) == pytest.approx(
            sorted(c * v for v in a.slope_ci95), rel=1e-12
        )
        assert b.r_squared == pytest.approx(a.r_squared, abs=1e-12)
        assert b.intercept_p == pytest.approx(a.intercept_p, abs=1e-12)

    def test_noisy_slope_monte_carlo(self):
        # y = 0.31x + noise: slope lands in (0.30, 0.32) and the zero
        # intercept is not rejected, in at least 95% of seeded runs
        hits = 0
        runs = 100
        for seed in range(runs):
            rng = random.Random(1000 + seed)
            xs = [rng.uniform(0, 100) for _ in range(200)]
            sigma = 0.01 * (max(xs) - min(xs))
            ys = [0.31 * x + rng.gauss(0, sigma) for x in xs]
            rep = stats.ols(xs, ys)
            if 0.30 < rep.slope < 0.32 and rep.intercept_p > 0.05:
                hits += 1
        assert hits >= 95

    @given(st.integers(0, 10**9))
    @settings(max_examples=80, deadline=None)
    def test_exact_line_property(self, seed):
        rng = random.Random(seed)
        a, b = rng.uniform(-5, 5), rng.uniform(-5, 5)
        xs = sorted(rng.uniform(-100, 100) for _ in range(rng.randint(3, 30)))
        if max(xs) - min(xs) < 1e-6:
            return
        ys = [a + b * x for x in xs]
        rep = stats.ols(xs, ys)
        scale = max(1.0, abs(a), abs(b))
        assert abs(rep.intercept - a) < 1e-9 * scale * 100
        assert abs(rep.slope - b) < 1e-9 * scale
        assert abs(rep.r_squared - 1.0) < 1e-9 or b == 0


class TestTTest:
    def test_symmetric_sample(self):
        rep = stats.t_test_one_sample([-1.0, 1.0], 0.0)
        assert rep.t == pytest.approx(0.0, abs=1e-15)
        assert rep.p == pytest.approx(1.0, abs=1e-15)
        assert rep.df == 1

    def test_against_scipy(self):
        rng = random.Random(11)
        xs = [rng.gauss(0.5, 2.0) for _ in range(30)]
        rep = stats.t_test_one_sample(xs, 0.0)
        ref = scipy.stats.ttest_1samp(xs, 0.0)
        assert rep.t == pytest.approx(ref.statistic, abs=1e-10)
        assert rep.p == pytest.approx(ref.pvalue, abs=1e-10)
        assert rep.df == 29

    def test_constructed_moments_match_paper_t(self):
        # a sample with mean -0.9 and sd 5.02 at n=318 lands on t = -3.197
        n, mean, sd = 318, -0.9, 5.02
        base = [mean - sd, mean + sd] * (n // 2)
        # exact sample sd of this alternating sample is sd * sqrt(n/(n-1))
        factor = math.sqrt((n - 1) / n)
        xs = [mean + (x - mean) * factor for x in base]
        rep = stats.t_test_one_sample(xs, 0.0)
        expected_t = mean / (sd / math.sqrt(n))
        assert rep.t == pytest.approx(expected_t, abs=1e-9)
        assert rep.t == pytest.approx(-3.197, abs=0.01)
        assert rep.df == 317

    def test_zero_variance(self):
        with pytest.raises(stats.DegenerateInputError):
            stats.t_test_one_sample([2.0, 2.0, 2.0], 0.0)

    @given(st.integers(0, 10**9))
    @settings(max_examples=60, deadline=None)
    def test_affine_invariance(self, seed):
        rng = random.Random(seed)
        xs = [rng.gauss(1, 3) for _ in range(rng.randint(3, 40))]
        if max(xs) == min(xs):
            return
        mu0 = rng.uniform(-2, 2)
        c = rng.choice([-1, 1]) * rng.uniform(0.1, 10)
        d = rng.uniform(-50, 50)
        a = stats.t_test_one_sample(xs, mu0)
        b = stats.t_test_one_sample([c * x + d for x in xs], c * mu0 + d)
        assert abs(a.p - b.p) < 1e-12
        assert abs(abs(a.t) - abs(b.t)) < 1e-9


class TestPearson:
    def test_perfect(self):
        r, p = stats.pearson([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert r == pytest.approx(1.0, abs=1e-15)
        assert p == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal(self):
        r, p = stats.pearson([-1.0, 0.0, 1.0], [1.0, -2.0, 1.0])
        assert r == pytest.approx(0.0, abs=1e-15)

    def test_frozen_paper_sized_value(self):
        # r = 0.78 at n = 10 is significant at the 1% level
        r = 0.78
        t = r * math.sqrt((10 - 2) / (1 - r * r))
        p = stats.two_sided_p(t, 8)
        assert p == pytest.approx(0.0078, abs=0.0005)
        assert p < 0.01

    def test_against_scipy(self):
        rng = random.Random(23)
        xs = [rng.uniform(0, 10) for _ in range(25)]
        ys = [x * 0.7 + rng.gauss(0, 1.5) for x in xs]
        r, p = stats.pearson(xs, ys)
        ref = scipy.stats.pearsonr(xs, ys)
        assert r == pytest.approx(ref.statistic, abs=1e-12)
        assert p == pytest.approx(ref.pvalue, abs=1e-10)

    def test_symmetry(self):
        xs = [1.0, 4.0, 2.0, 8.0]
        ys = [3.0, 1.0, 5.0, 9.0]
        assert stats.pearson(xs, ys)[0] == stats.pearson(ys, xs)[0]

    def test_degenerate(self):
        with pytest.raises(stats.DegenerateInputError):
            stats.pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
