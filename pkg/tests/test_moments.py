import math

import numpy as np
import pytest

from miposterior import (
    CountsTable,
    DegenerateError,
    PriorSpec,
    ValidationError,
    ZeroCellError,
    apply_prior,
    central3,
    central4,
    dirichlet_covariance,
    i_max,
    mean_exact,
    mean_o2,
    mean_var_from_cov,
    point_mi,
    point_stats,
    skew_kurt,
    summarize,
    var_o1,
    var_o2,
)


def posterior(mat, prior="haldane"):
    return apply_prior(CountsTable(np.array(mat, dtype=float)), PriorSpec(prior))


# hand values for the 2x2 table [[2,1],[1,2]] (and its probability version):
# cells with weight 2/3 have log-ratio log(4/3), weight 1/3 have log(2/3)
J_212 = (2.0 / 3.0) * math.log(4.0 / 3.0) + (1.0 / 3.0) * math.log(2.0 / 3.0)
K_212 = (2.0 / 3.0) * math.log(4.0 / 3.0) ** 2 + (1.0 / 3.0) * math.log(2.0 / 3.0) ** 2
L_212 = (2.0 / 3.0) * math.log(4.0 / 3.0) ** 3 + (1.0 / 3.0) * math.log(2.0 / 3.0) ** 3


class TestPointMi:
    def test_uniform_is_zero(self):
        assert point_mi(np.full((2, 2), 0.25)) == 0.0

    def test_diagonal_is_log2(self):
        assert point_mi(np.array([[0.5, 0.0], [0.0, 0.5]])) == pytest.approx(
            math.log(2.0), abs=1e-15)

    def test_hand_value(self):
        q = np.array([[1 / 3, 1 / 6], [1 / 6, 1 / 3]])
        assert point_mi(q) == pytest.approx(J_212, abs=1e-15)
        assert point_mi(q) == pytest.approx(0.05663301226, abs=1e-11)

    def test_errors(self):
        with pytest.raises(ValidationError):
            point_mi(np.array([[0.5, -0.1], [0.3, 0.3]]))
        with pytest.raises(ValidationError):
            point_mi(np.array([[0.5, 0.4], [0.3, 0.3]]))

    def test_range(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            q = rng.uniform(0, 1, size=(3, 4))
            q /= q.sum()
            v = point_mi(q)
            assert 0.0 <= v <= min(math.log(3), math.log(4)) + 1e-12


class TestPointStats:
    def test_uniform_all_zero(self):
        for c in (0.5, 1.0, 3.0):
            st = point_stats(posterior([[c, c], [c, c]]))
            assert st.j == st.k == st.l == st.m == st.q == st.p == 0.0
            assert np.all(st.row_j == 0) and np.all(st.col_j == 0)

    def test_hand_values(self):
        st = point_stats(posterior([[2, 1], [1, 2]]))
        assert st.j == pytest.approx(J_212, abs=1e-15)
        assert st.j == pytest.approx(0.05663301226, abs=1e-11)
        assert st.k == pytest.approx(K_212, abs=1e-15)
        assert st.q == pytest.approx(-1.0 / 9.0, abs=1e-15)

    def test_row_col_sums_equal_j(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            st = point_stats(posterior(rng.uniform(0.1, 9.0, size=(3, 5))))
            tol = 1e-12 * max(1.0, abs(st.j))
            assert abs(st.row_j.sum() - st.j) <= tol
            assert abs(st.col_j.sum() - st.j) <= tol
            assert st.k - st.j**2 >= 0
            assert st.q <= 1.0

    def test_zero_cells_flag_m_p(self):
        st = point_stats(posterior([[5, 0], [0, 5]]))
        assert math.isnan(st.m) and math.isnan(st.p)
        assert math.isfinite(st.j) and math.isfinite(st.k)
        assert math.isfinite(st.q)


class TestMeanExact:
    def test_all_ones_is_one_twelfth(self):
        assert mean_exact(posterior([[1, 1], [1, 1]])) == pytest.approx(
            1.0 / 12.0, abs=1e-12)

    def test_single_row(self):
        assert mean_exact(posterior([[3, 1, 4, 1, 5]])) == 0.0

    def test_approaches_point_estimate(self):
        j = point_stats(posterior([[8, 2], [2, 8]])).j
        assert j == pytest.approx(0.8 * math.log(1.6) + 0.2 * math.log(0.4),
                                  abs=1e-15)
        gaps = [abs(mean_exact(posterior([[8.0 * f, 2.0 * f], [2.0 * f, 8.0 * f]])) - j)
                for f in (1, 4, 16, 64)]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))

    def test_bounds(self):
        rng = np.random.default_rng(13)
        for _ in range(30):
            c = posterior(rng.uniform(0.1, 9.0, size=(2, 3)))
            assert 0.0 <= mean_exact(c) <= i_max(c)

    def test_strictly_positive_even_under_independence(self):
        for n in (4, 16, 64):
            assert mean_exact(posterior([[n / 4.0] * 2] * 2)) > 0


class TestExpansions:
    def test_mean_o2_all_ones(self):
        assert mean_o2(posterior([[1, 1], [1, 1]])) == pytest.approx(0.1, abs=1e-15)

    def test_mean_o2_single_row(self):
        assert mean_o2(posterior([[2, 3, 4]])) == 0.0

    def test_mean_o2_hand_value(self):
        assert mean_o2(posterior([[2, 1], [1, 2]])) == pytest.approx(
            J_212 + 1.0 / 14.0, abs=1e-15)
        assert mean_o2(posterior([[2, 1], [1, 2]])) == pytest.approx(
            0.12806158369, abs=1e-11)

    def test_var_o1(self):
        assert var_o1(posterior([[3, 3], [3, 3]])) == 0.0
        assert var_o1(posterior([[1, 2, 3]])) == 0.0
        assert var_o1(posterior([[2, 1], [1, 2]])) == pytest.approx(
            (K_212 - J_212**2) / 7.0, abs=1e-15)

    def test_var_o2_all_ones(self):
        assert var_o2(posterior([[1, 1], [1, 1]])) == pytest.approx(
            1.0 / 60.0, abs=1e-15)

    def test_var_o2_zero_cell_error(self):
        with pytest.raises(ZeroCellError) as ei:
            var_o2(posterior([[5, 0], [0, 5]]))
        assert (0, 1) in ei.value.cells and (1, 0) in ei.value.cells

    def test_var_o2_uniform_general(self):
        for r, s in ((2, 2), (3, 3), (2, 4)):
            c = posterior(np.ones((r, s)))
            expected = ((r - 1) * (s - 1) / 2.0) / ((r * s + 1) * (r * s + 2))
            assert var_o2(c) == pytest.approx(expected, rel=1e-12)

    def test_central3_uniform(self):
        assert central3(posterior([[2, 2], [2, 2]])) == 0.0

    def test_central3_hand_value(self):
        c = posterior([[2, 1], [1, 2]])
        st = point_stats(c)
        expected = (2.0 / 36.0) * (2 * J_212**3 - 3 * K_212 * J_212 + L_212) \
            + (3.0 / 36.0) * (K_212 + J_212**2 - st.p)
        assert central3(c) == pytest.approx(expected, rel=1e-12)

    def test_central3_scaling(self):
        vals = [abs(central3(posterior([[8.0 * f, 2.0 * f], [2.0 * f, 8.0 * f]])))
                for f in (4, 8, 16, 32)]
        for a, b in zip(vals, vals[1:]):
            assert 3.0 < a / b < 5.5  # ~f^-2 decay of the n^-2 prefactor

    def test_central4(self):
        assert central4(posterior([[1, 1], [1, 1]])) == 0.0
        c = posterior([[2, 1], [1, 2]])
        assert central4(c) == pytest.approx(3.0 * (K_212 - J_212**2) ** 2 / 36.0,
                                            rel=1e-13)
        # algebraic identity with var_o1
        n = 6.0
        assert central4(c) == pytest.approx(
            3.0 * (n + 1) ** 2 / n**2 * var_o1(c) ** 2, rel=1e-12)

    def test_skew_kurt_limits(self):
        kurt_gaps = []
        skews = []
        for f in (4, 8, 16, 32):
            sk, ku = skew_kurt(posterior([[8.0 * f, 2.0 * f], [2.0 * f, 8.0 * f]]))
            kurt_gaps.append(abs(ku - 3.0))
            skews.append(abs(sk))
        for a, b in zip(kurt_gaps, kurt_gaps[1:]):
            assert 1.4 < a / b < 2.8  # kurtosis approaches 3 like 1/n
        for a, b in zip(skews, skews[1:]):
            assert 1.2 < a / b < 1.75  # skewness decays like n^-1/2

    def test_skew_kurt_degenerate(self):
        with pytest.raises(DegenerateError):
            skew_kurt(posterior([[5, 5], [5, 5]]))
        with pytest.raises(DegenerateError):
            skew_kurt(posterior([[1, 2, 3]]))


class TestCovariancePath:
    def test_all_ones_covariance(self):
        cov = dirichlet_covariance(posterior([[1, 1], [1, 1]]))
        for i in range(2):
            for j in range(2):
                assert cov[i, j, i, j] == pytest.approx(3.0 / 80.0, abs=1e-15)
        assert cov[0, 0, 0, 1] == pytest.approx(-1.0 / 80.0, abs=1e-15)

    def test_rows_sum_to_zero_and_diagonal(self):
        rng = np.random.default_rng(17)
        c = posterior(rng.uniform(0.5, 9.0, size=(3, 4)))
        cov = dirichlet_covariance(c)
        assert np.allclose(cov.sum(axis=(2, 3)), 0.0, atol=1e-15)
        assert np.allclose(cov, np.transpose(cov, (2, 3, 0, 1)))
        q = c.counts / c.total
        for i in range(3):
            for j in range(4):
                p = q[i, j]
                assert cov[i, j, i, j] == pytest.approx(
                    p * (1 - p) / (c.total + 1.0), rel=1e-13)

    def test_zero_cov_degenerates_to_point_estimate(self):
        q = np.array([[0.3, 0.2], [0.1, 0.4]])
        m, v = mean_var_from_cov(q, np.zeros((2, 2, 2, 2)))
        assert m == pytest.approx(point_mi(q), abs=1e-15)
        assert v == 0.0

    def test_all_ones_end_to_end(self):
        c = posterior([[1, 1], [1, 1]])
        m, v = mean_var_from_cov(c.counts / c.total, dirichlet_covariance(c))
        assert m == pytest.approx(0.1, abs=1e-14)
        assert v == pytest.approx(0.0, abs=1e-16)

    def test_keystone_equivalence(self):
        # generic covariance path reproduces the Dirichlet closed forms
        rng = np.random.default_rng(7)
        for _ in range(100):
            r, s = rng.integers(2, 6), rng.integers(2, 6)
            c = posterior(rng.uniform(0.2, 20.0, size=(r, s)))
            m, v = mean_var_from_cov(c.counts / c.total, dirichlet_covariance(c))
            assert m == pytest.approx(mean_o2(c), rel=1e-12)
            assert v == pytest.approx(var_o1(c), rel=1e-12, abs=1e-25)

    def test_zero_probability_rejected(self):
        q = np.array([[0.5, 0.5], [0.0, 0.0]])
        with pytest.raises(ValidationError):
            mean_var_from_cov(q, np.zeros((2, 2, 2, 2)))


class TestSummarize:
    def test_all_ones(self):
        s = summarize(posterior([[1, 1], [1, 1]]))
        assert s.mean_exact == pytest.approx(1.0 / 12.0, abs=1e-12)
        assert s.mean_o2 == pytest.approx(0.1)
        assert s.var_o1 == 0.0
        assert s.var_o2 == pytest.approx(1.0 / 60.0)
        assert math.isnan(s.skewness) and math.isnan(s.kurtosis)
        assert "shape_degenerate" in s.flags

    def test_single_row(self):
        s = summarize(posterior([[1, 2, 3, 4, 5]]))
        assert s.mean_exact == s.var_o1 == s.var_o2 == 0.0
        assert s.i_max == 0.0
        assert s.flags.get("constant_variable")

    def test_dependent_table(self):
        s = summarize(posterior([[8, 2], [2, 8]]))
        assert s.validity_ratio == pytest.approx(0.2)
        for v in (s.mean_exact, s.mean_o2, s.var_o1, s.var_o2, s.central3,
                  s.central4, s.skewness, s.kurtosis):
            assert math.isfinite(v)

    def test_zero_cells_flagged(self):
        s = summarize(posterior([[5, 0], [0, 5]]))
        assert math.isnan(s.var_o2) and math.isnan(s.central3)
        assert s.flags["zero_cells"] == [(0, 1), (1, 0)]
        assert math.isfinite(s.mean_exact) and math.isfinite(s.var_o1)


class TestInvariants:
    def test_permutation_and_transposition(self):
        rng = np.random.default_rng(23)
        ops = (mean_exact, mean_o2, var_o1, var_o2, central3, central4)
        for _ in range(50):
            r, s = rng.integers(2, 6), rng.integers(2, 6)
            counts = rng.uniform(0.2, 20.0, size=(r, s))
            c = posterior(counts)
            cp = posterior(counts[np.ix_(rng.permutation(r), rng.permutation(s))])
            ct = posterior(counts.T)
            for op in ops:
                ref = op(c)
                assert op(cp) == pytest.approx(ref, rel=1e-12, abs=1e-18)
                assert op(ct) == pytest.approx(ref, rel=1e-12, abs=1e-18)

    def test_expansion_gap_shrinks_second_order(self):
        gaps = [abs(mean_o2(posterior([[8.0 * f, 2.0 * f], [2.0 * f, 8.0 * f]]))
                    - mean_exact(posterior([[8.0 * f, 2.0 * f], [2.0 * f, 8.0 * f]])))
                for f in (1, 2, 4, 8, 16)]
        for a, b in zip(gaps, gaps[1:]):
            assert 3.0 <= a / b <= 5.5

    def test_independence_signal(self):
        # under independence the mean and the standard deviation are the same
        # order, so mean/sigma stays O(1)
        for cval in (2, 4, 8, 32, 128):
            c = posterior([[float(cval)] * 2] * 2)
            ratio = mean_exact(c) / math.sqrt(var_o2(c))
            assert 0.1 <= ratio <= 10.0

    def test_xlogx_limit(self):
        base = np.array([[5.0, 0.0], [0.0, 5.0]])
        st = point_stats(posterior(base))
        l_gaps = []
        for eps in (1e-8, 1e-10):
            ste = point_stats(posterior(np.where(base == 0, eps, base)))
            assert ste.j == pytest.approx(st.j, abs=1e-6)
            assert ste.k == pytest.approx(st.k, abs=1e-6)
            l_gaps.append(abs(ste.l - st.l))
        # the cubic term converges like eps log^3(eps): slower than J and K
        assert l_gaps[1] < l_gaps[0]
        assert l_gaps[1] <= 1e-6

    def test_nonnegativity(self):
        rng = np.random.default_rng(31)
        for _ in range(30):
            c = posterior(rng.uniform(0.1, 9.0, size=(3, 3)))
            st = point_stats(c)
            assert var_o1(c) >= 0
            assert central4(c) >= 0
            assert st.k - st.j**2 >= 0
