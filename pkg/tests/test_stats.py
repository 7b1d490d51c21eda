import itertools
import math

import numpy as np
import pytest
from scipy import integrate
from scipy import stats as sps

from portalbench.stats import (
    ConditionSummary,
    dunn_posthoc,
    error_rate,
    kruskal_wallis,
    mean_ci95,
    rm_anova_two_way,
    throughput,
    tukey_hsd,
    vrsq_score,
)
from portalbench.tasks import TrialLog


# ---------------------------------------------------------------------------
# Independent oracles (deliberately plain-loop implementations)
# ---------------------------------------------------------------------------

def brute_force_rm_anova(data):
    """Loop-based within-subjects sums-of-squares decomposition."""
    n, a, b = len(data), len(data[0]), len(data[0][0])
    total = sum(data[i][j][k] for i in range(n) for j in range(a) for k in range(b))
    grand = total / (n * a * b)
    mean_a = [sum(data[i][j][k] for i in range(n) for k in range(b)) / (n * b)
              for j in range(a)]
    mean_b = [sum(data[i][j][k] for i in range(n) for j in range(a)) / (n * a)
              for k in range(b)]
    mean_s = [sum(data[i][j][k] for j in range(a) for k in range(b)) / (a * b)
              for i in range(n)]
    mean_ab = [[sum(data[i][j][k] for i in range(n)) / n for k in range(b)]
               for j in range(a)]
    mean_sa = [[sum(data[i][j][k] for k in range(b)) / b for j in range(a)]
               for i in range(n)]
    mean_sb = [[sum(data[i][j][k] for j in range(a)) / a for k in range(b)]
               for i in range(n)]

    ss_a = n * b * sum((m - grand) ** 2 for m in mean_a)
    ss_b = n * a * sum((m - grand) ** 2 for m in mean_b)
    ss_ab = n * sum((mean_ab[j][k] - mean_a[j] - mean_b[k] + grand) ** 2
                    for j in range(a) for k in range(b))
    ss_as = b * sum((mean_sa[i][j] - mean_a[j] - mean_s[i] + grand) ** 2
                    for i in range(n) for j in range(a))
    ss_bs = a * sum((mean_sb[i][k] - mean_b[k] - mean_s[i] + grand) ** 2
                    for i in range(n) for k in range(b))
    ss_abs = sum((data[i][j][k] - mean_sa[i][j] - mean_sb[i][k] - mean_ab[j][k]
                  + mean_a[j] + mean_b[k] + mean_s[i] - grand) ** 2
                 for i in range(n) for j in range(a) for k in range(b))

    def f(ss_eff, df_eff, ss_err, df_err):
        return (ss_eff / df_eff) / (ss_err / df_err)

    return {
        "F_a": f(ss_a, a - 1, ss_as, (a - 1) * (n - 1)),
        "F_b": f(ss_b, b - 1, ss_bs, (b - 1) * (n - 1)),
        "F_ab": f(ss_ab, (a - 1) * (b - 1), ss_abs, (a - 1) * (b - 1) * (n - 1)),
        "eta_a": ss_a / (ss_a + ss_as),
        "eta_b": ss_b / (ss_b + ss_bs),
        "eta_ab": ss_ab / (ss_ab + ss_abs),
    }


def oracle_gg_epsilon(scores, projector):
    """Greenhouse-Geisser epsilon via the double-centered covariance form
    epsilon = tr(P S P)^2 / (rank * sum of squared entries of P S P)."""
    x = np.asarray(scores, dtype=float)
    n, k = x.shape
    means = x.mean(axis=0)
    s = np.zeros((k, k))
    for i in range(k):
        for j in range(k):
            s[i, j] = float(((x[:, i] - means[i]) * (x[:, j] - means[j])).sum()) / (n - 1)
    star = projector @ s @ projector
    rank = round(np.trace(projector))
    tr = float(np.trace(star))
    denom = rank * float((star * star).sum())
    return 1.0 if denom == 0 else min(tr * tr / denom, 1.0)


def centering_projector(k):
    return np.eye(k) - np.ones((k, k)) / k


def oracle_studentized_range_sf(q, k, df, n_nodes=320):
    """Upper tail of the studentized range by direct double quadrature:
    P(Q > q) = 1 - int f_s(s) k int phi(z) [Phi(z) - Phi(z - q s)]^(k-1) dz ds
    with s = sqrt(chi2_df / df), evaluated on nested Gauss-Legendre grids."""
    zs, wz = np.polynomial.legendre.leggauss(n_nodes)
    za, zb = -8.5, 8.5
    z = 0.5 * (zb - za) * zs + 0.5 * (zb + za)
    wz = wz * 0.5 * (zb - za)
    ss, ws = np.polynomial.legendre.leggauss(n_nodes)
    sa, sb = 1e-10, 6.0
    s = 0.5 * (sb - sa) * ss + 0.5 * (sb + sa)
    ws = ws * 0.5 * (sb - sa)
    log_c = (df / 2.0) * math.log(df) - math.lgamma(df / 2.0) \
        - (df / 2.0 - 1.0) * math.log(2.0)
    density = np.exp(log_c + (df - 1.0) * np.log(s) - df * s * s / 2.0)
    diff = sps.norm.cdf(z)[None, :] - sps.norm.cdf(z[None, :] - q * s[:, None])
    inner = k * np.sum(wz[None, :] * sps.norm.pdf(z)[None, :]
                       * np.maximum(diff, 0.0) ** (k - 1), axis=1)
    return 1.0 - float(np.sum(ws * density * inner))


def oracle_f_sf(f_value, df1, df2):
    """Upper tail of the F distribution by quadrature of its density."""
    log_c = (math.lgamma((df1 + df2) / 2.0) - math.lgamma(df1 / 2.0)
             - math.lgamma(df2 / 2.0) + (df1 / 2.0) * math.log(df1 / df2))

    def density(x):
        return math.exp(log_c + (df1 / 2.0 - 1.0) * math.log(x)
                        - ((df1 + df2) / 2.0) * math.log1p(df1 * x / df2))

    val, _ = integrate.quad(density, f_value, np.inf, epsabs=1e-13, epsrel=1e-12,
                            limit=300)
    return val


def oracle_ranks(values):
    """Average ranks with ties, computed with plain loops."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for idx in order[i:j + 1]:
            ranks[idx] = avg
        i = j + 1
    return ranks


def oracle_kw_h(groups):
    pooled = [v for g in groups for v in g]
    n = len(pooled)
    ranks = oracle_ranks(pooled)
    h = 0.0
    start = 0
    for g in groups:
        rsum = sum(ranks[start:start + len(g)])
        h += rsum * rsum / len(g)
        start += len(g)
    h = 12.0 / (n * (n + 1)) * h - 3.0 * (n + 1)
    counts = {}
    for v in pooled:
        counts[v] = counts.get(v, 0) + 1
    ties = sum(c ** 3 - c for c in counts.values())
    denom = 1.0 - ties / (n ** 3 - n)
    return 0.0 if denom <= 0 else h / denom


def oracle_kw_exact_p(groups):
    """Exact permutation p over all N! orderings of the pooled values."""
    pooled = [v for g in groups for v in g]
    sizes = [len(g) for g in groups]
    h_obs = oracle_kw_h(groups)
    ge = total = 0
    for perm in itertools.permutations(pooled):
        split, start = [], 0
        for size in sizes:
            split.append(list(perm[start:start + size]))
            start += size
        total += 1
        if oracle_kw_h(split) >= h_obs - 1e-12:
            ge += 1
    return ge / total


# ---------------------------------------------------------------------------
# Descriptives
# ---------------------------------------------------------------------------

class TestThroughput:
    def test_unit_time(self):
        assert throughput([1.0, 1.0, 1.0], 3.26) == pytest.approx(3.26, abs=1e-12)

    def test_mixed_times(self):
        assert throughput([1.0, 2.0], 3.26) == pytest.approx(3.26 / 1.5, abs=1e-12)

    def test_one_bit_one_second(self):
        assert throughput([1.0], 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_homogeneous_in_time_scale(self):
        rng = np.random.default_rng(0)
        times = rng.uniform(0.5, 3.0, size=40)
        for c in (0.5, 2.0, 7.5):
            assert throughput(times * c, 3.26) == pytest.approx(
                throughput(times, 3.26) / c, rel=1e-12)

    def test_rejects_empty_and_nonpositive(self):
        with pytest.raises(ValueError):
            throughput([], 3.26)
        with pytest.raises(ValueError):
            throughput([1.0, -0.5], 3.26)


def _selection_log(clicks, selections):
    log = TrialLog(1, "portal", 9.0, 1, "selection")
    log.clicks = clicks
    log.scored_selections = selections
    return log


class TestErrorRate:
    def test_perfect(self):
        assert error_rate([_selection_log(16, 16)]) == 1.0

    def test_with_misses(self):
        assert error_rate([_selection_log(24, 16)]) == 1.5

    def test_paper_scale_value(self):
        # 19 clicks over 16 selections is the reported portal-at-9m ballpark
        assert error_rate([_selection_log(19, 16)]) == pytest.approx(1.1875)

    def test_pools_logs(self):
        assert error_rate([_selection_log(16, 16), _selection_log(32, 16)]) == 1.5

    def test_zero_successes(self):
        with pytest.raises(ValueError):
            error_rate([_selection_log(5, 0)])


class TestMeanCi:
    def test_known_interval(self):
        mean, half = mean_ci95([1.0, 2.0, 3.0, 4.0])
        sd = np.std([1, 2, 3, 4], ddof=1)
        expected = sps.t.ppf(0.975, 3) * sd / 2.0
        assert mean == pytest.approx(2.5)
        assert half == pytest.approx(expected, rel=1e-12)

    def test_summary_invariants(self):
        with pytest.raises(ValueError):
            ConditionSummary("portal", 3.0, 0, 1.0, 0.1)
        with pytest.raises(ValueError):
            ConditionSummary("portal", 3.0, 5, 1.0, -0.1)


# ---------------------------------------------------------------------------
# RM ANOVA
# ---------------------------------------------------------------------------

def fixture_matrices():
    rng = np.random.default_rng(101)
    fixtures = []
    # 1: small integers, 2x2 (textbook-style)
    fixtures.append(np.array([
        [[11.0, 8.0], [8.0, 10.0]],
        [[7.0, 9.0], [10.0, 4.0]],
        [[2.0, 5.0], [4.0, 10.0]],
        [[11.0, 2.0], [6.0, 10.0]],
    ]))
    # 2: 3x3 with technique/distance-like structure plus noise
    base = np.array([[1.0, 1.1, 1.2], [0.9, 1.3, 1.9], [1.2, 1.5, 1.7]])
    subj = rng.normal(0, 0.2, size=8)
    fx = base[None, :, :] + subj[:, None, None] + rng.normal(0, 0.15, size=(8, 3, 3))
    fixtures.append(fx)
    # 3: 2x4 with heterogeneous covariance (sphericity clearly violated)
    raw = rng.normal(0, 1.0, size=(6, 2, 4))
    raw[:, :, 0] *= 3.0
    raw[:, 1, :] += np.linspace(0, 2, 4)[None, :]
    fixtures.append(raw)
    return fixtures


class TestRmAnova:
    def test_all_cells_equal_gives_zero_f(self):
        data = np.full((5, 3, 3), 2.5)
        result = rm_anova_two_way(data)
        for row in result.rows:
            assert row.f_value == 0.0
            assert row.p_value == 1.0

    @pytest.mark.parametrize("idx", [0, 1, 2])
    def test_matches_brute_force(self, idx):
        data = fixture_matrices()[idx]
        result = rm_anova_two_way(data)
        oracle = brute_force_rm_anova(data.tolist())
        a_row, b_row, ab_row = result.rows
        assert a_row.f_value == pytest.approx(oracle["F_a"], rel=1e-8)
        assert b_row.f_value == pytest.approx(oracle["F_b"], rel=1e-8)
        assert ab_row.f_value == pytest.approx(oracle["F_ab"], rel=1e-8)
        assert a_row.partial_eta_sq == pytest.approx(oracle["eta_a"], rel=1e-8)
        assert b_row.partial_eta_sq == pytest.approx(oracle["eta_b"], rel=1e-8)
        assert ab_row.partial_eta_sq == pytest.approx(oracle["eta_ab"], rel=1e-8)

    @pytest.mark.parametrize("idx", [0, 1, 2])
    def test_gg_epsilon_matches_double_centering_oracle(self, idx):
        data = fixture_matrices()[idx]
        n, a, b = data.shape
        result = rm_anova_two_way(data)
        eps_a = oracle_gg_epsilon(data.mean(axis=2), centering_projector(a))
        eps_b = oracle_gg_epsilon(data.mean(axis=1), centering_projector(b))
        eps_ab = oracle_gg_epsilon(
            data.reshape(n, a * b),
            np.kron(centering_projector(a), centering_projector(b)))
        assert result.rows[0].gg_epsilon == pytest.approx(eps_a, rel=1e-8)
        assert result.rows[1].gg_epsilon == pytest.approx(eps_b, rel=1e-8)
        assert result.rows[2].gg_epsilon == pytest.approx(eps_ab, rel=1e-8)

    def test_two_level_factor_epsilon_exactly_one(self):
        data = fixture_matrices()[0]     # 2x2
        result = rm_anova_two_way(data)
        for row in result.rows:
            assert row.gg_epsilon == pytest.approx(1.0, abs=1e-12)

    def test_epsilon_bounds(self):
        data = fixture_matrices()[2]     # 2x4, sphericity violated
        result = rm_anova_two_way(data)
        b_row = result.rows[1]
        k = 4
        assert 1.0 / (k - 1) < b_row.gg_epsilon <= 1.0
        assert b_row.gg_epsilon < 1.0   # the violation is detectable

    def test_p_matches_f_quadrature(self):
        data = fixture_matrices()[1]
        result = rm_anova_two_way(data)
        for row in result.rows:
            expected = oracle_f_sf(row.f_value, row.gg_epsilon * row.df_effect,
                                   row.gg_epsilon * row.df_error)
            assert row.p_value == pytest.approx(expected, rel=1e-8)

    def test_f_invariant_under_shift_and_scale(self):
        data = fixture_matrices()[1]
        base = rm_anova_two_way(data)
        shifted = rm_anova_two_way(data + 11.3)
        scaled = rm_anova_two_way(data * 4.2)
        for r0, r1, r2 in zip(base.rows, shifted.rows, scaled.rows):
            assert r1.f_value == pytest.approx(r0.f_value, rel=1e-9)
            assert r2.f_value == pytest.approx(r0.f_value, rel=1e-9)

    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            rm_anova_two_way(np.ones((2, 3, 3)))      # too few participants
        with pytest.raises(ValueError):
            rm_anova_two_way(np.ones((5, 1, 3)))      # one-level factor
        bad = np.ones((5, 3, 3))
        bad[0, 0, 0] = np.nan
        with pytest.raises(ValueError):
            rm_anova_two_way(bad)                     # incomplete cells


# ---------------------------------------------------------------------------
# Tukey HSD
# ---------------------------------------------------------------------------

class TestTukey:
    def test_identical_means(self):
        out = tukey_hsd([2.0, 2.0], ms_error=0.5, df_error=10, n_per_cell=6)
        assert out[0].p_value == pytest.approx(1.0, abs=1e-12)

    def test_separated_means_tiny_error(self):
        out = tukey_hsd([0.0, 10.0], ms_error=1e-8, df_error=10, n_per_cell=6)
        assert out[0].p_value < 1e-3

    @pytest.mark.parametrize("means,ms,df,n", [
        ((1.0, 1.4, 2.0), 0.25, 20, 5),
        ((0.0, 0.6, 1.1, 1.3), 0.8, 12, 4),
        ((5.0, 5.5, 6.6), 1.2, 64, 17),
    ])
    def test_matches_quadrature_oracle(self, means, ms, df, n):
        out = tukey_hsd(means, ms_error=ms, df_error=df, n_per_cell=n)
        for cmp_ in out:
            expected = oracle_studentized_range_sf(cmp_.q_statistic, len(means), df)
            assert cmp_.p_value == pytest.approx(expected, rel=1e-8)

    def test_rejects_invalid_df(self):
        with pytest.raises(ValueError):
            tukey_hsd([1.0, 2.0], 0.5, 0, 5)


# ---------------------------------------------------------------------------
# Kruskal-Wallis and Dunn
# ---------------------------------------------------------------------------

class TestKruskalWallis:
    def test_identical_groups(self):
        h, p = kruskal_wallis([[2, 2, 2], [2, 2, 2]])
        assert h == 0.0
        assert p == 1.0

    def test_hand_computed_h(self):
        # {1,1,1} vs {3,3,3}: tie-corrected H = 5.0 (rank sums 6 and 15,
        # raw H = 27/7, correction 1 - 48/210)
        h, _ = kruskal_wallis([[1, 1, 1], [3, 3, 3]])
        assert h == pytest.approx(5.0, abs=1e-12)

    @pytest.mark.parametrize("groups", [
        ([1.0, 2.0, 2.0], [2.0, 3.0, 3.0]),
        ([1, 1, 2], [2, 3], [3, 3, 1]),
        ([5.0, 7.0], [6.0, 6.0, 7.0], [8.0, 5.0]),
    ])
    def test_exact_p_matches_permutation_oracle(self, groups):
        h, p = kruskal_wallis(groups)
        assert h == pytest.approx(oracle_kw_h(groups), abs=1e-12)
        assert p == pytest.approx(oracle_kw_exact_p(groups), abs=1e-6)

    def test_large_samples_use_chi_square(self):
        rng = np.random.default_rng(3)
        groups = [rng.normal(loc, 1.0, size=12).tolist() for loc in (0.0, 0.4, 1.0)]
        h, p = kruskal_wallis(groups)
        ref_h, ref_p = sps.kruskal(*groups)
        assert h == pytest.approx(ref_h, rel=1e-10)
        assert p == pytest.approx(ref_p, rel=1e-10)

    def test_rejects_empty_group(self):
        with pytest.raises(ValueError):
            kruskal_wallis([[1, 2], []])


class TestDunn:
    def test_identical_groups_p_one(self):
        out = dunn_posthoc([[1, 2, 3], [1, 2, 3]])
        assert out[0].p_value == pytest.approx(1.0, abs=0.05)

    def test_hand_computed_z(self):
        groups = [[1.0, 2.0], [3.0, 4.0]]
        # ranks 1,2 vs 3,4: mean ranks 1.5 and 3.5; no ties
        n = 4
        var = n * (n + 1) / 12.0
        se = math.sqrt(var * (0.5 + 0.5))
        z = (1.5 - 3.5) / se
        out = dunn_posthoc(groups)
        assert out[0].z_statistic == pytest.approx(z, rel=1e-12)
        assert out[0].p_value == pytest.approx(2 * sps.norm.sf(abs(z)), rel=1e-12)

    def test_tie_correction_applied(self):
        groups = [[1, 1, 2], [2, 2, 3]]
        pooled = [1, 1, 2, 2, 2, 3]
        ties = sum(c ** 3 - c for c in (2, 3, 1))
        n = 6
        var = n * (n + 1) / 12.0 - ties / (12.0 * (n - 1))
        ranks = oracle_ranks(pooled)
        z = (np.mean(ranks[:3]) - np.mean(ranks[3:])) / math.sqrt(var * (2 / 3))
        out = dunn_posthoc(groups)
        assert out[0].z_statistic == pytest.approx(z, rel=1e-12)


# ---------------------------------------------------------------------------
# VRSQ
# ---------------------------------------------------------------------------

class TestVrsq:
    def test_all_zero(self):
        assert vrsq_score([0] * 9) == 0.0

    def test_all_three(self):
        assert vrsq_score([3] * 9) == 100.0

    def test_oculomotor_only_fixture(self):
        assert vrsq_score([1, 1, 1, 1, 0, 0, 0, 0, 0]) == pytest.approx(50.0 / 3.0,
                                                                        abs=1e-12)

    def test_monotone_in_every_item(self):
        base = [1, 0, 2, 1, 0, 3, 1, 0, 2]
        score = vrsq_score(base)
        for i in range(9):
            if base[i] < 3:
                bumped = list(base)
                bumped[i] += 1
                assert vrsq_score(bumped) > score

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            vrsq_score([0, 0, 0, 0, 0, 0, 0, 0, 4])
        with pytest.raises(ValueError):
            vrsq_score([0] * 8)
