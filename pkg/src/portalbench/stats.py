"""Dependent-variable computation and the study's statistical tests:
throughput, error rate, means with 95% CIs, two-way repeated-measures ANOVA
with Greenhouse-Geisser correction and partial eta squared, Tukey HSD,
Kruskal-Wallis with Dunn post-hoc, and VRSQ scoring.

All functions are pure over immutable samples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import stats as sps

from .tasks import TrialLog


# ---------------------------------------------------------------------------
# Descriptives and pointing metrics
# ---------------------------------------------------------------------------

def mean_ci95(values: Sequence[float]) -> tuple[float, float]:
    """Sample mean and 95% CI half-width (t critical values)."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("empty sample")
    if x.size == 1:
        return float(x[0]), 0.0
    half = float(sps.t.ppf(0.975, x.size - 1) * x.std(ddof=1) / math.sqrt(x.size))
    return float(x.mean()), half


@dataclass(frozen=True)
class ConditionSummary:
    technique: str
    distance_m: float
    n: int
    mean: float
    ci95: float
    throughput_bps: float | None = None
    error_rate: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("summary needs at least one observation")
        if self.ci95 < 0.0:
            raise ValueError("negative CI half-width")


def throughput(trial_times: Sequence[float], id_bits: float) -> float:
    """Index of difficulty over the mean selection time, bits/s."""
    times = np.asarray(trial_times, dtype=float)
    if times.size == 0:
        raise ValueError("empty selection-time sample")
    if np.any(times <= 0.0):
        raise ValueError("selection times must be positive")
    return float(id_bits / times.mean())


def error_rate(logs: Iterable[TrialLog]) -> float:
    """Clicks per successful scored selection across the given trial logs."""
    clicks = selections = 0
    for log in logs:
        clicks += log.clicks
        selections += log.scored_selections
    if selections == 0:
        raise ValueError("no successful selections in the logs")
    return clicks / selections


# ---------------------------------------------------------------------------
# Two-way repeated-measures ANOVA
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EffectRow:
    effect: str
    df_effect: float       # uncorrected numerator df
    df_error: float        # uncorrected denominator df
    f_value: float
    p_value: float         # Greenhouse-Geisser corrected
    gg_epsilon: float
    partial_eta_sq: float

    def __post_init__(self):
        if self.f_value < 0.0 or not (0.0 < self.gg_epsilon <= 1.0 + 1e-12):
            raise ValueError("invalid ANOVA effect row")
        if not 0.0 <= self.partial_eta_sq <= 1.0:
            raise ValueError("partial eta squared out of range")


@dataclass(frozen=True)
class AnovaResult:
    factor_a: str
    factor_b: str
    rows: tuple[EffectRow, ...]

    def row(self, effect: str) -> EffectRow:
        for r in self.rows:
            if r.effect == effect:
                return r
        raise KeyError(effect)


def _helmert_contrasts(k: int) -> np.ndarray:
    """(k-1) x k orthonormal contrast rows, each orthogonal to the constant."""
    c = np.zeros((k - 1, k))
    for i in range(k - 1):
        c[i, : i + 1] = 1.0
        c[i, i + 1] = -(i + 1.0)
        c[i] /= np.linalg.norm(c[i])
    return c


def _gg_epsilon(scores: np.ndarray, contrasts: np.ndarray) -> float:
    """Box/Greenhouse-Geisser epsilon from the covariance of the orthonormal
    contrast scores: (tr E)^2 / ((k-1) tr E^2)."""
    k1 = contrasts.shape[0]
    if k1 == 0:
        return 1.0
    cov = np.cov(scores, rowvar=False, ddof=1)
    e = contrasts @ np.atleast_2d(cov) @ contrasts.T
    tr = float(np.trace(e))
    tr_sq = float(np.trace(e @ e))
    if tr_sq <= 0.0:
        return 1.0  # no contrast variance: sphericity vacuous
    return min(tr * tr / (k1 * tr_sq), 1.0)


def rm_anova_two_way(data: np.ndarray, factor_a: str = "technique",
                     factor_b: str = "distance") -> AnovaResult:
    """Two-way fully within-subjects ANOVA on a (participants, a, b) array of
    cell means.

    Each effect is tested against its own participant-interaction error term;
    degrees of freedom are Greenhouse-Geisser corrected for the p-value
    (epsilon from the covariance of orthonormal within-factor contrasts,
    exactly 1 for two-level factors), and effect size is partial eta squared.
    """
    y = np.asarray(data, dtype=float)
    if y.ndim != 3:
        raise ValueError("expected a (participants, a, b) array of cell means")
    n, a, b = y.shape
    if n < 3:
        raise ValueError("need at least 3 participants")
    if a < 2 or b < 2:
        raise ValueError("each factor needs at least 2 levels")
    if not np.all(np.isfinite(y)):
        raise ValueError("missing or non-finite cells; the design must be complete")

    grand = y.mean()
    subj = y.mean(axis=(1, 2))
    mean_a = y.mean(axis=(0, 2))
    mean_b = y.mean(axis=(0, 1))
    mean_ab = y.mean(axis=0)
    mean_sa = y.mean(axis=2)
    mean_sb = y.mean(axis=1)

    ss_a = n * b * float(((mean_a - grand) ** 2).sum())
    ss_b = n * a * float(((mean_b - grand) ** 2).sum())
    ss_ab = n * float(((mean_ab - mean_a[:, None] - mean_b[None, :] + grand) ** 2).sum())
    ss_as = b * float(((mean_sa - mean_a[None, :] - subj[:, None] + grand) ** 2).sum())
    ss_bs = a * float(((mean_sb - mean_b[None, :] - subj[:, None] + grand) ** 2).sum())
    resid = (y - mean_sa[:, :, None] - mean_sb[:, None, :] - mean_ab[None, :, :]
             + mean_a[None, :, None] + mean_b[None, None, :] + subj[:, None, None] - grand)
    ss_abs = float((resid ** 2).sum())

    ca = _helmert_contrasts(a)
    cb = _helmert_contrasts(b)
    eps_a = _gg_epsilon(y.mean(axis=2), ca)
    eps_b = _gg_epsilon(y.mean(axis=1), cb)
    eps_ab = _gg_epsilon(y.reshape(n, a * b), np.kron(ca, cb))

    def build(effect, ss_eff, df_eff, ss_err, df_err, eps):
        if ss_eff <= 1e-300 and ss_err <= 1e-300:
            return EffectRow(effect, df_eff, df_err, 0.0, 1.0, eps, 0.0)
        ms_eff = ss_eff / df_eff
        ms_err = ss_err / df_err
        f = ms_eff / ms_err if ms_err > 0.0 else math.inf
        p = float(sps.f.sf(f, eps * df_eff, eps * df_err)) if math.isfinite(f) else 0.0
        eta = ss_eff / (ss_eff + ss_err) if (ss_eff + ss_err) > 0.0 else 0.0
        return EffectRow(effect, df_eff, df_err, f, p, eps, eta)

    rows = (
        build(factor_a, ss_a, a - 1, ss_as, (a - 1) * (n - 1), eps_a),
        build(factor_b, ss_b, b - 1, ss_bs, (b - 1) * (n - 1), eps_b),
        build(f"{factor_a}:{factor_b}", ss_ab, (a - 1) * (b - 1),
              ss_abs, (a - 1) * (b - 1) * (n - 1), eps_ab),
    )
    return AnovaResult(factor_a=factor_a, factor_b=factor_b, rows=rows)


# ---------------------------------------------------------------------------
# Tukey HSD
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairwiseComparison:
    level_a: int
    level_b: int
    difference: float
    q_statistic: float
    p_value: float


def tukey_hsd(cell_means: Sequence[float], ms_error: float, df_error: float,
              n_per_cell: int) -> tuple[PairwiseComparison, ...]:
    """Studentized-range pairwise comparisons from a completed ANOVA.

    q = |mean_i - mean_j| / sqrt(ms_error / n); the p-value is the upper tail
    of the studentized range distribution with k groups and df_error degrees
    of freedom.
    """
    if df_error < 1:
        raise ValueError("df_error must be at least 1")
    if ms_error < 0.0 or n_per_cell < 1:
        raise ValueError("invalid Tukey inputs")
    means = np.asarray(cell_means, dtype=float)
    k = means.size
    if k < 2:
        raise ValueError("need at least two groups")
    se = math.sqrt(ms_error / n_per_cell)
    out = []
    for i, j in itertools.combinations(range(k), 2):
        diff = float(means[i] - means[j])
        q = abs(diff) / se if se > 0.0 else (0.0 if diff == 0.0 else math.inf)
        p = float(sps.studentized_range.sf(q, k, df_error)) if math.isfinite(q) else 0.0
        out.append(PairwiseComparison(i, j, diff, q, p))
    return tuple(out)


# ---------------------------------------------------------------------------
# Kruskal-Wallis and Dunn post-hoc
# ---------------------------------------------------------------------------

def _rank_sums_h(ranks_by_group: Sequence[np.ndarray], n_total: int,
                 tie_term: float) -> float:
    h = 12.0 / (n_total * (n_total + 1.0)) * sum(
        float(r.sum()) ** 2 / r.size for r in ranks_by_group) - 3.0 * (n_total + 1.0)
    correction = 1.0 - tie_term / (n_total ** 3 - n_total)
    if correction <= 0.0:
        return 0.0  # every observation tied
    return h / correction


def _tie_term(pooled: np.ndarray) -> float:
    _, counts = np.unique(pooled, return_counts=True)
    return float(np.sum(counts.astype(float) ** 3 - counts))


def kruskal_wallis(groups: Sequence[Sequence[float]],
                   exact: bool | None = None) -> tuple[float, float]:
    """Tie-corrected Kruskal-Wallis H and its p-value.

    For small pooled samples (N <= 8 by default) the p-value is computed
    exactly by enumerating every assignment of the pooled ranks to the group
    sizes; larger samples use the chi-square approximation.
    """
    arrays = [np.asarray(g, dtype=float) for g in groups]
    if len(arrays) < 2 or any(a.size == 0 for a in arrays):
        raise ValueError("need at least two non-empty groups")
    pooled = np.concatenate(arrays)
    n_total = pooled.size
    ranks = sps.rankdata(pooled)
    sizes = [a.size for a in arrays]
    bounds = np.cumsum([0] + sizes)
    rank_groups = [ranks[bounds[i]:bounds[i + 1]] for i in range(len(sizes))]
    tie = _tie_term(pooled)
    h = _rank_sums_h(rank_groups, n_total, tie)
    if tie >= n_total ** 3 - n_total:       # all values identical
        return 0.0, 1.0
    if exact is None:
        exact = n_total <= 8
    if not exact:
        return h, float(sps.chi2.sf(h, len(arrays) - 1))
    # exact permutation p: enumerate index partitions of the pooled ranks
    ge = total = 0
    threshold = h - 1e-12
    for assignment in _partitions(tuple(range(n_total)), tuple(sizes)):
        perm_groups = [ranks[list(idx)] for idx in assignment]
        total += 1
        if _rank_sums_h(perm_groups, n_total, tie) >= threshold:
            ge += 1
    return h, ge / total


def _partitions(indices: tuple[int, ...], sizes: tuple[int, ...]):
    """All ways to split *indices* into ordered groups of the given sizes."""
    if len(sizes) == 1:
        yield (indices,)
        return
    first, rest = sizes[0], sizes[1:]
    for chosen in itertools.combinations(indices, first):
        chosen_set = set(chosen)
        remaining = tuple(i for i in indices if i not in chosen_set)
        for tail in _partitions(remaining, rest):
            yield (chosen,) + tail


@dataclass(frozen=True)
class DunnComparison:
    group_a: int
    group_b: int
    z_statistic: float
    p_value: float


def dunn_posthoc(groups: Sequence[Sequence[float]]) -> tuple[DunnComparison, ...]:
    """Dunn's rank-based pairwise z tests with the Kruskal-Wallis tie
    correction; two-sided unadjusted p-values."""
    arrays = [np.asarray(g, dtype=float) for g in groups]
    if len(arrays) < 2 or any(a.size == 0 for a in arrays):
        raise ValueError("need at least two non-empty groups")
    pooled = np.concatenate(arrays)
    n = pooled.size
    ranks = sps.rankdata(pooled)
    sizes = [a.size for a in arrays]
    bounds = np.cumsum([0] + sizes)
    mean_ranks = [float(ranks[bounds[i]:bounds[i + 1]].mean()) for i in range(len(sizes))]
    tie = _tie_term(pooled)
    variance_base = n * (n + 1.0) / 12.0 - tie / (12.0 * (n - 1.0))
    out = []
    for i, j in itertools.combinations(range(len(arrays)), 2):
        se = math.sqrt(variance_base * (1.0 / sizes[i] + 1.0 / sizes[j]))
        if se == 0.0:
            z, p = 0.0, 1.0
        else:
            z = (mean_ranks[i] - mean_ranks[j]) / se
            p = float(2.0 * sps.norm.sf(abs(z)))
        out.append(DunnComparison(i, j, z, p))
    return tuple(out)


# ---------------------------------------------------------------------------
# VRSQ scoring
# ---------------------------------------------------------------------------

def vrsq_score(responses: Sequence[int]) -> float:
    """Sickness questionnaire score in [0, 100] from nine 0..3 ordinal items:
    the oculomotor block (items 1-4, max 12) and disorientation block
    (items 5-9, max 15) are each scaled to 100 and averaged."""
    r = list(responses)
    if len(r) != 9:
        raise ValueError("expected 9 items")
    for i, s in enumerate(r, start=1):
        if s not in (0, 1, 2, 3):
            raise ValueError(f"item {i} out of range: {s!r}")
    oculomotor = sum(r[:4]) / 12.0 * 100.0
    disorientation = sum(r[4:]) / 15.0 * 100.0
    return (oculomotor + disorientation) / 2.0


# ---------------------------------------------------------------------------
# Report row serialization
# ---------------------------------------------------------------------------

ANOVA_CSV_HEADER = ("factor", "dof1", "dof2", "F", "p", "eta_p2")


def anova_csv_rows(result: AnovaResult) -> list[tuple]:
    return [(r.effect, r.df_effect, r.df_error, r.f_value, r.p_value, r.partial_eta_sq)
            for r in result.rows]
