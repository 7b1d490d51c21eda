"""The statistical toolbox on a synthetic within-subjects dataset: RM-ANOVA
with the Greenhouse-Geisser correction, Tukey HSD, Kruskal-Wallis with Dunn
post-hoc, and VRSQ scoring.

Run: python demos/04_statistics.py
"""

import numpy as np

from portalbench.stats import (
    dunn_posthoc,
    kruskal_wallis,
    mean_ci95,
    rm_anova_two_way,
    throughput,
    tukey_hsd,
    vrsq_score,
)

rng = np.random.default_rng(8)

# 12 participants x 3 techniques x 3 distances, with a technique effect that
# grows with distance for the last two techniques (an interaction).
base = np.array([[1.2, 1.2, 1.25],      # distance-invariant technique
                 [0.9, 1.1, 1.8],       # degrades with distance
                 [1.3, 1.5, 1.6]])
data = base[None, :, :] + rng.normal(0, 0.12, size=(12, 1, 1)) \
    + rng.normal(0, 0.08, size=(12, 3, 3))

result = rm_anova_two_way(data, factor_a="technique", factor_b="distance")
print("two-way repeated-measures ANOVA")
for row in result.rows:
    print(f"  {row.effect:<20} F({row.df_effect:g}, {row.df_error:g}) = "
          f"{row.f_value:7.2f}  p = {row.p_value:.4g}  "
          f"gg_eps = {row.gg_epsilon:.3f}  eta_p2 = {row.partial_eta_sq:.3f}")

# Pairwise technique comparison against the technique error term.
tech_cells = data.mean(axis=2)
subj = tech_cells.mean(axis=1, keepdims=True)
resid = tech_cells - tech_cells.mean(axis=0) - subj + tech_cells.mean()
ms_err = float((resid ** 2).sum()) / (2 * 11)
print("\nTukey HSD on technique marginals")
for cmp_ in tukey_hsd(tech_cells.mean(axis=0), ms_err, 22, 12):
    print(f"  technique {cmp_.level_a} vs {cmp_.level_b}: diff = "
          f"{cmp_.difference:+.3f} s, q = {cmp_.q_statistic:.2f}, p = {cmp_.p_value:.4g}")

print("\nKruskal-Wallis on 7-point ratings (small sample -> exact permutation p)")
ratings = ([2, 1, 2], [4, 5, 4], [5, 6])
h, p = kruskal_wallis(ratings)
print(f"  H = {h:.3f}, p = {p:.4f}")
for cmp_ in dunn_posthoc(ratings):
    print(f"  dunn {cmp_.group_a} vs {cmp_.group_b}: z = {cmp_.z_statistic:+.2f}, "
          f"p = {cmp_.p_value:.3f}")

print("\nmisc descriptives")
mean, ci = mean_ci95([1.1, 1.3, 0.9, 1.2, 1.0])
print(f"  mean selection time {mean:.3f} +/- {ci:.3f} s (95% CI)")
print(f"  throughput at ID 3.26: {throughput([1.1, 1.3, 0.9, 1.2, 1.0], 3.26):.2f} bit/s")
print(f"  sickness score for (1,1,1,1,0,0,0,0,0): {vrsq_score([1,1,1,1,0,0,0,0,0]):.2f}")
