"""Statistical toolkit for the algorithm comparison: descriptive summaries,
Shapiro-Wilk normality, Kruskal-Wallis with eta-squared effect size, Dunn's
post-hoc test, and the two-proportion Z-test.

P-values come from the in-repo special functions (``chessrec.special``);
nothing here imports a statistics library. Rank-based tests use midranks
for ties and the standard tie corrections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .special import chi2_sf, normal_ppf, normal_sf

__all__ = [
    "TestResult",
    "PosthocMatrix",
    "descriptive",
    "shapiro_wilk",
    "kruskal_wallis",
    "eta_squared",
    "dunn_posthoc",
    "two_proportion_z",
]


class DegenerateDataError(ValueError):
    """The sample admits no meaningful test statistic."""


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    effect_size: Optional[float] = None
    df: Optional[int] = None
    group_sizes: tuple = ()

    def __post_init__(self) -> None:
        if not math.isfinite(self.statistic):
            raise ValueError("test statistic must be finite")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError("p-value must lie in [0, 1]")

    def to_dict(self) -> dict:
        out = {"statistic": self.statistic, "p_value": self.p_value}
        if self.effect_size is not None:
            out["effect_size"] = self.effect_size
        if self.df is not None:
            out["df"] = self.df
        if self.group_sizes:
            out["group_sizes"] = list(self.group_sizes)
        return out


@dataclass(frozen=True)
class PosthocMatrix:
    labels: tuple
    p_values: tuple  # row-major square matrix, diagonal fixed at 1.0
    adjustment: str
    z_values: tuple = field(default=(), repr=False)

    def p(self, a, b) -> float:
        i, j = self.labels.index(a), self.labels.index(b)
        return self.p_values[i][j]

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "p_values": [list(row) for row in self.p_values],
            "adjustment": self.adjustment,
        }


def descriptive(sample: Sequence[float]) -> dict:
    """n, mean, median, sd (sample, n-1 denominator), min, max."""
    n = len(sample)
    if n == 0:
        raise ValueError("empty sample")
    ordered = sorted(sample)
    mean = math.fsum(ordered) / n
    if n % 2:
        median = ordered[n // 2]
    else:
        median = (ordered[n // 2 - 1] + ordered[n // 2]) / 2.0
    sd = math.sqrt(math.fsum((x - mean) ** 2 for x in ordered) / (n - 1)) if n > 1 else 0.0
    return {
        "n": n,
        "mean": mean,
        "median": median,
        "sd": sd,
        "min": ordered[0],
        "max": ordered[-1],
    }


def _midranks(values: Sequence[float]):
    """Ranks with midrank ties; returns (ranks aligned to input, tie sizes)."""
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    ties = []
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        if j > i:
            ties.append(j - i + 1)
        i = j + 1
    return ranks, ties


# --- Shapiro-Wilk, W statistic and p-value per Royston's AS R94 update ---

_SW_C1 = (0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056)
_SW_C2 = (0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633)


def _polyval(coeffs, x: float) -> float:
    result = 0.0
    for c in reversed(coeffs):
        result = result * x + c
    return result


def shapiro_wilk(sample: Sequence[float]) -> TestResult:
    """Shapiro-Wilk normality test for 3 <= n <= 5000."""
    n = len(sample)
    if n < 3 or n > 5000:
        raise ValueError("Shapiro-Wilk requires 3 <= n <= 5000")
    x = sorted(sample)
    if x[0] == x[-1]:
        raise DegenerateDataError("zero-variance sample")

    m = [normal_ppf((i - 0.375) / (n + 0.25)) for i in range(1, n + 1)]
    ssq_m = math.fsum(v * v for v in m)
    rsn = 1.0 / math.sqrt(n)
    a = [0.0] * n
    a_n = _polyval(_SW_C1, rsn) + m[-1] / math.sqrt(ssq_m)
    if n > 5:
        a_n1 = _polyval(_SW_C2, rsn) + m[-2] / math.sqrt(ssq_m)
        phi = (ssq_m - 2.0 * m[-1] ** 2 - 2.0 * m[-2] ** 2) / (
            1.0 - 2.0 * a_n ** 2 - 2.0 * a_n1 ** 2
        )
        a[-1], a[-2] = a_n, a_n1
        a[0], a[1] = -a_n, -a_n1
        lo, hi = 2, n - 2
    else:
        phi = (ssq_m - 2.0 * m[-1] ** 2) / (1.0 - 2.0 * a_n ** 2)
        a[-1] = a_n
        a[0] = -a_n
        if n == 3:
            a[0], a[-1] = -math.sqrt(0.5), math.sqrt(0.5)
            phi = 1.0
        lo, hi = 1, n - 1
    sqrt_phi = math.sqrt(phi)
    for i in range(lo, hi):
        a[i] = m[i] / sqrt_phi

    mean = math.fsum(x) / n
    ssq = math.fsum((v - mean) ** 2 for v in x)
    numerator = math.fsum(ai * xi for ai, xi in zip(a, x)) ** 2
    w = min(numerator / ssq, 1.0)

    if n == 3:
        p = (math.asin(math.sqrt(w)) - math.asin(math.sqrt(0.75))) * 6.0 / math.pi
        p = min(max(p, 0.0), 1.0)
        return TestResult(statistic=w, p_value=p, group_sizes=(n,))

    if n <= 11:
        gamma = 0.459 * n - 2.273
        w_t = -math.log(gamma - math.log1p(-w))
        mu = _polyval((0.5440, -0.39978, 0.025054, -0.0006714), float(n))
        sigma = math.exp(_polyval((1.3822, -0.77857, 0.062767, -0.0020322), float(n)))
    else:
        ln_n = math.log(n)
        w_t = math.log1p(-w)
        mu = _polyval((-1.5861, -0.31082, -0.083751, 0.0038915), ln_n)
        sigma = math.exp(_polyval((-0.4803, -0.082676, 0.0030302), ln_n))
    z = (w_t - mu) / sigma
    return TestResult(statistic=w, p_value=normal_sf(z), group_sizes=(n,))


def _tie_sum(groups) -> tuple:
    pooled = [v for g in groups for v in g]
    ranks, ties = _midranks(pooled)
    t = math.fsum(s ** 3 - s for s in ties)
    return pooled, ranks, t


def kruskal_wallis(groups: Sequence[Sequence[float]]) -> TestResult:
    """Kruskal-Wallis H with tie correction; p from chi-square (k-1 df)."""
    k = len(groups)
    if k < 2:
        raise ValueError("need at least two groups")
    sizes = tuple(len(g) for g in groups)
    if any(s == 0 for s in sizes):
        raise ValueError("groups must be non-empty")
    pooled, ranks, t = _tie_sum(groups)
    n = len(pooled)
    correction = 1.0 - t / (n ** 3 - n) if n > 1 else 0.0
    if correction == 0.0:
        # every pooled value identical: no evidence of any difference
        return TestResult(statistic=0.0, p_value=1.0, effect_size=None, df=k - 1,
                          group_sizes=sizes)
    idx = 0
    h = 0.0
    for size in sizes:
        r = math.fsum(ranks[idx:idx + size])
        h += r * r / size
        idx += size
    h = (12.0 / (n * (n + 1))) * h - 3.0 * (n + 1)
    h /= correction
    effect = eta_squared(h, k, n) if n > k else None
    return TestResult(statistic=h, p_value=chi2_sf(h, k - 1), effect_size=effect,
                      df=k - 1, group_sizes=sizes)


def eta_squared(h: float, k: int, n: int) -> float:
    """Kruskal-Wallis effect size: (H - k + 1) / (n - k)."""
    if k < 2:
        raise ValueError("need at least two groups")
    if n <= k:
        raise ValueError("total count must exceed the group count")
    return (h - k + 1.0) / (n - k)


def _adjust(p_values, method: str):
    m = len(p_values)
    if method == "none":
        return list(p_values)
    if method == "bonferroni":
        return [min(1.0, p * m) for p in p_values]
    if method == "holm":
        order = sorted(range(m), key=p_values.__getitem__)
        adjusted = [0.0] * m
        running = 0.0
        for rank, idx in enumerate(order):
            running = max(running, (m - rank) * p_values[idx])
            adjusted[idx] = min(1.0, running)
        return adjusted
    raise ValueError(f"unknown adjustment {method!r}")


def dunn_posthoc(
    groups: Sequence[Sequence[float]],
    labels: Optional[Sequence[str]] = None,
    adjust: str = "holm",
) -> PosthocMatrix:
    """Dunn's pairwise rank test after Kruskal-Wallis.

    z_ij = (mean rank_i - mean rank_j) /
           sqrt((N(N+1)/12 - tie term) * (1/n_i + 1/n_j))
    with the tie term sum(t^3 - t) / (12 (N - 1)); two-sided p-values are
    adjusted with the requested method.
    """
    k = len(groups)
    if k < 2:
        raise ValueError("need at least two groups")
    if labels is None:
        labels = tuple(f"group{i}" for i in range(k))
    labels = tuple(labels)
    if len(labels) != k:
        raise ValueError("labels must match the number of groups")
    sizes = [len(g) for g in groups]
    if any(s == 0 for s in sizes):
        raise ValueError("groups must be non-empty")
    pooled, ranks, t = _tie_sum(groups)
    n = len(pooled)
    if t >= n ** 3 - n:
        raise DegenerateDataError("all values identical across groups")
    mean_ranks = []
    idx = 0
    for size in sizes:
        mean_ranks.append(math.fsum(ranks[idx:idx + size]) / size)
        idx += size
    variance_base = n * (n + 1) / 12.0 - t / (12.0 * (n - 1))

    z = [[0.0] * k for _ in range(k)]
    raw = [[1.0] * k for _ in range(k)]
    flat = []
    pairs = []
    for i in range(k):
        for j in range(i + 1, k):
            se = math.sqrt(variance_base * (1.0 / sizes[i] + 1.0 / sizes[j]))
            zij = (mean_ranks[i] - mean_ranks[j]) / se
            pij = 2.0 * normal_sf(abs(zij))
            z[i][j], z[j][i] = zij, -zij
            raw[i][j] = raw[j][i] = min(pij, 1.0)
            flat.append(raw[i][j])
            pairs.append((i, j))
    adjusted = _adjust(flat, adjust)
    p = [[1.0] * k for _ in range(k)]
    for (i, j), value in zip(pairs, adjusted):
        p[i][j] = p[j][i] = value
    return PosthocMatrix(
        labels=labels,
        p_values=tuple(tuple(row) for row in p),
        adjustment=adjust,
        z_values=tuple(tuple(row) for row in z),
    )


def two_proportion_z(successes_1: int, n_1: int, successes_2: int, n_2: int) -> TestResult:
    """Two-sided pooled two-proportion Z-test."""
    for s, n in ((successes_1, n_1), (successes_2, n_2)):
        if n <= 0:
            raise ValueError("sample sizes must be positive")
        if not 0 <= s <= n:
            raise ValueError("successes must lie in [0, n]")
    pooled = (successes_1 + successes_2) / (n_1 + n_2)
    if pooled in (0.0, 1.0):
        raise DegenerateDataError("pooled proportion is degenerate (0 or 1)")
    p1, p2 = successes_1 / n_1, successes_2 / n_2
    se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / n_1 + 1.0 / n_2))
    z = (p1 - p2) / se
    return TestResult(
        statistic=z,
        p_value=min(1.0, 2.0 * normal_sf(abs(z))),
        group_sizes=(n_1, n_2),
    )
