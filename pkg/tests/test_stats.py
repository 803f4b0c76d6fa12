import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from chessrec import stats as cs
from chessrec.stats import DegenerateDataError

# ---------------------------------------------------------------------------
# descriptive


def test_descriptive_odd_median():
    assert cs.descriptive([1, 2, 3])["median"] == 2


def test_descriptive_even_median():
    assert cs.descriptive([1, 2, 3, 4])["median"] == 2.5


def test_descriptive_summary_fields():
    d = cs.descriptive([4.0, 1.0, 3.0, 2.0])
    assert d["n"] == 4 and d["min"] == 1.0 and d["max"] == 4.0
    assert d["mean"] == 2.5
    assert d["sd"] == pytest.approx(math.sqrt(5.0 / 3.0))


def test_descriptive_empty_errors():
    with pytest.raises(ValueError):
        cs.descriptive([])


# ---------------------------------------------------------------------------
# Shapiro-Wilk

# Reference W/p computed with scipy.stats.shapiro (pre-build oracle step).
SAMPLE10 = [2.4, 3.1, 1.8, 5.6, 4.4, 2.2, 3.3, 4.1, 2.9, 3.8]
SAMPLE10_W = 0.9700802435350934
SAMPLE10_P = 0.8915882766307648
SAMPLE20 = [0.42, -1.31, 0.07, 2.85, -0.55, 1.11, -2.03, 0.66, 0.29, -0.88,
            1.74, -0.16, 0.98, -1.42, 0.51, 2.10, -0.73, 0.05, 1.33, -0.94]
SAMPLE20_W = 0.9888436805201944
SAMPLE20_P = 0.9963566736455197


def test_shapiro_reference_sample_10():
    result = cs.shapiro_wilk(SAMPLE10)
    assert abs(result.statistic - SAMPLE10_W) < 1e-4
    assert abs(result.p_value - SAMPLE10_P) < 1e-3


def test_shapiro_reference_sample_20():
    result = cs.shapiro_wilk(SAMPLE20)
    assert abs(result.statistic - SAMPLE20_W) < 1e-4
    assert abs(result.p_value - SAMPLE20_P) < 1e-3


def test_shapiro_null_acceptance_rate():
    # under normal data p should rarely fall below 0.01
    accepted = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        if cs.shapiro_wilk(rng.normal(size=50).tolist()).p_value > 0.01:
            accepted += 1
    assert accepted >= 95


def test_shapiro_rejects_exponential():
    rng = np.random.default_rng(7)
    result = cs.shapiro_wilk(rng.exponential(size=500).tolist())
    assert result.p_value < 1e-3


def test_shapiro_sample_size_limits():
    with pytest.raises(ValueError):
        cs.shapiro_wilk([1.0, 2.0])
    with pytest.raises(ValueError):
        cs.shapiro_wilk([0.0] * 5001)


def test_shapiro_zero_variance():
    with pytest.raises(DegenerateDataError):
        cs.shapiro_wilk([3.0, 3.0, 3.0, 3.0])


def test_shapiro_statistic_in_unit_interval():
    rng = np.random.default_rng(3)
    for n in (3, 5, 12, 100):
        w = cs.shapiro_wilk(rng.uniform(size=n).tolist()).statistic
        assert 0.0 < w <= 1.0


# ---------------------------------------------------------------------------
# Kruskal-Wallis and eta squared


def test_kruskal_two_group_hand_value():
    # ranks 1..6; R1 = 6, R2 = 15
    result = cs.kruskal_wallis([[1, 2, 3], [4, 5, 6]])
    assert result.statistic == pytest.approx(3.857142857142854, abs=1e-3)
    assert result.df == 1


def test_kruskal_identical_groups_is_zero():
    result = cs.kruskal_wallis([[1, 2, 3], [1, 2, 3]])
    assert result.statistic == pytest.approx(0.0, abs=1e-12)


def test_kruskal_all_values_identical_degenerates():
    result = cs.kruskal_wallis([[5.0, 5.0], [5.0, 5.0, 5.0]])
    assert result.statistic == 0.0
    assert result.p_value == 1.0


def test_kruskal_detects_shifted_groups():
    rng = np.random.default_rng(11)
    groups = [(rng.normal(loc=mu, size=30)).tolist() for mu in (0.0, 1.0, 2.0)]
    assert cs.kruskal_wallis(groups).p_value < 0.01


def test_kruskal_with_ties_matches_reference():
    # scipy.stats.kruskal oracle (pre-build): H = 7.35933806146572
    result = cs.kruskal_wallis([[1.0, 2.0, 3.0, 4.0], [3.0, 4.0, 5.0, 6.0, 7.0], [6.0, 7.0, 8.0]])
    assert result.statistic == pytest.approx(7.35933806146572, abs=1e-10)
    assert result.p_value == pytest.approx(0.025231324246346554, abs=1e-10)


def test_kruskal_needs_two_nonempty_groups():
    with pytest.raises(ValueError):
        cs.kruskal_wallis([[1.0, 2.0]])
    with pytest.raises(ValueError):
        cs.kruskal_wallis([[1.0], []])


def test_eta_squared_reported_values():
    assert cs.eta_squared(11871.68, 9, 18000) == pytest.approx(0.659, abs=1e-3)
    assert cs.eta_squared(12058.8, 9, 18000) == pytest.approx(0.670, abs=1e-3)


def test_eta_squared_null_expectation_is_zero():
    assert cs.eta_squared(8.0, 9, 100) == 0.0


def test_eta_squared_domain():
    with pytest.raises(ValueError):
        cs.eta_squared(1.0, 3, 3)


# ---------------------------------------------------------------------------
# Dunn post-hoc

DUNN_A = [2.9, 3.0, 2.5, 2.6, 3.2]
DUNN_B = [3.8, 2.7, 4.0, 2.4]
DUNN_C = [2.8, 3.4, 3.7, 2.2, 2.0]
# reference matrix from an independent mean-rank/normal-tail computation
DUNN_REF = [
    [1.0, 0.5212453081148148, 0.8205958397554408],
    [0.5212453081148148, 1.0, 0.3924205244765818],
    [0.8205958397554408, 0.3924205244765818, 1.0],
]


def test_dunn_reference_matrix():
    result = cs.dunn_posthoc([DUNN_A, DUNN_B, DUNN_C], adjust="none")
    for i in range(3):
        for j in range(3):
            assert abs(result.p_values[i][j] - DUNN_REF[i][j]) < 1e-6


def test_dunn_two_group_z_squared_equals_h():
    g1, g2 = [1.0, 2.5, 3.1, 7.0], [4.2, 5.5, 6.1, 8.8, 9.9]
    posthoc = cs.dunn_posthoc([g1, g2], adjust="none")
    h = cs.kruskal_wallis([g1, g2]).statistic
    assert abs(posthoc.z_values[0][1] ** 2 - h) < 1e-9


def test_dunn_identical_groups_all_one():
    groups = [[1.0, 2.0, 3.0]] * 3
    for method in ("holm", "bonferroni", "none"):
        result = cs.dunn_posthoc(groups, adjust=method)
        assert all(p == 1.0 for row in result.p_values for p in row)


def test_dunn_symmetry_and_diagonal():
    result = cs.dunn_posthoc([DUNN_A, DUNN_B, DUNN_C])
    for i in range(3):
        assert result.p_values[i][i] == 1.0
        for j in range(3):
            assert result.p_values[i][j] == result.p_values[j][i]


def test_dunn_adjust_ordering():
    raw = cs.dunn_posthoc([DUNN_A, DUNN_B, DUNN_C], adjust="none")
    holm = cs.dunn_posthoc([DUNN_A, DUNN_B, DUNN_C], adjust="holm")
    bonf = cs.dunn_posthoc([DUNN_A, DUNN_B, DUNN_C], adjust="bonferroni")
    for i in range(3):
        for j in range(3):
            if i != j:
                assert raw.p_values[i][j] <= holm.p_values[i][j] <= bonf.p_values[i][j]


def test_dunn_degenerate_data():
    with pytest.raises(DegenerateDataError):
        cs.dunn_posthoc([[1.0, 1.0], [1.0, 1.0]])


def test_dunn_labels():
    result = cs.dunn_posthoc([DUNN_A, DUNN_B], labels=("x", "y"))
    assert result.p("x", "y") == result.p_values[0][1]


# ---------------------------------------------------------------------------
# two-proportion Z


def test_two_proportion_reported_values():
    r1 = cs.two_proportion_z(1572, 2000, 1589, 2000)
    assert r1.statistic == pytest.approx(-0.66, abs=0.01)
    assert r1.p_value > 0.25
    r2 = cs.two_proportion_z(1589, 2000, 1937, 2000)
    assert r2.statistic == pytest.approx(-17.02, abs=0.02)
    assert r2.p_value < 0.001


def test_two_proportion_equal_is_zero():
    result = cs.two_proportion_z(50, 100, 100, 200)
    assert result.statistic == 0.0
    assert result.p_value == 1.0


def test_two_proportion_antisymmetry():
    a = cs.two_proportion_z(40, 100, 55, 120)
    b = cs.two_proportion_z(55, 120, 40, 100)
    assert a.statistic == pytest.approx(-b.statistic, abs=1e-12)
    assert a.p_value == pytest.approx(b.p_value, abs=1e-12)


def test_two_proportion_degenerate():
    with pytest.raises(DegenerateDataError):
        cs.two_proportion_z(0, 10, 0, 20)
    with pytest.raises(DegenerateDataError):
        cs.two_proportion_z(10, 10, 20, 20)


def test_two_proportion_domain():
    with pytest.raises(ValueError):
        cs.two_proportion_z(5, 0, 1, 2)
    with pytest.raises(ValueError):
        cs.two_proportion_z(11, 10, 1, 2)


# ---------------------------------------------------------------------------
# scale invariance of the rank tests (power-of-two factors scale exactly)

_groups_strategy = hst.lists(
    hst.lists(hst.floats(min_value=-1e6, max_value=1e6,
                         allow_nan=False, allow_infinity=False),
              min_size=2, max_size=12),
    min_size=2, max_size=4,
)


@settings(max_examples=40, deadline=None)
@given(groups=_groups_strategy, exponent=hst.integers(min_value=-3, max_value=6))
def test_rank_tests_scale_invariant(groups, exponent):
    factor = 2.0 ** exponent
    scaled = [[v * factor for v in g] for g in groups]
    base = cs.kruskal_wallis(groups)
    same = cs.kruskal_wallis(scaled)
    assert base.statistic == same.statistic
    assert base.p_value == same.p_value
    try:
        d1 = cs.dunn_posthoc(groups, adjust="none")
        d2 = cs.dunn_posthoc(scaled, adjust="none")
    except DegenerateDataError:
        return
    assert d1.z_values == d2.z_values
    assert d1.p_values == d2.p_values
