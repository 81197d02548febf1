import numpy as np
import pytest

from robust_doe.arrays import catalog_lookup
from robust_doe.core import QualityCharacteristic, Threshold
from robust_doe.effects import (
    anova,
    confirmation_compare,
    level_means,
    range_analysis,
)
from robust_doe.errors import InvalidArgument, NoErrorTerm, UnknownFactor

import oracles

L9 = catalog_lookup("L9")
ABC = {"A": 1, "B": 2, "C": 3}
GRD = [0.3420, 0.4035, 0.3790, 0.4215, 0.4750, 0.4225, 0.4705, 0.4845, 1.0]


def test_level_means_from_grades():
    means = level_means(GRD, L9, ABC)
    assert means["A"] == pytest.approx([0.3748, 0.4397, 0.6517], abs=1e-3)
    assert means["B"] == pytest.approx([0.4113, 0.4543, 0.6005], abs=1e-3)
    assert means["C"] == pytest.approx([0.6057, 0.4283, 0.4322], abs=1e-3)


def test_level_means_subset_and_unknown():
    assert list(level_means(GRD, L9, ABC, ["B"])) == ["B"]
    with pytest.raises(UnknownFactor):
        level_means(GRD, L9, ABC, ["Z"])
    with pytest.raises(InvalidArgument):
        level_means(GRD[:8], L9, ABC)


def test_range_analysis():
    table = range_analysis(GRD, L9, ABC)
    assert table.factors["A"].range == pytest.approx(0.2769, abs=1e-3)
    assert table.factors["B"].range == pytest.approx(0.1892, abs=1e-3)
    assert table.factor_order == ("A", "B", "C")
    assert table.optimal_levels == {"A": 3, "B": 3, "C": 1}
    assert table.ties == {}


def test_range_ties_pick_lowest_level():
    y = np.zeros(9)
    table = range_analysis(y, L9, ABC)
    assert table.optimal_levels == {"A": 1, "B": 1, "C": 1}
    assert table.ties["A"] == (1, 2, 3)


def test_anova_against_exact_oracle():
    table = anova(GRD, L9, ABC)
    total, (ssa, ssb, ssc) = oracles.anova_ss(GRD, [L9.column(c).tolist() for c in (1, 2, 3)])
    assert table.ss_total == pytest.approx(float(total), rel=1e-12)
    assert table.rows["A"].ss == pytest.approx(float(ssa), rel=1e-12)
    assert table.rows["B"].ss == pytest.approx(float(ssb), rel=1e-12)
    assert table.rows["C"].ss == pytest.approx(float(ssc), rel=1e-12)
    assert table.df_error == 2 and table.df_total == 8
    assert all(r.df == 2 for r in table.rows.values())
    assert table.ss_total == pytest.approx(sum(r.ss for r in table.rows.values()) + table.ss_error, rel=1e-9)
    assert sum(r.contribution for r in table.rows.values()) <= 1
    assert table.contribution_order == ("A", "C", "B")


def test_anova_no_error_term():
    assign = {"A": 1, "B": 2, "C": 3, "D": 4}
    table = anova(GRD, L9, assign)
    assert table.no_error_term and table.df_error == 0
    assert all(r.f is None and r.p is None and r.significant is None for r in table.rows.values())
    with pytest.raises(NoErrorTerm):
        anova(GRD, L9, assign, strict=True)


def test_anova_perfect_fit_gives_infinite_f():
    a = L9.column(1).astype(float)
    table = anova(a, L9, ABC)
    assert table.ss_error == 0
    assert table.rows["A"].f == float("inf") and table.rows["A"].p == 0
    assert table.rows["B"].f == 0


def _obj(kind="smaller-better", threshold=None, target=None):
    return QualityCharacteristic("d", kind, target=target, threshold=threshold, unit="mm")


def test_confirmation_deflection():
    e = confirmation_compare([742, 692, 741, 664], [356, 364, 353, 373], _obj(threshold=Threshold("<", 1000, "mm")))
    assert e.before.mean == pytest.approx(709.75)
    assert e.after.mean == pytest.approx(361.5)
    assert e.before.std_population == pytest.approx(33.259, abs=1e-3)
    assert e.after.std_population == pytest.approx(7.762, abs=1e-3)
    assert e.mean_reduction_pct == pytest.approx(49.07, abs=0.01)
    assert e.std_reduction_pct == pytest.approx(76.66, abs=0.01)
    assert e.snr_improvement_pct == pytest.approx(10.3, abs=0.05)
    assert e.before_pass and e.after_pass
    assert e.before_worst == 742 and e.after_worst == 373


def test_confirmation_identical_and_failing():
    e = confirmation_compare([5, 5, 6], [5, 5, 6], _obj())
    assert e.mean_reduction_pct == 0 and e.std_reduction_pct == 0 and e.snr_improvement_pct == 0
    assert e.threshold is None and e.before_pass is None
    e = confirmation_compare([900, 1200], [500, 600], _obj(threshold=Threshold("<", 1000, "mm")))
    assert e.before_pass is False and e.after_pass is True and e.before_worst == 1200


def test_confirmation_zero_std_baseline():
    e = confirmation_compare([2, 2], [1, 3], _obj())
    assert e.std_reduction_pct is None
