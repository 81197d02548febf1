"""Factor-effect analysis of a response over an inner orthogonal array.

Range analysis (per-level means and their spread), one-way-per-column ANOVA
with F tests, and the before/after comparison of a confirmation experiment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .arrays import OrthogonalArray
from .core import QualityCharacteristic, SummaryStats, summarize
from .errors import ColumnOverflow, InvalidArgument, NoErrorTerm, UnknownFactor
from .fdist import f_sf
from .snr import snr

SIGNIFICANCE_LEVEL = 0.05


def _response(response, inner: OrthogonalArray) -> np.ndarray:
    y = np.asarray(response, dtype=float).ravel()
    if y.size != inner.runs:
        raise InvalidArgument(f"response has {y.size} entries, {inner.name} has {inner.runs} runs")
    if not np.all(np.isfinite(y)):
        raise InvalidArgument("response must be finite")
    return y


def level_means(
    response: Sequence[float],
    inner: OrthogonalArray,
    assignment: Mapping[str, int],
    factors: Optional[Sequence[str]] = None,
) -> dict[str, np.ndarray]:
    """Mean response at each level of each assigned factor.

    ``assignment`` maps factor name to its 1-based column.  Restrict the
    output with ``factors``; naming an unassigned factor raises
    ``UnknownFactor``.
    """
    y = _response(response, inner)
    names = list(assignment) if factors is None else list(factors)
    out = {}
    for name in names:
        if name not in assignment:
            raise UnknownFactor(f"factor {name!r} is not assigned to a column of {inner.name}")
        col = inner.column(assignment[name])
        nlev = inner.levels_per_column[assignment[name] - 1]
        out[name] = np.array([y[col == lev].mean() for lev in range(1, nlev + 1)])
    return out


@dataclass(frozen=True)
class FactorRange:
    level_means: tuple[float, ...]
    range: float
    optimal_level: int
    tied_levels: tuple[int, ...] = ()


@dataclass(frozen=True)
class RangeTable:
    factors: dict[str, FactorRange]
    factor_order: tuple[str, ...]

    @property
    def optimal_levels(self) -> dict[str, int]:
        return {name: fr.optimal_level for name, fr in self.factors.items()}

    @property
    def ties(self) -> dict[str, tuple[int, ...]]:
        return {name: fr.tied_levels for name, fr in self.factors.items() if fr.tied_levels}


def range_analysis(response, inner: OrthogonalArray, assignment: Mapping[str, int]) -> RangeTable:
    """Per-factor range of level means; the best level is the largest mean.

    The response is treated as larger-the-better.  Levels whose mean equals
    the maximum to 1e-12 relative are reported as tied and the lowest of them
    is chosen.
    """
    means = level_means(response, inner, assignment)
    factors = {}
    for name, lm in means.items():
        top = lm.max()
        tied = [i + 1 for i, v in enumerate(lm) if np.isclose(v, top, rtol=1e-12, atol=0.0)]
        factors[name] = FactorRange(
            level_means=tuple(float(v) for v in lm),
            range=float(top - lm.min()),
            optimal_level=tied[0],
            tied_levels=tuple(tied) if len(tied) > 1 else (),
        )
    names = list(factors)
    order = sorted(names, key=lambda n: (-factors[n].range, names.index(n)))
    return RangeTable(factors, tuple(order))


@dataclass(frozen=True)
class AnovaRow:
    ss: float
    df: int
    ms: float
    f: Optional[float]
    p: Optional[float]
    contribution: float

    @property
    def significant(self) -> Optional[bool]:
        return None if self.p is None else self.p < SIGNIFICANCE_LEVEL


@dataclass(frozen=True)
class AnovaTable:
    rows: dict[str, AnovaRow]
    ss_error: float
    df_error: int
    ms_error: Optional[float]
    ss_total: float
    df_total: int
    grand_mean: float
    no_error_term: bool = False

    @property
    def contribution_order(self) -> tuple[str, ...]:
        names = list(self.rows)
        return tuple(sorted(names, key=lambda n: (-self.rows[n].ss, names.index(n))))


def anova(response, inner: OrthogonalArray, assignment: Mapping[str, int], strict: bool = False) -> AnovaTable:
    """Sums of squares, F ratios and p-values for each assigned factor.

    The error term pools whatever variation the assigned columns leave
    unexplained, so at least one free degree of freedom is needed for F
    and p.  Without it the table is returned with ``f``/``p`` set to None
    and ``no_error_term`` True, or ``NoErrorTerm`` is raised if ``strict``.
    """
    y = _response(response, inner)
    mu = float(y.mean())
    ss_total = float(np.sum((y - mu) ** 2))
    df_total = inner.runs - 1

    parts = {}
    for name, col in assignment.items():
        levels = inner.column(col)
        nlev = inner.levels_per_column[col - 1]
        ss = 0.0
        for lev in range(1, nlev + 1):
            sel = y[levels == lev]
            ss += sel.size * (sel.mean() - mu) ** 2
        parts[name] = (max(float(ss), 0.0), nlev - 1)

    df_error = df_total - sum(df for _, df in parts.values())
    if df_error < 0:
        raise ColumnOverflow(f"assigned factors use more than the {df_total} degrees of freedom of {inner.name}")
    ss_error = max(ss_total - sum(ss for ss, _ in parts.values()), 0.0)
    no_error = df_error == 0
    if no_error and strict:
        raise NoErrorTerm(f"no residual degrees of freedom left in {inner.name}")
    ms_error = None if no_error else ss_error / df_error

    rows = {}
    for name, (ss, df) in parts.items():
        ms = ss / df
        f = p = None
        if ms_error is not None:
            if ms_error > 0:
                f = ms / ms_error
            else:
                f = float("inf") if ms > 0 else 0.0
            p = f_sf(f, df, df_error)
        share = ss / ss_total if ss_total > 0 else 0.0
        rows[name] = AnovaRow(ss=ss, df=df, ms=ms, f=f, p=p, contribution=share)
    return AnovaTable(
        rows=rows,
        ss_error=ss_error,
        df_error=df_error,
        ms_error=ms_error,
        ss_total=ss_total,
        df_total=df_total,
        grand_mean=mu,
        no_error_term=no_error,
    )


@dataclass(frozen=True)
class ConfirmationEntry:
    objective: str
    before: SummaryStats
    after: SummaryStats
    before_snr: float
    after_snr: float
    mean_reduction_pct: Optional[float]
    std_reduction_pct: Optional[float]
    snr_improvement_pct: Optional[float]
    threshold: Optional[str] = None
    before_pass: Optional[bool] = None
    after_pass: Optional[bool] = None
    before_worst: Optional[float] = None
    after_worst: Optional[float] = None


@dataclass(frozen=True)
class ConfirmationReport:
    entries: list[ConfirmationEntry] = field(default_factory=list)

    def entry(self, objective: str) -> ConfirmationEntry:
        for e in self.entries:
            if e.objective == objective:
                return e
        raise KeyError(objective)


def _pct(numerator: float, denominator: float) -> Optional[float]:
    if denominator == 0:
        return 0.0 if numerator == 0 else None
    return 100.0 * numerator / denominator


def _worst(values: np.ndarray, threshold) -> float:
    return float(values.max() if threshold.comparator in ("<=", "<") else values.min())


def confirmation_compare(before, after, objective: QualityCharacteristic) -> ConfirmationEntry:
    """Compare baseline and optimized responses of one objective.

    Mean and std changes are reductions, ``(before - after) / before``; the
    SNR change is an improvement, ``(after - before) / |before|``.  All are
    in percent.  Threshold verdicts require every response to comply.
    """
    b = np.asarray(before, dtype=float).ravel()
    a = np.asarray(after, dtype=float).ravel()
    sb, sa = summarize(b), summarize(a)
    snr_b = snr(b, objective.kind, objective.target)
    snr_a = snr(a, objective.kind, objective.target)
    th = objective.threshold
    return ConfirmationEntry(
        objective=objective.name,
        before=sb,
        after=sa,
        before_snr=snr_b,
        after_snr=snr_a,
        mean_reduction_pct=_pct(sb.mean - sa.mean, sb.mean),
        std_reduction_pct=_pct(sb.std_population - sa.std_population, sb.std_population),
        snr_improvement_pct=_pct(snr_a - snr_b, abs(snr_b)),
        threshold=None if th is None else str(th),
        before_pass=None if th is None else bool(all(th.satisfied(v) for v in b)),
        after_pass=None if th is None else bool(all(th.satisfied(v) for v in a)),
        before_worst=None if th is None else _worst(b, th),
        after_worst=None if th is None else _worst(a, th),
    )
