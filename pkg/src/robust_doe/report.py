"""Analysis report: plain-data containers, JSON round-trip and text tables."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime, timezone
from typing import Optional

from . import __version__


@dataclass
class ObjectiveSeries:
    name: str
    kind: str
    unit: str
    target: Optional[float]
    means: list[float]
    snr: list[float]


@dataclass
class GreySection:
    source: str
    objectives: list[str]
    normalized: list[list[float]]
    rho: float
    weights: Optional[list[float]]
    grc: list[list[float]]
    grd: list[float]
    rank: list[int]
    order: list[int]
    ties: list[list[int]]


@dataclass
class RangeRow:
    factor: str
    level_means: list[float]
    range: float
    optimal_level: int
    tied_levels: list[int]


@dataclass
class AnovaRowOut:
    factor: str
    ss: float
    df: int
    ms: float
    f: Optional[float]
    p: Optional[float]
    contribution: float
    significant: Optional[bool]


@dataclass
class AnovaSection:
    rows: list[AnovaRowOut]
    ss_error: float
    df_error: int
    ms_error: Optional[float]
    ss_total: float
    df_total: int
    grand_mean: float
    no_error_term: bool
    significance_level: float


@dataclass
class OptimalSetting:
    factor: str
    level: int
    value: float
    unit: str
    significant: Optional[bool]


@dataclass
class CriterionVerdict:
    objective: str
    threshold: str
    passing_runs: list[int]
    failing_runs: list[int]


@dataclass
class AnalysisReport:
    inner_array: str
    outer_array: str
    design_levels: list[list[int]]
    factors: list[str]
    response_source: str
    response: list[float]
    objectives: list[ObjectiveSeries]
    grey: GreySection
    range_table: list[RangeRow]
    factor_order: list[str]
    anova: AnovaSection
    optimal: list[OptimalSetting]
    criteria: list[CriterionVerdict]
    notes: list[str] = field(default_factory=list)

    @property
    def optimal_combination(self) -> str:
        return " ".join(f"{o.factor}{o.level}" for o in self.optimal)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "AnalysisReport":
        nested = {
            "objectives": [ObjectiveSeries(**o) for o in doc["objectives"]],
            "grey": GreySection(**doc["grey"]),
            "range_table": [RangeRow(**r) for r in doc["range_table"]],
            "anova": AnovaSection(
                **{**doc["anova"], "rows": [AnovaRowOut(**r) for r in doc["anova"]["rows"]]}
            ),
            "optimal": [OptimalSetting(**o) for o in doc["optimal"]],
            "criteria": [CriterionVerdict(**c) for c in doc["criteria"]],
        }
        plain = {f.name: doc[f.name] for f in fields(cls) if f.name not in nested}
        return cls(**plain, **nested)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(json.loads(text))


def _table(headers, rows, aligns=None) -> list[str]:
    cells = [[str(h) for h in headers]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    aligns = aligns or ["<"] + [">"] * (len(headers) - 1)
    out = []
    for n, r in enumerate(cells):
        out.append("  ".join(f"{c:{a}{w}}" for c, a, w in zip(r, aligns, widths)).rstrip())
        if n == 0:
            out.append("  ".join("-" * w for w in widths))
    return out


def _verdict(ok) -> str:
    return "pass" if ok else "FAIL"


def _opt(x, spec):
    return "-" if x is None else format(x, spec)


def banner() -> str:
    stamp = datetime.now(timezone.utc).strftime("%Y-%m-%d %H:%M:%S UTC")
    return f"robust-doe {__version__}  generated {stamp}"


def render_text(report: AnalysisReport, with_banner: bool = True) -> str:
    lines = []
    if with_banner:
        lines += [banner(), ""]
    lines.append(f"Design: inner {report.inner_array} x outer {report.outer_array}")
    lines.append("")

    lines.append("Signal-to-noise ratios (dB)")
    headers = ["Run"] + report.factors
    for o in report.objectives:
        headers += [f"{o.name} mean", f"{o.name} SNR"]
    rows = []
    for i, levels in enumerate(report.design_levels):
        row = [i + 1] + levels
        for o in report.objectives:
            row += [f"{o.means[i]:.2f}", f"{o.snr[i]:.2f}"]
        rows.append(row)
    lines += _table(headers, rows) + [""]

    g = report.grey
    lines.append(f"Grey relational analysis (rho = {g.rho:g})")
    headers = ["Run"] + [f"norm {n}" for n in g.objectives] + [f"GRC {n}" for n in g.objectives] + ["GRD", "Order"]
    rows = []
    for i in range(len(g.grd)):
        rows.append(
            [i + 1]
            + [f"{x:.3f}" for x in g.normalized[i]]
            + [f"{x:.3f}" for x in g.grc[i]]
            + [f"{g.grd[i]:.4f}", g.rank[i]]
        )
    lines += _table(headers, rows) + [""]

    nlev = max(len(r.level_means) for r in report.range_table)
    lines.append(f"Range analysis of {report.response_source}")
    headers = ["Factor"] + [f"L{k}" for k in range(1, nlev + 1)] + ["Range", "Best"]
    rows = []
    for r in report.range_table:
        means = [f"{m:.4f}" for m in r.level_means] + [""] * (nlev - len(r.level_means))
        best = f"{r.optimal_level}" + (" (tie)" if r.tied_levels else "")
        rows.append([r.factor] + means + [f"{r.range:.4f}", best])
    lines += _table(headers, rows)
    lines.append("Influence order: " + " > ".join(report.factor_order))
    lines.append("")

    a = report.anova
    lines.append("ANOVA")
    rows = []
    for r in a.rows:
        rows.append(
            [r.factor, f"{r.ss:.4f}", r.df, f"{r.ms:.4f}", _opt(r.f, ".3f"), _opt(r.p, ".3f"), f"{100 * r.contribution:.1f}%"]
        )
    rows.append(["Error", f"{a.ss_error:.4f}", a.df_error, _opt(a.ms_error, ".4f"), "", "", ""])
    rows.append(["Total", f"{a.ss_total:.4f}", a.df_total, "", "", "", ""])
    lines += _table(["Source", "SS", "df", "MS", "F", "p", "Share"], rows)
    if a.no_error_term:
        lines.append("No residual degrees of freedom: F and p not available.")
    lines.append("")

    lines.append("Optimal combination: " + report.optimal_combination)
    for o in report.optimal:
        note = ""
        if o.significant is False:
            note = f"  (not significant at {a.significance_level:g})"
        lines.append(f"  {o.factor} = level {o.level} -> {o.value:g} {o.unit}{note}")
    lines.append("")

    if report.criteria:
        lines.append("Criteria")
        for c in report.criteria:
            fails = ", ".join(map(str, c.failing_runs)) or "none"
            lines.append(f"  {c.objective} {c.threshold}: {len(c.passing_runs)} runs pass, failing runs: {fails}")
        lines.append("")
    for note in report.notes:
        lines.append(f"Note: {note}")
    return "\n".join(lines).rstrip() + "\n"


def confirmation_to_dict(report) -> dict:
    return {"entries": [asdict(e) for e in report.entries]}


def render_confirmation_text(report, with_banner: bool = True) -> str:
    lines = [banner(), ""] if with_banner else []
    lines.append("Confirmation: before vs after optimization")
    rows = []
    for e in report.entries:
        rows.append([e.objective, "mean", f"{e.before.mean:.3f}", f"{e.after.mean:.3f}", f"{_opt(e.mean_reduction_pct, '.1f')}% lower"])
        rows.append(["", "std", f"{e.before.std_population:.3f}", f"{e.after.std_population:.3f}", f"{_opt(e.std_reduction_pct, '.1f')}% lower"])
        rows.append(["", "SNR", f"{e.before_snr:.2f}", f"{e.after_snr:.2f}", f"{_opt(e.snr_improvement_pct, '.1f')}% higher"])
        if e.threshold is not None:
            rows.append(["", e.threshold, _verdict(e.before_pass), _verdict(e.after_pass), ""])
    lines += _table(["Objective", "", "Before", "After", "Change"], rows, ["<", "<", ">", ">", ">"])
    return "\n".join(lines).rstrip() + "\n"
