"""End-to-end study: design -> responses -> SNR -> GRA -> effects -> report."""

from __future__ import annotations

from typing import Mapping, Optional

import numpy as np

from .arrays import CrossedDesign, catalog_lookup, cross, resolve_run
from .core import DesignSpec, ResponseMatrix
from .effects import SIGNIFICANCE_LEVEL, ConfirmationReport, anova, confirmation_compare, range_analysis
from .errors import InvalidArgument, ShapeError
from .gra import SNR, grey_analysis, normalize
from .report import (
    AnalysisReport,
    AnovaRowOut,
    AnovaSection,
    CriterionVerdict,
    GreySection,
    ObjectiveSeries,
    OptimalSetting,
    RangeRow,
)
from .snr import snr_series
from .surrogate import SurrogateParams, crash_response


def build_design(spec: DesignSpec) -> CrossedDesign:
    return cross(catalog_lookup(spec.inner_array), catalog_lookup(spec.outer_array), spec)


def simulate(spec: DesignSpec, params: SurrogateParams, inputs: Mapping[str, str], outputs: Mapping[str, str]):
    """Surrogate responses for every cell, keyed by objective name.

    ``inputs`` maps each surrogate input to the factor that feeds it and
    ``outputs`` maps surrogate outputs to objective names.
    """
    design = build_design(spec)
    objectives = {o.name for o in spec.objectives}
    for out, obj in outputs.items():
        if obj not in objectives:
            raise InvalidArgument(f"surrogate output {out!r} mapped to unknown objective {obj!r}")
    names = {f.name for f in spec.factors}
    for role, factor in inputs.items():
        if factor not in names:
            raise InvalidArgument(f"surrogate input {role!r} mapped to unknown factor {factor!r}")
    m, n = design.shape
    results = {obj: np.empty((m, n)) for obj in outputs.values()}
    for i, j in design.cells():
        values = resolve_run(design, i, j)
        resp = crash_response(**{role: values[factor] for role, factor in inputs.items()}, params=params)
        for out, obj in outputs.items():
            results[obj][i - 1, j - 1] = getattr(resp, out)
    return results


def _responses(spec: DesignSpec, design: CrossedDesign, responses: Mapping) -> list[ResponseMatrix]:
    out = []
    for obj in spec.objectives:
        if obj.name not in responses:
            raise ShapeError(f"no responses for objective {obj.name!r}")
        r = responses[obj.name]
        if not isinstance(r, ResponseMatrix):
            r = ResponseMatrix(obj, r, obj.unit)
        if r.shape != design.shape:
            raise ShapeError(
                f"objective {obj.name!r}: got {r.shape[0]}x{r.shape[1]} responses, expected {design.shape[0]}x{design.shape[1]}"
            )
        out.append(r)
    return out


def analyze(spec: DesignSpec, responses: Mapping, rho: Optional[float] = None) -> AnalysisReport:
    """Run the whole study on raw responses (objective name -> m x n matrix)."""
    design = build_design(spec)
    matrices = _responses(spec, design, responses)
    rho = spec.rho if rho is None else rho

    series = [snr_series(r) for r in matrices]
    snr_matrix = np.column_stack([s.snrs for s in series])
    normalized = normalize(snr_matrix, source=SNR)
    grey = grey_analysis(normalized, rho=rho, weights=spec.weights)

    if spec.response_source == "grd":
        response = grey.grd
    else:
        name = spec.response_source.split(":", 1)[1]
        response = np.asarray(series[[o.name for o in spec.objectives].index(name)].snrs)

    columns = design.inner_columns()
    ranges = range_analysis(response, design.inner, columns)
    table = anova(response, design.inner, columns)

    optimal = []
    for name, level in ranges.optimal_levels.items():
        f = spec.factor(name)
        optimal.append(
            OptimalSetting(
                factor=name, level=level, value=f.value(level), unit=f.unit, significant=table.rows[name].significant
            )
        )

    criteria = []
    for obj, r in zip(spec.objectives, matrices):
        th = obj.threshold
        if th is None:
            continue
        ok = [all(th.satisfied(v) for v in row) for row in r.values]
        criteria.append(
            CriterionVerdict(
                objective=obj.name,
                threshold=str(th),
                passing_runs=[i + 1 for i, good in enumerate(ok) if good],
                failing_runs=[i + 1 for i, good in enumerate(ok) if not good],
            )
        )

    notes = list(spec.notes)
    insignificant = [o.factor for o in optimal if o.significant is False]
    if insignificant:
        notes.append(
            f"factors {', '.join(insignificant)} are not significant at {SIGNIFICANCE_LEVEL:g}; "
            "optimal levels follow the level means regardless"
        )
    for name, tied in ranges.ties.items():
        notes.append(f"factor {name}: levels {tied} tie for the best mean, lowest chosen")

    return AnalysisReport(
        inner_array=design.inner.name,
        outer_array=design.outer.name,
        design_levels=[[int(design.inner.matrix[i, c - 1]) for c in columns.values()] for i in range(design.inner.runs)],
        factors=list(columns),
        response_source=spec.response_source,
        response=[float(x) for x in response],
        objectives=[
            ObjectiveSeries(
                name=s.objective.name,
                kind=s.objective.kind,
                unit=s.objective.unit,
                target=s.objective.target,
                means=list(s.means),
                snr=list(s.snrs),
            )
            for s in series
        ],
        grey=GreySection(
            source=normalized.source,
            objectives=[o.name for o in spec.objectives],
            normalized=normalized.values.tolist(),
            rho=float(rho),
            weights=None if spec.weights is None else list(spec.weights),
            grc=grey.grc.tolist(),
            grd=[float(x) for x in grey.grd],
            rank=[int(x) for x in grey.rank],
            order=grey.order,
            ties=[list(t) for t in grey.ties],
        ),
        range_table=[
            RangeRow(
                factor=name,
                level_means=list(fr.level_means),
                range=fr.range,
                optimal_level=fr.optimal_level,
                tied_levels=list(fr.tied_levels),
            )
            for name, fr in ranges.factors.items()
        ],
        factor_order=list(ranges.factor_order),
        anova=AnovaSection(
            rows=[
                AnovaRowOut(
                    factor=name, ss=r.ss, df=r.df, ms=r.ms, f=r.f, p=r.p, contribution=r.contribution, significant=r.significant
                )
                for name, r in table.rows.items()
            ],
            ss_error=table.ss_error,
            df_error=table.df_error,
            ms_error=table.ms_error,
            ss_total=table.ss_total,
            df_total=table.df_total,
            grand_mean=table.grand_mean,
            no_error_term=table.no_error_term,
            significance_level=SIGNIFICANCE_LEVEL,
        ),
        optimal=optimal,
        criteria=criteria,
        notes=notes,
    )


def confirm(spec: DesignSpec, before: Mapping, after: Mapping) -> ConfirmationReport:
    """Before/after comparison for every objective present in both inputs."""
    entries = []
    for obj in spec.objectives:
        if obj.name in before and obj.name in after:
            entries.append(confirmation_compare(before[obj.name], after[obj.name], obj))
    missing = [o.name for o in spec.objectives if o.name not in before or o.name not in after]
    if not entries:
        raise ShapeError(f"no objective appears in both confirmation files (missing: {', '.join(missing)})")
    return ConfirmationReport(entries)
