"""Reading and writing the toolkit's on-disk formats.

* design spec: JSON document (factors, objectives, arrays, gra, analysis)
* surrogate params: JSON document
* response CSV: ``run_id,r1..rn`` header, one row per inner run
* confirmation CSV: ``objective,r1..rn`` header, one row per objective

Every write goes through a temp file and ``os.replace`` so readers never
see a half-written file.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .core import DesignSpec, Factor, QualityCharacteristic, Threshold, validate_design_spec
from .errors import InvalidArgument, ShapeError, SpecError
from .surrogate import INPUTS, OUTPUTS, SurrogateParams

_SPEC_KEYS = {"factors", "objectives", "arrays", "gra", "analysis", "notes"}
_FACTOR_KEYS = {"name", "kind", "unit", "levels", "note"}
_OBJECTIVE_KEYS = {"name", "kind", "unit", "target", "threshold"}
_THRESHOLD_KEYS = {"comparator", "value", "unit"}
_ARRAY_KEYS = {"inner", "outer", "assignment"}
_ASSIGNMENT_KEYS = {"inner", "outer"}
_GRA_KEYS = {"rho", "weights"}
_ANALYSIS_KEYS = {"response"}
_PARAM_KEYS = set(SurrogateParams.__dataclass_fields__) | {"inputs", "outputs", "note"}


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise SpecError([f"{path}: top level must be an object"])
    return doc


def _unknown(where: str, obj: Mapping, allowed: set) -> list[str]:
    return [f"{where}: unknown key {k!r}" for k in obj if k not in allowed]


def _number(value, where, problems):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        problems.append(f"{where}: expected a number, got {value!r}")
        return None
    return float(value)


def spec_from_dict(doc: Mapping) -> DesignSpec:
    """Build and validate a DesignSpec; raises SpecError listing every problem."""
    problems = _unknown("spec", doc, _SPEC_KEYS)
    for key in ("factors", "objectives", "arrays"):
        if key not in doc:
            problems.append(f"spec: missing section {key!r}")
    if problems:
        raise SpecError(problems)

    factors = []
    for n, fd in enumerate(doc["factors"], start=1):
        where = f"factors[{n}]"
        if not isinstance(fd, dict):
            problems.append(f"{where}: expected an object")
            continue
        problems += _unknown(where, fd, _FACTOR_KEYS)
        missing = [k for k in ("name", "kind", "unit", "levels") if k not in fd]
        if missing:
            problems.append(f"{where}: missing {', '.join(missing)}")
            continue
        if not isinstance(fd["levels"], list):
            problems.append(f"{where}.levels: expected a list")
            continue
        levels = [_number(v, f"{where}.levels", problems) for v in fd["levels"]]
        if None in levels:
            continue
        factors.append(Factor(name=str(fd["name"]), kind=fd["kind"], levels=levels, unit=str(fd["unit"])))

    objectives = []
    for n, od in enumerate(doc["objectives"], start=1):
        where = f"objectives[{n}]"
        if not isinstance(od, dict):
            problems.append(f"{where}: expected an object")
            continue
        problems += _unknown(where, od, _OBJECTIVE_KEYS)
        if "name" not in od or "kind" not in od:
            problems.append(f"{where}: missing name or kind")
            continue
        target = od.get("target")
        if target is not None:
            target = _number(target, f"{where}.target", problems)
        threshold = None
        if od.get("threshold") is not None:
            td = od["threshold"]
            problems += _unknown(f"{where}.threshold", td, _THRESHOLD_KEYS)
            value = _number(td.get("value"), f"{where}.threshold.value", problems)
            if value is not None:
                try:
                    threshold = Threshold(td.get("comparator", ""), value, td.get("unit", od.get("unit", "")))
                except InvalidArgument as exc:
                    problems.append(f"{where}.threshold: {exc}")
        objectives.append(
            QualityCharacteristic(
                name=str(od["name"]), kind=od["kind"], target=target, threshold=threshold, unit=od.get("unit", "")
            )
        )

    arrays = doc["arrays"]
    if not isinstance(arrays, dict):
        raise SpecError(problems + ["arrays: expected an object"])
    problems += _unknown("arrays", arrays, _ARRAY_KEYS)
    assignment = arrays.get("assignment", {}) or {}
    problems += _unknown("arrays.assignment", assignment, _ASSIGNMENT_KEYS)
    gra = doc.get("gra", {}) or {}
    problems += _unknown("gra", gra, _GRA_KEYS)
    analysis = doc.get("analysis", {}) or {}
    problems += _unknown("analysis", analysis, _ANALYSIS_KEYS)
    rho = _number(gra.get("rho", 0.5), "gra.rho", problems)
    weights = gra.get("weights")
    notes = doc.get("notes", [])
    if isinstance(notes, str):
        notes = [notes]
    if "inner" not in arrays or "outer" not in arrays:
        problems.append("arrays: both 'inner' and 'outer' are required")
    if problems:
        raise SpecError(problems)

    spec = DesignSpec(
        factors=factors,
        objectives=objectives,
        inner_array=arrays["inner"],
        outer_array=arrays["outer"],
        inner_assignment=assignment.get("inner", {}),
        outer_assignment=assignment.get("outer", {}),
        rho=rho,
        weights=weights,
        response_source=analysis.get("response", "grd"),
        notes=notes,
    )
    problems = validate_design_spec(spec)
    if problems:
        raise SpecError(problems)
    return spec


def load_spec(path) -> DesignSpec:
    return spec_from_dict(_read_json(path))


def load_params(path) -> tuple[SurrogateParams, dict[str, str], dict[str, str]]:
    """Surrogate constants plus the factor->input and output->objective maps."""
    doc = _read_json(path)
    problems = _unknown("params", doc, _PARAM_KEYS)
    inputs = doc.get("inputs", {})
    outputs = doc.get("outputs", {})
    for role in inputs:
        if role not in INPUTS:
            problems.append(f"params.inputs: unknown surrogate input {role!r}")
    for role in INPUTS:
        if role not in inputs:
            problems.append(f"params.inputs: no factor mapped to {role!r}")
    for out in outputs:
        if out not in OUTPUTS:
            problems.append(f"params.outputs: unknown surrogate output {out!r}")
    constants = {k: v for k, v in doc.items() if k not in ("inputs", "outputs", "note")}
    for key, value in constants.items():
        _number(value, f"params.{key}", problems)
    if problems:
        raise SpecError(problems)
    return SurrogateParams(**constants), dict(inputs), dict(outputs)


def _fmt(x: float) -> str:
    return repr(float(x))


def format_matrix_csv(values, first_header: str = "run_id", row_ids: Sequence | None = None) -> str:
    v = np.asarray(values, dtype=float)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([first_header] + [f"r{j}" for j in range(1, v.shape[1] + 1)])
    ids = row_ids if row_ids is not None else range(1, v.shape[0] + 1)
    for rid, row in zip(ids, v):
        w.writerow([rid] + [_fmt(x) for x in row])
    return buf.getvalue()


def write_response_csv(path, values) -> None:
    atomic_write_text(path, format_matrix_csv(values))


def _read_rows(path, first_header: str):
    with open(path, encoding="utf-8", newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise ShapeError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if header[0] != first_header or header[1:] != [f"r{j}" for j in range(1, len(header))] or len(header) < 2:
        raise ShapeError(f"{path}: header must be '{first_header},r1,...,rn', got {','.join(header)!r}")
    n = len(header) - 1
    ids, data = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != n + 1:
            raise ShapeError(f"{path}: line {lineno} has {len(row) - 1} values, expected {n}")
        try:
            vals = [float(c) for c in row[1:]]
        except ValueError as exc:
            raise ShapeError(f"{path}: line {lineno}: {exc}") from None
        if not all(math.isfinite(x) for x in vals):
            raise ShapeError(f"{path}: line {lineno}: non-finite value")
        ids.append(row[0].strip())
        data.append(vals)
    return ids, np.array(data, dtype=float).reshape(len(data), n)


def read_response_csv(path, expected_shape: tuple[int, int] | None = None) -> np.ndarray:
    ids, values = _read_rows(path, "run_id")
    if expected_shape is not None and values.shape != tuple(expected_shape):
        m, n = expected_shape
        raise ShapeError(f"{path}: got {values.shape[0]}x{values.shape[1]} responses, expected {m}x{n}")
    if ids != [str(i) for i in range(1, len(ids) + 1)]:
        raise ShapeError(f"{path}: run_id column must read 1..{len(ids)} in order")
    return values


def read_confirmation_csv(path) -> dict[str, np.ndarray]:
    ids, values = _read_rows(path, "objective")
    if len(set(ids)) != len(ids):
        raise ShapeError(f"{path}: duplicate objective rows")
    return {name: values[i] for i, name in enumerate(ids)}


def write_confirmation_csv(path, rows: Mapping[str, Sequence[float]]) -> None:
    names = list(rows)
    atomic_write_text(path, format_matrix_csv([rows[k] for k in names], "objective", names))


def write_json(path, doc) -> None:
    atomic_write_text(path, json.dumps(doc, indent=2) + "\n")
