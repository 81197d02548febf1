"""Domain model shared by the whole pipeline.

Factors, quality characteristics, response matrices and the design spec that
ties them to a pair of orthogonal arrays.  Everything here is an immutable
value; level indices are 1-based throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .arrays import catalog_lookup
from .errors import EmptyInput, InvalidArgument, UnknownArray

CONTROLLABLE = "controllable"
NOISE = "noise"
FACTOR_KINDS = (CONTROLLABLE, NOISE)

SMALLER_BETTER = "smaller-better"
LARGER_BETTER = "larger-better"
NOMINAL_BEST = "nominal-best"
CHARACTERISTIC_KINDS = (SMALLER_BETTER, LARGER_BETTER, NOMINAL_BEST)

_COMPARATORS = {
    "<=": lambda x, v: x <= v,
    "<": lambda x, v: x < v,
    ">=": lambda x, v: x >= v,
    ">": lambda x, v: x > v,
}
_COMPARATOR_ALIASES = {"≤": "<=", "≥": ">="}


@dataclass(frozen=True)
class Factor:
    name: str
    kind: str
    levels: tuple[float, ...]
    unit: str

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(float(v) for v in self.levels))

    def problems(self) -> list[str]:
        out = []
        if not self.name:
            out.append("factor with empty name")
        if self.kind not in FACTOR_KINDS:
            out.append(f"factor {self.name!r}: kind must be one of {FACTOR_KINDS}, got {self.kind!r}")
        if len(self.levels) < 2:
            out.append(f"factor {self.name!r}: ≥2 levels required, got {len(self.levels)}")
        if not all(math.isfinite(v) for v in self.levels):
            out.append(f"factor {self.name!r}: level values must be finite")
        if len(set(self.levels)) != len(self.levels):
            out.append(f"factor {self.name!r}: level values must be pairwise distinct")
        if not self.unit:
            out.append(f"factor {self.name!r}: unit string must be non-empty")
        return out

    def value(self, level: int) -> float:
        """Physical value of a 1-based level index."""
        if not 1 <= level <= len(self.levels):
            raise InvalidArgument(f"factor {self.name!r} has no level {level}")
        return self.levels[level - 1]


@dataclass(frozen=True)
class Threshold:
    comparator: str
    value: float
    unit: str = ""

    def __post_init__(self):
        comparator = _COMPARATOR_ALIASES.get(self.comparator, self.comparator)
        if comparator not in _COMPARATORS:
            raise InvalidArgument(f"threshold comparator must be one of <=, <, >=, >; got {self.comparator!r}")
        object.__setattr__(self, "comparator", comparator)
        object.__setattr__(self, "value", float(self.value))

    def satisfied(self, x: float) -> bool:
        return bool(_COMPARATORS[self.comparator](x, self.value))

    def __str__(self):
        return f"{self.comparator} {self.value:g} {self.unit}".rstrip()


@dataclass(frozen=True)
class QualityCharacteristic:
    name: str
    kind: str
    target: Optional[float] = None
    threshold: Optional[Threshold] = None
    unit: str = ""

    def problems(self) -> list[str]:
        out = []
        if self.kind not in CHARACTERISTIC_KINDS:
            out.append(f"objective {self.name!r}: kind must be one of {CHARACTERISTIC_KINDS}, got {self.kind!r}")
        if self.kind == NOMINAL_BEST and self.target is None:
            out.append(f"objective {self.name!r}: missing target for nominal-best")
        if self.kind != NOMINAL_BEST and self.target is not None:
            out.append(f"objective {self.name!r}: target only allowed for nominal-best")
        if self.target is not None and not math.isfinite(self.target):
            out.append(f"objective {self.name!r}: target must be finite")
        return out


@dataclass(frozen=True)
class ResponseMatrix:
    """Raw responses of one objective: rows are inner runs, columns outer runs."""

    objective: QualityCharacteristic
    values: np.ndarray
    unit: str = ""

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise InvalidArgument(f"response matrix must be 2-D and non-empty, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise InvalidArgument("response matrix entries must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    std_population: float
    count: int


def summarize(values: Sequence[float]) -> SummaryStats:
    """Mean and population (divide-by-n) standard deviation."""
    y = np.asarray(values, dtype=float).ravel()
    if y.size == 0:
        raise EmptyInput("summarize needs at least one value")
    if not np.all(np.isfinite(y)):
        raise InvalidArgument("summarize needs finite values")
    mean = float(np.mean(y))
    std = float(np.sqrt(np.mean((y - mean) ** 2)))
    # keep the mean inside [min, max] despite rounding
    mean = min(max(mean, float(y.min())), float(y.max()))
    return SummaryStats(mean=mean, std_population=std, count=int(y.size))


@dataclass(frozen=True)
class DesignSpec:
    """Factors, objectives and the inner/outer array layout of one study.

    ``inner_assignment`` and ``outer_assignment`` map factor name to a
    1-based array column.  When left empty, factors take columns 1..k in
    declaration order.
    """

    factors: tuple[Factor, ...]
    objectives: tuple[QualityCharacteristic, ...]
    inner_array: str
    outer_array: str
    inner_assignment: Mapping[str, int] = field(default_factory=dict)
    outer_assignment: Mapping[str, int] = field(default_factory=dict)
    rho: float = 0.5
    weights: Optional[tuple[float, ...]] = None
    response_source: str = "grd"
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "objectives", tuple(self.objectives))
        object.__setattr__(self, "inner_assignment", _default_assignment(self.inner_assignment, self.controllable))
        object.__setattr__(self, "outer_assignment", _default_assignment(self.outer_assignment, self.noise))
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "notes", tuple(self.notes))

    @property
    def controllable(self) -> tuple[Factor, ...]:
        return tuple(f for f in self.factors if f.kind == CONTROLLABLE)

    @property
    def noise(self) -> tuple[Factor, ...]:
        return tuple(f for f in self.factors if f.kind == NOISE)

    def factor(self, name: str) -> Factor:
        for f in self.factors:
            if f.name == name:
                return f
        raise KeyError(name)

    def objective(self, name: str) -> QualityCharacteristic:
        for o in self.objectives:
            if o.name == name:
                return o
        raise KeyError(name)


def _default_assignment(assignment, factors):
    if assignment:
        return {str(k): int(v) for k, v in assignment.items()}
    return {f.name: i + 1 for i, f in enumerate(factors)}


def validate_design_spec(spec: DesignSpec) -> list[str]:
    """Collect every problem with ``spec``; an empty list means it is valid."""
    problems: list[str] = []
    names = [f.name for f in spec.factors]
    for name in sorted({n for n in names if names.count(n) > 1}):
        problems.append(f"duplicate factor name {name!r}")
    for f in spec.factors:
        problems.extend(f.problems())

    if not spec.objectives:
        problems.append("at least one objective required")
    onames = [o.name for o in spec.objectives]
    for name in sorted({n for n in onames if onames.count(n) > 1}):
        problems.append(f"duplicate objective name {name!r}")
    for o in spec.objectives:
        problems.extend(o.problems())

    for label, array_name, factors, assignment in (
        ("inner", spec.inner_array, spec.controllable, spec.inner_assignment),
        ("outer", spec.outer_array, spec.noise, spec.outer_assignment),
    ):
        problems.extend(_check_layout(label, array_name, factors, assignment))

    if not 0 < spec.rho <= 1:
        problems.append(f"rho must lie in (0, 1], got {spec.rho}")
    if spec.weights is not None:
        w = spec.weights
        if len(w) != len(spec.objectives):
            problems.append(f"weights: expected {len(spec.objectives)} entries, got {len(w)}")
        elif any(x < 0 for x in w) or abs(sum(w) - 1.0) > 1e-9:
            problems.append("weights must be nonnegative and sum to 1")
    src = spec.response_source
    if src != "grd":
        if not src.startswith("snr:") or src[4:] not in onames:
            problems.append(f"analysis response must be 'grd' or 'snr:<objective>', got {src!r}")
    return problems


def _check_layout(label, array_name, factors, assignment):
    problems = []
    if not factors:
        problems.append(f"no {'controllable' if label == 'inner' else 'noise'} factors for the {label} array")
    try:
        array = catalog_lookup(array_name)
    except UnknownArray:
        return problems + [f"{label} array {array_name!r} not in catalog"]
    known = {f.name: f for f in factors}
    for name in assignment:
        if name not in known:
            problems.append(f"{label} assignment names unknown factor {name!r}")
    for f in factors:
        if f.name not in assignment:
            problems.append(f"factor {f.name!r} not assigned to a column of {array.name}")
    cols = list(assignment.values())
    if len(set(cols)) != len(cols):
        problems.append(f"{label} assignment reuses a column")
    if len(factors) > array.columns:
        problems.append(f"{len(factors)} factors exceed the {array.columns} columns of {array.name}")
    for name, col in assignment.items():
        if not 1 <= col <= array.columns:
            problems.append(f"factor {name!r}: column {col} outside 1..{array.columns} of {array.name}")
        elif name in known and len(known[name].levels) != array.levels_per_column[col - 1]:
            problems.append(
                f"factor {name!r}: {len(known[name].levels)} levels but column {col} of "
                f"{array.name} has {array.levels_per_column[col - 1]}"
            )
    return problems
