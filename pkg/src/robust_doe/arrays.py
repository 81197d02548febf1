"""Orthogonal array catalog and the inner x outer crossed design."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Mapping

import numpy as np

from .errors import ColumnOverflow, IndexOutOfRange, InvalidArgument, LevelMismatch, UnknownArray

# Rows in lexicographic order, one digit per column.  L9 carries the column
# order (a, b, a+2b, a+b) over GF(3) so that columns 1-3 read like the usual
# A/B/C assignment of a three-factor study; L8/L16/L27 use Taguchi's column
# generators, L12 is the Plackett-Burman cyclic design.
_CATALOG_ROWS = {
    "L4(2^3)": (
        "111",
        "122",
        "212",
        "221",
    ),
    "L8(2^7)": (
        "1111111",
        "1112222",
        "1221122",
        "1222211",
        "2121212",
        "2122121",
        "2211221",
        "2212112",
    ),
    "L9(3^4)": (
        "1111",
        "1232",
        "1323",
        "2122",
        "2213",
        "2331",
        "3133",
        "3221",
        "3312",
    ),
    "L12(2^11)": (
        "11111111111",
        "11121221222",
        "11212212221",
        "12122122211",
        "12212221112",
        "12221112122",
        "21112122122",
        "21221222111",
        "21222111212",
        "22111212212",
        "22122211121",
        "22211121221",
    ),
    "L16(2^15)": (
        "111111111111111",
        "111111122222222",
        "111222211112222",
        "111222222221111",
        "122112211221122",
        "122112222112211",
        "122221111222211",
        "122221122111122",
        "212121212121212",
        "212121221212121",
        "212212112122121",
        "212212121211212",
        "221122112211221",
        "221122121122112",
        "221211212212112",
        "221211221121221",
    ),
    "L18(2^1·3^7)": (
        "11111111",
        "11222222",
        "11333333",
        "12112233",
        "12223311",
        "12331122",
        "13121323",
        "13232131",
        "13313212",
        "21133221",
        "21211332",
        "21322113",
        "22123132",
        "22231213",
        "22312321",
        "23132312",
        "23213123",
        "23321231",
    ),
    "L27(3^13)": (
        "1111111111111",
        "1111223223323",
        "1111332332232",
        "1223111223232",
        "1223223332111",
        "1223332111323",
        "1332111332323",
        "1332223111232",
        "1332332223111",
        "2122122122122",
        "2122231231331",
        "2122313313213",
        "2231122231213",
        "2231231313122",
        "2231313122331",
        "2313122313331",
        "2313231122213",
        "2313313231122",
        "3133133133133",
        "3133212212312",
        "3133321321221",
        "3212133212221",
        "3212212321133",
        "3212321133312",
        "3321133321312",
        "3321212133221",
        "3321321212133",
    ),
}

_ALIASES = {
    "L4": "L4(2^3)",
    "L8": "L8(2^7)",
    "L9": "L9(3^4)",
    "L12": "L12(2^11)",
    "L16": "L16(2^15)",
    "L18": "L18(2^1·3^7)",
    "L18(2^1*3^7)": "L18(2^1·3^7)",
    "L27": "L27(3^13)",
}


@dataclass(frozen=True)
class OrthogonalArray:
    name: str
    matrix: np.ndarray
    levels_per_column: tuple[int, ...] = ()

    def __post_init__(self):
        m = np.array(self.matrix, dtype=int)
        if m.ndim != 2 or m.size == 0:
            raise InvalidArgument(f"{self.name}: level matrix must be 2-D and non-empty")
        if m.min() < 1:
            raise InvalidArgument(f"{self.name}: level indices are 1-based")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if not self.levels_per_column:
            object.__setattr__(self, "levels_per_column", tuple(int(c) for c in m.max(axis=0)))
        elif len(self.levels_per_column) != m.shape[1]:
            raise InvalidArgument(f"{self.name}: levels_per_column length differs from column count")

    @property
    def runs(self) -> int:
        return self.matrix.shape[0]

    @property
    def columns(self) -> int:
        return self.matrix.shape[1]

    def column(self, j: int) -> np.ndarray:
        """1-based column access."""
        if not 1 <= j <= self.columns:
            raise ColumnOverflow(f"{self.name} has no column {j}")
        return self.matrix[:, j - 1]


def catalog_names() -> list[str]:
    return list(_CATALOG_ROWS)


def catalog_lookup(name: str) -> OrthogonalArray:
    key = _ALIASES.get(name, name)
    if key not in _CATALOG_ROWS:
        raise UnknownArray(f"array {name!r} not in catalog {catalog_names()}")
    rows = [[int(c) for c in row] for row in _CATALOG_ROWS[key]]
    return OrthogonalArray(key, np.array(rows))


def validate_array(array: OrthogonalArray) -> list[str]:
    """Check balance and pairwise orthogonality; return one message per violation."""
    m = array.matrix
    violations = []
    for j in range(array.columns):
        nlev = array.levels_per_column[j]
        if m[:, j].max() > nlev:
            violations.append(f"column {j + 1}: entry exceeds its {nlev} levels")
            continue
        if array.runs % nlev:
            violations.append(f"column {j + 1}: {array.runs} runs not divisible by {nlev} levels")
            continue
        counts = Counter(m[:, j].tolist())
        expected = array.runs // nlev
        if any(counts.get(lev, 0) != expected for lev in range(1, nlev + 1)):
            violations.append(f"column {j + 1}: unbalanced level counts {dict(sorted(counts.items()))}")
    for p, q in combinations(range(array.columns), 2):
        lp, lq = array.levels_per_column[p], array.levels_per_column[q]
        pairs = Counter(zip(m[:, p].tolist(), m[:, q].tolist()))
        expected, rem = divmod(array.runs, lp * lq)
        if rem or any(pairs.get(pair, 0) != expected for pair in product(range(1, lp + 1), range(1, lq + 1))):
            violations.append(f"columns ({p + 1}, {q + 1}): level pairs not equally frequent")
    return violations


@dataclass(frozen=True)
class CrossedDesign:
    """Inner array of controllable factors crossed with an outer noise array.

    ``factor_assignment`` maps ``("inner" | "outer", column)`` to the
    ``Factor`` sitting in that column.
    """

    inner: OrthogonalArray
    outer: OrthogonalArray
    factor_assignment: Mapping[tuple[str, int], object]

    @property
    def shape(self) -> tuple[int, int]:
        return self.inner.runs, self.outer.runs

    @property
    def inner_factors(self) -> list[tuple[int, object]]:
        return sorted((col, f) for (side, col), f in self.factor_assignment.items() if side == "inner")

    @property
    def outer_factors(self) -> list[tuple[int, object]]:
        return sorted((col, f) for (side, col), f in self.factor_assignment.items() if side == "outer")

    def inner_columns(self) -> dict[str, int]:
        """Factor name to inner column, in column order."""
        return {f.name: col for col, f in self.inner_factors}

    def cells(self) -> Iterator[tuple[int, int]]:
        """Every (inner run, outer run) pair, 1-based, row-major."""
        m, n = self.shape
        for i in range(1, m + 1):
            for j in range(1, n + 1):
                yield i, j


def cross(inner: OrthogonalArray, outer: OrthogonalArray, spec) -> CrossedDesign:
    """Assign a design's factors to array columns and build the product design."""
    assignment = {}
    for side, array, factors, columns in (
        ("inner", inner, spec.controllable, spec.inner_assignment),
        ("outer", outer, spec.noise, spec.outer_assignment),
    ):
        if len(factors) > array.columns:
            raise ColumnOverflow(f"{len(factors)} factors do not fit the {array.columns} columns of {array.name}")
        for f in factors:
            col = columns.get(f.name)
            if col is None or not 1 <= col <= array.columns:
                raise ColumnOverflow(f"factor {f.name!r}: no usable column of {array.name} (got {col})")
            if (side, col) in assignment:
                raise ColumnOverflow(f"column {col} of {array.name} assigned twice")
            if len(f.levels) != array.levels_per_column[col - 1]:
                raise LevelMismatch(
                    f"factor {f.name!r} has {len(f.levels)} levels; column {col} of "
                    f"{array.name} has {array.levels_per_column[col - 1]}"
                )
            assignment[(side, col)] = f
    return CrossedDesign(inner, outer, assignment)


def resolve_levels(design: CrossedDesign, i: int, j: int) -> dict[str, int]:
    """1-based level index of every factor in cell (i, j)."""
    m, n = design.shape
    if not (1 <= i <= m and 1 <= j <= n):
        raise IndexOutOfRange(f"cell ({i}, {j}) outside the {m}x{n} design")
    out = {}
    for col, f in design.inner_factors:
        out[f.name] = int(design.inner.matrix[i - 1, col - 1])
    for col, f in design.outer_factors:
        out[f.name] = int(design.outer.matrix[j - 1, col - 1])
    return out


def resolve_run(design: CrossedDesign, i: int, j: int) -> dict[str, float]:
    """Physical value of every factor in cell (i, j)."""
    levels = resolve_levels(design, i, j)
    factors = {f.name: f for _, f in design.inner_factors + design.outer_factors}
    return {name: factors[name].value(lev) for name, lev in levels.items()}
