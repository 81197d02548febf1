"""Grey relational analysis.

Columns are normalized to [0, 1] with 1 as the ideal, each run is compared
with the all-ones reference sequence, and the per-objective coefficients
are averaged into a single grade that ranks the runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import LARGER_BETTER, NOMINAL_BEST, SMALLER_BETTER
from .errors import InvalidArgument, InvalidRho, InvalidWeights, ZeroRange

RAW = "raw-response"
SNR = "snr"


@dataclass(frozen=True)
class NormalizedSeries:
    values: np.ndarray  # m runs x k objectives
    source: str = SNR

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class GreyResult:
    grc: np.ndarray
    grd: np.ndarray
    rank: np.ndarray  # rank[i] is the 1-based rank of run i+1
    rho: float
    ties: tuple[tuple[int, ...], ...] = ()

    @property
    def order(self) -> list[int]:
        """1-based run indices from best to worst."""
        return [int(i) + 1 for i in np.argsort(self.rank, kind="stable")]


def normalize(
    series,
    kinds: Optional[Sequence[str]] = None,
    targets: Optional[Sequence[Optional[float]]] = None,
    source: str = SNR,
) -> NormalizedSeries:
    """Min-max normalize each column so that 1 is the preferred end.

    With ``source="snr"`` every column is larger-the-better regardless of
    ``kinds``, since a higher SNR is always preferred.
    """
    x = np.array(series, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] < 2:
        raise InvalidArgument("normalize needs at least two runs")
    if not np.all(np.isfinite(x)):
        raise InvalidArgument("normalize needs finite values")
    k = x.shape[1]
    if source == SNR or kinds is None:
        kinds = [LARGER_BETTER] * k
    if len(kinds) != k:
        raise InvalidArgument(f"{len(kinds)} kinds given for {k} columns")
    targets = list(targets) if targets is not None else [None] * k

    out = np.empty_like(x)
    for j, kind in enumerate(kinds):
        col = x[:, j]
        lo, hi = col.min(), col.max()
        if kind == NOMINAL_BEST:
            if targets[j] is None:
                raise InvalidArgument(f"column {j + 1}: nominal-best normalization needs a target")
            dev = np.abs(col - float(targets[j]))
            worst = dev.max()
            if worst == 0:
                raise ZeroRange(f"column {j + 1}: every value equals the target")
            out[:, j] = 1.0 - dev / worst
            continue
        if hi == lo:
            raise ZeroRange(f"column {j + 1}: constant column cannot be normalized")
        if kind == LARGER_BETTER:
            out[:, j] = (col - lo) / (hi - lo)
        elif kind == SMALLER_BETTER:
            out[:, j] = (hi - col) / (hi - lo)
        else:
            raise InvalidArgument(f"unknown characteristic kind {kind!r}")
    return NormalizedSeries(out, source)


def grey_relational_coefficients(normalized, rho: float = 0.5) -> np.ndarray:
    """Closeness of every entry to the ideal value 1.

    ``(dmin + rho*dmax) / (delta + rho*dmax)`` with ``delta = |1 - x|`` and
    the extremes taken over the whole matrix.
    """
    if not 0.0 < rho <= 1.0:
        raise InvalidRho(f"rho must lie in (0, 1], got {rho}")
    x = normalized.values if isinstance(normalized, NormalizedSeries) else np.asarray(normalized, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if np.any(x < 0) or np.any(x > 1):
        raise InvalidArgument("normalized entries must lie in [0, 1]")
    delta = np.abs(1.0 - x)
    dmin, dmax = delta.min(), delta.max()
    if dmax == 0:
        return np.ones_like(delta)
    return (dmin + rho * dmax) / (delta + rho * dmax)


def grey_relational_grade(grc, weights: Optional[Sequence[float]] = None):
    """Weighted row mean of the coefficients and the resulting ranking.

    Returns ``(grd, rank, ties)``; ``rank[i]`` is the 1-based rank of run
    ``i + 1`` (highest grade first, lower run index wins a tie) and ``ties``
    lists groups of runs with equal grades.
    """
    g = np.asarray(grc, dtype=float)
    if g.ndim == 1:
        g = g[:, None]
    k = g.shape[1]
    if weights is None:
        w = np.full(k, 1.0 / k)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (k,):
            raise InvalidWeights(f"expected {k} weights, got {w.size}")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
            raise InvalidWeights("weights must be nonnegative and sum to 1")
    grd = g @ w if weights is not None else g.mean(axis=1)
    order = sorted(range(len(grd)), key=lambda i: (-grd[i], i))
    rank = np.empty(len(grd), dtype=int)
    rank[order] = np.arange(1, len(grd) + 1)
    groups: dict[float, list[int]] = {}
    for i, v in enumerate(grd):
        groups.setdefault(float(v), []).append(i + 1)
    ties = tuple(tuple(runs) for runs in groups.values() if len(runs) > 1)
    return grd, rank, ties


def grey_analysis(normalized, rho: float = 0.5, weights: Optional[Sequence[float]] = None) -> GreyResult:
    grc = grey_relational_coefficients(normalized, rho)
    grd, rank, ties = grey_relational_grade(grc, weights)
    return GreyResult(grc=grc, grd=grd, rank=rank, rho=rho, ties=ties)
