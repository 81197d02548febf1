"""Signal-to-noise ratios and the quadratic quality loss.

All SNRs are in decibels (base-10 logarithm) and kept unrounded; rounding
happens only when a report is rendered as text.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import LARGER_BETTER, NOMINAL_BEST, SMALLER_BETTER, QualityCharacteristic, ResponseMatrix
from .errors import DegenerateSignal, DivisionByZero, EmptyInput, InvalidArgument


def _as_vector(responses) -> np.ndarray:
    y = np.asarray(responses, dtype=float).ravel()
    if y.size == 0:
        raise EmptyInput("no responses given")
    if not np.all(np.isfinite(y)):
        raise InvalidArgument("responses must be finite")
    return y


def _db(mean_square: float) -> float:
    if mean_square == 0.0:
        raise DegenerateSignal("mean square is zero, SNR would be infinite")
    return float(-10.0 * np.log10(mean_square))


def snr_smaller_better(responses: Sequence[float]) -> float:
    """-10 log10(mean(y^2))."""
    y = _as_vector(responses)
    return _db(float(np.mean(y * y)))


def snr_larger_better(responses: Sequence[float]) -> float:
    """-10 log10(mean(1/y^2))."""
    y = _as_vector(responses)
    if np.any(y == 0.0):
        raise DivisionByZero("larger-the-better SNR undefined for a zero response")
    return _db(float(np.mean(1.0 / (y * y))))


def snr_nominal_best(responses: Sequence[float], target: float) -> float:
    """-10 log10(mean((y - target)^2))."""
    y = _as_vector(responses)
    d = y - float(target)
    return _db(float(np.mean(d * d)))


def snr(responses: Sequence[float], kind: str, target: Optional[float] = None) -> float:
    """Dispatch on the characteristic kind."""
    if kind == SMALLER_BETTER:
        return snr_smaller_better(responses)
    if kind == LARGER_BETTER:
        return snr_larger_better(responses)
    if kind == NOMINAL_BEST:
        if target is None:
            raise InvalidArgument("nominal-best SNR needs a target")
        return snr_nominal_best(responses, target)
    raise InvalidArgument(f"unknown characteristic kind {kind!r}")


def quality_loss(responses: Sequence[float], target: float) -> tuple[float, float, float]:
    """Expected quadratic loss about ``target`` split into variance and bias.

    Returns ``(expected_loss, variance_part, bias_part)`` where the first is
    the mean of ``(y - target)**2``, the second the population variance and
    the third ``(mean - target)**2``.
    """
    y = _as_vector(responses)
    t = float(target)
    mean = float(np.mean(y))
    expected = float(np.mean((y - t) ** 2))
    variance = float(np.mean((y - mean) ** 2))
    bias = (mean - t) ** 2
    return expected, variance, bias


@dataclass(frozen=True)
class SnrSeries:
    objective: QualityCharacteristic
    means: tuple[float, ...]
    snrs: tuple[float, ...]

    @property
    def per_run(self) -> list[tuple[float, float]]:
        return list(zip(self.means, self.snrs))

    def __len__(self):
        return len(self.snrs)


def snr_series(responses: ResponseMatrix) -> SnrSeries:
    """Row-wise SNR of a response matrix under its objective's characteristic."""
    obj = responses.objective
    means, snrs = [], []
    for i, row in enumerate(responses.values, start=1):
        means.append(float(np.mean(row)))
        try:
            snrs.append(snr(row, obj.kind, obj.target))
        except DegenerateSignal as exc:
            raise DegenerateSignal(f"objective {obj.name!r}, run {i}: {exc}") from exc
    return SnrSeries(obj, tuple(means), tuple(snrs))
