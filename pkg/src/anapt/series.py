"""Uniformly sampled time series container."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DomainError, NonFiniteSample


@dataclass(frozen=True)
class TimeSeries:
    """Real-valued samples taken at a constant rate.

    Attributes
    ----------
    values : ndarray
        Samples in signal units. Stored as a read-only float64 array.
    sample_rate : float
        Sampling rate in Hz.
    t0 : float
        Time of the first sample in seconds.
    """

    values: NDArray[np.float64] = field(repr=False)
    sample_rate: float = 1.0
    t0: float = 0.0

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64).ravel()
        if not np.all(np.isfinite(values)):
            raise NonFiniteSample("time series contains NaN or infinite samples")
        if not (np.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise DomainError(f"sample_rate must be > 0, got {self.sample_rate!r}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "sample_rate", float(self.sample_rate))
        object.__setattr__(self, "t0", float(self.t0))

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def times(self) -> NDArray[np.float64]:
        return self.t0 + np.arange(len(self)) / self.sample_rate

    @property
    def duration(self) -> float:
        return (len(self) - 1) / self.sample_rate

    def with_values(self, values: ArrayLike) -> TimeSeries:
        """Same time grid, new samples."""
        return TimeSeries(np.asarray(values, dtype=np.float64), self.sample_rate, self.t0)


def as_series(data: TimeSeries | ArrayLike, sample_rate: float = 1.0) -> TimeSeries:
    """Wrap raw samples in a :class:`TimeSeries` unless they already are one."""
    if isinstance(data, TimeSeries):
        return data
    return TimeSeries(np.asarray(data, dtype=np.float64), sample_rate)
