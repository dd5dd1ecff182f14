"""Multichannel time-series container and CSV ingestion."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import (
    ArgumentError,
    DegenerateChannelError,
    LengthError,
    ParseError,
    UnknownVariableError,
)

__all__ = ["MIN_SAMPLES", "TimeSeriesMatrix", "as_time_series", "load_csv"]

MIN_SAMPLES = 32


@dataclass(frozen=True)
class TimeSeriesMatrix:
    """A T x N real-valued recording with named channels.

    Rejected at construction: fewer than ``MIN_SAMPLES`` samples, missing or
    non-finite values, and constant channels. The sample array is stored
    read-only, so instances are safe to share across threads and processes.
    """

    channel_names: tuple[str, ...]
    samples: np.ndarray

    def __post_init__(self):
        names = tuple(str(n) for n in self.channel_names)
        if not names:
            raise ArgumentError("at least one channel is required")
        if len(set(names)) != len(names):
            raise ArgumentError(f"duplicate channel names in {names}")
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim != 2:
            raise ArgumentError(f"samples must be 2-D (T x N), got shape {arr.shape}")
        if arr.shape[1] != len(names):
            raise ArgumentError(
                f"samples have {arr.shape[1]} columns but {len(names)} channel names"
            )
        if arr.shape[0] < MIN_SAMPLES:
            raise LengthError(
                f"need at least {MIN_SAMPLES} samples, got {arr.shape[0]}"
            )
        finite = np.isfinite(arr)
        if not finite.all():
            t, ch = np.argwhere(~finite)[0]
            raise ArgumentError(
                f"channel {names[ch]!r} has a non-finite value at sample {t}"
            )
        spans = arr.max(axis=0) - arr.min(axis=0)
        if np.any(spans == 0.0):
            ch = int(np.argmax(spans == 0.0))
            raise DegenerateChannelError(f"channel {names[ch]!r} is constant")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "channel_names", names)
        object.__setattr__(self, "samples", arr)

    @property
    def sample_count(self) -> int:
        return self.samples.shape[0]

    @property
    def channel_count(self) -> int:
        return self.samples.shape[1]

    def channel_index(self, channel) -> int:
        if isinstance(channel, (int, np.integer)):
            i = int(channel)
            if not 0 <= i < self.channel_count:
                raise UnknownVariableError(
                    f"channel index {i} out of range [0, {self.channel_count})"
                )
            return i
        try:
            return self.channel_names.index(str(channel))
        except ValueError:
            raise UnknownVariableError(
                f"unknown channel {channel!r}; have {list(self.channel_names)}"
            ) from None

    def channel(self, channel) -> np.ndarray:
        """Return one channel (by name or column index) as a 1-D view."""
        return self.samples[:, self.channel_index(channel)]


def as_time_series(X, channel_names=None) -> TimeSeriesMatrix:
    """Validate array-like input into a :class:`TimeSeriesMatrix`.

    Already-constructed matrices pass through untouched; plain arrays get
    ``c1..cN`` channel names unless names are supplied.
    """
    if isinstance(X, TimeSeriesMatrix):
        if channel_names is not None:
            raise ArgumentError("channel_names cannot be overridden on a TimeSeriesMatrix")
        return X
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim != 2:
        raise ArgumentError(f"expected a 2-D (T x N) array, got shape {arr.shape}")
    if channel_names is None:
        channel_names = tuple(f"c{i + 1}" for i in range(arr.shape[1]))
    return TimeSeriesMatrix(tuple(channel_names), arr)


def load_csv(path) -> TimeSeriesMatrix:
    """Read a header-plus-numeric-body CSV into a :class:`TimeSeriesMatrix`.

    Parse failures (malformed numbers, NaN/inf tokens, ragged rows) raise
    :class:`ParseError` naming the offending line; constant channels raise
    :class:`DegenerateChannelError` naming the channel.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: file is empty") from None
        names = tuple(token.strip() for token in header)
        if not names or any(not n for n in names):
            raise ParseError(f"{path}: line 1: malformed header row")
        n_cols = len(names)
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != n_cols:
                raise ParseError(
                    f"{path}: line {lineno}: expected {n_cols} fields, found {len(row)}"
                )
            try:
                rows.append([float(token) for token in row])
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from None
    if not rows:
        raise ParseError(f"{path}: no data rows")
    arr = np.asarray(rows, dtype=np.float64)
    bad = ~np.isfinite(arr)
    if bad.any():
        t, ch = np.argwhere(bad)[0]
        raise ParseError(
            f"{path}: line {int(t) + 2}: non-finite value in channel {names[ch]!r}"
        )
    return TimeSeriesMatrix(names, arr)
