"""Autocorrelation-preserving disintegration nulls via circular shifting.

Offsets are derived from a counter-style hash of (master_seed, pair_id,
permutation_index), so results are identical regardless of execution order or
worker count.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ArgumentError, LengthError
from .info import SymbolSeries
from .measures import EstimatorConfig, MeasureBundle, pair_bundle

__all__ = [
    "SurrogateConfig",
    "circular_shift",
    "surrogate_offsets",
    "surrogate_average",
    "average_bundles",
]


@dataclass(frozen=True)
class SurrogateConfig:
    """Permutation count, seeding, and shift bounds for the disintegration null.

    ``max_shift=None`` means "T - 1", resolved against the series length via
    :meth:`resolved`. By default only the second channel is shifted (relative
    offset is all that matters for a pair); ``shift_both`` enables shifting
    both for parity with other toolkits.
    """

    n_permutations: int = 100
    master_seed: int = 0
    min_shift: int = 1
    max_shift: int | None = None
    shift_both: bool = False

    def __post_init__(self):
        if int(self.n_permutations) < 1:
            raise ArgumentError(f"n_permutations must be >= 1, got {self.n_permutations}")
        if int(self.master_seed) < 0:
            raise ArgumentError(f"master_seed must be >= 0, got {self.master_seed}")
        if int(self.min_shift) < 1:
            raise ArgumentError(f"min_shift must be >= 1, got {self.min_shift}")
        if self.max_shift is not None and int(self.max_shift) < int(self.min_shift):
            raise ArgumentError(
                f"max_shift {self.max_shift} is below min_shift {self.min_shift}"
            )
        object.__setattr__(self, "n_permutations", int(self.n_permutations))
        object.__setattr__(self, "master_seed", int(self.master_seed))
        object.__setattr__(self, "min_shift", int(self.min_shift))
        if self.max_shift is not None:
            object.__setattr__(self, "max_shift", int(self.max_shift))

    def resolved(self, series_length: int) -> "SurrogateConfig":
        """Fill the default ``max_shift`` and validate bounds against ``T``."""
        t = int(series_length)
        max_shift = t - 1 if self.max_shift is None else self.max_shift
        if not 1 <= self.min_shift <= max_shift <= t - 1:
            raise ArgumentError(
                f"need 1 <= min_shift <= max_shift <= T-1, got "
                f"min_shift={self.min_shift}, max_shift={max_shift}, T={t}"
            )
        return replace(self, max_shift=max_shift)


def circular_shift(series, offset: int):
    """Rotate a series so output[t] = input[(t - offset) mod T].

    Accepts a :class:`SymbolSeries` (returned as the same type) or any 1-D
    array-like (returned as an array). ``offset`` must lie in [0, T).
    """
    if isinstance(series, SymbolSeries):
        shifted = circular_shift(series.symbols, offset)
        return SymbolSeries(shifted, series.cardinality)
    arr = np.asarray(series)
    if arr.ndim != 1:
        raise ArgumentError(f"series must be 1-D, got shape {arr.shape}")
    offset = int(offset)
    if not 0 <= offset < arr.size:
        raise ArgumentError(f"offset {offset} out of range [0, {arr.size})")
    return np.roll(arr, offset)


def surrogate_offsets(
    config: SurrogateConfig, pair_id: int, permutation_index: int
) -> tuple[int, int]:
    """Deterministic per-(pair, permutation) shift offsets.

    The first channel's offset is fixed at 0 unless ``shift_both`` is set.
    ``config.max_shift`` must already be resolved.
    """
    if config.max_shift is None:
        raise ArgumentError("config.max_shift is unresolved; call resolved(T) first")
    pair_id = int(pair_id)
    permutation_index = int(permutation_index)
    if pair_id < 0 or permutation_index < 0:
        raise ArgumentError("pair_id and permutation_index must be >= 0")
    seq = np.random.SeedSequence([config.master_seed, pair_id, permutation_index])
    rng = np.random.default_rng(seq)
    if config.shift_both:
        first = int(rng.integers(config.min_shift, config.max_shift + 1))
    else:
        first = 0
    second = int(rng.integers(config.min_shift, config.max_shift + 1))
    return first, second


def average_bundles(bundles) -> MeasureBundle:
    """Field-wise arithmetic mean of measure bundles; modal argmax source."""
    bundles = list(bundles)
    if not bundles:
        raise ArgumentError("need at least one bundle to average")
    n = len(bundles[0].single_source_mi)
    return MeasureBundle(
        temporal_mi=float(np.mean([b.temporal_mi for b in bundles])),
        phi_wms=float(np.mean([b.phi_wms for b in bundles])),
        redundancy_mmi=float(np.mean([b.redundancy_mmi for b in bundles])),
        synergy_mmi=float(np.mean([b.synergy_mmi for b in bundles])),
        single_source_mi=tuple(
            float(np.mean([b.single_source_mi[i] for b in bundles])) for i in range(n)
        ),
        self_mi=tuple(
            float(np.mean([b.self_mi[i] for b in bundles])) for i in range(n)
        ),
        argmax_source=int(
            np.bincount([b.argmax_source for b in bundles]).argmax()
        ),
    )


def _series_length(channel) -> int:
    if isinstance(channel, SymbolSeries):
        return channel.length
    return int(np.asarray(channel).shape[0])


def surrogate_average(
    x1,
    x2,
    config: SurrogateConfig,
    estimator: EstimatorConfig,
    pair_id: int = 0,
    names=("x1", "x2"),
) -> MeasureBundle:
    """Surrogate-averaged measure bundle of a channel pair.

    For each permutation the channels are circularly shifted by their
    per-permutation offsets, the full bundle is recomputed with ``estimator``,
    and the fields are averaged arithmetically across permutations.
    """
    t = _series_length(x1)
    t2 = _series_length(x2)
    if t != t2:
        raise LengthError(f"channel lengths differ: {t} vs {t2}")
    if t < 32:
        raise LengthError(f"need at least 32 samples, got {t}")
    cfg = config.resolved(t)
    if estimator.kind == "discrete":
        from .measures import _as_symbols

        x1 = _as_symbols(x1, estimator.bins)
        x2 = _as_symbols(x2, estimator.bins)
    bundles = []
    for index in range(cfg.n_permutations):
        first, second = surrogate_offsets(cfg, pair_id, index)
        shifted1 = circular_shift(x1, first) if first else x1
        shifted2 = circular_shift(x2, second) if second else x2
        bundles.append(pair_bundle(shifted1, shifted2, estimator, names=names))
    return average_bundles(bundles)
