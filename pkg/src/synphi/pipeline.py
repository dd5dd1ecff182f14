"""End-to-end empirical analysis: sample channel pairs, compute original and
surrogate-averaged measure bundles, functional connectivity, deltas, and the
summary correlations.

Per-pair records and the run summary serialise to fixed field names; see
``PairMetrics.to_record`` and ``RunSummary.to_record``.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed
from scipy.special import betainc

from .errors import AnalysisError, ArgumentError, SynphiError
from .info import (
    CovarianceModel,
    DiscreteDistribution,
    discretize,
    gaussian_mi,
    mutual_information,
)
from .measures import EstimatorConfig, MeasureBundle, pair_bundle
from .surrogates import SurrogateConfig, surrogate_average
from .timeseries import TimeSeriesMatrix, as_time_series, load_csv

__all__ = [
    "TimeSeriesMatrix",
    "load_csv",
    "as_time_series",
    "EstimatorConfig",
    "PairMetrics",
    "PairFailure",
    "CorrelationResult",
    "RunSummary",
    "SUMMARY_PANELS",
    "sample_pairs",
    "analyze_pair",
    "pearson_r",
    "run_analysis",
    "write_results_jsonl",
    "write_results_csv",
]

P_VALUE_FLOOR = 1e-300

# The four summary panels: (x field, y field).
SUMMARY_PANELS = (
    ("delta_tmi", "delta_syn"),
    ("fc", "delta_syn"),
    ("fc", "delta_tmi"),
    ("phi_wms", "delta_syn"),
)


@dataclass(frozen=True)
class PairMetrics:
    """Everything measured for one channel pair."""

    pair: tuple[int, int]
    channels: tuple[str, str]
    original: MeasureBundle
    surrogate: MeasureBundle
    delta_syn: float
    delta_tmi: float
    fc_pearson: float
    fc_mi: float
    estimator_tag: str

    def to_record(self) -> dict:
        record = {
            "pair": [int(self.pair[0]), int(self.pair[1])],
            "channels": [self.channels[0], self.channels[1]],
            "estimator": self.estimator_tag,
        }
        record.update(self.original.to_record())
        record.update(self.surrogate.to_record(prefix="surr_"))
        record["delta_syn"] = float(self.delta_syn)
        record["delta_tmi"] = float(self.delta_tmi)
        record["fc_pearson"] = float(self.fc_pearson)
        record["fc_mi"] = float(self.fc_mi)
        return record


@dataclass(frozen=True)
class PairFailure:
    """A pair whose analysis aborted; recorded, never fatal for the run."""

    pair: tuple[int, int]
    channels: tuple[str, str]
    message: str

    def to_record(self) -> dict:
        return {
            "pair": [int(self.pair[0]), int(self.pair[1])],
            "channels": [self.channels[0], self.channels[1]],
            "error": self.message,
        }


@dataclass(frozen=True)
class CorrelationResult:
    x_field: str
    y_field: str
    r: float
    p_value: float

    def to_record(self) -> dict:
        def _clean(v):
            return float(v) if math.isfinite(v) else None

        return {
            "x": self.x_field,
            "y": self.y_field,
            "r": _clean(self.r),
            "p": _clean(self.p_value),
        }


@dataclass(frozen=True)
class RunSummary:
    """Aggregate view of one run: counts, TMI-increase fraction, panel correlations."""

    pair_count: int
    failed_pair_count: int
    fraction_tmi_increase: float
    correlations: tuple[CorrelationResult, ...]

    def to_record(self) -> dict:
        return {
            "pair_count": int(self.pair_count),
            "failed_pair_count": int(self.failed_pair_count),
            "fraction_tmi_increase": float(self.fraction_tmi_increase),
            "correlations": [c.to_record() for c in self.correlations],
        }

    def correlation(self, x_field: str, y_field: str) -> CorrelationResult:
        for c in self.correlations:
            if (c.x_field, c.y_field) == (x_field, y_field):
                return c
        raise ArgumentError(f"no correlation ({x_field}, {y_field}) in summary")


def sample_pairs(n_channels: int, k: int, seed) -> list[tuple[int, int]]:
    """``k`` distinct unordered channel pairs, uniform without replacement."""
    n = int(n_channels)
    k = int(k)
    if n < 2:
        raise ArgumentError(f"need at least 2 channels, got {n}")
    total = n * (n - 1) // 2
    if not 1 <= k <= total:
        raise ArgumentError(
            f"k must lie in [1, {total}] for {n} channels, got {k}"
        )
    rows, cols = np.triu_indices(n, k=1)
    rng = np.random.default_rng(seed)
    chosen = rng.choice(total, size=k, replace=False)
    return [(int(rows[c]), int(cols[c])) for c in chosen]


def pearson_r(x, y) -> tuple[float, float]:
    """Sample Pearson correlation with a two-sided t-test p-value.

    The p-value is the regularized incomplete beta evaluation of the
    t-statistic with n-2 degrees of freedom, floored at 1e-300.
    """
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.size != b.size:
        raise ArgumentError(
            f"x and y must be equal-length 1-D sequences, got {a.shape} and {b.shape}"
        )
    n = a.size
    if n < 3:
        raise ArgumentError(f"need at least 3 observations, got {n}")
    da = a - a.mean()
    db = b - b.mean()
    na = float(np.sqrt((da * da).sum()))
    nb = float(np.sqrt((db * db).sum()))
    if na == 0.0 or nb == 0.0:
        raise ArgumentError("zero variance in one of the inputs")
    r = float((da * db).sum() / (na * nb))
    r = max(-1.0, min(1.0, r))
    # Two-sided p: I_{1 - r^2}((n-2)/2, 1/2) for the t statistic with n-2 dof.
    tail = 1.0 - r * r
    if tail <= 0.0:
        p = 0.0
    else:
        p = float(betainc(0.5 * (n - 2), 0.5, tail))
    return r, max(p, P_VALUE_FLOOR)


def _zero_lag_fc(
    x1, x2, s1, s2, estimator: EstimatorConfig, names
) -> float:
    if estimator.kind == "gaussian":
        matrix = np.cov(np.column_stack([x1, x2]), rowvar=False, ddof=1)
        return gaussian_mi(CovarianceModel(names, matrix), (names[0],), (names[1],))
    cards = (s1.cardinality, s2.cardinality)
    code = s1.symbols * cards[1] + s2.symbols
    counts = np.bincount(code, minlength=cards[0] * cards[1])
    joint = DiscreteDistribution(
        ((names[0], cards[0]), (names[1], cards[1])), counts / s1.length
    )
    return mutual_information(joint, (names[0],), (names[1],))


def analyze_pair(
    ts: TimeSeriesMatrix,
    pair,
    estimator: EstimatorConfig,
    surrogate_config: SurrogateConfig,
    pair_id: int | None = None,
) -> PairMetrics:
    """Original and surrogate-averaged bundles plus connectivity for one pair."""
    i = ts.channel_index(pair[0])
    j = ts.channel_index(pair[1])
    if i == j:
        raise ArgumentError(f"a pair needs two different channels, got {pair}")
    names = (ts.channel_names[i], ts.channel_names[j])
    x1 = ts.channel(i)
    x2 = ts.channel(j)
    if pair_id is None:
        pair_id = i * ts.channel_count + j
    if estimator.kind == "discrete":
        s1 = discretize(ts, i, estimator.bins)
        s2 = discretize(ts, j, estimator.bins)
        original = pair_bundle(s1, s2, estimator, names=names)
        surrogate = surrogate_average(
            s1, s2, surrogate_config, estimator, pair_id=pair_id, names=names
        )
    else:
        s1 = s2 = None
        original = pair_bundle(x1, x2, estimator, names=names)
        surrogate = surrogate_average(
            x1, x2, surrogate_config, estimator, pair_id=pair_id, names=names
        )
    fc_pearson, _ = pearson_r(x1, x2)
    fc_mi = _zero_lag_fc(x1, x2, s1, s2, estimator, names)
    return PairMetrics(
        pair=(i, j),
        channels=names,
        original=original,
        surrogate=surrogate,
        delta_syn=surrogate.synergy_mmi - original.synergy_mmi,
        delta_tmi=surrogate.temporal_mi - original.temporal_mi,
        fc_pearson=fc_pearson,
        fc_mi=fc_mi,
        estimator_tag=estimator.tag,
    )


def _panel_value(metrics: PairMetrics, field: str, fc_field: str) -> float:
    if field == "fc":
        field = fc_field
    if field == "phi_wms":
        return metrics.original.phi_wms
    return getattr(metrics, field)


def _safe_correlation(xs, ys, x_field, y_field) -> CorrelationResult:
    try:
        r, p = pearson_r(xs, ys)
    except ArgumentError:
        r, p = float("nan"), float("nan")
    return CorrelationResult(x_field, y_field, r, p)


def run_analysis(
    ts: TimeSeriesMatrix,
    pairs,
    estimator: EstimatorConfig,
    surrogate_config: SurrogateConfig,
    seed=0,
    n_jobs: int = 1,
    fc_field: str = "fc_mi",
) -> tuple[list, RunSummary]:
    """Analyse ``pairs`` (a count to sample, or an explicit list) end to end.

    Failed pairs become :class:`PairFailure` records and are excluded from the
    summary; results are ordered by pair index regardless of ``n_jobs``.
    """
    if fc_field not in ("fc_mi", "fc_pearson"):
        raise ArgumentError(f"fc_field must be fc_mi or fc_pearson, got {fc_field!r}")
    if isinstance(pairs, (int, np.integer)):
        pair_list = sample_pairs(ts.channel_count, int(pairs), seed)
    else:
        pair_list = [(ts.channel_index(a), ts.channel_index(b)) for a, b in pairs]
        if not pair_list:
            raise ArgumentError("pairs must be nonempty")
        seen = set()
        for a, b in pair_list:
            if a == b:
                raise ArgumentError(f"pair ({a}, {b}) repeats a channel")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise ArgumentError(f"duplicate pair {key}")
            seen.add(key)

    def _one(pair):
        try:
            return analyze_pair(ts, pair, estimator, surrogate_config)
        except SynphiError as exc:
            i = ts.channel_index(pair[0])
            j = ts.channel_index(pair[1])
            return PairFailure(
                (i, j), (ts.channel_names[i], ts.channel_names[j]), str(exc)
            )

    if n_jobs == 1:
        results = [_one(pair) for pair in pair_list]
    else:
        results = Parallel(n_jobs=n_jobs)(delayed(_one)(pair) for pair in pair_list)
    successes = [m for m in results if isinstance(m, PairMetrics)]
    failed = len(results) - len(successes)
    if not successes:
        raise AnalysisError(f"all {len(results)} pairs failed")
    fraction = float(np.mean([m.delta_tmi > 0.0 for m in successes]))
    correlations = []
    for x_field, y_field in SUMMARY_PANELS:
        xs = [_panel_value(m, x_field, fc_field) for m in successes]
        ys = [_panel_value(m, y_field, fc_field) for m in successes]
        label = fc_field if x_field == "fc" else x_field
        correlations.append(_safe_correlation(xs, ys, label, y_field))
    summary = RunSummary(
        pair_count=len(successes),
        failed_pair_count=failed,
        fraction_tmi_increase=fraction,
        correlations=tuple(correlations),
    )
    return results, summary


def write_results_jsonl(path, results, summary: RunSummary) -> None:
    """One JSON object per pair (failures included), then the summary object."""
    with open(path, "w") as fh:
        for item in results:
            fh.write(json.dumps(item.to_record()) + "\n")
        fh.write(json.dumps({"summary": summary.to_record()}) + "\n")


def csv_mirror_path(path) -> str:
    root, ext = os.path.splitext(str(path))
    return (root if ext else str(path)) + ".csv"


def write_results_csv(path, results) -> None:
    """Flat one-row-per-successful-pair mirror of the JSONL records."""
    rows = [m.to_record() for m in results if isinstance(m, PairMetrics)]
    if not rows:
        raise AnalysisError("no successful pairs to write")
    fields = []
    for row in rows:
        row["pair_i"], row["pair_j"] = row.pop("pair")
        row["channel_i"], row["channel_j"] = row.pop("channels")
    lead = ["pair_i", "pair_j", "channel_i", "channel_j", "estimator"]
    fields = lead + [k for k in rows[0] if k not in lead]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
