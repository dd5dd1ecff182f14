"""Scikit-learn style front end for the pair-disintegration analysis."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .measures import EstimatorConfig
from .pipeline import PairMetrics, run_analysis
from .surrogates import SurrogateConfig
from .timeseries import as_time_series

__all__ = ["DisintegrationAnalysis", "FEATURE_FIELDS"]

FEATURE_FIELDS = (
    "tmi",
    "phi_wms",
    "red_mmi",
    "syn_mmi",
    "surr_tmi",
    "surr_phi_wms",
    "surr_red_mmi",
    "surr_syn_mmi",
    "delta_tmi",
    "delta_syn",
    "fc_pearson",
    "fc_mi",
)


class DisintegrationAnalysis(BaseEstimator):
    """Measure how channel-pair synergy and integration respond to disintegration.

    ``fit(X)`` runs the full pipeline on a (T, N) recording: for each sampled
    pair it computes the original measure bundle, the circular-shift
    surrogate-averaged bundle, their deltas, and functional connectivity.
    Results land in ``pair_metrics_``, ``summary_``, and the per-pair feature
    matrix ``features_``. ``transform(X)`` runs the same analysis on the given
    data and returns the feature matrix, so the estimator composes with
    sklearn pipelines; it does not touch the fitted state.

    Parameters mirror the pipeline configuration: ``pairs`` is a pair count or
    an explicit list of index pairs, ``estimator`` is ``"gaussian"`` or
    ``"discrete"`` (the latter requires ``bins``).
    """

    def __init__(
        self,
        pairs=100,
        n_surrogates: int = 100,
        estimator: str = "gaussian",
        bins=None,
        lag: int = 1,
        min_shift: int = 1,
        max_shift=None,
        shift_both: bool = False,
        random_state: int = 0,
        n_jobs: int = 1,
    ):
        self.pairs = pairs
        self.n_surrogates = n_surrogates
        self.estimator = estimator
        self.bins = bins
        self.lag = lag
        self.min_shift = min_shift
        self.max_shift = max_shift
        self.shift_both = shift_both
        self.random_state = random_state
        self.n_jobs = n_jobs

    def _configs(self):
        est = EstimatorConfig(kind=self.estimator, bins=self.bins, lag=self.lag)
        surr = SurrogateConfig(
            n_permutations=self.n_surrogates,
            master_seed=self.random_state,
            min_shift=self.min_shift,
            max_shift=self.max_shift,
            shift_both=self.shift_both,
        )
        return est, surr

    def _run(self, X):
        ts = as_time_series(X)
        est, surr = self._configs()
        return ts, run_analysis(
            ts,
            self.pairs,
            est,
            surr,
            seed=self.random_state,
            n_jobs=self.n_jobs,
        )

    @staticmethod
    def _feature_matrix(results) -> np.ndarray:
        rows = []
        for m in results:
            if not isinstance(m, PairMetrics):
                continue
            record = m.to_record()
            rows.append([record[field] for field in FEATURE_FIELDS])
        return np.asarray(rows, dtype=np.float64)

    def fit(self, X, y=None):
        ts, (results, summary) = self._run(X)
        self.n_channels_ = ts.channel_count
        self.channel_names_ = ts.channel_names
        self.pair_metrics_ = [m for m in results if isinstance(m, PairMetrics)]
        self.failures_ = [m for m in results if not isinstance(m, PairMetrics)]
        self.pairs_ = [m.pair for m in self.pair_metrics_]
        self.summary_ = summary
        self.features_ = self._feature_matrix(results)
        return self

    def transform(self, X) -> np.ndarray:
        """Per-pair feature matrix for ``X`` (stateless re-analysis)."""
        _, (results, _) = self._run(X)
        return self._feature_matrix(results)

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X, y).features_

    def get_feature_names_out(self, input_features=None) -> np.ndarray:
        return np.asarray(FEATURE_FIELDS, dtype=object)
