"""Headline temporal-information measures over a joint past-future distribution.

Every operation accepts either a discrete joint past-future table or a
covariance matrix, as long as the variables follow the ``<base>_t`` /
``<base>_t+k`` naming convention; the estimator is picked by type.
Values are bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import ArgumentError, LengthError
from .info import (
    CovarianceModel,
    DiscreteDistribution,
    SymbolSeries,
    _clamped,
    conditional_mi,
    empirical_joint,
    gaussian_mi,
    mutual_information,
    quantile_symbols,
)
from .systems import DynamicalSystem, independent_twin, joint_past_future

__all__ = [
    "PastFutureStructure",
    "past_future_structure",
    "MeasureBundle",
    "temporal_mi",
    "phi_wms",
    "redundancy_mmi",
    "synergy_mmi",
    "single_source_mi",
    "measure_bundle",
    "measure_bundle_gaussian",
    "delta_synergy",
    "delta_synergy_closed_form",
    "EstimatorConfig",
    "pair_bundle",
]


@dataclass(frozen=True)
class PastFutureStructure:
    """Past/future split and per-element pairing recovered from variable names."""

    bases: tuple[str, ...]
    past: tuple[str, ...]
    future: tuple[str, ...]
    lag: int

    @property
    def n_elements(self) -> int:
        return len(self.bases)


def past_future_structure(names) -> PastFutureStructure:
    """Parse ``<base>_t`` / ``<base>_t+k`` variable names into an element map.

    Raises :class:`ArgumentError` when the split metadata is missing: unparsable
    names, unmatched elements, or mixed lags.
    """
    past: dict[str, str] = {}
    future: dict[str, str] = {}
    lags = set()
    for name in names:
        if name.endswith("_t"):
            base = name[: -len("_t")]
            if base in past:
                raise ArgumentError(f"duplicate past variable for element {base!r}")
            past[base] = name
            continue
        pos = name.rfind("_t+")
        if pos > 0:
            try:
                lag = int(name[pos + len("_t+"):])
            except ValueError:
                lag = None
            if lag is not None and lag >= 1:
                base = name[:pos]
                if base in future:
                    raise ArgumentError(f"duplicate future variable for element {base!r}")
                future[base] = name
                lags.add(lag)
                continue
        raise ArgumentError(
            f"variable {name!r} has neither an '_t' nor an '_t+<lag>' suffix; "
            "no past/future split available"
        )
    if not past or not future:
        raise ArgumentError("need at least one past and one future variable")
    if set(past) != set(future):
        raise ArgumentError(
            f"past elements {sorted(past)} and future elements {sorted(future)} "
            "do not pair up"
        )
    if len(lags) != 1:
        raise ArgumentError(f"future variables mix lags {sorted(lags)}")
    bases = tuple(past)
    return PastFutureStructure(
        bases,
        tuple(past[b] for b in bases),
        tuple(future[b] for b in bases),
        lags.pop(),
    )


@dataclass(frozen=True)
class MeasureBundle:
    """Per-system bundle of the headline quantities, in bits.

    ``single_source_mi[i]`` is I(X^i_t; X_{t+1}); ``self_mi[i]`` is
    I(X^i_t; X^i_{t+1}); ``argmax_source`` is the index attaining the largest
    single-source MI (ties broken by lowest index).
    """

    temporal_mi: float
    phi_wms: float
    redundancy_mmi: float
    synergy_mmi: float
    single_source_mi: tuple[float, ...]
    self_mi: tuple[float, ...]
    argmax_source: int

    def to_record(self, prefix: str = "") -> dict:
        """Flat key-value form with the fixed field names used in output files."""
        record = {
            f"{prefix}tmi": float(self.temporal_mi),
            f"{prefix}phi_wms": float(self.phi_wms),
            f"{prefix}red_mmi": float(self.redundancy_mmi),
            f"{prefix}syn_mmi": float(self.synergy_mmi),
        }
        for i, v in enumerate(self.single_source_mi, start=1):
            record[f"{prefix}src_mi_{i}"] = float(v)
        for i, v in enumerate(self.self_mi, start=1):
            record[f"{prefix}self_mi_{i}"] = float(v)
        record[f"{prefix}argmax_source"] = int(self.argmax_source)
        return record


def _mi_caller(dist_or_cov):
    if isinstance(dist_or_cov, DiscreteDistribution):
        return mutual_information
    if isinstance(dist_or_cov, CovarianceModel):
        return gaussian_mi
    raise ArgumentError(
        f"expected a DiscreteDistribution or CovarianceModel, got {type(dist_or_cov)!r}"
    )


def _structure(dist_or_cov) -> PastFutureStructure:
    names = (
        dist_or_cov.names
        if isinstance(dist_or_cov, DiscreteDistribution)
        else dist_or_cov.variables
    )
    return past_future_structure(names)


def temporal_mi(jpf) -> float:
    """Total predictive information I(X_t; X_{t+1}) of the whole system."""
    st = _structure(jpf)
    return _mi_caller(jpf)(jpf, st.past, st.future)


def single_source_mi(jpf, element: int) -> float:
    """I(X^i_t; X_{t+1}): what one past element says about the whole future."""
    st = _structure(jpf)
    if not 0 <= int(element) < st.n_elements:
        raise ArgumentError(f"element {element} out of range [0, {st.n_elements})")
    return _mi_caller(jpf)(jpf, (st.past[int(element)],), st.future)


def phi_wms(jpf) -> float:
    """Whole-minus-sum integrated information.

    Temporal MI minus the summed per-element self MIs; deliberately not
    clamped, since negative values (redundancy-dominated systems) are
    meaningful.
    """
    st = _structure(jpf)
    mi = _mi_caller(jpf)
    total = mi(jpf, st.past, st.future)
    return total - sum(mi(jpf, (p,), (f,)) for p, f in zip(st.past, st.future))


def redundancy_mmi(jpf) -> float:
    """Minimum-mutual-information redundancy: min over all ordered element
    pairs (i, j), self-pairs included, of I(X^i_t; X^j_{t+1})."""
    st = _structure(jpf)
    if st.n_elements < 2:
        raise ArgumentError("redundancy needs at least 2 elements")
    mi = _mi_caller(jpf)
    return min(
        mi(jpf, (p,), (f,)) for p, f in product(st.past, st.future)
    )


def synergy_mmi(jpf) -> float:
    """MMI synergy: temporal MI minus the largest single-source MI."""
    st = _structure(jpf)
    if st.n_elements < 2:
        raise ArgumentError("synergy needs at least 2 elements")
    mi = _mi_caller(jpf)
    total = mi(jpf, st.past, st.future)
    best = max(mi(jpf, (p,), st.future) for p in st.past)
    return _clamped(total - best, "synergy")


def measure_bundle(jpf) -> MeasureBundle:
    """All headline quantities of one joint past-future distribution."""
    st = _structure(jpf)
    if st.n_elements < 2:
        raise ArgumentError("a measure bundle needs at least 2 elements")
    mi = _mi_caller(jpf)
    total = mi(jpf, st.past, st.future)
    self_mis = tuple(mi(jpf, (p,), (f,)) for p, f in zip(st.past, st.future))
    source_mis = tuple(mi(jpf, (p,), st.future) for p in st.past)
    redundancy = min(mi(jpf, (p,), (f,)) for p, f in product(st.past, st.future))
    argmax = int(np.argmax(source_mis))
    return MeasureBundle(
        temporal_mi=total,
        phi_wms=total - sum(self_mis),
        redundancy_mmi=redundancy,
        synergy_mmi=_clamped(total - source_mis[argmax], "synergy"),
        single_source_mi=source_mis,
        self_mi=self_mis,
        argmax_source=argmax,
    )


def measure_bundle_gaussian(cov: CovarianceModel) -> MeasureBundle:
    """Gaussian closed-form counterpart of :func:`measure_bundle`."""
    return measure_bundle(cov)


def delta_synergy(system: DynamicalSystem) -> float:
    """Synergy change caused by disintegration: I_Syn(twin) - I_Syn(original)."""
    original = synergy_mmi(joint_past_future(system))
    twin = synergy_mmi(joint_past_future(independent_twin(system)))
    return twin - original


def delta_synergy_closed_form(jpf) -> float:
    """Closed-form synergy-change diagnostic, evaluated on the original system only.

    With the argmax-source element relabelled X^1 and the other X^2, returns

        I(X^1_t; X^2_t) - I(X^2_t; {X^1_t, X^1_{t+1}} | X^2_{t+1})

    i.e. the instantaneous source coupling minus the residual cross coupling.
    By the chain rule this equals I(X^2_t; X^2_{t+1}) - I_Syn: the weaker
    source's self-predictive information minus the synergy. It matches
    :func:`delta_synergy` whenever the argmax source also dominates in the
    twin; argmax-unstable systems deviate and should be flagged, not hidden.
    """
    st = _structure(jpf)
    if st.n_elements != 2:
        raise ArgumentError(
            f"the closed form is defined for exactly 2 elements, got {st.n_elements}"
        )
    mi = _mi_caller(jpf)
    sources = [mi(jpf, (p,), st.future) for p in st.past]
    a = int(np.argmax(sources))
    j = 1 - a
    coupling = mi(jpf, (st.past[a],), (st.past[j],))
    if isinstance(jpf, CovarianceModel):
        from .info import gaussian_cmi as cmi
    else:
        cmi = conditional_mi
    residual = cmi(
        jpf, (st.past[j],), (st.past[a], st.future[a]), (st.future[j],)
    )
    return coupling - residual


@dataclass(frozen=True)
class EstimatorConfig:
    """How a pair of channels is turned into a measure bundle.

    ``gaussian`` uses the lagged covariance closed form; ``discrete`` quantile
    bins each channel (an explicit bin count is required) and uses the plug-in
    joint table.
    """

    kind: str = "gaussian"
    bins: int | None = None
    lag: int = 1

    def __post_init__(self):
        if self.kind not in ("gaussian", "discrete"):
            raise ArgumentError(f"unknown estimator kind {self.kind!r}")
        if int(self.lag) < 1:
            raise ArgumentError(f"lag must be >= 1, got {self.lag}")
        object.__setattr__(self, "lag", int(self.lag))
        if self.kind == "discrete":
            if self.bins is None:
                raise ArgumentError("discrete estimation requires an explicit bin count")
            if int(self.bins) < 2:
                raise ArgumentError(f"bins must be >= 2, got {self.bins}")
            object.__setattr__(self, "bins", int(self.bins))

    @property
    def tag(self) -> str:
        return "gaussian" if self.kind == "gaussian" else f"discrete({self.bins})"


def _as_symbols(channel, bins: int) -> SymbolSeries:
    if isinstance(channel, SymbolSeries):
        return channel
    values = np.asarray(channel, dtype=np.float64)
    return SymbolSeries(quantile_symbols(values, bins), bins)


def _as_floats(channel) -> np.ndarray:
    if isinstance(channel, SymbolSeries):
        return channel.symbols.astype(np.float64)
    arr = np.asarray(channel, dtype=np.float64)
    if arr.ndim != 1:
        raise ArgumentError(f"channels must be 1-D, got shape {arr.shape}")
    return arr


def pair_bundle(x1, x2, config: EstimatorConfig, names=("x1", "x2")) -> MeasureBundle:
    """Measure bundle of a channel pair's lag-``config.lag`` past/future joint.

    Channels may be real-valued arrays or pre-binned :class:`SymbolSeries`.
    """
    n1, n2 = (str(n) for n in names)
    if config.kind == "discrete":
        s1 = _as_symbols(x1, config.bins)
        s2 = _as_symbols(x2, config.bins)
        jpf = empirical_joint([s1, s2], config.lag, names=(n1, n2))
        return measure_bundle(jpf)
    a1 = _as_floats(x1)
    a2 = _as_floats(x2)
    if a1.size != a2.size:
        raise LengthError(f"channel lengths differ: {a1.size} vs {a2.size}")
    lag = config.lag
    if a1.size - lag < 8:
        raise LengthError(
            f"need more than lag+8 = {lag + 8} samples for the lagged covariance, "
            f"got {a1.size}"
        )
    columns = np.column_stack([a1[:-lag], a2[:-lag], a1[lag:], a2[lag:]])
    matrix = np.cov(columns, rowvar=False, ddof=1)
    cov = CovarianceModel(
        (f"{n1}_t", f"{n2}_t", f"{n1}_t+{lag}", f"{n2}_t+{lag}"), matrix
    )
    return measure_bundle_gaussian(cov)
