"""Discrete and Gaussian information-theoretic primitives, in bits.

Discrete quantities are computed from dense joint probability tables with
base-2 logarithms and the 0*log(0) = 0 convention. Gaussian quantities use
the log-determinant closed form on covariance matrices. Negative mutual
informations within ``NEGATIVE_TOLERANCE`` are clamped to zero; anything more
negative raises :class:`InternalConsistencyError`, because it indicates a bug
rather than data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (
    ArgumentError,
    CardinalityError,
    DegenerateChannelError,
    DegenerateCovarianceError,
    InternalConsistencyError,
    LengthError,
    UnknownVariableError,
)
from .timeseries import TimeSeriesMatrix

__all__ = [
    "MASS_TOLERANCE",
    "NEGATIVE_TOLERANCE",
    "CONDITION_LIMIT",
    "DEFAULT_BINS",
    "DiscreteDistribution",
    "CovarianceModel",
    "SymbolSeries",
    "uniform_distribution",
    "entropy",
    "mutual_information",
    "conditional_mi",
    "marginalize",
    "gaussian_mi",
    "gaussian_cmi",
    "sample_covariance",
    "quantile_symbols",
    "discretize",
    "empirical_joint",
]

MASS_TOLERANCE = 1e-9
NEGATIVE_TOLERANCE = 1e-9
SYMMETRY_TOLERANCE = 1e-9
CONDITION_LIMIT = 1e12
DEFAULT_BINS = 4

_LN2 = math.log(2.0)

VarSet = Union[str, Iterable[str]]


@dataclass(frozen=True)
class DiscreteDistribution:
    """Joint probability table over named finite-alphabet variables.

    ``variables`` is an ordered sequence of ``(name, cardinality)`` pairs.
    ``probs`` may be given flat (row-major over the variable order, first
    variable most significant) or already shaped; it is stored as a read-only
    array of shape ``cardinalities``.
    """

    variables: tuple[tuple[str, int], ...]
    probs: np.ndarray

    def __post_init__(self):
        variables = tuple((str(n), int(c)) for n, c in self.variables)
        if not variables:
            raise ArgumentError("a distribution needs at least one variable")
        names = tuple(n for n, _ in variables)
        if len(set(names)) != len(names):
            raise ArgumentError(f"duplicate variable names in {names}")
        if any(c < 1 for _, c in variables):
            raise ArgumentError("every cardinality must be >= 1")
        cards = tuple(c for _, c in variables)
        table = np.asarray(self.probs, dtype=np.float64)
        size = int(np.prod(cards))
        if table.size != size:
            raise ArgumentError(
                f"probability table has {table.size} entries, expected {size}"
            )
        table = table.reshape(cards).copy()
        if np.any(table < 0.0):
            raise ArgumentError("probability mass must be non-negative")
        total = float(table.sum())
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise ArgumentError(
                f"total probability mass {total!r} is not within {MASS_TOLERANCE} of 1"
            )
        table.setflags(write=False)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "probs", table)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.variables)

    @property
    def cardinalities(self) -> tuple[int, ...]:
        return tuple(c for _, c in self.variables)

    @property
    def n_variables(self) -> int:
        return len(self.variables)


def uniform_distribution(variables) -> DiscreteDistribution:
    """Maximum-entropy distribution over the given ``(name, cardinality)`` pairs."""
    variables = tuple((str(n), int(c)) for n, c in variables)
    size = int(np.prod([c for _, c in variables]))
    return DiscreteDistribution(variables, np.full(size, 1.0 / size))


def _as_names(vars: VarSet, what: str = "vars") -> tuple[str, ...]:
    names = (vars,) if isinstance(vars, str) else tuple(vars)
    if len(set(names)) != len(names):
        raise ArgumentError(f"{what} contains duplicate names: {names}")
    return names


def _resolve_axes(dist: DiscreteDistribution, names, what: str = "vars") -> tuple[int, ...]:
    lookup = {n: i for i, n in enumerate(dist.names)}
    missing = [n for n in names if n not in lookup]
    if missing:
        raise UnknownVariableError(
            f"unknown variable(s) {missing}; have {list(dist.names)}"
        )
    return tuple(sorted(lookup[n] for n in names))


def _marginal_table(dist: DiscreteDistribution, axes) -> np.ndarray:
    drop = tuple(i for i in range(dist.n_variables) if i not in axes)
    return dist.probs.sum(axis=drop) if drop else dist.probs


def _entropy_bits(table: np.ndarray) -> float:
    p = table.reshape(-1)
    p = p[p > 0.0]
    return float(-(p * np.log2(p)).sum())


def _clamped(value: float, what: str) -> float:
    if value >= 0.0:
        return float(value)
    if value >= -NEGATIVE_TOLERANCE:
        return 0.0
    raise InternalConsistencyError(
        f"{what} = {value!r} is negative beyond tolerance {NEGATIVE_TOLERANCE}"
    )


def _require_disjoint(*sets):
    for i, (name_a, a) in enumerate(sets):
        for name_b, b in sets[i + 1:]:
            overlap = set(a) & set(b)
            if overlap:
                raise ArgumentError(
                    f"{name_a} and {name_b} overlap on {sorted(overlap)}"
                )


def entropy(dist: DiscreteDistribution, vars: VarSet | None = None) -> float:
    """Shannon entropy H(vars) in bits of the marginal over ``vars``.

    ``vars=None`` means all variables.
    """
    if vars is None:
        axes = tuple(range(dist.n_variables))
    else:
        names = _as_names(vars)
        if not names:
            raise ArgumentError("vars must be nonempty")
        axes = _resolve_axes(dist, names)
    return _entropy_bits(_marginal_table(dist, axes))


def mutual_information(dist: DiscreteDistribution, a: VarSet, b: VarSet) -> float:
    """I(a;b) = H(a) + H(b) - H(a,b), clamped at zero within tolerance."""
    a_names = _as_names(a, "a")
    b_names = _as_names(b, "b")
    if not a_names or not b_names:
        raise ArgumentError("both variable sets must be nonempty")
    _require_disjoint(("a", a_names), ("b", b_names))
    value = (
        entropy(dist, a_names)
        + entropy(dist, b_names)
        - entropy(dist, a_names + b_names)
    )
    return _clamped(value, "mutual information")


def conditional_mi(
    dist: DiscreteDistribution, a: VarSet, b: VarSet, c: VarSet = ()
) -> float:
    """I(a;b|c) = H(a,c) + H(b,c) - H(a,b,c) - H(c).

    An empty conditioning set reduces to :func:`mutual_information`.
    """
    a_names = _as_names(a, "a")
    b_names = _as_names(b, "b")
    c_names = _as_names(c, "c")
    if not a_names or not b_names:
        raise ArgumentError("a and b must be nonempty")
    _require_disjoint(("a", a_names), ("b", b_names), ("c", c_names))
    if not c_names:
        return mutual_information(dist, a_names, b_names)
    value = (
        entropy(dist, a_names + c_names)
        + entropy(dist, b_names + c_names)
        - entropy(dist, a_names + b_names + c_names)
        - entropy(dist, c_names)
    )
    return _clamped(value, "conditional mutual information")


def marginalize(dist: DiscreteDistribution, keep: VarSet) -> DiscreteDistribution:
    """Sum out every variable not in ``keep``; result preserves the original order."""
    names = _as_names(keep, "keep")
    if not names:
        raise ArgumentError("keep must be nonempty")
    axes = _resolve_axes(dist, names, "keep")
    table = _marginal_table(dist, axes)
    return DiscreteDistribution(tuple(dist.variables[i] for i in axes), table)


@dataclass(frozen=True)
class CovarianceModel:
    """Named covariance matrix feeding the Gaussian closed-form estimator."""

    variables: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        names = tuple(str(n) for n in self.variables)
        if not names:
            raise ArgumentError("at least one variable is required")
        if len(set(names)) != len(names):
            raise ArgumentError(f"duplicate variable names in {names}")
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ArgumentError(f"covariance matrix must be square, got shape {m.shape}")
        if m.shape[0] != len(names):
            raise ArgumentError(
                f"matrix is {m.shape[0]}x{m.shape[0]} but there are {len(names)} variables"
            )
        asym = float(np.abs(m - m.T).max()) if m.size else 0.0
        if asym > SYMMETRY_TOLERANCE:
            raise ArgumentError(f"matrix is asymmetric by {asym:.3g}")
        diag = np.diag(m)
        if np.any(diag <= 0.0):
            ch = int(np.argmax(diag <= 0.0))
            raise DegenerateChannelError(
                f"variable {names[ch]!r} has non-positive variance {diag[ch]!r}"
            )
        m = 0.5 * (m + m.T)
        m.setflags(write=False)
        object.__setattr__(self, "variables", names)
        object.__setattr__(self, "matrix", m)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariableError(
                f"unknown variable {name!r}; have {list(self.variables)}"
            ) from None


def _cov_axes(model: CovarianceModel, vars: VarSet, what: str) -> tuple[int, ...]:
    names = _as_names(vars, what)
    return tuple(model.index(n) for n in names)


def _checked_logdet(matrix: np.ndarray, axes, what: str) -> float:
    sub = matrix[np.ix_(axes, axes)]
    cond = np.linalg.cond(sub)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise DegenerateCovarianceError(
            f"{what} covariance block is near-singular (condition number {cond:.3g}, "
            f"limit {CONDITION_LIMIT:.0e})"
        )
    sign, value = np.linalg.slogdet(sub)
    if sign <= 0.0:
        raise DegenerateCovarianceError(f"{what} covariance block is not positive definite")
    return float(value)


def _gaussian_mi_from_matrix(matrix: np.ndarray, a_axes, b_axes) -> float:
    ld_a = _checked_logdet(matrix, a_axes, "first")
    ld_b = _checked_logdet(matrix, b_axes, "second")
    ld_ab = _checked_logdet(matrix, tuple(a_axes) + tuple(b_axes), "joint")
    return _clamped(0.5 * (ld_a + ld_b - ld_ab) / _LN2, "Gaussian mutual information")


def gaussian_mi(model: CovarianceModel, a: VarSet, b: VarSet) -> float:
    """Closed-form Gaussian MI in bits: 0.5*log2(det(S_a)*det(S_b)/det(S_ab))."""
    a_axes = _cov_axes(model, a, "a")
    b_axes = _cov_axes(model, b, "b")
    if not a_axes or not b_axes:
        raise ArgumentError("both variable sets must be nonempty")
    if set(a_axes) & set(b_axes):
        raise ArgumentError("variable sets overlap")
    return _gaussian_mi_from_matrix(model.matrix, a_axes, b_axes)


def gaussian_cmi(model: CovarianceModel, a: VarSet, b: VarSet, z: VarSet = ()) -> float:
    """Gaussian conditional MI: ``z`` is partialled out via the Schur complement.

    Reduces to :func:`gaussian_mi` when ``z`` is empty.
    """
    a_axes = _cov_axes(model, a, "a")
    b_axes = _cov_axes(model, b, "b")
    z_axes = _cov_axes(model, z, "z")
    if not a_axes or not b_axes:
        raise ArgumentError("a and b must be nonempty")
    groups = (("a", a_axes), ("b", b_axes), ("z", z_axes))
    for i, (name_a, ax_a) in enumerate(groups):
        for name_b, ax_b in groups[i + 1:]:
            if set(ax_a) & set(ax_b):
                raise ArgumentError(f"{name_a} and {name_b} overlap")
    if not z_axes:
        return _gaussian_mi_from_matrix(model.matrix, a_axes, b_axes)
    m = model.matrix
    _checked_logdet(m, z_axes, "conditioning")
    keep = tuple(a_axes) + tuple(b_axes)
    sz = m[np.ix_(z_axes, z_axes)]
    cross = m[np.ix_(keep, z_axes)]
    conditional = m[np.ix_(keep, keep)] - cross @ np.linalg.solve(sz, cross.T)
    conditional = 0.5 * (conditional + conditional.T)
    ia = tuple(range(len(a_axes)))
    ib = tuple(range(len(a_axes), len(keep)))
    return _gaussian_mi_from_matrix(conditional, ia, ib)


def sample_covariance(ts: TimeSeriesMatrix, channels=None) -> CovarianceModel:
    """Unbiased (1/(T-1)) covariance of the selected channels."""
    if channels is None:
        idx = list(range(ts.channel_count))
    else:
        idx = [ts.channel_index(c) for c in channels]
        if not idx:
            raise ArgumentError("channels must be nonempty")
    if ts.sample_count < 8:
        raise LengthError(f"need at least 8 samples, got {ts.sample_count}")
    names = tuple(ts.channel_names[i] for i in idx)
    data = ts.samples[:, idx]
    spans = data.max(axis=0) - data.min(axis=0)
    if np.any(spans == 0.0):
        ch = int(np.argmax(spans == 0.0))
        raise DegenerateChannelError(f"channel {names[ch]!r} is constant")
    matrix = np.atleast_2d(np.cov(data, rowvar=False, ddof=1))
    return CovarianceModel(names, matrix)


@dataclass(frozen=True)
class SymbolSeries:
    """Integer symbol sequence with a fixed alphabet size."""

    symbols: np.ndarray
    cardinality: int

    def __post_init__(self):
        card = int(self.cardinality)
        if card < 1:
            raise ArgumentError("cardinality must be >= 1")
        sym = np.asarray(self.symbols, dtype=np.int64)
        if sym.ndim != 1:
            raise ArgumentError(f"symbols must be 1-D, got shape {sym.shape}")
        if sym.size and (sym.min() < 0 or sym.max() >= card):
            raise ArgumentError(
                f"symbols must lie in [0, {card}), got range "
                f"[{int(sym.min())}, {int(sym.max())}]"
            )
        sym = sym.copy()
        sym.setflags(write=False)
        object.__setattr__(self, "symbols", sym)
        object.__setattr__(self, "cardinality", card)

    @property
    def length(self) -> int:
        return int(self.symbols.size)

    def __len__(self) -> int:
        return self.length


def quantile_symbols(values, bins: int) -> np.ndarray:
    """Equal-count binning of a 1-D array; ties broken by sample order.

    Every bin receives floor(T/bins) or ceil(T/bins) samples by construction.
    """
    if bins < 2:
        raise ArgumentError(f"bins must be >= 2, got {bins}")
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1:
        raise ArgumentError(f"values must be 1-D, got shape {x.shape}")
    distinct = int(np.unique(x).size)
    if bins > distinct:
        raise CardinalityError(
            f"cannot form {bins} bins from {distinct} distinct values"
        )
    order = np.argsort(x, kind="stable")
    symbols = np.empty(x.size, dtype=np.int64)
    symbols[order] = (np.arange(x.size, dtype=np.int64) * bins) // x.size
    return symbols


def discretize(ts: TimeSeriesMatrix, channel, bins: int = DEFAULT_BINS) -> SymbolSeries:
    """Quantile-bin one channel into a :class:`SymbolSeries` with ``bins`` symbols."""
    return SymbolSeries(quantile_symbols(ts.channel(channel), bins), bins)


def empirical_joint(
    past: Sequence[SymbolSeries], future_lag: int, names=None
) -> DiscreteDistribution:
    """Plug-in joint table over (all channels at t, all channels at t+lag).

    Variables are named ``<name>_t`` and ``<name>_t+<lag>``; default base
    names are ``x1..xn``.
    """
    series = list(past)
    if not series:
        raise ArgumentError("at least one symbol series is required")
    lag = int(future_lag)
    if lag < 1:
        raise ArgumentError(f"future_lag must be >= 1, got {lag}")
    length = series[0].length
    for s in series[1:]:
        if s.length != length:
            raise LengthError(
                f"series lengths differ: {length} vs {s.length}"
            )
    if length - lag < 1:
        raise LengthError(f"need more than lag={lag} samples, got {length}")
    if names is None:
        names = [f"x{i + 1}" for i in range(len(series))]
    else:
        names = [str(n) for n in names]
        if len(names) != len(series):
            raise ArgumentError(f"got {len(names)} names for {len(series)} series")
    cards = [s.cardinality for s in series] * 2
    columns = [s.symbols[: length - lag] for s in series]
    columns += [s.symbols[lag:] for s in series]
    weights = np.ones(len(cards), dtype=np.int64)
    for i in range(len(cards) - 2, -1, -1):
        weights[i] = weights[i + 1] * cards[i + 1]
    code = sum(col * w for col, w in zip(columns, weights))
    counts = np.bincount(code, minlength=int(np.prod(cards)))
    variables = [(f"{n}_t", c) for n, c in zip(names, cards)]
    variables += [(f"{n}_t+{lag}", c) for n, c in zip(names, cards)]
    return DiscreteDistribution(tuple(variables), counts / (length - lag))
