"""Transition-probability-matrix systems with element structure.

Joint states are indexed mixed-radix with element 1 as the most significant
digit, i.e. exactly numpy's C-order ravelling of per-element values. That
convention is fixed so TPM files are unambiguous.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from functools import reduce

import numpy as np

from .errors import ArgumentError, ConvergenceWarning, ParseError
from .info import DiscreteDistribution, SymbolSeries, uniform_distribution

__all__ = [
    "ROW_TOLERANCE",
    "TransitionModel",
    "DynamicalSystem",
    "state_index",
    "state_values",
    "make_system_x",
    "make_system_y",
    "random_system",
    "joint_past_future",
    "marginal_transition",
    "independent_twin",
    "simulate",
    "stationary_distribution",
    "with_stationary_input",
    "read_tpm",
    "write_tpm",
]

ROW_TOLERANCE = 1e-9


def state_index(values, cardinalities) -> int:
    """Mixed-radix encoding of per-element values (element 1 most significant)."""
    return int(np.ravel_multi_index(tuple(values), tuple(cardinalities)))


def state_values(index, cardinalities) -> tuple[int, ...]:
    """Inverse of :func:`state_index`."""
    return tuple(int(v) for v in np.unravel_index(int(index), tuple(cardinalities)))


@dataclass(frozen=True)
class TransitionModel:
    """Row-stochastic next-state matrix over mixed-radix joint states."""

    element_cardinalities: tuple[int, ...]
    rows: np.ndarray

    def __post_init__(self):
        cards = tuple(int(c) for c in self.element_cardinalities)
        if not cards or any(c < 1 for c in cards):
            raise ArgumentError(f"bad element cardinalities {cards}")
        size = int(np.prod(cards))
        rows = np.asarray(self.rows, dtype=np.float64)
        if rows.shape != (size, size):
            raise ArgumentError(
                f"transition matrix must be {size}x{size} for elements {cards}, "
                f"got shape {rows.shape}"
            )
        if np.any(rows < 0.0):
            raise ArgumentError("transition probabilities must be non-negative")
        sums = rows.sum(axis=1)
        bad = np.abs(sums - 1.0) > ROW_TOLERANCE
        if bad.any():
            s = int(np.argmax(bad))
            raise ArgumentError(
                f"row {s} sums to {sums[s]!r}, not within {ROW_TOLERANCE} of 1"
            )
        rows = rows.copy()
        rows.setflags(write=False)
        object.__setattr__(self, "element_cardinalities", cards)
        object.__setattr__(self, "rows", rows)

    @property
    def n_elements(self) -> int:
        return len(self.element_cardinalities)

    @property
    def state_count(self) -> int:
        return self.rows.shape[0]


@dataclass(frozen=True)
class DynamicalSystem:
    """A transition model plus a distribution over the past joint state."""

    model: TransitionModel
    input_dist: DiscreteDistribution

    def __post_init__(self):
        if self.input_dist.cardinalities != self.model.element_cardinalities:
            raise ArgumentError(
                f"input distribution over {self.input_dist.cardinalities} does not "
                f"match element cardinalities {self.model.element_cardinalities}"
            )

    @property
    def n_elements(self) -> int:
        return self.model.n_elements

    @property
    def element_names(self) -> tuple[str, ...]:
        return self.input_dist.names

    @property
    def element_cardinalities(self) -> tuple[int, ...]:
        return self.model.element_cardinalities


def _uniform_system(cards, rows, names=None) -> DynamicalSystem:
    cards = tuple(int(c) for c in cards)
    if names is None:
        names = tuple(f"x{i + 1}" for i in range(len(cards)))
    model = TransitionModel(cards, rows)
    return DynamicalSystem(model, uniform_distribution(zip(names, cards)))


def make_system_x() -> DynamicalSystem:
    """Two independent deterministic oscillators: (a, b) -> (1-a, 1-b)."""
    rows = np.zeros((4, 4))
    for a in (0, 1):
        for b in (0, 1):
            rows[state_index((a, b), (2, 2)), state_index((1 - a, 1 - b), (2, 2))] = 1.0
    return _uniform_system((2, 2), rows, ("x1", "x2"))


def make_system_y() -> DynamicalSystem:
    """Parity-preserving random system: the two next states with the same
    parity as the current state each receive probability 1/2."""
    rows = np.zeros((4, 4))
    for s in range(4):
        a, b = state_values(s, (2, 2))
        for s2 in range(4):
            c, d = state_values(s2, (2, 2))
            if (a ^ b) == (c ^ d):
                rows[s, s2] = 0.5
    return _uniform_system((2, 2), rows, ("y1", "y2"))


def random_system(element_cardinalities, seed, concentration: float = 1.0) -> DynamicalSystem:
    """Random system with rows drawn from a symmetric Dirichlet.

    Small concentrations give near-deterministic rows, large ones near-uniform
    rows. The input distribution is uniform. Deterministic given ``seed``.
    """
    if not concentration > 0.0:
        raise ArgumentError(f"concentration must be positive, got {concentration}")
    cards = tuple(int(c) for c in element_cardinalities)
    size = int(np.prod(cards))
    rng = np.random.default_rng(seed)
    rows = rng.dirichlet(np.full(size, float(concentration)), size=size)
    return _uniform_system(cards, rows)


def joint_past_future(system: DynamicalSystem) -> DiscreteDistribution:
    """Joint distribution over (X^1_t..X^n_t, X^1_{t+1}..X^n_{t+1}).

    Mass of (s, s') is input(s) * rows[s, s']; variables are the element names
    suffixed ``_t`` and ``_t+1``.
    """
    cards = system.element_cardinalities
    mass = system.input_dist.probs.reshape(-1)[:, None] * system.model.rows
    variables = [(f"{n}_t", c) for n, c in zip(system.element_names, cards)]
    variables += [(f"{n}_t+1", c) for n, c in zip(system.element_names, cards)]
    return DiscreteDistribution(tuple(variables), mass.reshape(cards + cards))


def marginal_transition(system: DynamicalSystem, element: int) -> DynamicalSystem:
    """Single-element system carrying element ``element``'s own dynamics.

    The transition P(x^i_{t+1} | x^i_t) comes from the joint past-future table
    by marginalisation and conditioning; rows conditioned on zero-probability
    values are filled uniform (they carry no mass).
    """
    n = system.n_elements
    if not 0 <= int(element) < n:
        raise ArgumentError(f"element {element} out of range [0, {n})")
    element = int(element)
    name, card = system.input_dist.variables[element]
    jpf = joint_past_future(system)
    axes_to_drop = tuple(i for i in range(2 * n) if i not in (element, n + element))
    pair = jpf.probs.sum(axis=axes_to_drop) if axes_to_drop else jpf.probs
    occupancy = pair.sum(axis=1)
    rows = np.full((card, card), 1.0 / card)
    occupied = occupancy > 0.0
    rows[occupied] = pair[occupied] / occupancy[occupied, None]
    model = TransitionModel((card,), rows)
    return DynamicalSystem(model, DiscreteDistribution(((name, card),), occupancy))


def independent_twin(system: DynamicalSystem) -> DynamicalSystem:
    """Product-of-marginals twin: same per-element first-order dynamics, no
    cross-element coupling.

    The input distribution is the product of the element input marginals and
    each transition row is the product of the per-element marginal transition
    rows. For product-input systems this preserves every element's
    (x^i_t, x^i_{t+1}) pair table exactly.
    """
    parts = [marginal_transition(system, i) for i in range(system.n_elements)]
    rows = reduce(np.kron, [p.model.rows for p in parts])
    input_table = reduce(np.kron, [p.input_dist.probs for p in parts])
    model = TransitionModel(system.element_cardinalities, rows)
    return DynamicalSystem(
        model, DiscreteDistribution(system.input_dist.variables, input_table)
    )


def simulate(system: DynamicalSystem, steps: int, seed) -> list[SymbolSeries]:
    """Sample a trajectory: initial state from the input distribution, then
    ``steps - 1`` row-sampled transitions. Returns one series per element."""
    steps = int(steps)
    if steps < 1:
        raise ArgumentError(f"steps must be >= 1, got {steps}")
    rng = np.random.default_rng(seed)
    cards = system.element_cardinalities
    size = system.model.state_count
    states = np.empty(steps, dtype=np.int64)
    states[0] = rng.choice(size, p=system.input_dist.probs.reshape(-1))
    if steps > 1:
        cumulative = np.cumsum(system.model.rows, axis=1)
        draws = rng.random(steps - 1)
        s = int(states[0])
        for t in range(1, steps):
            s = int(np.searchsorted(cumulative[s], draws[t - 1], side="right"))
            if s >= size:
                s = size - 1
            states[t] = s
    values = np.unravel_index(states, cards)
    return [SymbolSeries(v, c) for v, c in zip(values, cards)]


def stationary_distribution(
    model: TransitionModel, names=None, residual_target: float = 1e-12
) -> DiscreteDistribution:
    """Fixed point of the row-stochastic map reached from the uniform start.

    Iterates the half-lazy operator (I+P)/2 (same fixed points as P, but
    convergent for periodic chains) with exponentiation by squaring, so for
    periodic or reducible chains the result is the Cesaro-style limit of the
    uniform start. The residual is measured against the original map; if it
    stays above 1e-6 a :class:`ConvergenceWarning` is emitted.
    """
    p = model.rows
    size = model.state_count
    uniform = np.full(size, 1.0 / size)
    v = uniform
    residual = float(np.abs(v @ p - v).sum())
    if residual > residual_target:
        power = 0.5 * (np.eye(size) + p)
        for _ in range(60):
            power = power @ power
            power /= power.sum(axis=1, keepdims=True)
            v = uniform @ power
            v = v / v.sum()
            residual = float(np.abs(v @ p - v).sum())
            if residual <= residual_target:
                break
    if residual > 1e-6:
        warnings.warn(
            f"stationary iteration stopped at residual {residual:.3g}",
            ConvergenceWarning,
            stacklevel=2,
        )
    v = np.clip(v, 0.0, None)
    v = v / v.sum()
    cards = model.element_cardinalities
    if names is None:
        names = tuple(f"x{i + 1}" for i in range(len(cards)))
    return DiscreteDistribution(tuple(zip(names, cards)), v.reshape(cards))


def with_stationary_input(system: DynamicalSystem) -> DynamicalSystem:
    """Opt-in alternative to the uniform input: run the system at its
    stationary (Cesaro) distribution."""
    dist = stationary_distribution(system.model, names=system.element_names)
    return replace(system, input_dist=dist)


def write_tpm(model: TransitionModel, path) -> None:
    """Write the plain-text TPM format: ``elements: c1,c2,...`` then one
    whitespace-separated row per past state in mixed-radix order."""
    with open(path, "w") as fh:
        fh.write("elements: " + ",".join(str(c) for c in model.element_cardinalities) + "\n")
        for row in model.rows:
            fh.write(" ".join(repr(float(p)) for p in row) + "\n")


def read_tpm(path) -> TransitionModel:
    """Parse the TPM format written by :func:`write_tpm`.

    Malformed content raises :class:`ParseError` naming the offending row.
    """
    with open(path) as fh:
        lines = [line.strip() for line in fh]
    lines = [line for line in lines if line]
    if not lines or not lines[0].startswith("elements:"):
        raise ParseError(f"{path}: missing 'elements:' header line")
    try:
        cards = tuple(int(tok) for tok in lines[0][len("elements:"):].split(","))
    except ValueError:
        raise ParseError(f"{path}: malformed header {lines[0]!r}") from None
    if not cards or any(c < 1 for c in cards):
        raise ParseError(f"{path}: bad cardinalities {cards}")
    size = int(np.prod(cards))
    body = lines[1:]
    if len(body) != size:
        raise ParseError(f"{path}: expected {size} rows, found {len(body)}")
    rows = np.empty((size, size))
    for r, line in enumerate(body):
        tokens = line.split()
        if len(tokens) != size:
            raise ParseError(
                f"{path}: row {r}: expected {size} probabilities, found {len(tokens)}"
            )
        try:
            rows[r] = [float(tok) for tok in tokens]
        except ValueError as exc:
            raise ParseError(f"{path}: row {r}: {exc}") from None
    try:
        return TransitionModel(cards, rows)
    except ArgumentError as exc:
        raise ParseError(f"{path}: {exc}") from None
