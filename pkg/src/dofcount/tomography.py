"""Measuring informational degrees of freedom K.

A system's state is characterized by its fiducial probabilities: the
probability of every value of every variable (card box, urn) or of every
outcome of every basis in the observable set (quantum).  Stacking the
fiducial vectors of an ensemble of states gives a probability matrix whose
rank is the number of linearly independent probabilities needed to pin a
state down.

Two counts are always reported side by side:

* ``K_rank`` -- the rank of the stacked matrix: the minimal number of
  fiducial probabilities that determine a state.  Because each variable's
  probabilities sum to 1, one entry per variable beyond the first is
  redundant, so the card box saturates at V*(N-1)+1 rather than N*V.
* ``K_naive`` -- the raw fiducial count N*V (or n*M): the number of
  probabilities an experimenter would tabulate without exploiting
  normalization.

Both counts grow with the number of variables V at fixed N, which is the
point: K is not a function of N alone.  Classical ranks are computed with
exact rational Gaussian elimination (no tolerances); quantum ranks use an
SVD threshold.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .cardbox import (
    Deck,
    SystemSpec,
    all_cards,
    cardbox_spec,
    initial_state,
    outcome_distribution,
    urn_as_cardbox,
)
from .errors import (
    DimensionMismatchError,
    NonFiniteError,
    RaggedMatrixError,
    ValidationError,
)
from .quantum import (
    RANK_TOL,
    DensityState,
    ObservableSet,
    measurement_distribution,
    random_observable_set,
    random_pure_state,
)
from .rng import RandomStream


@dataclass(frozen=True)
class FiducialSet:
    """Column labels of a probability matrix: (variable/basis idx, value idx)."""

    labels: tuple[tuple[int, int], ...]
    block_size: int

    @property
    def size(self) -> int:
        return len(self.labels)

    @classmethod
    def for_cardbox(cls, spec: SystemSpec) -> "FiducialSet":
        n = spec.values_per_variable
        labels = tuple(
            (i, j) for i in range(spec.num_variables) for j in range(n)
        )
        return cls(labels, n)

    @classmethod
    def for_quantum(cls, dimension: int, num_bases: int) -> "FiducialSet":
        labels = tuple(
            (m, k) for m in range(num_bases) for k in range(dimension)
        )
        return cls(labels, dimension)


def fiducial_vector_cardbox(deck: Deck) -> tuple[Fraction, ...]:
    """Exact probabilities of every value of every variable, spec order."""
    state = initial_state(deck)
    entries: list[Fraction] = []
    for variable in deck.spec.variable_names:
        dist = outcome_distribution(state, variable)
        entries.extend(dist[value] for value in deck.spec.values_of(variable))
    return tuple(entries)


def fiducial_vector_quantum(
    state: DensityState, observables: ObservableSet
) -> np.ndarray:
    """Born probabilities of every outcome of every basis, concatenated."""
    if state.dimension != observables.dimension:
        raise DimensionMismatchError(
            f"state dimension {state.dimension} != observable dimension "
            f"{observables.dimension}"
        )
    return np.concatenate(
        [measurement_distribution(state, basis) for basis in observables.bases]
    )


def random_deck_ensemble(
    spec: SystemSpec, count: int, max_multiplicity: int, rng: RandomStream
) -> list[Deck]:
    """Independent random decks: uniform multiplicity in {0..max} per card type.

    All-zero draws are rejected and redrawn, so every deck is nonempty.
    """
    if count < 1:
        raise ValidationError("ensemble count must be at least 1")
    if max_multiplicity < 1:
        raise ValidationError("max_multiplicity must be at least 1")
    cards = all_cards(spec)
    decks = []
    for _ in range(count):
        mults = rng.integers_below(max_multiplicity + 1, size=len(cards))
        while not mults.any():
            mults = rng.integers_below(max_multiplicity + 1, size=len(cards))
        entries = tuple(
            (card, int(m)) for card, m in zip(cards, mults) if m
        )
        decks.append(Deck(spec, entries))
    return decks


class ExactRowBasis:
    """Incremental reduced row-echelon basis over the rationals.

    Rows can be fed one at a time (handy for streaming enumerations and
    saturation checks); ``rank`` is exact, with no tolerance anywhere.
    """

    def __init__(self, width: int):
        if width < 1:
            raise ValidationError("matrix width must be at least 1")
        self.width = width
        self._pivots: list[tuple[int, list[Fraction]]] = []  # (column, row), row[column] == 1

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def _reduce(self, row: Sequence) -> list[Fraction]:
        if len(row) != self.width:
            raise RaggedMatrixError(f"row has {len(row)} entries, expected {self.width}")
        out = [Fraction(x) for x in row]
        for col, pivot_row in self._pivots:
            factor = out[col]
            if factor:
                out = [a - factor * b for a, b in zip(out, pivot_row)]
        return out

    def add(self, row: Sequence) -> bool:
        """Insert a row; returns True iff it enlarged the span."""
        reduced = self._reduce(row)
        for col, x in enumerate(reduced):
            if x:
                normalized = [a / x for a in reduced]
                for _, pivot_row in self._pivots:
                    factor = pivot_row[col]
                    if factor:
                        pivot_row[:] = [
                            a - factor * b for a, b in zip(pivot_row, normalized)
                        ]
                self._pivots.append((col, normalized))
                self._pivots.sort(key=lambda p: p[0])
                return True
        return False

    def contains(self, row: Sequence) -> bool:
        """True iff the row already lies in the span."""
        return not any(self._reduce(row))


def matrix_rank_exact(rows: Iterable[Sequence]) -> int:
    """Exact rank over the rationals of a matrix of Fractions/ints."""
    rows = list(rows)
    if not rows:
        raise ValidationError("matrix must have at least one row")
    basis = ExactRowBasis(len(rows[0]))
    for row in rows:
        basis.add(row)
    return basis.rank


def matrix_rank_numeric(rows, tol: float = RANK_TOL) -> int:
    """Numeric rank: singular values above ``tol`` times the largest."""
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    rows = list(rows)
    if not rows:
        raise ValidationError("matrix must have at least one row")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise RaggedMatrixError(f"rows have mixed lengths {sorted(widths)}")
    matrix = np.asarray(rows, dtype=float)
    if not np.isfinite(matrix).all():
        raise NonFiniteError("matrix contains NaN or infinity")
    singular = np.linalg.svd(matrix, compute_uv=False)
    if singular.size == 0 or singular[0] == 0.0:
        return 0
    return int(np.sum(singular > tol * singular[0]))


def _indicator_matrix(spec: SystemSpec) -> np.ndarray:
    """Rows are the unnormalized fiducial vectors of the single-card decks."""
    n = spec.values_per_variable
    v = spec.num_variables
    combos = list(itertools.product(range(n), repeat=v))  # all_cards order
    matrix = np.zeros((len(combos), v * n), dtype=np.int64)
    for j, combo in enumerate(combos):
        for i, value_index in enumerate(combo):
            matrix[j, i * n + value_index] = 1
    return matrix


def exhaustive_fiducial_rank(
    spec: SystemSpec,
    max_multiplicity: int = 2,
    enumeration_limit: int = 100_000,
) -> int:
    """Exact rank of the fiducial vectors of ALL bounded-multiplicity decks.

    When the deck family is small enough it is enumerated literally.  Beyond
    ``enumeration_limit`` decks (3**27 for N=3, V=3 -- hopeless), the rank
    is computed from the single-card decks alone: a deck's fiducial vector
    is by definition the multiplicity-weighted average of its cards'
    indicator vectors, so the family spans exactly the same space.  Both
    paths agree wherever both are affordable (see the test suite).

    Rows are rescaled to integers (counts instead of probabilities) and
    deduplicated first; row scaling cannot change the rank.
    """
    if max_multiplicity < 1:
        raise ValidationError("max_multiplicity must be at least 1")
    indicator = _indicator_matrix(spec)
    num_card_types = indicator.shape[0]
    num_decks = (max_multiplicity + 1) ** num_card_types - 1
    if num_decks <= enumeration_limit:
        mults = np.array(
            list(itertools.product(range(max_multiplicity + 1), repeat=num_card_types)),
            dtype=np.int64,
        )[1:]  # drop the all-zero deck
        counts = mults @ indicator
        counts //= np.gcd.reduce(counts, axis=1)[:, None]
        rows = np.unique(counts, axis=0)
    else:
        rows = indicator
    basis = ExactRowBasis(indicator.shape[1])
    for row in rows:
        basis.add([int(x) for x in row])
    return basis.rank


@dataclass(frozen=True)
class KReport:
    """Degrees-of-freedom measurement for one system configuration.

    ``ensemble`` is the configured base ensemble size; the measurement
    internally doubles it once and sets ``saturated`` iff the rank did not
    move.  ``k_rank`` is the rank after doubling.
    """

    kind: str
    n: int
    v_or_m: int
    k_rank: int
    k_naive: int
    k_paper: int
    ensemble: int
    saturated: bool
    seed: int


def _estimate_k_classical(
    spec: SystemSpec,
    kind: str,
    k_paper: int,
    ensemble: int | None,
    max_multiplicity: int,
    rng: RandomStream,
) -> KReport:
    fiducials = spec.num_variables * spec.values_per_variable
    base = 10 * fiducials if ensemble is None else ensemble
    if base < 1:
        raise ValidationError("ensemble size must be at least 1")
    basis = ExactRowBasis(fiducials)
    for deck in random_deck_ensemble(spec, base, max_multiplicity, rng):
        basis.add(fiducial_vector_cardbox(deck))
    first_rank = basis.rank
    for deck in random_deck_ensemble(spec, base, max_multiplicity, rng):
        basis.add(fiducial_vector_cardbox(deck))
    return KReport(
        kind=kind,
        n=spec.values_per_variable,
        v_or_m=spec.num_variables,
        k_rank=basis.rank,
        k_naive=fiducials,
        k_paper=k_paper,
        ensemble=base,
        saturated=basis.rank == first_rank,
        seed=rng.seed,
    )


def estimate_k_urn(
    n: int,
    *,
    ensemble: int | None = None,
    max_multiplicity: int = 2,
    rng: RandomStream,
) -> KReport:
    """K for the single-variable urn; the classical reference point K=N."""
    spec = urn_as_cardbox(n)
    return _estimate_k_classical(spec, "urn", n, ensemble, max_multiplicity, rng)


def estimate_k_cardbox(
    spec: SystemSpec,
    *,
    ensemble: int | None = None,
    max_multiplicity: int = 2,
    rng: RandomStream,
) -> KReport:
    """K for a card-box system; the raw fiducial count N*V is the naive K."""
    return _estimate_k_classical(
        spec,
        "cardbox",
        spec.values_per_variable * spec.num_variables,
        ensemble,
        max_multiplicity,
        rng,
    )


def estimate_k_quantum(
    n: int,
    num_bases: int | None = None,
    *,
    ensemble: int | None = None,
    tol: float = RANK_TOL,
    rng: RandomStream,
) -> KReport:
    """K for an n-dimensional quantum system measured in random bases.

    The observable set is drawn once and shared by the whole ensemble of
    random pure states.  With the default n+1 bases the rank saturates at
    n**2, the quantum reference value.
    """
    observables = random_observable_set(n, num_bases, rng=rng)
    m = observables.num_bases
    fiducials = n * m
    base = 10 * fiducials if ensemble is None else ensemble
    if base < 1:
        raise ValidationError("ensemble size must be at least 1")
    rows = [
        fiducial_vector_quantum(random_pure_state(n, rng), observables)
        for _ in range(base)
    ]
    first_rank = matrix_rank_numeric(rows, tol)
    rows.extend(
        fiducial_vector_quantum(random_pure_state(n, rng), observables)
        for _ in range(base)
    )
    rank = matrix_rank_numeric(rows, tol)
    return KReport(
        kind="quantum",
        n=n,
        v_or_m=m,
        k_rank=rank,
        k_naive=fiducials,
        k_paper=n * n,
        ensemble=base,
        saturated=rank == first_rank,
        seed=rng.seed,
    )


def estimate_k(
    kind: str,
    n: int,
    *,
    v: int | None = None,
    m: int | None = None,
    ensemble: int | None = None,
    max_multiplicity: int = 2,
    tol: float = RANK_TOL,
    rng: RandomStream,
) -> KReport:
    """Dispatch on system kind: "urn", "cardbox", or "quantum"."""
    if kind == "urn":
        return estimate_k_urn(
            n, ensemble=ensemble, max_multiplicity=max_multiplicity, rng=rng
        )
    if kind == "cardbox":
        if v is None:
            raise ValidationError("cardbox systems need a variable count v")
        return estimate_k_cardbox(
            cardbox_spec(n, v),
            ensemble=ensemble,
            max_multiplicity=max_multiplicity,
            rng=rng,
        )
    if kind == "quantum":
        return estimate_k_quantum(n, m, ensemble=ensemble, tol=tol, rng=rng)
    raise ValidationError(f"unknown system kind {kind!r}")


_KIND_CODES = {"cardbox": 0, "quantum": 1, "urn": 2}


def _stream_id(kind: str, n: int, v: int) -> int:
    # One independent stream per table cell, derived from the master seed.
    return (_KIND_CODES[kind] << 40) | (n << 20) | v


def k_sweep(
    n_values: Iterable[int],
    v_values: Iterable[int],
    kinds: Iterable[str],
    seed: int,
    *,
    ensemble: int | None = None,
    max_multiplicity: int = 2,
    tol: float = RANK_TOL,
) -> list[KReport]:
    """One KReport per (kind, N, V) cell, in deterministic sorted order.

    Urn and quantum systems have no free V: the urn is always V=1 and the
    quantum reference always uses the full n+1 tomographic bases, so those
    kinds contribute one row per N.
    """
    n_list = sorted(set(n_values))
    v_list = sorted(set(v_values))
    kind_list = sorted(set(kinds))
    if not n_list or not v_list or not kind_list:
        raise ValidationError("sweep ranges must be nonempty")
    for kind in kind_list:
        if kind not in _KIND_CODES:
            raise ValidationError(f"unknown system kind {kind!r}")
    if min(n_list) < 2:
        raise ValidationError("N must be at least 2")
    if min(v_list) < 1:
        raise ValidationError("V must be at least 1")

    reports = []
    for kind in kind_list:
        for n in n_list:
            if kind == "cardbox":
                for v in v_list:
                    rng = RandomStream(seed, _stream_id(kind, n, v))
                    reports.append(
                        estimate_k_cardbox(
                            cardbox_spec(n, v),
                            ensemble=ensemble,
                            max_multiplicity=max_multiplicity,
                            rng=rng,
                        )
                    )
            elif kind == "urn":
                rng = RandomStream(seed, _stream_id(kind, n, 1))
                reports.append(
                    estimate_k_urn(
                        n,
                        ensemble=ensemble,
                        max_multiplicity=max_multiplicity,
                        rng=rng,
                    )
                )
            else:
                m = n + 1
                rng = RandomStream(seed, _stream_id(kind, n, m))
                reports.append(
                    estimate_k_quantum(n, m, ensemble=ensemble, tol=tol, rng=rng)
                )
    reports.sort(key=lambda r: (r.kind, r.n, r.v_or_m))
    return reports
