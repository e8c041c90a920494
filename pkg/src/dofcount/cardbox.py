"""Card-box and urn operational systems.

The card-box device is a sealed box holding a full deck of cards, each card
carrying one value for each of V variables (every variable has the same
number N of possible values), plus a segregated subdeck.  Pressing the
switch for a variable draws a card uniformly at random from the subdeck
(duplicates counted with multiplicity), displays that card's value for the
pressed variable, and then rebuilds the subdeck from the *full* deck,
keeping every card that agrees with the displayed value.

Rebuilding from the full deck is the whole trick: immediately repeating the
same switch is guaranteed to show the same value, while switching variables
re-randomizes everything else.  The urn (a single N-valued variable, V=1)
is the degenerate case with nothing to disturb.

All probabilities on this classical side are exact ``fractions.Fraction``
values; nothing here touches floating point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import (
    BadArityError,
    DuplicateNameError,
    EmptyDeckError,
    EmptySpecError,
    EmptySubdeckError,
    IncompleteAssignmentError,
    UnknownValueError,
    UnknownVariableError,
    ValidationError,
)
from .rng import RandomStream


@dataclass(frozen=True)
class SystemSpec:
    """The variable/value universe of one system.

    ``variables`` is an ordered tuple of ``(variable_name, value_names)``
    pairs.  Every variable must offer the same number of values; variable
    names are unique, and value names are unique within each variable.
    """

    variables: tuple[tuple[str, tuple[str, ...]], ...]

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Sequence[str]]) -> "SystemSpec":
        spec = cls(tuple((name, tuple(values)) for name, values in mapping.items()))
        return validate_spec(spec)

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    @property
    def values_per_variable(self) -> int:
        if not self.variables:
            return 0
        return len(self.variables[0][1])

    @property
    def variable_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.variables)

    def variable_index(self, variable: str) -> int:
        for i, (name, _) in enumerate(self.variables):
            if name == variable:
                return i
        raise UnknownVariableError(f"unknown variable {variable!r}")

    def values_of(self, variable: str) -> tuple[str, ...]:
        return self.variables[self.variable_index(variable)][1]

    def value_index(self, variable: str, value: str) -> int:
        values = self.values_of(variable)
        try:
            return values.index(value)
        except ValueError:
            raise UnknownValueError(
                f"unknown value {value!r} for variable {variable!r}"
            ) from None


def validate_spec(spec: SystemSpec) -> SystemSpec:
    """Check all SystemSpec invariants and return the spec unchanged."""
    if spec.num_variables == 0:
        raise EmptySpecError("spec has no variables")
    names = spec.variable_names
    if len(set(names)) != len(names):
        raise DuplicateNameError(f"duplicate variable names in {names}")
    n = spec.values_per_variable
    for name, values in spec.variables:
        if len(set(values)) != len(values):
            raise DuplicateNameError(f"duplicate value names for variable {name!r}")
        if len(values) != n:
            raise BadArityError(
                f"variable {name!r} has {len(values)} values, expected {n}"
            )
    if n < 2:
        raise EmptySpecError("every variable needs at least two values")
    return spec


@dataclass(frozen=True)
class Card:
    """One card: a total assignment of a value to every variable.

    ``items`` holds ``(variable, value)`` pairs in spec variable order, so
    cards are hashable and printable without a spec in hand.
    """

    items: tuple[tuple[str, str], ...]

    @classmethod
    def from_assignment(cls, spec: SystemSpec, assignment: Mapping[str, str]) -> "Card":
        for variable in assignment:
            spec.variable_index(variable)  # raises UnknownVariableError
        items = []
        for name, _values in spec.variables:
            if name not in assignment:
                raise IncompleteAssignmentError(f"no value for variable {name!r}")
            value = assignment[name]
            spec.value_index(name, value)  # raises UnknownValueError
            items.append((name, value))
        return cls(tuple(items))

    @classmethod
    def from_values(cls, spec: SystemSpec, values: Sequence[str]) -> "Card":
        if len(values) != spec.num_variables:
            raise IncompleteAssignmentError(
                f"expected {spec.num_variables} values, got {len(values)}"
            )
        return cls.from_assignment(spec, dict(zip(spec.variable_names, values)))

    @property
    def assignment(self) -> dict[str, str]:
        return dict(self.items)

    @property
    def values(self) -> tuple[str, ...]:
        return tuple(value for _, value in self.items)

    def value(self, variable: str) -> str:
        for name, value in self.items:
            if name == variable:
                return value
        raise UnknownVariableError(f"unknown variable {variable!r}")

    def __str__(self) -> str:
        return "/".join(f"{name}={value}" for name, value in self.items)


CardKey = Union[Card, Sequence[str]]


@dataclass(frozen=True)
class Deck:
    """A multiset of cards over one spec; multiplicities are positive ints.

    ``entries`` is kept in canonical order (lexicographic by value indices),
    making equal multisets structurally equal.  A deck may be empty only as
    the transient result of :func:`filter_deck`; every public entry point
    that takes a deck rejects empty ones.
    """

    spec: SystemSpec
    entries: tuple[tuple[Card, int], ...]

    @classmethod
    def from_counts(cls, spec: SystemSpec, counts: Mapping[CardKey, int]) -> "Deck":
        entries = []
        seen = set()
        for key, count in counts.items():
            card = key if isinstance(key, Card) else Card.from_values(spec, key)
            if not isinstance(count, int) or isinstance(count, bool):
                raise ValidationError(f"multiplicity for {card} must be an integer")
            if count < 0:
                raise ValidationError(f"negative multiplicity for {card}")
            if count == 0:
                continue
            if card.items in seen:
                raise ValidationError(f"card {card} listed twice")
            seen.add(card.items)
            _check_card(spec, card)
            entries.append((card, count))
        entries.sort(key=lambda e: _card_sort_key(spec, e[0]))
        return cls(spec, tuple(entries))

    @cached_property
    def total(self) -> int:
        """Total multiplicity across all cards."""
        return sum(count for _, count in self.entries)

    @property
    def is_empty(self) -> bool:
        return not self.entries

    def multiplicity(self, card: Card) -> int:
        for c, count in self.entries:
            if c == card:
                return count
        return 0

    def scaled(self, factor: int) -> "Deck":
        """Deck with every multiplicity multiplied by a positive integer."""
        if factor < 1:
            raise ValidationError("scale factor must be a positive integer")
        return Deck(self.spec, tuple((c, m * factor) for c, m in self.entries))


def _check_card(spec: SystemSpec, card: Card) -> None:
    if tuple(name for name, _ in card.items) != spec.variable_names:
        raise IncompleteAssignmentError(
            f"card {card} does not cover the spec's variables {spec.variable_names}"
        )
    for name, value in card.items:
        spec.value_index(name, value)


def _card_sort_key(spec: SystemSpec, card: Card) -> tuple[int, ...]:
    return tuple(
        spec.value_index(name, value) for (name, value) in card.items
    )


def all_cards(spec: SystemSpec) -> list[Card]:
    """Every possible card type, in canonical (lexicographic) order."""
    names = spec.variable_names
    pools = [values for _, values in spec.variables]
    return [
        Card(tuple(zip(names, combo))) for combo in itertools.product(*pools)
    ]


def uniform_deck(spec: SystemSpec) -> Deck:
    """One copy of every possible card type."""
    return Deck.from_counts(spec, {card: 1 for card in all_cards(spec)})


@dataclass(frozen=True)
class Outcome:
    """A displayed (variable, value) pair."""

    variable: str
    value: str

    def __str__(self) -> str:
        return f"{self.variable}={self.value}"


@dataclass(frozen=True)
class BoxState:
    """Device state: the immutable full deck plus the current subdeck."""

    deck: Deck
    subdeck: Deck


def initial_state(deck: Deck) -> BoxState:
    """Fresh device state; before any observation the subdeck is the full deck."""
    if deck.is_empty:
        raise EmptyDeckError("cannot prepare a state from an empty deck")
    return BoxState(deck=deck, subdeck=deck)


def filter_deck(deck: Deck, variable: str, value: str) -> Deck:
    """Cards of ``deck`` whose ``variable`` equals ``value``, full multiplicities.

    The result may be empty; callers that need a live subdeck must check.
    """
    deck.spec.value_index(variable, value)  # validates both names
    entries = tuple(
        (card, count) for card, count in deck.entries if card.value(variable) == value
    )
    return Deck(deck.spec, entries)


def outcome_distribution(state: BoxState, variable: str) -> dict[str, Fraction]:
    """Exact distribution of the displayed value if ``variable`` is pressed.

    Maps every legal value (including impossible ones) to the fraction of
    subdeck multiplicity carrying it; the values sum to exactly 1.
    """
    values = state.subdeck.spec.values_of(variable)
    if state.subdeck.is_empty:
        raise EmptySubdeckError("state has an empty subdeck")
    total = state.subdeck.total
    counts = {value: 0 for value in values}
    for card, count in state.subdeck.entries:
        counts[card.value(variable)] += count
    return {value: Fraction(counts[value], total) for value in values}


def observe(
    state: BoxState, variable: str, rng: RandomStream
) -> tuple[Outcome, BoxState]:
    """Press the switch for ``variable``: draw a card, display, rebuild.

    The card is drawn uniformly from the subdeck with multiplicity (an exact
    integer draw, so empirical frequencies match :func:`outcome_distribution`
    in distribution).  The new subdeck is rebuilt from the FULL deck, not
    narrowed from the current subdeck.
    """
    state.subdeck.spec.variable_index(variable)
    if state.subdeck.is_empty:
        raise EmptySubdeckError("state has an empty subdeck")
    pick = rng.randint_below(state.subdeck.total)
    running = 0
    drawn = None
    for card, count in state.subdeck.entries:
        running += count
        if pick < running:
            drawn = card
            break
    assert drawn is not None
    value = drawn.value(variable)
    outcome = Outcome(variable=variable, value=value)
    new_state = BoxState(deck=state.deck, subdeck=filter_deck(state.deck, variable, value))
    return outcome, new_state


URN_VARIABLE = "Pos"


def urn_as_cardbox(n: int) -> SystemSpec:
    """The classical urn expressed as a one-variable card box.

    A ball that can sit in one of ``n`` positions is a deck over the n
    single-value card types; multiplicities encode the position distribution.
    """
    if n < 2:
        raise BadArityError(f"an urn needs at least 2 positions, got {n}")
    return SystemSpec(((URN_VARIABLE, tuple(f"p{i + 1}" for i in range(n))),))


def urn_deck(counts: Sequence[int]) -> Deck:
    """Urn state from per-position multiplicities (one entry per position)."""
    spec = urn_as_cardbox(len(counts))
    return Deck.from_counts(
        spec,
        {(value,): count for value, count in zip(spec.values_of(URN_VARIABLE), counts)},
    )


def cardbox_spec(num_values: int, num_variables: int) -> SystemSpec:
    """Generic spec with machine-made names: variables var1.., values val1..

    Used by sweeps and ensemble experiments where only the (N, V) shape
    matters; hand-written decks come from JSON files with real names.
    """
    if num_variables < 1 or num_values < 2:
        raise EmptySpecError(
            f"need at least 1 variable of 2 values, got V={num_variables}, N={num_values}"
        )
    values = tuple(f"val{j + 1}" for j in range(num_values))
    return SystemSpec(
        tuple((f"var{i + 1}", values) for i in range(num_variables))
    )


def observe_sequence(
    deck: Deck, plan: Iterable[str], rng: RandomStream
) -> tuple[Outcome, ...]:
    """Run one seeded pass of the device over a plan of switch presses."""
    state = initial_state(deck)
    outcomes = []
    for variable in plan:
        outcome, state = observe(state, variable, rng)
        outcomes.append(outcome)
    return tuple(outcomes)


def enumerate_decks(spec: SystemSpec, max_multiplicity: int) -> Iterator[Deck]:
    """All decks whose per-card multiplicities lie in {0..max_multiplicity}.

    Skips the empty deck.  There are (max_multiplicity+1)**(N**V) - 1 of
    them, so only call this at desk scale.
    """
    if max_multiplicity < 1:
        raise ValidationError("max_multiplicity must be at least 1")
    cards = all_cards(spec)
    for mults in itertools.product(range(max_multiplicity + 1), repeat=len(cards)):
        if not any(mults):
            continue
        entries = tuple(
            (card, mult) for card, mult in zip(cards, mults) if mult
        )
        yield Deck(spec, entries)
