from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import deck_strategy, spec_strategy
from dofcount import (
    Deck,
    ExactRowBasis,
    FiducialSet,
    RandomStream,
    all_cards,
    cardbox_spec,
    enumerate_decks,
    estimate_k,
    estimate_k_cardbox,
    estimate_k_quantum,
    estimate_k_urn,
    exhaustive_fiducial_rank,
    fiducial_vector_cardbox,
    fiducial_vector_quantum,
    k_sweep,
    matrix_rank_exact,
    matrix_rank_numeric,
    random_deck_ensemble,
    random_observable_set,
    random_pure_state,
    urn_as_cardbox,
)
from dofcount.errors import (
    DimensionMismatchError,
    NonFiniteError,
    RaggedMatrixError,
    ValidationError,
)
from dofcount.quantum import MeasurementBasis, ObservableSet


class TestFiducialSet:
    def test_cardbox_covers_every_value_once(self, four_card_spec):
        fid = FiducialSet.for_cardbox(four_card_spec)
        assert fid.size == 4
        assert fid.block_size == 2
        assert sorted(fid.labels) == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_quantum_size(self):
        fid = FiducialSet.for_quantum(3, 4)
        assert fid.size == 12
        assert len(set(fid.labels)) == 12


class TestFiducialVectorCardbox:
    def test_uniform_deck(self, four_card_deck):
        assert fiducial_vector_cardbox(four_card_deck) == (
            Fraction(1, 2),
            Fraction(1, 2),
            Fraction(1, 2),
            Fraction(1, 2),
        )

    def test_point_state(self, four_card_spec):
        deck = Deck.from_counts(four_card_spec, {("K", "H"): 1})
        assert fiducial_vector_cardbox(deck) == (1, 0, 0, 1)

    def test_weighted_deck(self, weighted_deck):
        assert fiducial_vector_cardbox(weighted_deck) == (
            Fraction(1, 2),
            Fraction(1, 2),
            Fraction(3, 4),
            Fraction(1, 4),
        )

    @given(deck=deck_strategy())
    def test_blocks_sum_to_one_exactly(self, deck):
        vector = fiducial_vector_cardbox(deck)
        n = deck.spec.values_per_variable
        for i in range(deck.spec.num_variables):
            assert sum(vector[i * n : (i + 1) * n]) == Fraction(1)

    @given(deck=deck_strategy(), factor=st.integers(1, 9))
    def test_scaling_invariance(self, deck, factor):
        assert fiducial_vector_cardbox(deck.scaled(factor)) == fiducial_vector_cardbox(deck)


class TestFiducialVectorQuantum:
    def test_eigenstate_single_basis(self):
        from test_quantum import STANDARD_2, ket0_state

        obs = ObservableSet((STANDARD_2,))
        assert np.allclose(
            fiducial_vector_quantum(ket0_state(), obs), [1.0, 0.0], atol=1e-12
        )

    def test_maximally_mixed_three_bases(self):
        from test_quantum import maximally_mixed

        rng = RandomStream(0)
        obs = random_observable_set(2, 3, rng=rng)
        vector = fiducial_vector_quantum(maximally_mixed(2), obs)
        assert np.max(np.abs(vector - 0.5)) < 1e-12

    def test_standard_and_unbiased_bases(self):
        from test_quantum import STANDARD_2, UNBIASED_2, ket0_state

        obs = ObservableSet((STANDARD_2, UNBIASED_2))
        assert np.allclose(
            fiducial_vector_quantum(ket0_state(), obs), [1, 0, 0.5, 0.5], atol=1e-12
        )

    def test_dimension_mismatch(self):
        from test_quantum import STANDARD_2, maximally_mixed

        with pytest.raises(DimensionMismatchError):
            fiducial_vector_quantum(maximally_mixed(3), ObservableSet((STANDARD_2,)))

    def test_block_normalization(self):
        rng = RandomStream(17)
        obs = random_observable_set(3, rng=rng)
        for _ in range(20):
            vector = fiducial_vector_quantum(random_pure_state(3, rng), obs)
            for m in range(obs.num_bases):
                assert abs(float(np.sum(vector[m * 3 : (m + 1) * 3])) - 1.0) < 1e-10


class TestRandomDeckEnsemble:
    def test_deterministic_under_seed(self, four_card_spec):
        a = random_deck_ensemble(four_card_spec, 5, 2, RandomStream(3))
        b = random_deck_ensemble(four_card_spec, 5, 2, RandomStream(3))
        assert a == b

    def test_unit_multiplicity_gives_subsets(self, four_card_spec):
        for deck in random_deck_ensemble(four_card_spec, 30, 1, RandomStream(5)):
            assert all(m == 1 for _, m in deck.entries)
            assert not deck.is_empty

    def test_fifty_decks_reach_rank_three(self, four_card_spec):
        decks = random_deck_ensemble(four_card_spec, 50, 2, RandomStream(1))
        rows = [fiducial_vector_cardbox(d) for d in decks]
        assert matrix_rank_exact(rows) == 3

    def test_parameter_validation(self, four_card_spec):
        with pytest.raises(ValidationError):
            random_deck_ensemble(four_card_spec, 0, 2, RandomStream(0))
        with pytest.raises(ValidationError):
            random_deck_ensemble(four_card_spec, 1, 0, RandomStream(0))


small_fractions = st.fractions(min_value=-3, max_value=3, max_denominator=6)


@st.composite
def fraction_matrices(draw, max_rows=6, max_cols=5):
    cols = draw(st.integers(1, max_cols))
    return draw(
        st.lists(
            st.lists(small_fractions, min_size=cols, max_size=cols),
            min_size=1,
            max_size=max_rows,
        )
    )


class TestMatrixRankExact:
    def test_unit_vector_rows(self):
        rows = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]
        assert matrix_rank_exact(rows) == 3

    def test_repeated_rows(self):
        row = [Fraction(1, 3), Fraction(2, 3), Fraction(1, 7)]
        assert matrix_rank_exact([row, row, row]) == 1

    def test_exhaustive_four_card_family(self, four_card_spec):
        # brute-force oracle: all 80 decks with multiplicities <= 2
        rows = [fiducial_vector_cardbox(d) for d in enumerate_decks(four_card_spec, 2)]
        assert len(rows) == 80
        assert matrix_rank_exact(rows) == 3

    @given(rows=fraction_matrices())
    def test_matches_sympy_rank(self, rows):
        expected = sympy.Matrix(
            [[sympy.Rational(x) for x in row] for row in rows]
        ).rank()
        assert matrix_rank_exact(rows) == expected

    @given(rows=fraction_matrices())
    def test_rank_monotone_under_appended_rows(self, rows):
        basis = ExactRowBasis(len(rows[0]))
        previous = 0
        for i, row in enumerate(rows):
            basis.add(row)
            assert previous <= basis.rank <= min(i + 1, len(rows[0]))
            previous = basis.rank

    def test_ragged_rejected(self):
        with pytest.raises(RaggedMatrixError):
            matrix_rank_exact([[1, 2], [1, 2, 3]])

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            matrix_rank_exact([])

    def test_span_membership(self):
        basis = ExactRowBasis(3)
        basis.add([1, 0, 1])
        basis.add([0, 1, 1])
        assert basis.contains([2, 3, 5])
        assert not basis.contains([0, 0, 1])


class TestMatrixRankNumeric:
    def test_identity_block(self):
        matrix = np.vstack([np.eye(4), np.eye(4)])
        assert matrix_rank_numeric(matrix.tolist()) == 4

    def test_tiny_noise_below_threshold(self):
        u = np.array([1.0, 2.0, 3.0])
        v = np.array([0.5, -1.0, 2.0, 4.0])
        matrix = np.outer(u, v) + 1e-15
        assert matrix_rank_numeric(matrix.tolist(), tol=1e-9) == 1

    def test_known_rank_products(self):
        gen = np.random.Generator(np.random.PCG64(12))
        for r in (1, 2, 3):
            matrix = gen.standard_normal((8, r)) @ gen.standard_normal((r, 5))
            assert matrix_rank_numeric(matrix.tolist()) == r

    def test_quantum_desk_example(self):
        # 20 random pure states, 3 random bases, n=2: rank 4, cross-checked
        # against numpy's independent SVD-based rank.
        rng = RandomStream(123)
        obs = random_observable_set(2, 3, rng=rng)
        rows = [
            fiducial_vector_quantum(random_pure_state(2, rng), obs) for _ in range(20)
        ]
        assert matrix_rank_numeric(rows) == 4
        assert int(np.linalg.matrix_rank(np.array(rows))) == 4

    def test_non_finite_rejected(self):
        with pytest.raises(NonFiniteError):
            matrix_rank_numeric([[1.0, float("nan")]])

    def test_ragged_rejected(self):
        with pytest.raises(RaggedMatrixError):
            matrix_rank_numeric([[1.0], [1.0, 2.0]])

    def test_bad_tolerance(self):
        with pytest.raises(ValidationError):
            matrix_rank_numeric([[1.0]], tol=0.0)


class TestExhaustiveRank:
    def test_literal_and_reduced_paths_agree(self):
        for n, v in [(2, 2), (2, 3), (3, 2)]:
            spec = cardbox_spec(n, v)
            literal = exhaustive_fiducial_rank(spec)
            reduced = exhaustive_fiducial_rank(spec, enumeration_limit=1)
            assert literal == reduced == v * (n - 1) + 1

    def test_rank_law_at_desk_scale(self):
        # every (N, V) with N**V <= 81
        for n, v in [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (3, 4), (4, 2), (4, 3), (9, 1)]:
            assert exhaustive_fiducial_rank(cardbox_spec(n, v)) == v * (n - 1) + 1

    def test_urn_exactness(self):
        for n in range(2, 9):
            assert exhaustive_fiducial_rank(urn_as_cardbox(n)) == n

    @given(deck=deck_strategy(max_multiplicity=4))
    def test_every_deck_lies_in_single_card_span(self, deck):
        # the reduction the large-family path relies on
        basis = ExactRowBasis(
            deck.spec.num_variables * deck.spec.values_per_variable
        )
        for card in all_cards(deck.spec):
            basis.add(fiducial_vector_cardbox(Deck.from_counts(deck.spec, {card: 1})))
        assert basis.contains(fiducial_vector_cardbox(deck))


class TestEstimates:
    def test_urn_four(self):
        report = estimate_k_urn(4, rng=RandomStream(7))
        assert (report.k_rank, report.k_naive, report.k_paper) == (4, 4, 4)
        assert report.kind == "urn"
        assert report.v_or_m == 1
        assert report.saturated
        assert report.seed == 7

    def test_cardbox_two_by_two(self):
        report = estimate_k_cardbox(cardbox_spec(2, 2), rng=RandomStream(7))
        assert (report.k_rank, report.k_naive, report.k_paper) == (3, 4, 4)
        assert report.ensemble == 40

    def test_quantum_qubit(self):
        report = estimate_k_quantum(2, 3, rng=RandomStream(7))
        assert (report.k_rank, report.k_naive, report.k_paper) == (4, 6, 4)
        assert report.v_or_m == 3

    def test_quantum_default_bases(self):
        report = estimate_k_quantum(3, rng=RandomStream(2))
        assert report.v_or_m == 4
        assert report.k_rank == 9

    def test_rank_never_exceeds_naive(self):
        for seed in range(5):
            report = estimate_k_cardbox(cardbox_spec(3, 2), rng=RandomStream(seed))
            assert 1 <= report.k_rank <= report.k_naive

    def test_doubling_a_saturated_ensemble_keeps_rank(self):
        first = estimate_k_cardbox(cardbox_spec(2, 2), ensemble=40, rng=RandomStream(5))
        assert first.saturated
        doubled = estimate_k_cardbox(cardbox_spec(2, 2), ensemble=80, rng=RandomStream(5))
        assert doubled.k_rank == first.k_rank

    def test_dispatcher(self):
        report = estimate_k("urn", 3, rng=RandomStream(1))
        assert report.kind == "urn" and report.k_rank == 3
        with pytest.raises(ValidationError):
            estimate_k("cardbox", 3, rng=RandomStream(1))  # missing v
        with pytest.raises(ValidationError):
            estimate_k("abacus", 3, rng=RandomStream(1))

    def test_quantum_restricted_observables_reduce_rank(self):
        # two bases instead of three: only 1 + 2*(n-1) = 3 independent
        # probabilities survive for n=2, the superselection-style restriction
        report = estimate_k_quantum(2, 2, rng=RandomStream(4))
        assert report.k_rank == 3
        assert report.k_paper == 4


class TestKSweep:
    def test_v_dependence_at_n3(self):
        reports = k_sweep([3], [1, 2, 3], ["cardbox"], 42)
        assert [r.k_rank for r in reports] == [3, 5, 7]

    def test_single_variable_cardbox_matches_urn(self):
        reports = k_sweep([2], [1], ["cardbox", "urn"], 42)
        by_kind = {r.kind: r for r in reports}
        assert by_kind["cardbox"].k_rank == by_kind["urn"].k_rank == 2

    def test_quantum_exceeds_cardbox_exceeds_urn_at_n2(self):
        reports = k_sweep([2], [2], ["cardbox", "urn", "quantum"], 42)
        ranks = {r.kind: r.k_rank for r in reports}
        assert ranks["quantum"] == 4
        assert ranks["cardbox"] == 3
        assert ranks["urn"] == 2

    def test_rows_sorted_and_deterministic(self):
        a = k_sweep([3, 2], [2, 1], ["urn", "cardbox"], 9)
        b = k_sweep([2, 3], [1, 2], ["cardbox", "urn"], 9)
        assert a == b
        keys = [(r.kind, r.n, r.v_or_m) for r in a]
        assert keys == sorted(keys)

    def test_range_validation(self):
        with pytest.raises(ValidationError):
            k_sweep([], [1], ["urn"], 0)
        with pytest.raises(ValidationError):
            k_sweep([1], [1], ["urn"], 0)
        with pytest.raises(ValidationError):
            k_sweep([2], [0], ["cardbox"], 0)
        with pytest.raises(ValidationError):
            k_sweep([2], [1], ["abacus"], 0)


@given(spec=spec_strategy(max_variables=2, max_values=3))
def test_estimates_saturate_to_exhaustive_rank(spec):
    # random-ensemble rank agrees with the exhaustive ground truth
    report = estimate_k_cardbox(spec, rng=RandomStream(0))
    assert report.k_rank == exhaustive_fiducial_rank(spec)
