import itertools
import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from guessbound.errors import BudgetExceeded, DimensionError
from guessbound.hashing import BitMatrix, BitVector, hash_key, random_matrix, submatrix_rows, toeplitz_matrix
from guessbound.oracle import (
    EveKnowledge,
    collision_rate,
    commutation_sweep,
    exact_guessing_probability,
    gf2_rank,
    key_function_sweep,
    lemma1_sanity_sweep,
    lemma2_sweep,
    run_all_suites,
    universality_sweep,
    verify_lemma2_truncation,
)


def brute_force_p(R: BitMatrix, eve: EveKnowledge) -> Fraction:
    """Independent reference: itertools over all strings, hashing by hand."""
    rows = R.to_bits().tolist()
    known = dict(eve.known)
    tally = Counter()
    total = 0
    for bits in itertools.product((0, 1), repeat=R.cols):
        if any(bits[p] != b for p, b in known.items()):
            continue
        key = tuple(sum(r[j] & bits[j] for j in range(R.cols)) % 2 for r in rows)
        tally[key] += 1
        total += 1
    return Fraction(max(tally.values()), total)


def test_full_knowledge_gives_certainty():
    R = random_matrix(3, 4, 9)
    s = BitVector.from_int(0b101100111, 9)
    rep = exact_guessing_probability(R, EveKnowledge.everything(s))
    assert rep.p_exact == 1
    assert rep.argmax_key == hash_key(R, s)
    assert rep.strings_enumerated == 1


def test_full_rank_no_knowledge_is_uniform():
    R = BitMatrix.from_bits([[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]])
    assert gf2_rank(R) == 3
    rep = exact_guessing_probability(R, EveKnowledge.nothing(4))
    assert rep.p_exact == Fraction(1, 8)
    assert rep.distribution_support == 8
    assert rep.strings_enumerated == 16


def test_zero_matrix_is_certain():
    R = BitMatrix.from_bits([[0, 0, 0], [0, 0, 0]])
    assert gf2_rank(R) == 0
    rep = exact_guessing_probability(R, EveKnowledge.nothing(3))
    assert rep.p_exact == 1 and rep.argmax_key == BitVector.zeros(2)


def test_rank_deficient_matrix():
    # second row duplicates the first: only two keys occur
    R = BitMatrix.from_bits([[1, 1, 0], [1, 1, 0]])
    assert gf2_rank(R) == 1
    assert exact_guessing_probability(R, EveKnowledge.nothing(3)).p_exact == Fraction(1, 2)


def test_known_bits_inside_kernel_change_nothing():
    # Eve learns a column the matrix ignores
    R = BitMatrix.from_bits([[1, 0, 0], [0, 1, 0]])
    eve = EveKnowledge(3, frozenset({(2, 1)}))
    assert exact_guessing_probability(R, eve).p_exact == Fraction(1, 4)


def test_lemma2_hand_example():
    R = BitMatrix.from_bits([[1, 0, 1, 0], [0, 1, 1, 1]])
    eve = EveKnowledge(4, frozenset({(2, 0)}))
    v = verify_lemma2_truncation(R, eve, 1)
    assert v.passed and v.p_k == Fraction(1, 4) and v.p_kprime == Fraction(1, 2)


def test_lemma2_against_independent_brute_force():
    R = random_matrix(12, 6, 10)
    eve = EveKnowledge.random(10, 3, random.Random(5))
    v = verify_lemma2_truncation(R, eve, 3)
    assert v.passed
    assert v.p_k == brute_force_p(R, eve)
    assert v.p_kprime == brute_force_p(submatrix_rows(R, 3), eve)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(1, 5), st.integers(1, 9), st.data())
def test_exact_probability_matches_brute_force(seed, n, N, data):
    n = min(n, N)
    t = data.draw(st.integers(0, N))
    R = random_matrix(seed, n, N)
    eve = EveKnowledge.random(N, t, random.Random(seed))
    assert exact_guessing_probability(R, eve).p_exact == brute_force_p(R, eve)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(2, 10), st.data())
def test_truncation_never_lowers_guessing_probability(seed, N, data):
    n1 = data.draw(st.integers(1, N - 1))
    R = toeplitz_matrix(seed, n1, N) if seed % 2 else random_matrix(seed, n1, N)
    eve = EveKnowledge.random(N, data.draw(st.integers(0, N)), random.Random(seed))
    assert verify_lemma2_truncation(R, eve, data.draw(st.integers(1, n1))).passed


def test_lemma2_bad_n2():
    R = random_matrix(0, 3, 5)
    with pytest.raises(DimensionError):
        verify_lemma2_truncation(R, EveKnowledge.nothing(5), 4)


def test_eve_knowledge_validation():
    with pytest.raises(ValueError):
        EveKnowledge(3, frozenset({(0, 0), (0, 1)}))
    with pytest.raises(ValueError):
        EveKnowledge(3, frozenset({(3, 0)}))
    with pytest.raises(ValueError):
        EveKnowledge(3, frozenset({(1, 2)}))
    assert EveKnowledge(4, frozenset({(0, 1), (3, 1)})).masks() == (0b1001, 0b1001)


def test_guessing_budget_and_dimensions():
    with pytest.raises(BudgetExceeded):
        exact_guessing_probability(random_matrix(0, 2, 30), EveKnowledge.nothing(30))
    with pytest.raises(DimensionError):
        exact_guessing_probability(random_matrix(0, 2, 5), EveKnowledge.nothing(6))


def test_collision_rate_examples():
    one = BitVector.from_bits([1, 0])
    zero = BitVector.zeros(2)
    assert collision_rate(1, 2, one, zero) == Fraction(1, 2)
    assert collision_rate(2, 2, one, zero) == Fraction(1, 4)
    assert collision_rate(3, 2, one, one) == 1


def test_collision_rate_errors():
    with pytest.raises(BudgetExceeded):
        collision_rate(3, 6, BitVector.zeros(6), BitVector.zeros(6))
    with pytest.raises(DimensionError):
        collision_rate(1, 3, BitVector.zeros(2), BitVector.zeros(3))


@pytest.mark.parametrize(
    "suite",
    [
        lambda: lemma2_sweep(range(5)),
        lambda: key_function_sweep(range(20)),
        lambda: lemma1_sanity_sweep(range(20)),
        lambda: universality_sweep(max_product=6),
        lambda: commutation_sweep(cases=200, max_cols=100, exhaustive_cols=4),
    ],
    ids=["lemma2", "key_function", "full_rank", "universality", "commutation"],
)
def test_small_suites_pass(suite):
    res = suite()
    assert res.passed, res.failures[:5]
    assert res.cases > 0 and res.detail


def test_lemma2_sweep_finds_strict_cases():
    res = lemma2_sweep(range(3))
    assert res.examples and "strict" in res.detail


def test_quick_run_all():
    results = run_all_suites(quick=True)
    assert len(results) == 5 and all(r.passed for r in results)
