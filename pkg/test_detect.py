import itertools
import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core import Word, all_symmetries, apply_symmetry
from detect import (
    SUFFIX_CHECKS,
    Occurrence,
    RepetitionKind,
    _find_repetition_scan,
    _find_repetition_vectorized,
    find_covering,
    find_repetition,
    is_free,
    oracle_is_free,
    suffix_repetition,
    validate_occurrence,
)
from streams import thue_morse

logging.basicConfig(level=logging.INFO)

SQUARE, OVERLAP, CUBE = RepetitionKind.SQUARE, RepetitionKind.OVERLAP, RepetitionKind.CUBE


def all_words(size, n):
    return ("".join(p) for p in itertools.product("0123456789"[:size], repeat=n))


def test_find_repetition_examples():
    assert find_repetition("0101", SQUARE) == Occurrence(SQUARE, 0, 2)
    assert find_repetition("1001", SQUARE) == Occurrence(SQUARE, 1, 1)
    assert find_repetition("012", SQUARE) is None
    assert find_repetition("01010", OVERLAP) == Occurrence(OVERLAP, 0, 2)
    assert find_repetition("000", OVERLAP) == Occurrence(OVERLAP, 0, 1)
    assert find_repetition("001001001", CUBE) == Occurrence(CUBE, 0, 3)
    assert find_repetition("", CUBE) is None
    assert find_repetition(Word("0110"), OVERLAP) is None


def test_is_free():
    assert is_free("0110", OVERLAP)
    assert not is_free("0110", SQUARE)
    assert is_free("0010", CUBE)
    assert not is_free("0001", CUBE)


def test_suffix_repetition_smallest_period():
    assert suffix_repetition("01010", OVERLAP) == Occurrence(OVERLAP, 0, 2)
    assert suffix_repetition("00100", OVERLAP) is None
    assert suffix_repetition("1212", SQUARE) == Occurrence(SQUARE, 0, 2)
    assert suffix_repetition("01011", SQUARE) == Occurrence(SQUARE, 3, 1)
    assert suffix_repetition("0110", SQUARE) is None


def test_suffix_checks_match_suffix_repetition():
    for kind in RepetitionKind:
        for n in range(1, 10):
            for text in all_words(2, n):
                occ = suffix_repetition(text, kind)
                assert SUFFIX_CHECKS[kind](text) == (occ.period if occ else 0)


def test_find_covering():
    assert find_covering("1001", 1, 2, SQUARE) == Occurrence(SQUARE, 1, 1)
    assert find_covering("0101", 0, 3, SQUARE) == Occurrence(SQUARE, 0, 2)
    assert find_covering("01101", 0, 0, SQUARE) is None
    assert find_covering("0110", 4, 4, SQUARE) is None
    occ = find_covering("0120120", 6, 6, SQUARE)
    assert occ is not None and occ.covers(6)


def test_find_covering_only_reports_covering_occurrences():
    for text in all_words(2, 9):
        for i in range(len(text)):
            occ = find_covering(text, i, i, OVERLAP)
            if occ is not None:
                assert occ.covers(i)
                assert validate_occurrence(text, occ)


def test_validate_occurrence():
    assert validate_occurrence("0101", Occurrence(SQUARE, 0, 2))
    assert not validate_occurrence("0110", Occurrence(SQUARE, 0, 2))
    assert not validate_occurrence("01", Occurrence(SQUARE, 0, 2))


@pytest.mark.parametrize("kind", list(RepetitionKind))
def test_detector_matches_oracle_binary(kind):
    for n in range(0, 12):
        for text in all_words(2, n):
            assert is_free(text, kind) == oracle_is_free(text, kind), text


@pytest.mark.parametrize("kind", list(RepetitionKind))
def test_detector_matches_oracle_ternary(kind):
    for n in range(0, 8):
        for text in all_words(3, n):
            assert is_free(text, kind) == oracle_is_free(text, kind), text


def test_freeness_containment_chain():
    for n in range(0, 13):
        for text in all_words(2, n):
            square_free, overlap_free, cube_free = (is_free(text, kind) for kind in (SQUARE, OVERLAP, CUBE))
            assert not square_free or overlap_free, text
            assert not overlap_free or cube_free, text


@pytest.mark.parametrize("size,max_len", [(2, 12), (3, 7)])
def test_freeness_invariant_under_symmetries(size, max_len):
    symmetries = all_symmetries(size)
    for kind in RepetitionKind:
        for n in range(0, max_len + 1):
            for text in all_words(size, n):
                w = Word(text, size)
                expected = is_free(w, kind)
                for s in symmetries:
                    assert is_free(apply_symmetry(w, s), kind) == expected, (text, s.describe())


def test_oracle_refuses_long_words():
    with pytest.raises(ValueError):
        oracle_is_free("01" * 40, SQUARE)


def test_vectorized_detector_on_thue_morse():
    t = thue_morse(600)
    assert _find_repetition_vectorized(t, OVERLAP) is None
    assert find_repetition(t, OVERLAP) is None
    assert _find_repetition_vectorized(t, SQUARE) == _find_repetition_scan(t, SQUARE)
    damaged = t[:400] + ("1" if t[400] == "0" else "0") + t[401:]
    assert _find_repetition_vectorized(damaged, OVERLAP) == _find_repetition_scan(damaged, OVERLAP)


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="012", min_size=1, max_size=120), st.sampled_from(list(RepetitionKind)))
def test_vectorized_detector_matches_scan(text, kind):
    assert _find_repetition_vectorized(text, kind) == _find_repetition_scan(text, kind)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
