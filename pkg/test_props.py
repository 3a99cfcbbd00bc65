import logging

import pytest

from core import Word, all_symmetries, parse_word
from detect import RepetitionKind
from enumerator import iter_free
from props import (
    Mutation,
    PropertyKind,
    check_property,
    is_delicate,
    is_extremal,
    is_extremal_fast,
    is_irreducible,
    is_k_delicate,
    property_predicate,
    validate_report,
)

logging.basicConfig(level=logging.INFO)

SQUARE, OVERLAP, CUBE = RepetitionKind.SQUARE, RepetitionKind.OVERLAP, RepetitionKind.CUBE
PROPERTIES = [
    PropertyKind.extremal(),
    PropertyKind.irreducible(),
    PropertyKind.delicate(),
    PropertyKind.k_delicate(2),
]


def test_irreducible_overlap_free_examples():
    report = is_irreducible(parse_word("010010"), OVERLAP)
    assert report.holds
    assert len(report.witnesses) == 4
    assert validate_report(report)
    assert is_irreducible(parse_word("0100101101"), OVERLAP).holds
    assert is_irreducible(parse_word("01101001"), OVERLAP).holds


def test_irreducible_needs_three_letters():
    for text in ("", "0", "01"):
        report = is_irreducible(parse_word(text), OVERLAP)
        assert not report.holds
        assert report.reason


def test_delicate_examples():
    assert is_delicate(parse_word("001011001"), OVERLAP).holds
    assert is_delicate(parse_word("00101001101001101011"), CUBE).holds
    report = is_delicate(parse_word("12021", 3), SQUARE)
    assert report.holds and validate_report(report)


def test_delicate_counterexample_is_first_surviving_change():
    report = is_delicate(parse_word("0102", 3), SQUARE)
    assert not report.holds
    assert report.counterexample == Mutation.replace([(0, 2)])
    assert report.counterexample.apply(parse_word("0102", 3)).text == "2102"


def test_non_free_subject_fails_with_reason():
    report = check_property(parse_word("0000"), OVERLAP, PropertyKind.irreducible())
    assert not report.holds
    assert report.counterexample is None
    assert "overlap-free" in report.reason


def test_empty_word():
    assert not is_delicate(Word.empty(), SQUARE).holds
    report = is_extremal(Word.empty(), OVERLAP)
    assert not report.holds
    assert report.counterexample == Mutation.insert(0, 0)


def test_mutation_apply_and_errors():
    w = parse_word("0110")
    assert Mutation.delete(1).apply(w).text == "010"
    assert Mutation.insert(4, 1).apply(w).text == "01101"
    assert Mutation.replace([(3, 1), (0, 1)]).apply(w).text == "1111"
    assert Mutation.replace([(3, 1), (0, 1)]).describe() == "replace(0->1,3->1)"
    with pytest.raises(IndexError):
        Mutation.delete(4).apply(w)
    with pytest.raises(IndexError):
        Mutation.insert(6, 0).apply(w)
    with pytest.raises(ValueError):
        Mutation.replace([(1, 0), (1, 1)])
    with pytest.raises(ValueError):
        Mutation.replace([])


def test_property_kind_parse():
    assert PropertyKind.parse("delicate") == PropertyKind.delicate()
    assert PropertyKind.parse("k-delicate:3") == PropertyKind.k_delicate(3)
    assert PropertyKind.parse("k-delicate", 2).label == "k-delicate:2"
    with pytest.raises(ValueError):
        PropertyKind.parse("fragile")
    with pytest.raises(ValueError):
        PropertyKind.k_delicate(0)


def test_one_delicate_is_delicate():
    for n in range(1, 11):
        for text in iter_free(2, OVERLAP, n):
            w = Word(text)
            assert is_k_delicate(w, OVERLAP, 1, False).holds == is_delicate(w, OVERLAP, False).holds


@pytest.mark.parametrize(
    "size,kind,max_len",
    [(2, OVERLAP, 10), (2, CUBE, 10), (3, SQUARE, 7)],
)
def test_fast_predicates_agree_with_reports(size, kind, max_len):
    for prop in PROPERTIES:
        predicate = property_predicate(size, kind, prop)
        for n in range(0, max_len + 1):
            for text in iter_free(size, kind, n):
                report = check_property(Word(text, size), kind, prop)
                assert predicate(text) == report.holds, (text, prop.label)
                assert validate_report(report)


@pytest.mark.parametrize("size,kind,max_len", [(2, OVERLAP, 9), (2, CUBE, 9), (3, SQUARE, 7)])
def test_properties_invariant_under_symmetries(size, kind, max_len):
    symmetries = all_symmetries(size)
    for prop in PROPERTIES[:3]:
        predicate = property_predicate(size, kind, prop)
        for n in range(1, max_len + 1):
            for text in iter_free(size, kind, n):
                expected = predicate(text)
                for s in symmetries:
                    assert predicate(s.apply_text(text)) == expected


def test_extremal_fast_agrees_with_full_check():
    for n in range(0, 21):
        for text in iter_free(2, OVERLAP, n):
            w = Word(text)
            assert is_extremal_fast(w).holds == is_extremal(w, OVERLAP, False).holds, text


def test_extremal_fast_witnesses_cover_every_insertion():
    w = parse_word("01100110100110010110011010011001")
    report = is_extremal_fast(w, with_witnesses=True)
    assert report.holds
    assert len(report.witnesses) == 2 * (len(w) + 1)
    assert validate_report(report)


def test_extremal_fast_preconditions():
    with pytest.raises(ValueError):
        is_extremal_fast(parse_word("012", 3))
    with pytest.raises(ValueError):
        is_extremal_fast(parse_word("000"))


def test_report_record():
    record = is_delicate(parse_word("0102", 3), SQUARE).to_record()
    assert record["holds"] is False
    assert record["counterexample"] == "replace(0->2)"
    record = is_irreducible(parse_word("010010"), OVERLAP).to_record()
    assert record["property"] == "irreducible"
    assert record["witnesses"][0]["mutation"] == "delete(1)"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
