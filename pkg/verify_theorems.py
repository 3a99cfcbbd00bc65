"""
Reproduces the length classifications, constructions and finite evidence end to end.

The expensive bounds (delicate cubefree search to 40, constructions to 200,
oracle comparison on ternary words to 10) only run with
BAREFREE_FULL_ACCEPTANCE=1; otherwise reduced bounds are used.
"""
import itertools
import logging
import os

import pytest

from construct import TheoremId, admissible, construct, eid_word, morphism_evidence, theorem_profile
from detect import RepetitionKind, is_free, oracle_is_free
from enumerator import SearchSpec, classify, enumerate_free
from morphism import BuiltinMorphismId, builtin, iterate_fixed_point
from props import PropertyKind, check_property, is_delicate, is_extremal, is_extremal_fast, is_irreducible
from streams import InfiniteWordId, berstel_v, image_prefix_check, no_square_prefix, prepend_check

logging.basicConfig(level=logging.INFO)

FULL = os.getenv("BAREFREE_FULL_ACCEPTANCE", "").strip() == "1"
JOBS = int(os.getenv("BAREFREE_JOBS", "0") or 0) or (os.cpu_count() or 1)

SQUARE, OVERLAP, CUBE = RepetitionKind.SQUARE, RepetitionKind.OVERLAP, RepetitionKind.CUBE


def expected_set(theorem, max_len):
    return [n for n in range(1, max_len + 1) if admissible(theorem, n)]


def classified(theorem, max_len):
    profile = theorem_profile(theorem)
    spec = SearchSpec(
        alphabet=profile.alphabet,
        kind=profile.kind,
        property=profile.property,
        min_len=1,
        max_len=max_len,
        witness_limit=1,
    )
    return classify(spec, jobs=JOBS).admitted()


def test_irreducible_overlap_free_lengths():
    admitted = classified(TheoremId.IRR_OVERLAP, 32)
    assert admitted == [6, 8, 9, 10] + list(range(12, 33))


def test_irreducible_cubefree_lengths():
    bound = 30 if FULL else 26
    admitted = classified(TheoremId.IRR_CUBE, bound)
    assert admitted == [10, 14, 18, 19, 20] + list(range(22, bound + 1))


def test_irreducible_squarefree_lengths():
    admitted = classified(TheoremId.IRR_SQUARE, 22)
    assert admitted == [3, 6, 8, 9, 10, 11] + list(range(13, 23))


def test_delicate_squarefree_lengths():
    bound = 24 if FULL else 18
    admitted = classified(TheoremId.DEL_SQUARE, bound)
    assert admitted == [5] + list(range(7, bound + 1))


def test_delicate_overlap_free_lengths():
    assert classified(TheoremId.DEL_OVERLAP, 32) == list(range(7, 33))


def test_delicate_cubefree_lengths():
    bound = 40 if FULL else 24
    admitted = classified(TheoremId.DEL_CUBE, bound)
    assert admitted == expected_set(TheoremId.DEL_CUBE, bound)
    if FULL:
        assert admitted == [20, 21, 22, 29, 33, 34, 35, 38, 39, 40]


@pytest.mark.parametrize(
    "theorem",
    [TheoremId.IRR_OVERLAP, TheoremId.IRR_CUBE, TheoremId.DEL_SQUARE, TheoremId.DEL_OVERLAP, TheoremId.DEL_CUBE],
)
def test_constructions_self_verify(theorem):
    bound = 200 if FULL else 80
    profile = theorem_profile(theorem)
    for n in expected_set(theorem, bound):
        w = construct(theorem, n).word
        assert len(w) == n
        assert is_free(w, profile.kind)
        assert check_property(w, profile.kind, profile.property, with_witnesses=False).holds, n


def test_extremal_irreducible_delicate_family():
    levels = 3 if FULL else 2
    for i in range(levels + 1):
        w = eid_word(i)
        assert len(w) == 32 << i
        assert is_extremal(w, OVERLAP, False).holds
        assert is_irreducible(w, OVERLAP, False).holds
        assert is_delicate(w, OVERLAP, False).holds
        assert is_extremal_fast(w).holds


def test_morphism_criteria():
    checks = morphism_evidence()
    assert all(c.holds for c in checks), [c.name for c in checks if not c.holds]


def test_lemma_evidence_at_finite_scale():
    assert no_square_prefix(1 << 16)
    assert image_prefix_check(BuiltinMorphismId.PHI1_IRRCUBE, SQUARE, 1 << 14)
    assert image_prefix_check(BuiltinMorphismId.PHI2_IRRCUBE, OVERLAP, 1 << 14)
    assert image_prefix_check(BuiltinMorphismId.PHI_DELCUBE, SQUARE, 1 << 14)
    t, v = InfiniteWordId.THUE_MORSE, InfiniteWordId.TERNARY_THUE_MORSE
    assert prepend_check("010110", t, OVERLAP, 1 << 14)
    assert prepend_check("101001101001", t, OVERLAP, 1 << 14)
    assert prepend_check("2", v, SQUARE, 10_000)
    assert prepend_check("21", v, SQUARE, 10_000)
    tau = builtin(BuiltinMorphismId.TAU)
    assert berstel_v(1000).text == iterate_fixed_point(tau, 0, 1000).text


@pytest.mark.parametrize("size,max_len", [(2, 14), (3, 10 if FULL else 8)])
def test_detector_and_search_match_oracle(size, max_len):
    letters = "012"[:size]
    for kind in RepetitionKind:
        for n in range(max_len + 1):
            free = 0
            for p in itertools.product(letters, repeat=n):
                text = "".join(p)
                expected = oracle_is_free(text, kind)
                assert is_free(text, kind) == expected, text
                free += expected
            assert enumerate_free(size, kind, n) == free, (kind, n)


@pytest.mark.parametrize("size,max_len", [(2, 12), (3, 8)])
def test_classification_is_symmetry_invariant(size, max_len):
    for kind in RepetitionKind:
        for prop in (PropertyKind.extremal(), PropertyKind.irreducible(), PropertyKind.delicate()):
            args = dict(alphabet=size, kind=kind, property=prop, min_len=0, max_len=max_len, witness_limit=2)
            reduced = classify(SearchSpec(**args))
            full = classify(SearchSpec(symmetry_reduction=False, **args))
            assert reduced.counts == full.counts, (kind, prop.label)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
