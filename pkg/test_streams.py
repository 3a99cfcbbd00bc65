import logging

import pytest

from config import ToolkitSettings
from detect import RepetitionKind, is_free
from morphism import BuiltinMorphismId, builtin
from streams import (
    T0,
    T1,
    InfiniteWordId,
    PrefixSpec,
    berstel_v,
    block_start_check,
    factor_position_check,
    factor_positions,
    lemma_evidence,
    image_prefix_check,
    no_square_prefix,
    prefix,
    prepend_check,
    repetition_prefix,
    ternary_thue_morse,
    thue_morse,
    thue_morse_by_iteration,
)

logging.basicConfig(level=logging.INFO)

T = InfiniteWordId.THUE_MORSE
V = InfiniteWordId.TERNARY_THUE_MORSE


def test_prefix_examples():
    assert prefix(PrefixSpec(T, 0, 8)).text == "01101001"
    assert prefix(PrefixSpec(T, 8, 8)).text == "10010110"
    assert prefix(PrefixSpec(V, 0, 3)).text == "012"
    assert prefix(PrefixSpec(T, 5, 0)).text == ""
    assert T0 == "01101001" and T1 == "10010110"


def test_prefix_of_image():
    phi1 = builtin(BuiltinMorphismId.PHI1_IRRCUBE)
    assert prefix(PrefixSpec(T, 0, 26, BuiltinMorphismId.PHI1_IRRCUBE)).text == phi1.images[0]
    host = phi1.apply_text(thue_morse(20))
    assert prefix(PrefixSpec(T, 30, 100, BuiltinMorphismId.PHI1_IRRCUBE)).text == host[30:130]
    with pytest.raises(ValueError):
        prefix(PrefixSpec(V, 0, 10, BuiltinMorphismId.PHI1_IRRCUBE))


def test_prefix_spec_validation():
    with pytest.raises(ValueError):
        PrefixSpec(T, -1, 5)
    assert InfiniteWordId.parse("t") is T
    assert InfiniteWordId.parse("ternary_thue_morse") is V
    with pytest.raises(ValueError):
        InfiniteWordId.parse("fibonacci")


@pytest.mark.parametrize("n", [1, 7, 64, 1000, 5000])
def test_popcount_formula_matches_iteration(n):
    assert thue_morse(n) == thue_morse_by_iteration(n).text


def test_fixed_point_property():
    mu = builtin(BuiltinMorphismId.MU)
    for n in (1, 5, 33, 512):
        assert thue_morse(2 * n) == mu.apply_text(thue_morse(n))


def test_prefixes_are_free():
    assert is_free(thue_morse(2048), RepetitionKind.OVERLAP)
    assert is_free(ternary_thue_morse(1000), RepetitionKind.SQUARE)


def test_no_square_prefix():
    assert no_square_prefix(2)
    assert no_square_prefix(64)
    assert no_square_prefix(4096)


def test_berstel_v():
    assert berstel_v(0).text == ""
    assert berstel_v(3).text == "012"
    assert berstel_v(1000).text == ternary_thue_morse(1000)


def test_prepend_check():
    assert prepend_check("010110", T, RepetitionKind.OVERLAP, 1024)
    assert prepend_check("101001101001", T, RepetitionKind.OVERLAP, 1024)
    assert prepend_check("2", V, RepetitionKind.SQUARE, 1000)
    assert prepend_check("21", V, RepetitionKind.SQUARE, 1000)
    assert not prepend_check("0", T, RepetitionKind.SQUARE, 100)


def test_factor_positions():
    assert factor_positions("010101", "0101") == [0, 2]
    assert factor_positions("0110", "000") == []


def test_factor_position_check_on_t_blocks():
    host = PrefixSpec(T)
    assert factor_position_check(host, T0 + T0 + T1, {8}, 16, 4096)
    assert not factor_position_check(host, T0 + T0 + T1, {0}, 16, 4096)
    assert factor_position_check(host, T0 + T1 + T0 + T1 + T1, {16}, 32, 4096)
    assert factor_position_check(host, T0 + T0 + T1 + T0 + T0, set(), 32, 4096)
    assert factor_position_check(host, "0" * 20, {0}, 3, 10)


def test_needle_positions_in_images():
    assert block_start_check(T, BuiltinMorphismId.PHI1_IRRCUBE, "01100100", 0, 3000)
    host = PrefixSpec(T, morphism=BuiltinMorphismId.PHI_DELCUBE)
    assert factor_position_check(host, "011010110010", {0}, 22, 3000)


def test_residues_need_a_uniform_morphism():
    host = PrefixSpec(T, morphism=BuiltinMorphismId.PHI1_IRRCUBE)
    with pytest.raises(ValueError):
        factor_position_check(host, "01100100", {0}, 26, 3000)


def test_repetition_prefix():
    assert repetition_prefix("010010110", RepetitionKind.SQUARE) == 6
    assert repetition_prefix("010010110", RepetitionKind.OVERLAP) is None
    assert repetition_prefix("0010", RepetitionKind.SQUARE) == 2
    assert repetition_prefix("000", RepetitionKind.CUBE) == 3
    assert repetition_prefix("", RepetitionKind.SQUARE) is None
    assert repetition_prefix(thue_morse(1024), RepetitionKind.SQUARE) is None


def test_image_prefixes():
    assert image_prefix_check(BuiltinMorphismId.PHI1_IRRCUBE, RepetitionKind.SQUARE, 3000)
    assert image_prefix_check(BuiltinMorphismId.PHI_DELCUBE, RepetitionKind.SQUARE, 3000)
    assert image_prefix_check(BuiltinMorphismId.PHI2_IRRCUBE, RepetitionKind.OVERLAP, 3000)
    assert not image_prefix_check(BuiltinMorphismId.PHI2_IRRCUBE, RepetitionKind.SQUARE, 3000)


def test_lemma_evidence_small_bounds():
    settings = ToolkitSettings(
        binary_verify_limit=2048,
        ternary_verify_limit=1000,
        square_prefix_limit=4096,
        position_check_limit=3000,
    )
    checks = lemma_evidence(settings)
    assert len(checks) == 18
    failed = [c.name for c in checks if not c.holds]
    assert failed == []
    assert checks[0].to_record()["lemma"] == "no_square_prefix_t"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
