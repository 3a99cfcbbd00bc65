import itertools
import logging

import pytest
from hypothesis import given
from hypothesis import strategies as st

from core import Word
from detect import RepetitionKind, find_repetition, is_free, validate_occurrence
from morphism import (
    BuiltinMorphismId,
    Morphism,
    MorphismError,
    apply,
    builtin,
    format_morphism,
    is_uniform,
    iterate_fixed_point,
    load_morphism,
    parse_morphism,
    preserves_cubefree,
    preserves_squarefree,
    reverse_morphism,
)
from props import PropertyKind, check_property

logging.basicConfig(level=logging.INFO)

MU = builtin(BuiltinMorphismId.MU)
TAU = builtin(BuiltinMorphismId.TAU)


def test_apply_examples():
    assert apply(MU, "0").text == "01"
    assert apply(MU, "001").text == "010110"
    assert apply(TAU, Word("0", 3)).text == "012"
    assert apply(MU, "").text == ""
    with pytest.raises(ValueError):
        apply(MU, "2")


@given(st.text(alphabet="01", max_size=30), st.text(alphabet="01", max_size=30))
def test_apply_is_a_homomorphism(u, v):
    phi = builtin(BuiltinMorphismId.PHI1_IRRCUBE)
    assert apply(phi, u + v).text == apply(phi, u).text + apply(phi, v).text


def test_builtin_images():
    phi1 = builtin("phi1_irrcube")
    phi2 = builtin(BuiltinMorphismId.PHI2_IRRCUBE)
    assert phi1.image(1).text == "0110101100110101100101001100101001"
    assert len(phi1.image(1)) == 34
    assert phi2.images == tuple(image[::-1] for image in phi1.images)
    assert reverse_morphism(phi1).images == phi2.images
    assert phi2.name == "phi2_irrcube"
    assert reverse_morphism(phi1).name == "phi1_irrcube^R"
    assert builtin(BuiltinMorphismId.PHI_DELCUBE).image(0).text == "0110101100101100101001"
    assert builtin(BuiltinMorphismId.PHI_DELSQ).codomain_size == 3
    with pytest.raises(MorphismError):
        builtin("sigma")


def test_is_uniform():
    assert is_uniform(MU)
    assert not is_uniform(TAU)
    assert not is_uniform(builtin(BuiltinMorphismId.PHI1_IRRCUBE))
    assert is_uniform(builtin(BuiltinMorphismId.PHI_DELCUBE))
    assert is_uniform(builtin(BuiltinMorphismId.PHI_DELSQ))


def test_preserves_squarefree():
    result = preserves_squarefree(builtin(BuiltinMorphismId.PHI_DELSQ))
    assert result.holds
    assert result.tested == 30
    assert preserves_squarefree(Morphism(("0", "1", "2"), 3)).holds


def test_tau_fails_squarefree_criterion_with_counterexample():
    result = preserves_squarefree(TAU)
    assert not result.holds
    assert is_free(result.counterexample, RepetitionKind.SQUARE)
    assert len(result.counterexample) == 5
    image = apply(TAU, result.counterexample)
    assert validate_occurrence(image, result.occurrence)
    assert result.to_record()["counterexample"] == result.counterexample.text


def test_preserves_cubefree():
    for morphism_id in (
        BuiltinMorphismId.PHI1_IRRCUBE,
        BuiltinMorphismId.PHI2_IRRCUBE,
        BuiltinMorphismId.PHI_DELCUBE,
    ):
        assert preserves_cubefree(builtin(morphism_id)).holds
    result = preserves_cubefree(Morphism(("00", "1"), 2))
    assert not result.holds
    assert find_repetition(apply(Morphism(("00", "1"), 2), result.counterexample), RepetitionKind.CUBE)


def test_criteria_check_domain_size():
    with pytest.raises(MorphismError):
        preserves_squarefree(MU)
    with pytest.raises(MorphismError):
        preserves_cubefree(TAU)


def test_parse_morphism():
    m = parse_morphism("0 -> 01\n  1->10  # complement\n\n")
    assert m.images == MU.images
    assert m.codomain_size == 2
    assert parse_morphism("0 -> 012\n1 -> 02\n2 -> 1").images == TAU.images
    assert parse_morphism(format_morphism(TAU)).images == TAU.images
    assert parse_morphism("0 -> 0\n1 -> 1", codomain_size=3).codomain_size == 3


@pytest.mark.parametrize(
    "text",
    [
        "0 -> 01\n0 -> 10",
        "0 -> \n1 -> 10",
        "0 -> 01\n2 -> 10",
        "0 => 01",
        "",
    ],
)
def test_parse_morphism_errors(text):
    with pytest.raises(MorphismError):
        parse_morphism(text)


def test_load_morphism(tmp_path):
    path = tmp_path / "tau.txt"
    path.write_text("0 -> 012\n1 -> 02\n2 -> 1\n")
    m = load_morphism(path)
    assert m.images == TAU.images
    assert m.name == "tau"


def test_morphism_rejects_bad_images():
    with pytest.raises(MorphismError):
        Morphism(("01", ""), 2)
    with pytest.raises(MorphismError):
        Morphism(("01", "12"), 2)


def test_iterate_fixed_point():
    assert iterate_fixed_point(MU, 0, 16).text == "0110100110010110"
    assert iterate_fixed_point(TAU, 0, 10).text == "0120210121"
    assert iterate_fixed_point(MU, 0, 0).text == ""
    with pytest.raises(MorphismError):
        iterate_fixed_point(TAU, 2, 5)


def test_thue_overlap_free_iff_mu_image_overlap_free():
    for n in range(0, 11):
        for letters in itertools.product("01", repeat=n):
            text = "".join(letters)
            assert is_free(text, RepetitionKind.OVERLAP) == is_free(MU.apply_text(text), RepetitionKind.OVERLAP)


def test_irreducible_cube_seed_images():
    irreducible = PropertyKind.irreducible()
    for morphism_id in (BuiltinMorphismId.PHI1_IRRCUBE, BuiltinMorphismId.PHI2_IRRCUBE):
        m = builtin(morphism_id)
        for u in ("0", "1", "00", "01", "10", "11"):
            assert check_property(apply(m, u), RepetitionKind.CUBE, irreducible, False).holds, (m.name, u)


def test_delicate_images():
    delicate = PropertyKind.delicate()
    for a in (0, 1):
        assert check_property(builtin("phi_delcube").image(a), RepetitionKind.CUBE, delicate, False).holds
    for a in (0, 1, 2):
        assert check_property(builtin("phi_delsq").image(a), RepetitionKind.SQUARE, delicate, False).holds


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
