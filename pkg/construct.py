import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Tuple

from core import Word
from detect import RepetitionKind
from enumerator import LengthClassification, SearchSpec, classify
from morphism import BuiltinMorphismId, builtin, preserves_cubefree, preserves_squarefree
from props import PropertyKind, check_property, is_extremal, is_extremal_fast
from streams import T0, T1, LemmaCheck, thue_morse, ternary_thue_morse

logger = logging.getLogger(__name__)

EID_SEED = "01100110100110010110011010011001"


class InadmissibleLengthError(ValueError):
    pass


class ConstructionError(RuntimeError):
    pass


class TheoremId(str, Enum):
    IRR_OVERLAP = "irr_overlap"
    IRR_CUBE = "irr_cube"
    IRR_SQUARE = "irr_square"
    DEL_SQUARE = "del_square"
    DEL_OVERLAP = "del_overlap"
    DEL_CUBE = "del_cube"
    EID_FAMILY = "eid_family"

    @classmethod
    def parse(cls, value: str) -> "TheoremId":
        text = str(value).strip().lower().replace("-", "_")
        if text == "eid":
            return cls.EID_FAMILY
        try:
            return cls(text)
        except ValueError:
            known = ", ".join(t.value for t in cls)
            raise ValueError(f"Unknown theorem {value!r} (known: {known})")

    @property
    def constructible(self) -> bool:
        return self is not TheoremId.IRR_SQUARE


@dataclass(frozen=True)
class TheoremProfile:
    alphabet: int
    kind: RepetitionKind
    properties: Tuple[PropertyKind, ...]
    small: FrozenSet[int] = frozenset()
    threshold: Optional[int] = None

    @property
    def property(self) -> PropertyKind:
        return self.properties[0]

    def admits(self, n: int) -> bool:
        return n in self.small or (self.threshold is not None and n >= self.threshold)


_IRR = (PropertyKind.irreducible(),)
_DEL = (PropertyKind.delicate(),)

PROFILES: Dict[TheoremId, TheoremProfile] = {
    TheoremId.IRR_OVERLAP: TheoremProfile(2, RepetitionKind.OVERLAP, _IRR, frozenset({6, 8, 9, 10}), 12),
    TheoremId.IRR_CUBE: TheoremProfile(2, RepetitionKind.CUBE, _IRR, frozenset({10, 14, 18, 19, 20}), 22),
    TheoremId.IRR_SQUARE: TheoremProfile(3, RepetitionKind.SQUARE, _IRR, frozenset({3, 6, 8, 9, 10, 11}), 13),
    TheoremId.DEL_SQUARE: TheoremProfile(3, RepetitionKind.SQUARE, _DEL, frozenset({5}), 7),
    TheoremId.DEL_OVERLAP: TheoremProfile(2, RepetitionKind.OVERLAP, _DEL, frozenset(), 7),
    TheoremId.DEL_CUBE: TheoremProfile(2, RepetitionKind.CUBE, _DEL, frozenset({20, 21, 22, 29, 33, 34, 35}), 38),
    TheoremId.EID_FAMILY: TheoremProfile(
        2,
        RepetitionKind.OVERLAP,
        (PropertyKind.extremal(), PropertyKind.irreducible(), PropertyKind.delicate()),
    ),
}


def theorem_profile(theorem: TheoremId) -> TheoremProfile:
    return PROFILES[TheoremId(theorem)]


def admissible(theorem: TheoremId, n: int) -> bool:
    theorem = TheoremId(theorem)
    if theorem is TheoremId.EID_FAMILY:
        return n >= len(EID_SEED) and n % len(EID_SEED) == 0 and (n // len(EID_SEED)).bit_count() == 1
    return PROFILES[theorem].admits(n)


@dataclass(frozen=True)
class Recipe:
    theorem: TheoremId
    n: int
    branch: str
    word: Word

    def to_record(self) -> dict:
        return {"theorem": self.theorem.value, "n": self.n, "branch": self.branch, "word": self.word.text}


# Irreducible overlap-free: base words, then rows keyed by n - 8k as
# (prefix, blocks dropped from t_k).
IRR_OVERLAP_BASE = {6: "010010", 10: "0100101101"}
IRR_OVERLAP_ROWS = {
    1: ("1", 0),
    2: ("1001101001", 1),
    3: ("01001101001", 1),
    4: ("1001", 0),
    5: ("01001", 0),
    6: ("010110", 0),
}
# n = 7 mod 8 families: drop 14 letters of t for n = 7 mod 32, 15 otherwise.
IRR_OVERLAP_DROP_LONG = 14
IRR_OVERLAP_DROP_SHORT = 15

IRR_CUBE_BASE = {
    10: "0100101101",
    14: "01001011010010",
    20: "01001010011001010010",
    24: "010010100110010100101101",
    28: "0100101001100101001011010010",
}
# Rows keyed by n - |phi1(t[:k])|: (prefix, host morphism, letters dropped from t[:k]).
# Differences 2, 3, 6 and 10 carry two rows each; the first one that fits and verifies wins.
_P1 = BuiltinMorphismId.PHI1_IRRCUBE
_P2 = BuiltinMorphismId.PHI2_IRRCUBE
IRR_CUBE_ROWS: Dict[int, List[Tuple[str, BuiltinMorphismId, int]]] = {
    1: [("1", _P1, 0)],
    2: [("0100101001100101001011001010", _P1, 1), ("010010100110010100101101001011010010", _P1, 1)],
    3: [("10110100101100101001100101001", _P1, 1), ("0100101101100100101100101001100101001", _P1, 1)],
    4: [("0110", _P2, 0)],
    5: [("01001", _P1, 0)],
    6: [("10010100110010100101001100101001", _P1, 1), ("0100101100100101101001011001001011010010", _P1, 1)],
    7: [("1001010", _P1, 0)],
    8: [("01001010", _P1, 0)],
    9: [("101101001", _P1, 0)],
    10: [
        ("010010100110010100101101001011010010", _P1, 1),
        ("01001011001001011010010110100101001100101001", _P1, 1),
    ],
    11: [("10010100110", _P2, 0)],
    12: [("101101001010", _P1, 0)],
    13: [("0100101101001", _P1, 0)],
    14: [("01001011001010", _P1, 0)],
    15: [("101101011001101", _P1, 0)],
    16: [("0100101101001010", _P1, 0)],
    17: [("01001010011001010", _P1, 0)],
    18: [("100101001100101001", _P1, 0)],
    19: [("0100101001100101001", _P1, 0)],
    20: [("01001011011001001010", _P1, 0)],
    21: [("100101001010011001010", _P1, 0)],
    22: [("0100101101001011010010", _P1, 0)],
    23: [("10110100101001100101001", _P1, 0)],
    24: [("010010110100101101001010", _P1, 0)],
    25: [("0100101100101001100101001", _P1, 0)],
    26: [("01100100101101001011010010", _P1, 0)],
    27: [("010010110100101001100101001", _P1, 0)],
    28: [("0100101001100101001011001010", _P1, 0)],
    29: [("10110100101100101001100101001", _P1, 0)],
    30: [("100110110100101101001011011001", _P1, 0)],
    31: [("0100101100100101101001011010010", _P1, 0)],
    32: [("10010100110010100101001100101001", _P1, 0)],
    33: [("010010100110010100101001100101001", _P1, 0)],
}

# Delicate squarefree: rows keyed by n mod 11 over images of v.
DEL_SQUARE_ROWS = {
    1: ("010210120102", 1),
    2: ("02", 0),
    3: ("102", 0),
    4: ("0121", 0),
    5: ("12021", 0),
    6: ("012102", 0),
    7: ("0212021", 0),
    8: ("02120121", 0),
    9: ("021012102", 0),
    10: ("1202120121", 0),
}

DEL_OVERLAP_BASE = {9: "001011001"}
# Letters of t dropped, keyed by n mod 8.
DEL_OVERLAP_DROP = {0: 0, 1: 7, 2: 6, 3: 13, 4: 12, 5: 3, 6: 10, 7: 1}

DEL_CUBE_BASE = {20: "00101001101001101011", 33: "001010011010011010110010110010100"}
# Rows keyed by n mod 22 over images of t.
DEL_CUBE_ROWS = {
    1: ("00101001101001101011001", 1),
    2: ("011001001100110110011001", 1),
    3: ("0010100110100110101101001", 1),
    4: ("00101001101001101011001010", 1),
    5: ("001010011010011010110010110", 1),
    6: ("0010100110100110101100101001", 1),
    7: ("01100100110011011001100100110", 1),
    8: ("001010011010011010110100101001", 1),
    9: ("0010100110100110101100101001010", 1),
    10: ("00101001101001101011001010011010", 1),
    11: ("001010011010011010110010110011001", 1),
    12: ("001010011010", 0),
    13: ("1001010011010", 0),
    14: ("001010011010011010110010100101001101", 1),
    15: ("0010100110100110101100100110011011001", 1),
    16: ("01100100110011011001100100110011011001", 1),
    17: ("00101001101001101", 0),
    18: ("100101001101001101", 0),
    19: ("1101011001011001010", 0),
    20: ("01101011001011001010", 0),
    21: ("001010011010011010110", 0),
}


def _image(morphism_id: BuiltinMorphismId, base: str) -> str:
    return builtin(morphism_id).apply_text(base)


def _irr_overlap_candidates(n: int) -> Iterator[Tuple[str, str]]:
    if n in IRR_OVERLAP_BASE:
        yield f"base word {n}", IRR_OVERLAP_BASE[n]
        return
    if n % 8 == 7:
        drop = IRR_OVERLAP_DROP_LONG if n % 32 == 7 else IRR_OVERLAP_DROP_SHORT
        yield f"t without its first {drop} letters, prefix {n}", thue_morse(drop + n)[drop:]
        return
    k, d = divmod(n, 8)
    if d == 0:
        yield f"t_{k}", thue_morse(8 * k)
        return
    head, back = IRR_OVERLAP_ROWS[d]
    yield f"row {d}: {head} t_{k - back}", head + thue_morse(8 * (k - back))


def _phi1_prefix_lengths(n: int) -> Tuple[int, int]:
    """Largest k with |phi1(t[:k])| <= n, and that length."""
    images = builtin(_P1).images
    k, length = 0, 0
    t = thue_morse(n + 1)
    while length + len(images[int(t[k])]) <= n:
        length += len(images[int(t[k])])
        k += 1
    return k, length


def _irr_cube_candidates(n: int) -> Iterator[Tuple[str, str]]:
    if n in IRR_CUBE_BASE:
        yield f"base word {n}", IRR_CUBE_BASE[n]
        return
    k, length = _phi1_prefix_lengths(n)
    d = n - length
    if d == 0:
        yield f"w_1,{k}", _image(_P1, thue_morse(k))
        return
    rows = IRR_CUBE_ROWS[d]
    for index, (head, morphism_id, back) in enumerate(rows):
        if k - back < 0:
            continue
        host = _image(morphism_id, thue_morse(k - back))
        which = 1 if morphism_id is _P1 else 2
        label = f"row {d}" + (f" ({'ab'[index]})" if len(rows) > 1 else "")
        yield f"{label}: {head} w_{which},{k - back}", head + host


def _del_square_candidates(n: int) -> Iterator[Tuple[str, str]]:
    k, d = divmod(n, 11)
    if d == 0:
        yield f"w_{k}", _image(BuiltinMorphismId.PHI_DELSQ, ternary_thue_morse(k))
        return
    head, back = DEL_SQUARE_ROWS[d]
    yield f"row {d}: {head} w_{k - back}", head + _image(BuiltinMorphismId.PHI_DELSQ, ternary_thue_morse(k - back))


def _del_overlap_candidates(n: int) -> Iterator[Tuple[str, str]]:
    if n in DEL_OVERLAP_BASE:
        yield f"base word {n}", DEL_OVERLAP_BASE[n]
        return
    drop = DEL_OVERLAP_DROP[n % 8]
    yield f"t without its first {drop} letters, prefix {n}", thue_morse(drop + n)[drop:]


def _del_cube_candidates(n: int) -> Iterator[Tuple[str, str]]:
    if n in DEL_CUBE_BASE:
        yield f"base word {n}", DEL_CUBE_BASE[n]
        return
    k, d = divmod(n, 22)
    if d == 0:
        yield f"w_{k}", _image(BuiltinMorphismId.PHI_DELCUBE, thue_morse(k))
        return
    head, back = DEL_CUBE_ROWS[d]
    if k - back >= 0:
        yield f"row {d}: {head} w_{k - back}", head + _image(BuiltinMorphismId.PHI_DELCUBE, thue_morse(k - back))


def _eid_candidates(n: int) -> Iterator[Tuple[str, str]]:
    level = (n // len(EID_SEED)).bit_length() - 1
    yield f"w_{level}", eid_word(level).text


_CANDIDATES: Dict[TheoremId, Callable[[int], Iterator[Tuple[str, str]]]] = {
    TheoremId.IRR_OVERLAP: _irr_overlap_candidates,
    TheoremId.IRR_CUBE: _irr_cube_candidates,
    TheoremId.DEL_SQUARE: _del_square_candidates,
    TheoremId.DEL_OVERLAP: _del_overlap_candidates,
    TheoremId.DEL_CUBE: _del_cube_candidates,
    TheoremId.EID_FAMILY: _eid_candidates,
}


def holds_for(theorem: TheoremId, w: Word) -> bool:
    profile = theorem_profile(theorem)
    return all(check_property(w, profile.kind, prop, with_witnesses=False).holds for prop in profile.properties)


def construct(theorem: TheoremId, n: int) -> Recipe:
    """A verified word of length n for the theorem; never returns an unverified word."""
    theorem = TheoremId(theorem)
    if not theorem.constructible:
        raise InadmissibleLengthError(f"{theorem.value} has no construction; use classify")
    if not admissible(theorem, n):
        raise InadmissibleLengthError(f"{n} is not an admissible length for {theorem.value}")
    profile = PROFILES[theorem]
    tried = []
    for branch, text in _CANDIDATES[theorem](n):
        if len(text) != n:
            logger.debug(f"{theorem.value} n={n}: {branch} has length {len(text)}, skipped")
            continue
        w = Word(text, profile.alphabet)
        if holds_for(theorem, w):
            return Recipe(theorem, n, branch, w)
        tried.append(branch)
    raise ConstructionError(f"{theorem.value} n={n}: no candidate verified (tried: {tried or 'none'})")


@lru_cache(maxsize=8)
def _eid_text(i: int) -> str:
    if i == 0:
        return EID_SEED
    return builtin(BuiltinMorphismId.MU).apply_text(_eid_text(i - 1))


def eid_word(i: int) -> Word:
    """Level i of the family that is extremal, irreducible and delicate at once."""
    if i < 0:
        raise ValueError(f"level must be >= 0, got {i}")
    return Word(_eid_text(i), 2)


def verify_block_structure(limit: int = 1 << 12) -> List[LemmaCheck]:
    """Block facts behind the t-based constructions."""
    overlap = RepetitionKind.OVERLAP
    irreducible = PropertyKind.irreducible()
    delicate = PropertyKind.delicate()
    checks = []
    for name, text in (("T0", T0), ("T1", T1)):
        w = Word(text)
        checks.append(LemmaCheck(f"{name}_irreducible", check_property(w, overlap, irreducible, False).holds, 8))
        checks.append(LemmaCheck(f"{name}_delicate", check_property(w, overlap, delicate, False).holds, 8))
    for left, right in (("T0", "T0"), ("T0", "T1"), ("T1", "T0"), ("T1", "T1")):
        w = Word({"T0": T0, "T1": T1}[left] + {"T0": T0, "T1": T1}[right])
        checks.append(
            LemmaCheck(f"{left}{right}_irreducible", check_property(w, overlap, irreducible, False).holds, 16)
        )
    t = thue_morse(limit - limit % 8)
    blocks_ok = all(t[i : i + 8] in (T0, T1) for i in range(0, len(t), 8))
    checks.append(LemmaCheck("t_is_T0_T1_blocks", blocks_ok, len(t)))
    return checks


def morphism_evidence() -> List[LemmaCheck]:
    """Preservation criteria and seed-word properties of the builtin morphisms."""
    checks = []
    for morphism_id in (_P1, _P2, BuiltinMorphismId.PHI_DELCUBE):
        result = preserves_cubefree(builtin(morphism_id))
        checks.append(LemmaCheck(f"{morphism_id.value}_preserves_cubefree", result.holds, 7, result.to_record()))
    result = preserves_squarefree(builtin(BuiltinMorphismId.PHI_DELSQ))
    checks.append(LemmaCheck("phi_delsq_preserves_squarefree", result.holds, 5, result.to_record()))

    irreducible = PropertyKind.irreducible()
    delicate = PropertyKind.delicate()
    for morphism_id in (_P1, _P2):
        m = builtin(morphism_id)
        seeds = ("0", "1", "00", "01", "10", "11")
        ok = all(
            check_property(Word(m.apply_text(u)), RepetitionKind.CUBE, irreducible, False).holds for u in seeds
        )
        checks.append(LemmaCheck(f"{morphism_id.value}_seed_images_irreducible", ok, 2))
    m = builtin(BuiltinMorphismId.PHI_DELCUBE)
    ok = all(check_property(m.image(a), RepetitionKind.CUBE, delicate, False).holds for a in (0, 1))
    checks.append(LemmaCheck("phi_delcube_images_delicate", ok, 1))
    m = builtin(BuiltinMorphismId.PHI_DELSQ)
    ok = all(check_property(m.image(a), RepetitionKind.SQUARE, delicate, False).holds for a in (0, 1, 2))
    checks.append(LemmaCheck("phi_delsq_images_delicate", ok, 1))
    for check in checks:
        logger.info(f"{check.name}: {'ok' if check.holds else 'FAILED'}")
    return checks


@dataclass
class TheoremReport:
    theorem: TheoremId
    max_len: int
    constructed: Dict[int, str] = field(default_factory=dict)
    classified_max: int = 0
    admitted: List[int] = field(default_factory=list)
    discrepancies: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.discrepancies

    def to_record(self) -> dict:
        record = {
            "theorem": self.theorem.value,
            "passed": self.passed,
            "max_len": self.max_len,
            "constructed": len(self.constructed),
            "branches": {str(n): b for n, b in sorted(self.constructed.items())},
        }
        if self.classified_max:
            record["classified"] = [1, self.classified_max]
            record["admitted"] = self.admitted
        if self.discrepancies:
            record["discrepancies"] = self.discrepancies
        return record


Classifier = Callable[[SearchSpec], LengthClassification]


def _classify_default(spec: SearchSpec) -> LengthClassification:
    return classify(spec)


def verify_theorem(
    theorem: TheoremId,
    max_len: int,
    classify_max: Optional[int] = None,
    classifier: Optional[Classifier] = None,
    levels: int = 3,
) -> TheoremReport:
    """
    Construct every admissible length up to max_len and compare the admitted
    set found by exhaustive search on 1..classify_max with the theorem's set.
    The eid family is checked level by level instead.
    """
    theorem = TheoremId(theorem)
    if theorem is TheoremId.EID_FAMILY:
        return _verify_eid(levels)
    report = TheoremReport(theorem, max_len)
    profile = PROFILES[theorem]

    if theorem.constructible:
        for n in range(1, max_len + 1):
            if not admissible(theorem, n):
                continue
            try:
                recipe = construct(theorem, n)
            except ConstructionError as e:
                report.discrepancies.append(f"construct n={n}: {e}")
                continue
            report.constructed[n] = recipe.branch
        logger.info(f"{theorem.value}: constructed {len(report.constructed)} lengths up to {max_len}")

    bound = max_len if classify_max is None else min(max_len, classify_max)
    if bound >= 1:
        spec = SearchSpec(
            alphabet=profile.alphabet,
            kind=profile.kind,
            property=profile.property,
            min_len=1,
            max_len=bound,
        )
        c = (classifier or _classify_default)(spec)
        report.classified_max = bound
        report.admitted = c.admitted()
        expected = [n for n in range(1, bound + 1) if admissible(theorem, n)]
        for n in sorted(set(expected) - set(report.admitted)):
            report.discrepancies.append(f"+ n={n}: admissible but the search found no word")
        for n in sorted(set(report.admitted) - set(expected)):
            report.discrepancies.append(f"- n={n}: inadmissible but the search found {c.counts[n]} word(s)")
    return report


def _verify_eid(levels: int) -> TheoremReport:
    report = TheoremReport(TheoremId.EID_FAMILY, len(EID_SEED) << max(0, levels))
    for i in range(levels + 1):
        w = eid_word(i)
        if not holds_for(TheoremId.EID_FAMILY, w):
            report.discrepancies.append(f"w_{i}: not extremal, irreducible and delicate")
            continue
        fast = is_extremal_fast(w).holds
        full = is_extremal(w, RepetitionKind.OVERLAP, with_witnesses=False).holds
        if fast != full:
            report.discrepancies.append(f"w_{i}: fast extremality check says {fast}, full check says {full}")
            continue
        report.constructed[len(w)] = f"w_{i}"
    return report
