import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, List, Optional, Union

import numpy as np

from core import Word, WordLike, as_text
from detect import RepetitionKind, find_repetition
from morphism import BuiltinMorphismId, builtin, is_uniform, iterate_fixed_point

logger = logging.getLogger(__name__)

# Blocks of t of length 8.
T0 = "01101001"
T1 = "10010110"


class InfiniteWordId(str, Enum):
    THUE_MORSE = "thue_morse"
    TERNARY_THUE_MORSE = "ternary_thue_morse"

    @classmethod
    def parse(cls, value: str) -> "InfiniteWordId":
        aliases = {"t": cls.THUE_MORSE, "v": cls.TERNARY_THUE_MORSE}
        text = str(value).strip().lower()
        if text in aliases:
            return aliases[text]
        try:
            return cls(text)
        except ValueError:
            raise ValueError(f"Unknown infinite word: {value!r} (expected thue_morse/t or ternary_thue_morse/v)")

    @property
    def size(self) -> int:
        return 2 if self is InfiniteWordId.THUE_MORSE else 3


@dataclass(frozen=True)
class PrefixSpec:
    """
    Letters drop..drop+take-1 of an infinite word, or of its image under a
    builtin morphism when `morphism` is set.
    """

    word: InfiniteWordId
    drop: int = 0
    take: int = 0
    morphism: Optional[BuiltinMorphismId] = None

    def __post_init__(self):
        if self.drop < 0 or self.take < 0:
            raise ValueError(f"drop and take must be >= 0, got drop={self.drop}, take={self.take}")


def _rounded(length: int) -> int:
    size = 64
    while size < length:
        size *= 2
    return size


@lru_cache(maxsize=16)
def _thue_morse_block(length: int) -> str:
    # t[i] is the parity of the number of 1 bits of i.
    index = np.arange(length, dtype=np.int64)
    parity = np.zeros(length, dtype=np.uint8)
    while index.any():
        parity ^= (index & 1).astype(np.uint8)
        index >>= 1
    return (parity + ord("0")).tobytes().decode("ascii")


@lru_cache(maxsize=16)
def _ternary_block(length: int) -> str:
    return iterate_fixed_point(builtin(BuiltinMorphismId.TAU), 0, length).text


def thue_morse(n: int) -> str:
    """First n letters of t as digit text."""
    if n <= 0:
        return ""
    return _thue_morse_block(_rounded(n))[:n]


def thue_morse_by_iteration(n: int) -> Word:
    return iterate_fixed_point(builtin(BuiltinMorphismId.MU), 0, n)


def ternary_thue_morse(n: int) -> str:
    """First n letters of v as digit text."""
    if n <= 0:
        return ""
    return _ternary_block(_rounded(n))[:n]


def _base_text(word: InfiniteWordId, n: int) -> str:
    return thue_morse(n) if word is InfiniteWordId.THUE_MORSE else ternary_thue_morse(n)


def prefix(spec: PrefixSpec) -> Word:
    end = spec.drop + spec.take
    if spec.morphism is None:
        return Word(_base_text(spec.word, end)[spec.drop :], spec.word.size)
    m = builtin(spec.morphism)
    if len(m.images) != spec.word.size:
        raise ValueError(f"{m.name} does not apply to {spec.word.value}")
    shortest = min(len(image) for image in m.images)
    host = m.apply_text(_base_text(spec.word, end // shortest + 1))
    return Word(host[spec.drop : end], m.codomain_size)


def repetition_prefix(text: str, kind: RepetitionKind) -> Optional[int]:
    """Length of the shortest prefix of text that is a repetition of the given kind, if any."""
    first = text[:1]
    period = 1
    while kind.span(period) <= len(text):
        span = kind.span(period)
        if text[period] == first and text[: span - period] == text[period:span]:
            return span
        period += 1
    return None


def no_square_prefix(limit: int) -> bool:
    """No prefix of t of even length <= limit is a square."""
    span = repetition_prefix(thue_morse(limit), RepetitionKind.SQUARE)
    if span is not None:
        logger.warning(f"t has the square prefix of length {span}")
    return span is None


def image_prefix_check(morphism_id: BuiltinMorphismId, kind: RepetitionKind, limit: int) -> bool:
    """No prefix of the first `limit` letters of m(t) is a repetition of the given kind."""
    span = repetition_prefix(prefix(PrefixSpec(InfiniteWordId.THUE_MORSE, 0, limit, morphism_id)).text, kind)
    if span is not None:
        logger.info(f"{BuiltinMorphismId(morphism_id).value}(t) has a {kind.value} prefix of length {span}")
    return span is None


def berstel_v(limit: int) -> Word:
    """v from t: letter i counts the 0s between the i-th and (i+1)-th 1 of t."""
    if limit <= 0:
        return Word("", 3)
    length = _rounded(4 * limit + 8)
    while True:
        letters = np.frombuffer(thue_morse(length).encode("ascii"), dtype=np.uint8)
        ones = np.flatnonzero(letters == ord("1"))
        if ones.size > limit:
            gaps = np.diff(ones[: limit + 1]) - 1
            return Word.from_letters(gaps.tolist(), 3)
        length *= 2


def prepend_check(prefix_word: WordLike, word: InfiniteWordId, kind: RepetitionKind, limit: int) -> bool:
    """prefix_word followed by the first `limit` letters of the infinite word is kind-free."""
    text = as_text(prefix_word) + _base_text(word, limit)
    occ = find_repetition(text, kind)
    if occ is not None:
        logger.info(f"{as_text(prefix_word)}·{word.value}: {kind.value} at {occ.start} (period {occ.period})")
    return occ is None


def factor_positions(host: str, needle: str) -> List[int]:
    """Every (possibly overlapping) occurrence of needle in host."""
    positions = []
    i = host.find(needle)
    while i >= 0 and needle:
        positions.append(i)
        i = host.find(needle, i + 1)
    return positions


def factor_position_check(
    host: PrefixSpec, needle: WordLike, allowed_residues: Iterable[int], modulus: int, limit: int
) -> bool:
    """Every occurrence of needle in the first `limit` host letters starts at an allowed residue."""
    if modulus < 1:
        raise ValueError(f"modulus must be >= 1, got {modulus}")
    if host.morphism is not None and not is_uniform(builtin(host.morphism)):
        raise ValueError(
            f"{host.morphism.value} is not uniform, so residues do not mark image starts; use block_start_check"
        )
    allowed = {r % modulus for r in allowed_residues}
    scanned = prefix(PrefixSpec(host.word, host.drop, limit, host.morphism)).text
    return all(i % modulus in allowed for i in factor_positions(scanned, as_text(needle)))


def block_start_check(
    word: InfiniteWordId,
    morphism_id: Union[BuiltinMorphismId, str],
    needle: WordLike,
    letter: int,
    limit: int,
) -> bool:
    """
    Every occurrence of needle in the first `limit` letters of m(word) starts
    where the image of an occurrence of `letter` starts.
    """
    m = builtin(morphism_id)
    shortest = min(len(image) for image in m.images)
    base = _base_text(word, limit // shortest + 1)
    letters = np.frombuffer(base.encode("ascii"), dtype=np.uint8) - ord("0")
    lengths = np.array([len(image) for image in m.images], dtype=np.int64)[letters]
    starts = np.concatenate(([0], np.cumsum(lengths)[:-1]))
    allowed = set(starts[letters == letter].tolist())
    host = m.apply_text(base)[:limit]
    return all(i in allowed for i in factor_positions(host, as_text(needle)))


@dataclass
class LemmaCheck:
    name: str
    holds: bool
    bound: int
    detail: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {"lemma": self.name, "holds": self.holds, "bound": self.bound, **self.detail}


def lemma_evidence(settings) -> List[LemmaCheck]:
    """Finite evidence for the facts about t and v that the constructions rely on."""
    binary = settings.binary_verify_limit
    ternary = settings.ternary_verify_limit
    positions = settings.position_check_limit
    t = InfiniteWordId.THUE_MORSE
    v = InfiniteWordId.TERNARY_THUE_MORSE
    checks = [
        LemmaCheck("no_square_prefix_t", no_square_prefix(settings.square_prefix_limit), settings.square_prefix_limit),
        LemmaCheck("t_by_iteration", thue_morse_by_iteration(binary).text == thue_morse(binary), binary),
        LemmaCheck("overlap_free_010110t", prepend_check("010110", t, RepetitionKind.OVERLAP, binary), binary),
        LemmaCheck(
            "overlap_free_101001101001t", prepend_check("101001101001", t, RepetitionKind.OVERLAP, binary), binary
        ),
        LemmaCheck("squarefree_2v", prepend_check("2", v, RepetitionKind.SQUARE, ternary), ternary),
        LemmaCheck("squarefree_21v", prepend_check("21", v, RepetitionKind.SQUARE, ternary), ternary),
        LemmaCheck("v_by_run_counts", berstel_v(ternary).text == ternary_thue_morse(ternary), ternary),
        LemmaCheck(
            "phi1_needle_starts_image_of_0",
            block_start_check(t, BuiltinMorphismId.PHI1_IRRCUBE, "01100100", 0, positions),
            positions,
            {"needle": "01100100"},
        ),
        LemmaCheck(
            "phi_delcube_needle_at_0_mod_22",
            factor_position_check(
                PrefixSpec(t, morphism=BuiltinMorphismId.PHI_DELCUBE), "011010110010", {0}, 22, positions
            ),
            positions,
            {"needle": "011010110010"},
        ),
        LemmaCheck(
            "no_square_prefix_phi1_t",
            image_prefix_check(BuiltinMorphismId.PHI1_IRRCUBE, RepetitionKind.SQUARE, positions),
            positions,
        ),
        # phi2(t) starts with the square 010010, so only overlaps are ruled out there.
        LemmaCheck(
            "no_overlap_prefix_phi2_t",
            image_prefix_check(BuiltinMorphismId.PHI2_IRRCUBE, RepetitionKind.OVERLAP, positions),
            positions,
            {"shortest_square_prefix": 6},
        ),
        LemmaCheck(
            "no_square_prefix_phi_delcube_t",
            image_prefix_check(BuiltinMorphismId.PHI_DELCUBE, RepetitionKind.SQUARE, positions),
            positions,
        ),
    ]
    block_claims = [
        ("T0T0T1", T0 + T0 + T1, {8}, 16),
        ("T1T1T0", T1 + T1 + T0, {8}, 16),
        ("T0T1T0T1T1", T0 + T1 + T0 + T1 + T1, {16}, 32),
        ("T1T0T1T0T0", T1 + T0 + T1 + T0 + T0, {16}, 32),
        ("T0T0T1T0T0", T0 + T0 + T1 + T0 + T0, set(), 32),
        ("T1T1T0T1T1", T1 + T1 + T0 + T1 + T1, set(), 32),
    ]
    for name, needle, residues, modulus in block_claims:
        holds = factor_position_check(PrefixSpec(t), needle, residues, modulus, binary)
        checks.append(
            LemmaCheck(
                f"t_blocks_{name}",
                holds,
                binary,
                {"residues": sorted(residues), "modulus": modulus},
            )
        )
    for check in checks:
        logger.info(f"{check.name}: {'ok' if check.holds else 'FAILED'} (bound {check.bound})")
    return checks
