import logging
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

from core import DIGITS, MAX_ALPHABET_SIZE, Alphabet, Word, WordLike, as_text
from detect import Occurrence, RepetitionKind, find_repetition

logger = logging.getLogger(__name__)

# Test lengths of the two finite preservation criteria.
SQUAREFREE_TEST_LENGTH = 5
CUBEFREE_TEST_LENGTH = 7

_RULE = re.compile(r"^\s*(\d)\s*(?:->|→|:|=)\s*(\d+)\s*$")


class MorphismError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Morphism:
    """Letter-to-word map; images[a] is the image of letter a as digit text."""

    images: Tuple[str, ...]
    codomain_size: int = 2
    name: str = ""

    def __post_init__(self):
        if not self.images:
            raise MorphismError("A morphism needs at least one image")
        if not 1 <= self.codomain_size <= MAX_ALPHABET_SIZE:
            raise MorphismError(f"Codomain size must be in 1..{MAX_ALPHABET_SIZE}, got {self.codomain_size}")
        digits = DIGITS[: self.codomain_size]
        for a, image in enumerate(self.images):
            if not image:
                raise MorphismError(f"Image of {a} is empty")
            bad = [ch for ch in image if ch not in digits]
            if bad:
                raise MorphismError(f"Image of {a} uses {bad[0]!r}, outside the codomain of size {self.codomain_size}")

    @property
    def domain(self) -> Alphabet:
        return Alphabet(len(self.images))

    @property
    def codomain(self) -> Alphabet:
        return Alphabet(self.codomain_size)

    def image(self, letter: int) -> Word:
        return Word(self.images[letter], self.codomain_size)

    def apply_text(self, text: str) -> str:
        return "".join(self.images[int(ch)] for ch in text)

    def __str__(self) -> str:
        return self.name or format_morphism(self).replace("\n", ", ")


def apply(m: Morphism, w: WordLike) -> Word:
    text = as_text(w)
    size = len(m.images)
    for i, ch in enumerate(text):
        if ch not in DIGITS[:size]:
            raise ValueError(f"Letter {ch!r} at position {i} is outside the domain of size {size}")
    return Word(m.apply_text(text), m.codomain_size)


class BuiltinMorphismId(str, Enum):
    MU = "mu"
    TAU = "tau"
    PHI1_IRRCUBE = "phi1_irrcube"
    PHI2_IRRCUBE = "phi2_irrcube"
    PHI_DELSQ = "phi_delsq"
    PHI_DELCUBE = "phi_delcube"


_PHI1_IRRCUBE = ("01100100101101001011010010", "0110101100110101100101001100101001")

_BUILTINS: Dict[BuiltinMorphismId, Tuple[Tuple[str, ...], int]] = {
    BuiltinMorphismId.MU: (("01", "10"), 2),
    BuiltinMorphismId.TAU: (("012", "02", "1"), 3),
    BuiltinMorphismId.PHI1_IRRCUBE: (_PHI1_IRRCUBE, 2),
    BuiltinMorphismId.PHI_DELSQ: (("01202120102", "01210201021", "01210212021"), 3),
    BuiltinMorphismId.PHI_DELCUBE: (("0110101100101100101001", "1001010011010011010110"), 2),
}


def builtin(morphism_id: Union[BuiltinMorphismId, str]) -> Morphism:
    try:
        key = BuiltinMorphismId(morphism_id)
    except ValueError:
        known = ", ".join(m.value for m in BuiltinMorphismId)
        raise MorphismError(f"Unknown builtin morphism {morphism_id!r} (known: {known})")
    if key is BuiltinMorphismId.PHI2_IRRCUBE:
        # Images of phi2 are the reversals of those of phi1.
        return reverse_morphism(builtin(BuiltinMorphismId.PHI1_IRRCUBE), name=key.value)
    images, codomain = _BUILTINS[key]
    return Morphism(images, codomain, key.value)


@dataclass(frozen=True)
class PreservationResult:
    holds: bool
    tested: int
    counterexample: Optional[Word] = None
    occurrence: Optional[Occurrence] = None

    def __bool__(self) -> bool:
        return self.holds

    def to_record(self) -> dict:
        record = {"holds": self.holds, "tested": self.tested}
        if not self.holds:
            record["counterexample"] = self.counterexample.text
            record["occurrence"] = self.occurrence.to_record()
        return record


def _preserves(m: Morphism, size: int, kind: RepetitionKind, length: int) -> PreservationResult:
    from enumerator import iter_free

    if len(m.images) != size:
        raise MorphismError(f"{kind.adjective} preservation test needs a domain of size {size}, got {len(m.images)}")
    tested = 0
    for text in iter_free(size, kind, length):
        tested += 1
        occ = find_repetition(m.apply_text(text), kind)
        if occ is not None:
            logger.debug(f"{m}: image of {text} contains a {kind.value} at {occ.start} (period {occ.period})")
            return PreservationResult(False, tested, Word(text, size), occ)
    return PreservationResult(True, tested)


def preserves_squarefree(m: Morphism) -> PreservationResult:
    """Images of all squarefree ternary words of length 5 are squarefree."""
    return _preserves(m, 3, RepetitionKind.SQUARE, SQUAREFREE_TEST_LENGTH)


def preserves_cubefree(m: Morphism) -> PreservationResult:
    """Images of all cubefree binary words of length 7 are cubefree."""
    return _preserves(m, 2, RepetitionKind.CUBE, CUBEFREE_TEST_LENGTH)


def parse_morphism(text: str, codomain_size: Optional[int] = None, name: str = "") -> Morphism:
    """
    Parse `a -> image` rules, one per line. Blank lines and `#` comments are
    skipped. The domain must be {0, ..., k-1}; the codomain defaults to the
    smallest alphabet holding every image letter.
    """
    rules: Dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _RULE.match(line)
        if not match:
            raise MorphismError(f"Line {lineno}: expected '<letter> -> <image>', got {raw.strip()!r}")
        letter, image = int(match.group(1)), match.group(2)
        if letter in rules:
            raise MorphismError(f"Line {lineno}: duplicate rule for letter {letter}")
        rules[letter] = image
    if not rules:
        raise MorphismError("No rules found")
    if sorted(rules) != list(range(len(rules))):
        raise MorphismError(f"Domain letters must be 0..{len(rules) - 1}, got {sorted(rules)}")
    if codomain_size is None:
        codomain_size = max(int(ch) for image in rules.values() for ch in image) + 1
    return Morphism(tuple(rules[a] for a in range(len(rules))), codomain_size, name)


def load_morphism(path: Union[str, Path], codomain_size: Optional[int] = None) -> Morphism:
    path = Path(path)
    return parse_morphism(path.read_text(encoding="utf-8"), codomain_size, name=path.stem)


def format_morphism(m: Morphism) -> str:
    return "\n".join(f"{a} -> {image}" for a, image in enumerate(m.images))


def reverse_morphism(m: Morphism, name: Optional[str] = None) -> Morphism:
    if name is None:
        name = f"{m.name}^R" if m.name else ""
    return Morphism(tuple(image[::-1] for image in m.images), m.codomain_size, name)


def is_uniform(m: Morphism) -> bool:
    return len({len(image) for image in m.images}) == 1


def iterate_fixed_point(m: Morphism, letter: int, length: int) -> Word:
    """First `length` letters of the fixed point of m starting with `letter`."""
    if len(m.images) != m.codomain_size:
        raise MorphismError("Fixed points need an endomorphism")
    seed = m.images[letter]
    if seed[0] != DIGITS[letter] or (len(seed) < 2 and length > 1):
        raise MorphismError(f"{m} is not prolongable on {letter}")
    text = DIGITS[letter]
    while len(text) < length:
        # m(text) extends text because m(letter) starts with letter.
        text = m.apply_text(text)
    return Word(text[:length], m.codomain_size)
