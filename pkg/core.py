import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple, Union

logger = logging.getLogger(__name__)

# Letters are 0-based and written as single ASCII digits.
DIGITS = "0123456789"
MAX_ALPHABET_SIZE = len(DIGITS)


@dataclass(frozen=True, slots=True)
class Alphabet:
    """A finite alphabet {0, ..., size-1}."""

    size: int

    def __post_init__(self):
        if not 1 <= int(self.size) <= MAX_ALPHABET_SIZE:
            raise ValueError(f"Alphabet size must be in 1..{MAX_ALPHABET_SIZE}, got {self.size}")

    @property
    def digits(self) -> str:
        return DIGITS[: self.size]

    @property
    def letters(self) -> Tuple[int, ...]:
        return tuple(range(self.size))

    def contains(self, letter: int) -> bool:
        return 0 <= letter < self.size


BINARY = Alphabet(2)


def _alphabet_size(alphabet: Union[Alphabet, int]) -> int:
    return alphabet.size if isinstance(alphabet, Alphabet) else int(alphabet)


@dataclass(frozen=True, slots=True)
class Word:
    """
    Immutable finite word over {0, ..., size-1}.

    The letters are stored as digit text so that factor comparisons are plain
    string slices; `letters` gives the integer view.
    """

    text: str
    size: int = 2

    def __post_init__(self):
        digits = Alphabet(self.size).digits
        for i, ch in enumerate(self.text):
            if ch not in digits:
                raise ValueError(
                    f"Letter {ch!r} at position {i} is outside the alphabet of size {self.size}"
                )

    @classmethod
    def from_letters(cls, letters: Sequence[int], size: int = 2) -> "Word":
        alphabet = Alphabet(size)
        for i, a in enumerate(letters):
            if not alphabet.contains(int(a)):
                raise ValueError(f"Letter {a} at position {i} is outside the alphabet of size {size}")
        return cls("".join(DIGITS[int(a)] for a in letters), size)

    @classmethod
    def empty(cls, size: int = 2) -> "Word":
        return cls("", size)

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.size)

    @property
    def letters(self) -> Tuple[int, ...]:
        return tuple(int(ch) for ch in self.text)

    def __len__(self) -> int:
        return len(self.text)

    def __iter__(self) -> Iterator[int]:
        return (int(ch) for ch in self.text)

    def __getitem__(self, key):
        if isinstance(key, slice):
            return Word(self.text[key], self.size)
        return int(self.text[key])

    def __add__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return Word(self.text + other.text, max(self.size, other.size))

    def __lt__(self, other: "Word") -> bool:
        return self.text < other.text

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"Word({self.text!r}, size={self.size})"


def parse_word(text: str, size: int = 2) -> Word:
    """Parse the digit encoding ("0100101101"); surrounding whitespace is ignored."""
    return Word(str(text).strip(), int(size))


WordLike = Union[Word, str]


def as_text(w: WordLike) -> str:
    return w.text if isinstance(w, Word) else w


def _check_index(w: Word, i: int, upper: int) -> None:
    if not 0 <= i <= upper:
        raise IndexError(f"Index {i} out of range for word of length {len(w)}")


def _check_letter(w: Word, a: int) -> None:
    if not w.alphabet.contains(a):
        raise ValueError(f"Letter {a} is outside the alphabet of size {w.size}")


def factor(w: Word, start: int, length: int) -> Word:
    if start < 0 or length < 0 or start + length > len(w):
        raise IndexError(f"Factor [{start}, {start + length}) out of range for word of length {len(w)}")
    return Word(w.text[start : start + length], w.size)


def delete_at(w: Word, i: int) -> Word:
    _check_index(w, i, len(w) - 1)
    return Word(w.text[:i] + w.text[i + 1 :], w.size)


def replace_at(w: Word, i: int, a: int) -> Word:
    _check_index(w, i, len(w) - 1)
    _check_letter(w, a)
    return Word(w.text[:i] + DIGITS[a] + w.text[i + 1 :], w.size)


def insert_at(w: Word, i: int, a: int) -> Word:
    _check_index(w, i, len(w))
    _check_letter(w, a)
    return Word(w.text[:i] + DIGITS[a] + w.text[i:], w.size)


@dataclass(frozen=True, slots=True)
class SymmetryOp:
    """Letter permutation followed by an optional reversal."""

    permutation: Tuple[int, ...]
    reversed: bool = False

    def __post_init__(self):
        if sorted(self.permutation) != list(range(len(self.permutation))):
            raise ValueError(f"Not a bijection on 0..{len(self.permutation) - 1}: {self.permutation}")

    @classmethod
    def identity(cls, size: int) -> "SymmetryOp":
        return cls(tuple(range(size)), False)

    @property
    def size(self) -> int:
        return len(self.permutation)

    def translation(self) -> dict:
        return str.maketrans(DIGITS[: self.size], "".join(DIGITS[a] for a in self.permutation))

    def apply_text(self, text: str) -> str:
        out = text.translate(self.translation())
        return out[::-1] if self.reversed else out

    def then(self, other: "SymmetryOp") -> "SymmetryOp":
        """Composite op: apply self, then other."""
        if other.size != self.size:
            raise ValueError("Cannot compose symmetries over different alphabets")
        perm = tuple(other.permutation[a] for a in self.permutation)
        return SymmetryOp(perm, self.reversed != other.reversed)

    def describe(self) -> str:
        perm = "".join(DIGITS[a] for a in self.permutation)
        return f"perm={perm}{'+reverse' if self.reversed else ''}"


def swap01(size: int = 2, reverse: bool = False) -> SymmetryOp:
    perm = list(range(size))
    perm[0], perm[1] = 1, 0
    return SymmetryOp(tuple(perm), reverse)


def apply_symmetry(w: Word, s: SymmetryOp) -> Word:
    if s.size != w.size:
        raise ValueError(f"Symmetry over {s.size} letters applied to word over {w.size} letters")
    return Word(s.apply_text(w.text), w.size)


def all_symmetries(size: Union[Alphabet, int]) -> List[SymmetryOp]:
    perms = letter_permutations(size)
    mirror = SymmetryOp(perms[0].permutation, True)
    return perms + [p.then(mirror) for p in perms]


def letter_permutations(size: Union[Alphabet, int]) -> List[SymmetryOp]:
    n = _alphabet_size(size)
    return [SymmetryOp(tuple(perm), False) for perm in itertools.permutations(range(n))]


def reverse(w: Word) -> Word:
    return Word(w.text[::-1], w.size)


def complement(w: Word) -> Word:
    if w.alphabet != BINARY:
        raise ValueError("complement is defined for binary words only")
    return apply_symmetry(w, swap01())
