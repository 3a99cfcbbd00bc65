import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, List, Optional, Tuple

from core import DIGITS, Word
from detect import Occurrence, RepetitionKind, find_covering, find_repetition, validate_occurrence

logger = logging.getLogger(__name__)

# Irreducible words have at least one interior letter to remove.
IRREDUCIBLE_MIN_LENGTH = 3
# Insertions with at least this many letters on both sides always create an
# overlap in an overlap-free binary word.
EXTREMAL_FAST_MARGIN = 5


class PropertyName(str, Enum):
    EXTREMAL = "extremal"
    IRREDUCIBLE = "irreducible"
    DELICATE = "delicate"
    K_DELICATE = "k-delicate"


@dataclass(frozen=True)
class PropertyKind:
    name: PropertyName
    k: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.name is not PropertyName.K_DELICATE and self.k != 1:
            raise ValueError(f"{self.name.value} takes no k parameter")

    @classmethod
    def extremal(cls) -> "PropertyKind":
        return cls(PropertyName.EXTREMAL)

    @classmethod
    def irreducible(cls) -> "PropertyKind":
        return cls(PropertyName.IRREDUCIBLE)

    @classmethod
    def delicate(cls) -> "PropertyKind":
        return cls(PropertyName.DELICATE)

    @classmethod
    def k_delicate(cls, k: int) -> "PropertyKind":
        return cls(PropertyName.K_DELICATE, int(k))

    @classmethod
    def parse(cls, value: str, k: Optional[int] = None) -> "PropertyKind":
        """Accepts extremal, irreducible, delicate, k-delicate (with k) or k-delicate:<k>."""
        text = str(value).strip().lower()
        if ":" in text:
            text, _, k_text = text.partition(":")
            k = int(k_text)
        try:
            name = PropertyName(text)
        except ValueError:
            raise ValueError(f"Unknown property: {value!r}")
        if name is PropertyName.K_DELICATE:
            return cls(name, int(k) if k is not None else 1)
        return cls(name)

    @property
    def label(self) -> str:
        if self.name is PropertyName.K_DELICATE:
            return f"k-delicate:{self.k}"
        return self.name.value


class MutationOp(str, Enum):
    DELETE = "delete"
    REPLACE = "replace"
    INSERT = "insert"


@dataclass(frozen=True)
class Mutation:
    """
    One edit of a word. Replacements carry their (position, letter) pairs in
    `changes`, sorted by position; delete and insert use `position`/`letter`.
    """

    op: MutationOp
    position: int
    letter: Optional[int] = None
    changes: Tuple[Tuple[int, int], ...] = ()

    @classmethod
    def delete(cls, i: int) -> "Mutation":
        return cls(MutationOp.DELETE, i)

    @classmethod
    def insert(cls, i: int, a: int) -> "Mutation":
        return cls(MutationOp.INSERT, i, a)

    @classmethod
    def replace(cls, changes) -> "Mutation":
        pairs = tuple(sorted((int(i), int(a)) for i, a in changes))
        if not pairs:
            raise ValueError("replace needs at least one (position, letter) pair")
        if len({i for i, _ in pairs}) != len(pairs):
            raise ValueError(f"Duplicate positions in replacement: {pairs}")
        return cls(MutationOp.REPLACE, pairs[0][0], pairs[0][1] if len(pairs) == 1 else None, pairs)

    def apply_text(self, text: str) -> str:
        i = self.position
        if self.op is MutationOp.DELETE:
            return text[:i] + text[i + 1 :]
        if self.op is MutationOp.INSERT:
            return text[:i] + DIGITS[self.letter] + text[i:]
        chars = list(text)
        for j, a in self.changes:
            chars[j] = DIGITS[a]
        return "".join(chars)

    def apply(self, w: Word) -> Word:
        n = len(w)
        if self.op is MutationOp.DELETE and not 0 <= self.position < n:
            raise IndexError(f"Cannot delete position {self.position} of a word of length {n}")
        if self.op is MutationOp.INSERT and not 0 <= self.position <= n:
            raise IndexError(f"Cannot insert at position {self.position} of a word of length {n}")
        if self.op is MutationOp.REPLACE and any(not 0 <= j < n for j, _ in self.changes):
            raise IndexError(f"Replacement {self.describe()} out of range for length {n}")
        return Word(self.apply_text(w.text), w.size)

    def focus(self) -> List[Tuple[int, int]]:
        """Index ranges of the mutated word that any newly created repetition must contain."""
        if self.op is MutationOp.DELETE:
            return [(self.position - 1, self.position)]
        if self.op is MutationOp.INSERT:
            return [(self.position, self.position)]
        return [(j, j) for j, _ in self.changes]

    def describe(self) -> str:
        if self.op is MutationOp.DELETE:
            return f"delete({self.position})"
        if self.op is MutationOp.INSERT:
            return f"insert({self.position},{self.letter})"
        return "replace(" + ",".join(f"{j}->{a}" for j, a in self.changes) + ")"


def created_repetition(mutated: str, mutation: Mutation, kind: RepetitionKind) -> Optional[Occurrence]:
    """Repetition in the mutated text passing through the edit (subject assumed free)."""
    for lo, hi in mutation.focus():
        if lo < 0:
            continue
        occ = find_covering(mutated, lo, hi, kind)
        if occ is not None:
            return occ
    return None


@dataclass(frozen=True)
class MutationWitness:
    mutation: Mutation
    created: Occurrence

    def validate(self, subject: Word) -> bool:
        return validate_occurrence(self.mutation.apply(subject), self.created)

    def to_record(self) -> dict:
        return {"mutation": self.mutation.describe(), "created": self.created.to_record()}


@dataclass
class PropertyReport:
    subject: Word
    kind: RepetitionKind
    property: PropertyKind
    holds: bool
    witnesses: List[MutationWitness] = field(default_factory=list)
    counterexample: Optional[Mutation] = None
    reason: str = ""

    def to_record(self) -> dict:
        record = {
            "word": self.subject.text,
            "alphabet": self.subject.size,
            "kind": self.kind.value,
            "property": self.property.label,
            "holds": self.holds,
        }
        if self.holds:
            record["witnesses"] = [w.to_record() for w in self.witnesses]
        else:
            record["counterexample"] = self.counterexample.describe() if self.counterexample else None
            if self.reason:
                record["reason"] = self.reason
        return record


def validate_report(report: PropertyReport) -> bool:
    """Every witness re-validates on the subject word."""
    return all(w.validate(report.subject) for w in report.witnesses)


def _mutations(w: Word, prop: PropertyKind) -> Iterator[Mutation]:
    """The mutations a property quantifies over, position-major, letter-minor."""
    n = len(w)
    letters = range(w.size)
    if prop.name is PropertyName.IRREDUCIBLE:
        for i in range(1, n - 1):
            yield Mutation.delete(i)
    elif prop.name is PropertyName.EXTREMAL:
        for i in range(n + 1):
            for a in letters:
                yield Mutation.insert(i, a)
    else:
        current = w.letters
        for size in range(1, min(prop.k, n) + 1):
            for positions in itertools.combinations(range(n), size):
                choices = [[a for a in letters if a != current[j]] for j in positions]
                for assignment in itertools.product(*choices):
                    yield Mutation.replace(zip(positions, assignment))


def _precondition_failure(w: Word, kind: RepetitionKind, prop: PropertyKind) -> str:
    if prop.name is PropertyName.IRREDUCIBLE and len(w) < IRREDUCIBLE_MIN_LENGTH:
        return f"irreducible words have length >= {IRREDUCIBLE_MIN_LENGTH}"
    if prop.name in (PropertyName.DELICATE, PropertyName.K_DELICATE) and len(w) == 0:
        return "delicate words are nonempty"
    if find_repetition(w, kind) is not None:
        return f"subject is not {kind.adjective}"
    return ""


def _evaluate(w: Word, kind: RepetitionKind, prop: PropertyKind, mutations, with_witnesses: bool) -> PropertyReport:
    reason = _precondition_failure(w, kind, prop)
    if reason:
        return PropertyReport(w, kind, prop, False, reason=reason)
    witnesses: List[MutationWitness] = []
    for mutation in mutations:
        occ = created_repetition(mutation.apply_text(w.text), mutation, kind)
        if occ is None:
            return PropertyReport(w, kind, prop, False, counterexample=mutation)
        if with_witnesses:
            witnesses.append(MutationWitness(mutation, occ))
    return PropertyReport(w, kind, prop, True, witnesses)


def check_property(w: Word, kind: RepetitionKind, prop: PropertyKind, with_witnesses: bool = True) -> PropertyReport:
    return _evaluate(w, kind, prop, _mutations(w, prop), with_witnesses)


def is_irreducible(w: Word, kind: RepetitionKind, with_witnesses: bool = True) -> PropertyReport:
    return check_property(w, kind, PropertyKind.irreducible(), with_witnesses)


def is_delicate(w: Word, kind: RepetitionKind, with_witnesses: bool = True) -> PropertyReport:
    return check_property(w, kind, PropertyKind.delicate(), with_witnesses)


def is_extremal(w: Word, kind: RepetitionKind, with_witnesses: bool = True) -> PropertyReport:
    return check_property(w, kind, PropertyKind.extremal(), with_witnesses)


def is_k_delicate(w: Word, kind: RepetitionKind, k: int, with_witnesses: bool = True) -> PropertyReport:
    return check_property(w, kind, PropertyKind.k_delicate(k), with_witnesses)


def is_extremal_fast(w: Word, with_witnesses: bool = False) -> PropertyReport:
    """
    Extremality of an overlap-free binary word, testing only insertions with at
    most EXTREMAL_FAST_MARGIN - 1 letters on one side. When witnesses are
    requested the remaining insertions are located as well.
    """
    if w.size != 2:
        raise ValueError(f"is_extremal_fast needs a binary word, got alphabet size {w.size}")
    if find_repetition(w, RepetitionKind.OVERLAP) is not None:
        raise ValueError(f"is_extremal_fast needs an overlap-free word, got {w.text}")
    n = len(w)
    limit = EXTREMAL_FAST_MARGIN - 1
    positions = range(n + 1) if with_witnesses else [i for i in range(n + 1) if i <= limit or n - i <= limit]
    mutations = (Mutation.insert(i, a) for i in positions for a in (0, 1))
    return _evaluate(w, RepetitionKind.OVERLAP, PropertyKind.extremal(), mutations, with_witnesses)


# Boolean fast paths over digit text already known to be free.

def _irreducible_text(text: str, kind: RepetitionKind) -> bool:
    n = len(text)
    if n < IRREDUCIBLE_MIN_LENGTH:
        return False
    for i in range(1, n - 1):
        if find_covering(text[:i] + text[i + 1 :], i - 1, i, kind) is None:
            return False
    return True


def _replacement_creates(text: str, digits: str, kind: RepetitionKind) -> bool:
    for i, current in enumerate(text):
        head, tail = text[:i], text[i + 1 :]
        for c in digits:
            if c != current and find_covering(head + c + tail, i, i, kind) is None:
                return False
    return True


def _delicate_text(text: str, digits: str, kind: RepetitionKind) -> bool:
    return len(text) > 0 and _replacement_creates(text, digits, kind)


def _extremal_text(text: str, digits: str, kind: RepetitionKind) -> bool:
    for i in range(len(text) + 1):
        head, tail = text[:i], text[i:]
        for c in digits:
            if find_covering(head + c + tail, i, i, kind) is None:
                return False
    return True


def _k_delicate_text(text: str, digits: str, kind: RepetitionKind, k: int) -> bool:
    if not _delicate_text(text, digits, kind):
        return False
    n = len(text)
    for size in range(2, min(k, n) + 1):
        for positions in itertools.combinations(range(n), size):
            choices = [[c for c in digits if c != text[j]] for j in positions]
            for assignment in itertools.product(*choices):
                chars = list(text)
                for j, c in zip(positions, assignment):
                    chars[j] = c
                mutated = "".join(chars)
                if all(find_covering(mutated, j, j, kind) is None for j in positions):
                    return False
    return True


def property_predicate(size: int, kind: RepetitionKind, prop: PropertyKind) -> Callable[[str], bool]:
    """Boolean check over digit text that is already known to be kind-free."""
    digits = DIGITS[:size]
    if prop.name is PropertyName.IRREDUCIBLE:
        return lambda text: _irreducible_text(text, kind)
    if prop.name is PropertyName.DELICATE:
        return lambda text: _delicate_text(text, digits, kind)
    if prop.name is PropertyName.EXTREMAL:
        return lambda text: _extremal_text(text, digits, kind)
    k = prop.k
    return lambda text: _k_delicate_text(text, digits, kind, k)
