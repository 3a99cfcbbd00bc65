import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Optional

import numpy as np

from core import WordLike, as_text

logger = logging.getLogger(__name__)

# Above this length find_repetition switches to the vectorized detector.
LONG_WORD_THRESHOLD = 256
# oracle_is_free is a cross-check only; longer inputs are refused.
ORACLE_MAX_LENGTH = 64


class RepetitionKind(str, Enum):
    SQUARE = "square"
    OVERLAP = "overlap"
    CUBE = "cube"

    @classmethod
    def parse(cls, value: str) -> "RepetitionKind":
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"Unknown repetition kind: {value!r} (expected square, overlap or cube)")

    def span(self, period: int) -> int:
        if self is RepetitionKind.SQUARE:
            return 2 * period
        if self is RepetitionKind.OVERLAP:
            return 2 * period + 1
        return 3 * period

    def max_period(self, length: int) -> int:
        if self is RepetitionKind.SQUARE:
            return length // 2
        if self is RepetitionKind.OVERLAP:
            return (length - 1) // 2
        return length // 3

    @property
    def adjective(self) -> str:
        return {"square": "squarefree", "overlap": "overlap-free", "cube": "cubefree"}[self.value]


@dataclass(frozen=True, slots=True)
class Occurrence:
    """A located repetition: text[start:start+span] has the given period."""

    kind: RepetitionKind
    start: int
    period: int

    @property
    def span(self) -> int:
        return self.kind.span(self.period)

    @property
    def end(self) -> int:
        return self.start + self.span

    def covers(self, i: int) -> bool:
        return self.start <= i < self.end

    def to_record(self) -> dict:
        return {"kind": self.kind.value, "start": self.start, "period": self.period}


def _has_period(text: str, start: int, period: int, span: int) -> bool:
    # text[start:start+span] has period p iff it equals itself shifted by p.
    return text[start : start + span - period] == text[start + period : start + span]


def validate_occurrence(w: WordLike, occ: Occurrence) -> bool:
    """Re-check an occurrence letter by letter."""
    text = as_text(w)
    if occ.period < 1 or occ.start < 0 or occ.end > len(text):
        return False
    return all(text[j] == text[j + occ.period] for j in range(occ.start, occ.end - occ.period))


def _find_repetition_scan(text: str, kind: RepetitionKind) -> Optional[Occurrence]:
    n = len(text)
    for start in range(n):
        for period in range(1, kind.max_period(n - start) + 1):
            span = kind.span(period)
            if text[start] == text[start + period] and _has_period(text, start, period, span):
                return Occurrence(kind, start, period)
    return None


def _as_array(text: str) -> np.ndarray:
    return np.frombuffer(text.encode("ascii"), dtype=np.uint8)


def _find_repetition_vectorized(text: str, kind: RepetitionKind) -> Optional[Occurrence]:
    """
    Same result as the scan: for each period, the first start whose window of
    letter-matches (text[j] == text[j+p]) is long enough; then the smallest start,
    ties broken by the smallest period.
    """
    letters = _as_array(text)
    n = len(letters)
    best: Optional[Occurrence] = None
    for period in range(1, kind.max_period(n) + 1):
        need = kind.span(period) - period
        matches = letters[:-period] == letters[period:]
        if need > len(matches):
            break
        sums = np.concatenate(([0], np.cumsum(matches, dtype=np.int64)))
        windows = sums[need:] - sums[:-need]
        hits = np.flatnonzero(windows == need)
        if hits.size:
            start = int(hits[0])
            if best is None or start < best.start:
                best = Occurrence(kind, start, period)
                if start == 0:
                    break
    return best


def find_repetition(w: WordLike, kind: RepetitionKind) -> Optional[Occurrence]:
    """First occurrence by increasing start, then increasing period."""
    text = as_text(w)
    if len(text) > LONG_WORD_THRESHOLD:
        return _find_repetition_vectorized(text, kind)
    return _find_repetition_scan(text, kind)


def is_free(w: WordLike, kind: RepetitionKind) -> bool:
    return find_repetition(w, kind) is None


def suffix_repetition(w: WordLike, kind: RepetitionKind) -> Optional[Occurrence]:
    """Repetition ending at the last letter, smallest period first."""
    text = as_text(w)
    n = len(text)
    last = n - 1
    for period in range(1, kind.max_period(n) + 1):
        span = kind.span(period)
        start = n - span
        if text[last] == text[last - period] and _has_period(text, start, period, span):
            return Occurrence(kind, start, period)
    return None


def _suffix_square(text: str) -> int:
    n = len(text)
    last = text[-1]
    for p in range(1, n // 2 + 1):
        if last == text[n - 1 - p] and text[n - p :] == text[n - 2 * p : n - p]:
            return p
    return 0


def _suffix_overlap(text: str) -> int:
    n = len(text)
    last = text[-1]
    for p in range(1, (n - 1) // 2 + 1):
        if last == text[n - 1 - p] and text[n - p - 1 :] == text[n - 2 * p - 1 : n - p]:
            return p
    return 0


def _suffix_cube(text: str) -> int:
    n = len(text)
    last = text[-1]
    for p in range(1, n // 3 + 1):
        if last == text[n - 1 - p] and text[n - 2 * p :] == text[n - 3 * p : n - p]:
            return p
    return 0


# Hot-path variants for the enumerator: period of the suffix repetition or 0.
SUFFIX_CHECKS: Dict[RepetitionKind, Callable[[str], int]] = {
    RepetitionKind.SQUARE: _suffix_square,
    RepetitionKind.OVERLAP: _suffix_overlap,
    RepetitionKind.CUBE: _suffix_cube,
}


def find_covering(w: WordLike, lo: int, hi: int, kind: RepetitionKind) -> Optional[Occurrence]:
    """
    An occurrence whose span contains every index in [lo, hi], smallest period
    first, then smallest start.
    """
    text = as_text(w)
    n = len(text)
    if lo < 0 or hi >= n or lo > hi:
        return None
    for period in range(1, kind.max_period(n) + 1):
        span = kind.span(period)
        if span < hi - lo + 1:
            continue
        first = max(0, hi - span + 1)
        last = min(lo, n - span)
        for start in range(first, last + 1):
            if _has_period(text, start, period, span):
                return Occurrence(kind, start, period)
    return None


def oracle_is_free(w: WordLike, kind: RepetitionKind) -> bool:
    """
    Definition-literal check over every factor (words up to ORACLE_MAX_LENGTH).
    Independent of the detectors above; used to cross-check them.
    """
    text = as_text(w)
    n = len(text)
    if n > ORACLE_MAX_LENGTH:
        raise ValueError(f"oracle_is_free is limited to words of length <= {ORACLE_MAX_LENGTH}")
    for i in range(n):
        for j in range(i + 1, n + 1):
            f = text[i:j]
            length = j - i
            if kind is RepetitionKind.SQUARE:
                half = length // 2
                if length % 2 == 0 and f[:half] == f[half:]:
                    return False
            elif kind is RepetitionKind.OVERLAP:
                # xYxYx with x a letter: length 2m+1, f = u u x where u = xY
                if length % 2 == 1 and length >= 3:
                    m = (length - 1) // 2
                    x, y = f[0], f[1:m]
                    if f == x + y + x + y + x:
                        return False
            else:
                third = length // 3
                if length % 3 == 0 and f[:third] == f[third : 2 * third] == f[2 * third :]:
                    return False
    return True
