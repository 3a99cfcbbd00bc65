import hashlib
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from core import DIGITS, Word, letter_permutations
from detect import SUFFIX_CHECKS, RepetitionKind, find_repetition
from performance_monitor import SearchMonitor, perf_monitor
from props import PropertyKind, check_property, property_predicate

try:
    import ujson as json
except ImportError:
    import json

logger = logging.getLogger(__name__)

# Bumped whenever a definition or checker changes what a search returns.
CODE_VERSION = "1"
DEFAULT_SPLIT_DEPTH = 12
# Chunks handed to the pool per worker.
CHUNKS_PER_JOB = 8
EMPTY_WORD_TOKEN = "-"


class CacheError(RuntimeError):
    pass


class StaleCacheError(CacheError):
    pass


class CacheValidationError(CacheError):
    pass


class SearchSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    alphabet: int = Field(2, ge=1, le=len(DIGITS))
    kind: RepetitionKind
    property: PropertyKind
    min_len: int = Field(0, ge=0)
    max_len: int = Field(..., ge=0)
    symmetry_reduction: bool = True
    witness_limit: int = Field(3, ge=0)

    @model_validator(mode="after")
    def _check_range(self):
        if self.min_len > self.max_len:
            raise ValueError(f"min_len {self.min_len} exceeds max_len {self.max_len}")
        return self

    def lengths(self) -> range:
        return range(self.min_len, self.max_len + 1)

    def to_record(self) -> dict:
        return {
            "alphabet": self.alphabet,
            "kind": self.kind.value,
            "property": self.property.label,
            "min_len": self.min_len,
            "max_len": self.max_len,
            "witness_limit": self.witness_limit,
            "symmetry_reduction": self.symmetry_reduction,
        }

    @classmethod
    def from_record(cls, record: dict) -> "SearchSpec":
        return cls(
            alphabet=record["alphabet"],
            kind=RepetitionKind.parse(record["kind"]),
            property=PropertyKind.parse(record["property"]),
            min_len=record["min_len"],
            max_len=record["max_len"],
            witness_limit=record["witness_limit"],
            symmetry_reduction=record.get("symmetry_reduction", True),
        )


class LengthClassification(BaseModel):
    """Exact counts and the lexicographically first witnesses per length."""

    spec: SearchSpec
    counts: Dict[int, int]
    witnesses: Dict[int, List[str]]

    def admitted(self) -> List[int]:
        return sorted(n for n, c in self.counts.items() if c > 0)

    def witness_words(self, n: int) -> List[Word]:
        return [Word(w, self.spec.alphabet) for w in self.witnesses.get(n, [])]

    def to_record(self) -> dict:
        return {
            "spec": self.spec.to_record(),
            "admitted": self.admitted(),
            "counts": {str(n): c for n, c in sorted(self.counts.items())},
            "witnesses": {str(n): ws for n, ws in sorted(self.witnesses.items()) if ws},
        }


def spec_fingerprint(spec: SearchSpec) -> str:
    key = "|".join(
        str(part)
        for part in (
            CODE_VERSION,
            spec.alphabet,
            spec.kind.value,
            spec.property.label,
            spec.min_len,
            spec.max_len,
            spec.witness_limit,
        )
    )
    return hashlib.sha256(key.encode("utf-8")).hexdigest()


def iter_free(size: int, kind: RepetitionKind, n: int, prefix: str = "") -> Iterator[str]:
    """Kind-free words of length n extending `prefix`, in lexicographic order."""
    if len(prefix) > n or find_repetition(prefix, kind) is not None:
        return
    if len(prefix) == n:
        yield prefix
        return
    children = DIGITS[:size][::-1]
    suffix = SUFFIX_CHECKS[kind]
    stack = [prefix + c for c in children]
    while stack:
        w = stack.pop()
        if suffix(w):
            continue
        if len(w) == n:
            yield w
        else:
            stack.extend(w + c for c in children)


def enumerate_free(size: int, kind: RepetitionKind, n: int, visitor: Optional[Callable[[str], None]] = None) -> int:
    count = 0
    for w in iter_free(size, kind, n):
        if visitor is not None:
            visitor(w)
        count += 1
    return count


class _Partial:
    """Per-chunk tallies; merged in chunk order."""

    def __init__(self, lengths: range):
        self.counts = {n: 0 for n in lengths}
        self.witnesses: Dict[int, List[str]] = {n: [] for n in lengths}
        self.nodes = 0
        self.checks = 0
        self.frontier: List[str] = []

    def merge(self, other: dict, witness_limit: int):
        for n, c in other["counts"].items():
            self.counts[n] += c
        for n, ws in other["witnesses"].items():
            merged = sorted(self.witnesses[n] + ws)
            self.witnesses[n] = merged[:witness_limit]
        self.nodes += other["nodes"]
        self.checks += other["checks"]

    def to_dict(self) -> dict:
        return {"counts": self.counts, "witnesses": self.witnesses, "nodes": self.nodes, "checks": self.checks}


def _dfs(
    size: int,
    kind: RepetitionKind,
    predicate: Callable[[str], bool],
    starts: List[str],
    lengths: range,
    witness_limit: int,
    frontier_len: Optional[int] = None,
) -> _Partial:
    """
    Lexicographic DFS below each (free) start word. Words of length
    `frontier_len` are collected instead of being checked or extended.
    """
    partial = _Partial(lengths)
    children = DIGITS[:size][::-1]
    suffix = SUFFIX_CHECKS[kind]
    lo, hi = lengths.start, lengths.stop - 1
    counts, witnesses = partial.counts, partial.witnesses
    stack = list(reversed(starts))
    while stack:
        w = stack.pop()
        partial.nodes += 1
        if suffix(w):
            continue
        n = len(w)
        if n == frontier_len:
            partial.frontier.append(w)
            continue
        if n >= lo:
            partial.checks += 1
            if predicate(w):
                counts[n] += 1
                if len(witnesses[n]) < witness_limit:
                    witnesses[n].append(w)
        if n < hi:
            stack.extend(w + c for c in children)
    return partial


def _search_chunk(payload: dict) -> dict:
    """Pool worker: full search below a list of frontier prefixes."""
    kind = RepetitionKind(payload["kind"])
    prop = PropertyKind.parse(payload["property"])
    predicate = property_predicate(payload["alphabet"], kind, prop)
    lengths = range(payload["min_len"], payload["max_len"] + 1)
    partial = _dfs(payload["alphabet"], kind, predicate, payload["prefixes"], lengths, payload["witness_limit"])
    return partial.to_dict()


def _chunks(frontier: List[str], count: int) -> List[List[str]]:
    size = max(1, -(-len(frontier) // max(1, count)))
    return [frontier[i : i + size] for i in range(0, len(frontier), size)]


def _expand_witnesses(witnesses: List[str], size: int, limit: int) -> List[str]:
    orbit = {perm.apply_text(w) for perm in letter_permutations(size) for w in witnesses}
    return sorted(orbit)[:limit]


def classify(
    spec: SearchSpec,
    jobs: int = 1,
    split_depth: int = DEFAULT_SPLIT_DEPTH,
    monitor: Optional[SearchMonitor] = None,
) -> LengthClassification:
    """
    Count and sample the kind-free words with the spec's property for every
    length in the spec's range.

    With symmetry reduction the search fixes the first letter to 0; counts are
    multiplied by the alphabet size (letter permutations act freely on the
    first letter) and witness lists are rebuilt from the permutation orbit
    whenever the reduced search kept every representative.
    """
    monitor = monitor or perf_monitor
    monitor.start_run()
    size, kind = spec.alphabet, spec.kind
    predicate = property_predicate(size, kind, spec.property)
    lengths = spec.lengths()
    limit = spec.witness_limit
    reduce = spec.symmetry_reduction and size > 1
    starts = ["0"] if reduce else list(DIGITS[:size])

    result = _Partial(lengths)
    if spec.min_len == 0 and predicate(""):
        result.counts[0] = 1
        result.witnesses[0] = [""][:limit]

    positive = range(max(1, spec.min_len), spec.max_len + 1)
    if len(positive):
        depth = max(1, min(split_depth, spec.max_len))
        if depth == 1:
            frontier = starts
            driver = _Partial(positive)
        else:
            driver = _dfs(size, kind, predicate, starts, positive, limit, frontier_len=depth)
            frontier = driver.frontier
        tallies = _Partial(positive)
        tallies.merge(driver.to_dict(), limit)
        monitor.record_search(driver.nodes, driver.checks)

        payloads = [
            {
                "alphabet": size,
                "kind": kind.value,
                "property": spec.property.label,
                "min_len": positive.start,
                "max_len": spec.max_len,
                "witness_limit": limit,
                "prefixes": chunk,
            }
            for chunk in _chunks(frontier, max(1, jobs) * CHUNKS_PER_JOB)
        ]
        logger.info(
            f"Searching {spec.property.label} {kind.adjective} words over {size} letters, "
            f"lengths {spec.min_len}..{spec.max_len}: {len(frontier)} prefixes of length {depth} "
            f"in {len(payloads)} chunks, {jobs} job(s)"
        )
        if jobs > 1 and len(payloads) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as executor:
                outcomes = executor.map(_search_chunk, payloads)
                _merge_chunks(tallies, outcomes, len(payloads), limit, monitor)
        else:
            _merge_chunks(tallies, map(_search_chunk, payloads), len(payloads), limit, monitor)

        for n in positive:
            c0 = tallies.counts[n]
            if reduce:
                result.counts[n] = c0 * size
                complete = len(tallies.witnesses[n]) == c0
                result.witnesses[n] = (
                    _expand_witnesses(tallies.witnesses[n], size, limit) if complete else tallies.witnesses[n]
                )
            else:
                result.counts[n] = c0
                result.witnesses[n] = tallies.witnesses[n]

    for n in lengths:
        monitor.record_accepted(n, result.counts[n])
    monitor.end_run()
    return LengthClassification(spec=spec, counts=result.counts, witnesses=result.witnesses)


def _merge_chunks(tallies: _Partial, outcomes, total: int, limit: int, monitor: SearchMonitor):
    for done, outcome in enumerate(outcomes, start=1):
        tallies.merge(outcome, limit)
        monitor.record_search(outcome["nodes"], outcome["checks"])
        logger.debug(f"[{done}/{total}] ({100 * done // max(1, total)}%) chunks searched")
    logger.info(f"[{total}/{total}] (100%) search complete")


def search_k_delicate(
    size: int, kind: RepetitionKind, k: int, max_len: int, witness_limit: Optional[int] = None
) -> List[Word]:
    """k-delicate kind-free words of length <= max_len, shortest first, then lexicographic."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    prop = PropertyKind.k_delicate(k)
    predicate = property_predicate(size, kind, prop)
    if max_len < 1:
        return []
    cap = sys.maxsize if witness_limit is None else witness_limit
    partial = _dfs(size, kind, predicate, list(DIGITS[:size]), range(1, max_len + 1), cap)
    found = [Word(text, size) for n in sorted(partial.witnesses) for text in partial.witnesses[n]][:cap]
    logger.info(f"{len(found)} {prop.label} {kind.adjective} words of length <= {max_len} over {size} letters")
    return found


def format_classification(c: LengthClassification) -> str:
    spec_json = json.dumps(c.spec.to_record(), sort_keys=True).replace(" ", "")
    lines = [f"fingerprint={spec_fingerprint(c.spec)} spec={spec_json}"]
    for n in c.spec.lengths():
        words = [w or EMPTY_WORD_TOKEN for w in c.witnesses.get(n, [])]
        lines.append(" ".join([str(n), str(c.counts.get(n, 0))] + words))
    return "\n".join(lines) + "\n"


def parse_classification(text: str, expected: Optional[SearchSpec] = None, validate: bool = True) -> LengthClassification:
    lines = text.splitlines()
    if not lines:
        raise CacheValidationError("Cache is empty")
    header = lines[0].split(" ", 1)
    if len(header) != 2 or not header[0].startswith("fingerprint=") or not header[1].startswith("spec="):
        raise CacheValidationError(f"Malformed cache header: {lines[0]!r}")
    fingerprint = header[0][len("fingerprint=") :]
    try:
        spec = SearchSpec.from_record(json.loads(header[1][len("spec=") :]))
    except (ValueError, KeyError, TypeError) as e:
        raise CacheValidationError(f"Malformed cache spec: {e}")
    if spec_fingerprint(spec) != fingerprint:
        raise StaleCacheError(f"Cache fingerprint {fingerprint[:12]} does not match its spec (code version changed?)")
    if expected is not None and spec_fingerprint(expected) != fingerprint:
        raise StaleCacheError(f"Cache was written for a different search ({fingerprint[:12]})")

    counts: Dict[int, int] = {}
    witnesses: Dict[int, List[str]] = {}
    for raw in lines[1:]:
        fields = raw.split()
        if not fields:
            continue
        try:
            n, count = int(fields[0]), int(fields[1])
        except (ValueError, IndexError):
            raise CacheValidationError(f"Malformed cache record: {raw!r}")
        counts[n] = count
        witnesses[n] = ["" if w == EMPTY_WORD_TOKEN else w for w in fields[2:]]
    if sorted(counts) != list(spec.lengths()):
        raise CacheValidationError("Cache records do not cover the spec's length range")

    c = LengthClassification(spec=spec, counts=counts, witnesses=witnesses)
    if validate:
        validate_classification(c)
    return c


def validate_classification(c: LengthClassification) -> None:
    """Re-check every stored witness; raises CacheValidationError on the first bad one."""
    spec = c.spec
    for n in spec.lengths():
        ws = c.witnesses.get(n, [])
        if len(ws) > min(spec.witness_limit, c.counts[n]):
            raise CacheValidationError(f"Length {n}: {len(ws)} witnesses for count {c.counts[n]}")
        if c.counts[n] > 0 and not ws and spec.witness_limit > 0:
            raise CacheValidationError(f"Length {n}: count {c.counts[n]} but no witnesses")
        for text in ws:
            try:
                w = Word(text, spec.alphabet)
            except ValueError as e:
                raise CacheValidationError(f"Length {n}: bad witness {text!r}: {e}")
            if len(w) != n or not check_property(w, spec.kind, spec.property, with_witnesses=False).holds:
                raise CacheValidationError(f"Length {n}: witness {text!r} fails {spec.property.label}")


def save_classification(c: LengthClassification, path: Union[str, Path]) -> None:
    path = Path(path)
    tmp_path = path.with_name(path.name + ".tmp")
    tmp_path.write_text(format_classification(c), encoding="utf-8")
    os.replace(tmp_path, path)


def load_classification(
    path: Union[str, Path], expected: Optional[SearchSpec] = None, validate: bool = True
) -> LengthClassification:
    return parse_classification(Path(path).read_text(encoding="utf-8"), expected, validate)
