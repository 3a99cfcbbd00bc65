import argparse
import logging
import sys
from datetime import datetime, timezone
from typing import List, Optional

from cache_store import cached_classifier
from config import ToolkitSettings, load_settings
from construct import (
    InadmissibleLengthError,
    TheoremId,
    construct,
    morphism_evidence,
    verify_block_structure,
    verify_theorem,
)
from core import parse_word
from detect import RepetitionKind, find_repetition
from enumerator import CacheError, SearchSpec, search_k_delicate
from morphism import BuiltinMorphismId, MorphismError, builtin, load_morphism, preserves_cubefree, preserves_squarefree
from performance_monitor import perf_monitor
from props import PropertyKind, PropertyName, check_property, is_extremal_fast, validate_report
from streams import InfiniteWordId, PrefixSpec, lemma_evidence, prefix

try:
    import ujson as json
except ImportError:
    import json

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

logger = logging.getLogger("Main")


class UTCFormatter(logging.Formatter):
    def formatTime(self, record, datefmt=None):
        dt = datetime.fromtimestamp(record.created, timezone.utc)
        if datefmt:
            return dt.strftime(datefmt)
        return dt.isoformat(sep=" ", timespec="milliseconds")


def setup_logging(verbose: bool = False):
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(UTCFormatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    root_logger.handlers = [handler]


def emit(record: dict):
    sys.stdout.write(json.dumps(record) + "\n")


def _property_from_args(args) -> PropertyKind:
    return PropertyKind.parse(args.property, getattr(args, "k", None))


def run_check(args, settings: ToolkitSettings) -> int:
    w = parse_word(args.word, args.alphabet)
    kind = RepetitionKind.parse(args.kind)
    prop = _property_from_args(args)
    if args.fast and (kind is not RepetitionKind.OVERLAP or prop.name is not PropertyName.EXTREMAL or w.size != 2):
        raise ValueError("--fast only applies to --kind overlap --property extremal over 2 letters")
    if args.fast:
        report = is_extremal_fast(w, with_witnesses=not args.no_witnesses)
    else:
        report = check_property(w, kind, prop, with_witnesses=not args.no_witnesses)
    if not validate_report(report):
        logger.error("A witness failed re-validation")
        return EXIT_FAILED
    emit(report.to_record())
    return EXIT_OK if report.holds else EXIT_FAILED


def run_classify(args, settings: ToolkitSettings) -> int:
    spec = SearchSpec(
        alphabet=args.alphabet,
        kind=RepetitionKind.parse(args.kind),
        property=_property_from_args(args),
        min_len=args.min_len,
        max_len=args.max_len,
        symmetry_reduction=not args.no_symmetry,
        witness_limit=settings.witness_limit if args.witnesses is None else args.witnesses,
    )
    classifier = _classifier(args, settings, cache_file=args.cache)
    c = classifier(spec)
    emit(c.to_record())
    return EXIT_OK


def run_construct(args, settings: ToolkitSettings) -> int:
    try:
        recipe = construct(TheoremId.parse(args.theorem), args.n)
    except InadmissibleLengthError as e:
        logger.error(str(e))
        emit({"theorem": TheoremId.parse(args.theorem).value, "n": args.n, "admissible": False})
        return EXIT_FAILED
    emit(recipe.to_record())
    return EXIT_OK


def _classifier(args, settings: ToolkitSettings, cache_file: Optional[str] = None):
    if args.no_cache:
        return cached_classifier(jobs=settings.jobs, split_depth=settings.split_depth)
    cache_dir = settings.cache_dir
    if args.cache and cache_file is None:
        cache_dir = args.cache
    return cached_classifier(
        jobs=settings.jobs,
        split_depth=settings.split_depth,
        cache_dir=cache_dir,
        cache_file=cache_file,
        redis_url=settings.redis_url,
    )


def _search_bound(theorem: TheoremId, args, settings: ToolkitSettings) -> int:
    bound = settings.search_bounds.get(theorem.value, 0)
    if theorem is TheoremId.DEL_CUBE and args.quick:
        bound = min(bound, settings.quick_del_cube_bound)
    if args.classify_max is not None:
        bound = args.classify_max
    return bound


def run_verify(args, settings: ToolkitSettings) -> int:
    target = args.theorem.strip().lower().replace("-", "_")
    if target == "all":
        selected = [t.value for t in TheoremId] + ["lemmas", "morphisms"]
    else:
        selected = [target]

    passed = True
    classifier = _classifier(args, settings)
    for name in selected:
        if name in ("lemmas", "morphisms"):
            checks = lemma_evidence(settings) + verify_block_structure() if name == "lemmas" else morphism_evidence()
            for check in checks:
                emit(check.to_record())
                passed = passed and check.holds
            continue
        theorem = TheoremId.parse(name)
        max_len = args.max_len if args.max_len is not None else settings.construct_max_len
        report = verify_theorem(
            theorem,
            max_len,
            classify_max=_search_bound(theorem, args, settings),
            classifier=classifier,
            levels=args.levels if args.levels is not None else settings.eid_levels,
        )
        emit(report.to_record())
        for line in report.discrepancies:
            logger.error(f"{theorem.value}: {line}")
        passed = passed and report.passed
    return EXIT_OK if passed else EXIT_FAILED


def run_morphism_test(args, settings: ToolkitSettings) -> int:
    m = load_morphism(args.file) if args.file else builtin(args.builtin)
    kind = args.kind or ("square" if len(m.images) == 3 else "cube")
    kind = RepetitionKind.parse(kind)
    if kind is RepetitionKind.SQUARE:
        result = preserves_squarefree(m)
    elif kind is RepetitionKind.CUBE:
        result = preserves_cubefree(m)
    else:
        raise MorphismError("Only square (length 5) and cube (length 7) criteria are available")
    emit({"morphism": str(m), "kind": kind.value, **result.to_record()})
    return EXIT_OK if result.holds else EXIT_FAILED


def run_prefix(args, settings: ToolkitSettings) -> int:
    spec = PrefixSpec(
        InfiniteWordId.parse(args.word),
        args.drop,
        args.take,
        BuiltinMorphismId(args.morphism) if args.morphism else None,
    )
    w = prefix(spec)
    record = {"word": w.text}
    if args.check:
        kind = RepetitionKind.parse(args.check)
        occ = find_repetition(w, kind)
        record[kind.adjective] = occ is None
        if occ is not None:
            record["occurrence"] = occ.to_record()
        emit(record)
        return EXIT_OK if occ is None else EXIT_FAILED
    emit(record)
    return EXIT_OK


def run_search_k_delicate(args, settings: ToolkitSettings) -> int:
    kind = RepetitionKind.parse(args.kind)
    found = search_k_delicate(args.alphabet, kind, args.k, args.max_len, args.limit)
    emit(
        {
            "alphabet": args.alphabet,
            "kind": kind.value,
            "k": args.k,
            "max_len": args.max_len,
            "found": len(found),
            "words": [w.text for w in found],
        }
    )
    return EXIT_OK


def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def _non_negative(value: str) -> int:
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=_positive, help="worker processes for searches (default: CPU count)")
    common.add_argument("--verbose", action="store_true", help="debug logging and search metrics")
    common.add_argument("--quick", action="store_true", help="cap the delicate cubefree search bound")
    common.add_argument("--cache", help="classification cache (classify: file; verify: directory)")
    common.add_argument("--no-cache", action="store_true", help="ignore BAREFREE_CACHE_DIR and Redis")

    kinds = [k.value for k in RepetitionKind]
    properties = ["extremal", "irreducible", "delicate", "k-delicate"]

    parser = argparse.ArgumentParser(
        prog="barefree",
        description="Extremal, irreducible and delicate words avoiding squares, overlaps and cubes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="check one word")
    p.add_argument("--word", required=True)
    p.add_argument("--kind", required=True, choices=kinds)
    p.add_argument("--property", required=True, choices=properties)
    p.add_argument("--k", type=_positive, default=1)
    p.add_argument("--alphabet", type=_positive, default=2)
    p.add_argument("--fast", action="store_true", help="binary overlap-free extremality via end positions only")
    p.add_argument("--no-witnesses", action="store_true")
    p.set_defaults(func=run_check)

    p = sub.add_parser("classify", parents=[common], help="exhaustive length classification")
    p.add_argument("--kind", required=True, choices=kinds)
    p.add_argument("--property", required=True, choices=properties)
    p.add_argument("--k", type=_positive, default=1)
    p.add_argument("--alphabet", type=_positive, default=2)
    p.add_argument("--min-len", type=_non_negative, default=1)
    p.add_argument("--max-len", type=_positive, required=True)
    p.add_argument("--witnesses", type=_non_negative)
    p.add_argument("--no-symmetry", action="store_true")
    p.set_defaults(func=run_classify)

    constructible = [t.value for t in TheoremId if t.constructible]
    p = sub.add_parser("construct", parents=[common], help="build a word for a theorem and length")
    p.add_argument("--theorem", required=True, type=lambda s: TheoremId.parse(s).value, choices=constructible)
    p.add_argument("--n", type=_non_negative, required=True)
    p.set_defaults(func=run_construct)

    p = sub.add_parser("verify", parents=[common], help="reproduce theorems, lemmas and morphism facts")
    p.add_argument(
        "--theorem",
        required=True,
        type=lambda s: s.strip().lower().replace("-", "_"),
        choices=[t.value for t in TheoremId] + ["eid", "lemmas", "morphisms", "all"],
    )
    p.add_argument("--max-len", type=_positive, help="construction bound (default 200)")
    p.add_argument("--classify-max", type=_non_negative, help="override the exhaustive search bound")
    p.add_argument("--levels", type=_non_negative)
    p.set_defaults(func=run_verify)

    p = sub.add_parser("morphism-test", parents=[common], help="finite preservation criteria")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--file")
    source.add_argument("--builtin", choices=[m.value for m in BuiltinMorphismId])
    p.add_argument("--kind", choices=["square", "cube"])
    p.set_defaults(func=run_morphism_test)

    p = sub.add_parser("prefix", parents=[common], help="factor of t or v (or of a builtin image)")
    p.add_argument("--word", required=True, help="t, v, thue_morse or ternary_thue_morse")
    p.add_argument("--drop", type=_non_negative, default=0)
    p.add_argument("--take", type=_non_negative, required=True)
    p.add_argument("--morphism", choices=[m.value for m in BuiltinMorphismId])
    p.add_argument("--check", choices=kinds)
    p.set_defaults(func=run_prefix)

    p = sub.add_parser("search-k-delicate", parents=[common], help="list k-delicate words")
    p.add_argument("--kind", required=True, choices=kinds)
    p.add_argument("--alphabet", type=_positive, default=2)
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--max-len", type=_positive, required=True)
    p.add_argument("--limit", type=_positive)
    p.set_defaults(func=run_search_k_delicate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    try:
        settings = load_settings(jobs=args.jobs, verbose=args.verbose)
    except ValueError as e:
        logger.error(f"Invalid settings: {e}")
        return EXIT_USAGE

    perf_monitor.reset()
    try:
        code = args.func(args, settings)
    except (CacheError, MorphismError, OSError) as e:
        logger.error(str(e))
        return EXIT_USAGE
    except ValueError as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_USAGE

    if args.verbose:
        perf_monitor.log_metrics()
        emit({"metrics": perf_monitor.get_all_metrics()})
    return code


if __name__ == "__main__":
    sys.exit(main())
