"""Command-line interface.

Subcommands: classify, classify-verb, build-verbset, audit, evaluate.
Exit codes: 0 on success, 1 on configuration or I/O failure, 2 when some
individual items failed but processing continued.

The lexicon directory resolves from --wordnet, then the
BLOOMSIM_WORDNET_DIR environment variable, then the bundled copy. Output
is deterministic: the same inputs produce byte-identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import chunker, evaluation, figures, verbsets, wordnet
from .classifier import classify_verb, classify_question, report_to_dict
from .chunker import NoVerbFoundError
from .similarity import UnknownVerbError
from .verbsets import TaxonomyRegistry
from .wordnet import WordNetError

ENV_WORDNET_DIR = "BLOOMSIM_WORDNET_DIR"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PARTIAL = 2

_CONFIG_ERRORS = (
    OSError,
    json.JSONDecodeError,
    WordNetError,
    verbsets.VerbsetError,
    chunker.GrammarError,
    evaluation.EvaluationError,
    ValueError,
)


def _fmt(value: float) -> str:
    return f"{value:.6f}"


class _Output:
    """stdout or --out file; always text mode, line buffered semantics."""

    def __init__(self, out_path):
        self._path = out_path
        self._handle = None

    def __enter__(self):
        if self._path:
            self._handle = open(self._path, "w", encoding="utf-8", newline="\n")
        return self

    def __exit__(self, *exc):
        if self._handle:
            self._handle.close()

    def line(self, text=""):
        handle = self._handle or sys.stdout
        handle.write(text + "\n")


def _load_config(args):
    wn_dir = args.wordnet or os.environ.get(ENV_WORDNET_DIR)
    wn_dir = Path(wn_dir) if wn_dir else wordnet.bundled_database_path()
    store = wordnet.load_database(wn_dir)

    verbset_path = Path(args.verbset) if args.verbset else verbsets.bundled_consensus_path()
    consensus = verbsets.load_consensus(verbset_path)
    registry = TaxonomyRegistry({consensus.domain: dict(consensus.entries)})
    if not registry.has_domain(args.domain):
        raise verbsets.UnknownDomainError(
            f"verb set file {verbset_path} covers {consensus.domain!r}, "
            f"not the requested domain {args.domain!r}"
        )

    grammar_path = Path(args.grammar) if args.grammar else chunker.bundled_grammar_path()
    grammar = chunker.parse_grammar(grammar_path)
    return store, registry, grammar


def _figure_dir(args):
    if not getattr(args, "figures", None):
        return None
    directory = Path(args.figures)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def _explain_lines(report):
    lines = []
    for score in report.level_scores:
        lines.append(
            f"  {score.level:<16} max={_fmt(score.max_sim)}"
            f"  area={_fmt(score.area)}  n={len(score.pair_scores)}"
        )
        for pair in score.pair_scores:
            lines.append(
                f"    {pair.word_b:<20} {_fmt(pair.score)}"
                f"  [{pair.synset_a.byte_offset}~{pair.synset_b.byte_offset}]"
            )
        for verb in sorted(score.skipped):
            lines.append(f"    {verb:<20} skipped (not in lexicon)")
    return lines


def cmd_classify(args) -> int:
    store, registry, grammar = _load_config(args)
    if args.file:
        text = Path(args.file).read_text(encoding="utf-8")
        questions = chunker.split_questions(text)
    elif args.question is not None:
        questions = chunker.split_questions(args.question)
    else:
        raise ValueError("provide a question argument or --file")

    fig_dir = _figure_dir(args)
    failures = 0
    with _Output(args.out) as out:
        for index, question in enumerate(questions, start=1):
            try:
                chunk, report = classify_question(
                    store, registry, grammar, question, args.domain
                )
            except (NoVerbFoundError, UnknownVerbError) as exc:
                failures += 1
                if args.format == "json":
                    out.line(json.dumps({"question": question, "error": str(exc)}))
                else:
                    out.line(f"{question}\tERROR\t{exc}")
                continue
            if args.format == "json":
                payload = {
                    "question": question,
                    "action_verb": chunk.action_verb,
                    "level_hint": chunk.level_hint,
                    "report": report_to_dict(store, report),
                }
                out.line(json.dumps(payload))
            else:
                hint = chunk.level_hint or "-"
                out.line(
                    f"{question}\t{chunk.action_verb}\t{hint}"
                    f"\t{report.chosen_level}\t{report.decision_path}"
                )
                if args.explain:
                    for line in _explain_lines(report):
                        out.line(line)
            if fig_dir is not None:
                figures.save_similarity_bars(
                    report, fig_dir / f"q{index:04d}.png"
                )
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_classify_verb(args) -> int:
    store, registry, grammar = _load_config(args)
    del grammar  # not used; config loading validates it anyway
    try:
        report = classify_verb(store, registry, args.verb, args.domain)
    except UnknownVerbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARTIAL

    fig_dir = _figure_dir(args)
    with _Output(args.out) as out:
        if args.format == "json":
            out.line(json.dumps(report_to_dict(store, report)))
        else:
            out.line(f"verb: {report.query_verb}")
            out.line(f"domain: {report.domain}")
            out.line(f"chosen level: {report.chosen_level}")
            out.line(f"decision path: {report.decision_path}")
            if report.tied_levels:
                out.line("tied levels: " + ", ".join(sorted(report.tied_levels)))
            if report.skipped_verbs:
                out.line("skipped verbs: " + ", ".join(sorted(report.skipped_verbs)))
            if args.explain:
                for line in _explain_lines(report):
                    out.line(line)
            else:
                for score in report.level_scores:
                    out.line(
                        f"  {score.level:<16} max={_fmt(score.max_sim)}"
                        f"  area={_fmt(score.area)}"
                    )
    if fig_dir is not None:
        stem = report.query_verb.replace(" ", "_")
        figures.save_similarity_bars(report, fig_dir / f"{stem}.max.png")
        figures.save_area_bars(report, fig_dir / f"{stem}.area.png")
    return EXIT_OK


def cmd_build_verbset(args) -> int:
    sources = [verbsets.parse_source_list(path) for path in args.sources]
    consensus = verbsets.build_consensus(
        sources,
        majority_threshold=args.threshold,
        conditional_threshold=args.conditional_threshold,
    )
    for level in verbsets.domain_levels(consensus.domain):
        if not consensus.entries[level]:
            raise verbsets.EmptyLevelError(consensus.domain, level)
    verbsets.save_consensus(consensus, args.out)

    decisions = [rec.decision for rec in consensus.provenance.values()]
    with _Output(None) as out:
        if args.format == "json":
            summary = {
                "domain": consensus.domain,
                "out": str(args.out),
                "kept": {
                    level: len(consensus.entries[level])
                    for level in verbsets.domain_levels(consensus.domain)
                },
                "decisions": {
                    status: decisions.count(status)
                    for status in (
                        verbsets.KEPT_BY_MAJORITY,
                        verbsets.KEPT_CONDITIONALLY,
                        verbsets.DROPPED_CONFLICT,
                        verbsets.DROPPED_INSUFFICIENT,
                    )
                },
            }
            out.line(json.dumps(summary))
        else:
            out.line(f"domain: {consensus.domain}")
            for level in verbsets.domain_levels(consensus.domain):
                verbs = consensus.entries[level]
                out.line(f"  {level:<16} {len(verbs)} verbs")
            for status in (
                verbsets.KEPT_BY_MAJORITY,
                verbsets.KEPT_CONDITIONALLY,
                verbsets.DROPPED_CONFLICT,
                verbsets.DROPPED_INSUFFICIENT,
            ):
                out.line(f"{status}: {decisions.count(status)}")
            out.line(f"wrote {args.out}")
    return EXIT_OK


def cmd_audit(args) -> int:
    store, registry, _ = _load_config(args)
    candidate = verbsets.parse_source_list(args.candidate)
    if not registry.has_domain(candidate.domain):
        raise verbsets.UnknownDomainError(
            f"candidate domain {candidate.domain!r} is not registered"
        )
    report = evaluation.audit_verbset(store, registry, candidate)
    with _Output(args.out) as out:
        if args.format == "json":
            payload = {
                "lexicon_version": store.version,
                "total": report.total,
                "agree": report.agree,
                "correctness": report.correctness,
                "reclassified": [
                    {"verb": v, "manual": m, "predicted": p}
                    for v, m, p in report.reclassified
                ],
                "unknown": list(report.unknown),
            }
            out.line(json.dumps(payload))
        else:
            out.line(f"total: {report.total}")
            out.line(f"agree: {report.agree}")
            out.line(f"correctness: {_fmt(report.correctness)}")
            if report.reclassified:
                out.line("reclassified:")
                for verb, manual, predicted in report.reclassified:
                    out.line(f"  {verb:<20} {manual} -> {predicted}")
            if report.unknown:
                out.line("unknown to lexicon: " + ", ".join(report.unknown))
    return EXIT_OK


def _predict_gold_items(store, registry, grammar, items, domain):
    """Classify each gold item; items with spaces are treated as questions."""
    predictions = []
    failures = []
    for item in items:
        try:
            if " " in item.strip():
                _, report = classify_question(
                    store, registry, grammar, item, domain
                )
            else:
                report = classify_verb(store, registry, item, domain)
            predictions.append((item, report.chosen_level))
        except (NoVerbFoundError, UnknownVerbError) as exc:
            failures.append((item, str(exc)))
    return predictions, failures


def cmd_evaluate(args) -> int:
    store, registry, grammar = _load_config(args)
    gold = evaluation.load_gold(args.gold, args.domain)
    failures = []
    if args.predictions:
        predictions = evaluation.load_gold(args.predictions, args.domain)
    else:
        predictions, failures = _predict_gold_items(
            store, registry, grammar, [item for item, _ in gold], args.domain
        )
        failed_items = {item for item, _ in failures}
        gold = [(item, level) for item, level in gold if item not in failed_items]

    matrix = evaluation.build_confusion(
        predictions, gold, registry.levels(args.domain)
    )
    rows = evaluation.metric_table(matrix)
    fig_dir = _figure_dir(args)
    with _Output(args.out) as out:
        if args.format == "json":
            payload = evaluation.metrics_to_dict(matrix, rows)
            payload["lexicon_version"] = store.version
            payload["failed_items"] = [
                {"item": item, "error": message} for item, message in failures
            ]
            out.line(json.dumps(payload))
        else:
            out.line(f"items: {matrix.total}")
            out.line(evaluation.format_metric_table(rows))
            for item, message in failures:
                out.line(f"FAILED\t{item}\t{message}")
    if fig_dir is not None:
        figures.save_metric_bars(rows[:-1], fig_dir / "metrics.png")
    return EXIT_PARTIAL if failures else EXIT_OK


def _add_common(parser):
    parser.add_argument("--wordnet", metavar="DIR",
                        help="WordNet database directory (default: bundled)")
    parser.add_argument("--verbset", metavar="FILE",
                        help="consensus verb-set JSON (default: bundled)")
    parser.add_argument("--grammar", metavar="FILE",
                        help="starter-pattern grammar file (default: bundled)")
    parser.add_argument("--domain", default=verbsets.COGNITIVE,
                        choices=sorted(verbsets.DOMAIN_LEVELS),
                        help="taxonomy domain (default: cognitive)")
    parser.add_argument("--format", default="text", choices=("text", "json"),
                        help="output format")
    parser.add_argument("--out", metavar="FILE",
                        help="write output to FILE instead of stdout")
    parser.add_argument("--figures", metavar="DIR",
                        help="also render bar-chart PNGs into DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bloomsim",
        description="Classify questions and verbs into taxonomy levels "
                    "using WordNet verb similarity.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify questions")
    p.add_argument("question", nargs="?", help="question text")
    p.add_argument("--file", metavar="FILE", help="file of questions")
    p.add_argument("--explain", action="store_true",
                   help="print per-level score details")
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("classify-verb", help="classify a single verb")
    p.add_argument("verb")
    p.add_argument("--explain", action="store_true",
                   help="print every pair score, not only per-level totals")
    _add_common(p)
    p.set_defaults(func=cmd_classify_verb)

    p = sub.add_parser("build-verbset",
                       help="merge source verb lists into a consensus set")
    p.add_argument("sources", nargs="+", metavar="SOURCE",
                   help="per-institution verb list files")
    p.add_argument("--threshold", type=float, default=0.75,
                   help="majority agreement ratio (default 0.75)")
    p.add_argument("--conditional-threshold", type=float, default=0.5,
                   help="conditional keep ratio (default 0.5)")
    p.add_argument("--out", required=True, metavar="FILE",
                   help="consensus JSON destination")
    p.add_argument("--format", default="text", choices=("text", "json"))
    p.set_defaults(func=cmd_build_verbset)

    p = sub.add_parser("audit",
                       help="re-classify a candidate verb list against the registry")
    p.add_argument("candidate", help="verb list file to audit")
    _add_common(p)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("evaluate", help="score predictions against gold labels")
    p.add_argument("--gold", required=True, metavar="FILE",
                   help="item<TAB>level gold file")
    p.add_argument("--predictions", metavar="FILE",
                   help="item<TAB>level predictions; omitted = classify gold items")
    _add_common(p)
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
