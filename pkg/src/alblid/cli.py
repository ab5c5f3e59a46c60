"""Command-line front end: ``alblid {train,identify,perturb,excerpt,eval,compare}``.

Data goes to standard output or the ``-o`` path, diagnostics to standard
error. Exit status is 0 on success, 1 on a data or processing error and 2
on invalid arguments.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .classifiers import Method, classify
from .corpus import (
    Excerpt,
    StripAll,
    StripHalf,
    dumps_articles,
    load_corpus,
    make_variant,
    texts_by_language,
    write_rejections,
)
from .errors import AlblidError, ParameterError
from .evaluation import compare_runs, evaluate, parse_report_tsv, render_comparison, render_report
from .profiles import ModelConfig, dumps_model_set, load_model_set, train_model_set


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {value}")
    return value


def _probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in [0, 1], got {value}")
    return value


def _write(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_bytes(text.encode("utf-8"))


def _report_rejections(corpus) -> None:
    if corpus.rejections:
        print(f"{len(corpus.rejections)} record(s) rejected:", file=sys.stderr)
        write_rejections(corpus.rejections, sys.stderr)


def _format_score(score) -> str:
    return repr(float(score)) if isinstance(score, Fraction) else repr(score)


def cmd_train(args) -> int:
    config = ModelConfig(args.ngram_min, args.ngram_max, args.rank_min, args.rank_max, args.alpha,
                         args.profile_size, args.cosine_size)
    corpus = load_corpus(args.corpus)
    _report_rejections(corpus)
    texts, domains = texts_by_language(corpus)
    models = train_model_set(texts, config, domains)
    _write(dumps_model_set(models), args.output)
    print("language\tdocuments\tbytes\tvocabulary\tprofile\tshort-words")
    for label, model in models.items():
        print(f"{label}\t{model.documents}\t{model.training_bytes}\t{model.vocabulary_size}\t"
              f"{len(model.ranked)}\t{len(model.short_word_counts)}")
    return 0


def cmd_identify(args) -> int:
    models = load_model_set(args.model)
    raw = sys.stdin.buffer.read() if args.input in (None, "-") else Path(args.input).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParameterError(f"input is not valid UTF-8 (byte {exc.start})") from None
    if not text.strip():
        raise ParameterError("input is empty")
    verdict = classify(text, models, args.method, priors=args.priors, min_margin=args.min_margin)
    best = verdict.scores.get(verdict.language)
    print(f"{verdict.language}\t{_format_score(best) if best is not None else 'N/A'}")
    if args.verbose:
        reverse = not Method(args.method).minimizes
        ranking = sorted(verdict.scores.items(), key=lambda kv: (-kv[1] if reverse else kv[1], kv[0]))
        for label, score in ranking:
            print(f"  {label}\t{_format_score(score)}")
        if verdict.tie:
            print("  (tie)")
    return 0


def cmd_perturb(args) -> int:
    if args.variant == "strip-half":
        if args.seed is None:
            raise ParameterError("--seed is required for strip-half")
        variant = StripHalf(args.seed, args.p)
    else:
        variant = StripAll()
    corpus = load_corpus(args.corpus)
    _report_rejections(corpus)
    _write(dumps_articles(make_variant(corpus, variant)), args.output)
    return 0


def cmd_excerpt(args) -> int:
    corpus = load_corpus(args.corpus)
    _report_rejections(corpus)
    excerpted = make_variant(corpus, Excerpt(args.max_bytes))
    _write(dumps_articles(excerpted), args.output)
    excluded = len(corpus) - len(excerpted)
    stream = sys.stderr if args.output is None else sys.stdout
    print(f"kept\t{len(excerpted)}\nexcluded\t{excluded}", file=stream)
    return 0


def cmd_eval(args) -> int:
    models = load_model_set(args.model)
    corpus = load_corpus(args.corpus, args.dataset)
    _report_rejections(corpus)
    if args.variant == "strip-all":
        corpus = make_variant(corpus, StripAll())
    elif args.variant == "strip-half":
        if args.seed is None:
            raise ParameterError("--seed is required for strip-half")
        corpus = make_variant(corpus, StripHalf(args.seed, args.p))
    elif args.variant == "excerpt":
        corpus = make_variant(corpus, Excerpt(args.max_bytes))
    methods = args.method or list(Method)
    fields = [f for f in args.fields.split(",") if f]
    report = evaluate(models, corpus, methods, fields, priors=args.priors)
    _write(render_report(report, args.format), args.output)
    return 0


def cmd_compare(args) -> int:
    def read(path):
        try:
            return parse_report_tsv(Path(path).read_bytes().decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise ParameterError(f"{path}: not valid UTF-8 (byte {exc.start})") from None

    sys.stdout.write(render_comparison(compare_runs(read(args.report_a), read(args.report_b))))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="alblid", description="Character n-gram language identification.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    train = sub.add_parser("train", help="train a model file from a corpus")
    train.add_argument("corpus", type=Path, help="folder tree or article file")
    train.add_argument("-o", "--output", type=Path, required=True, help="model file to write")
    train.add_argument("--ngram-min", type=_positive_int, default=1)
    train.add_argument("--ngram-max", type=_positive_int, default=4)
    train.add_argument("--rank-min", type=_positive_int, default=1)
    train.add_argument("--rank-max", type=_positive_int, default=5)
    train.add_argument("--profile-size", type=_positive_int, default=300)
    train.add_argument("--cosine-size", type=_positive_int, default=3500)
    train.add_argument("--alpha", type=float, default=1.0)
    train.set_defaults(func=cmd_train)

    method_choices = [m.value for m in Method]
    identify = sub.add_parser("identify", help="identify the language of one text")
    identify.add_argument("model", type=Path)
    identify.add_argument("input", nargs="?", help="text file, or - / omitted for standard input")
    identify.add_argument("--method", choices=method_choices, default=Method.NAIVE_BAYES.value)
    identify.add_argument("--priors", choices=["uniform", "documents"], default="uniform")
    identify.add_argument("--min-margin", type=float, default=None,
                          help="answer 'und' when the winner leads by less than this")
    identify.add_argument("--verbose", action="store_true", help="print every language's score")
    identify.set_defaults(func=cmd_identify)

    perturb = sub.add_parser("perturb", help="write a diacritic-stripped copy of a corpus")
    perturb.add_argument("corpus", type=Path)
    perturb.add_argument("--variant", choices=["strip-all", "strip-half"], required=True)
    perturb.add_argument("--seed", type=_seed, help="required for strip-half")
    perturb.add_argument("--p", type=_probability, default=0.5, help="replacement probability for strip-half")
    perturb.add_argument("-o", "--output", type=Path)
    perturb.set_defaults(func=cmd_perturb)

    excerpt = sub.add_parser("excerpt", help="cut contents to a fixed byte length")
    excerpt.add_argument("corpus", type=Path)
    excerpt.add_argument("--max-bytes", type=_positive_int, default=500)
    excerpt.add_argument("-o", "--output", type=Path)
    excerpt.set_defaults(func=cmd_excerpt)

    ev = sub.add_parser("eval", help="accuracy of each method on a labeled corpus")
    ev.add_argument("model", type=Path)
    ev.add_argument("corpus", type=Path)
    ev.add_argument("--method", action="append", choices=method_choices,
                    help="repeatable; defaults to all five methods")
    ev.add_argument("--fields", default="title,contents", help="comma-separated subset of title,contents")
    ev.add_argument("--dataset", help="dataset tag for the report (default: file or folder name)")
    ev.add_argument("--variant", choices=["strip-all", "strip-half", "excerpt"],
                    help="derive this variant of the corpus before evaluating")
    ev.add_argument("--seed", type=_seed)
    ev.add_argument("--p", type=_probability, default=0.5)
    ev.add_argument("--max-bytes", type=_positive_int, default=500)
    ev.add_argument("--priors", choices=["uniform", "documents"], default="uniform")
    ev.add_argument("--format", choices=["table-text", "tab-separated"], default="table-text")
    ev.add_argument("-o", "--output", type=Path)
    ev.set_defaults(func=cmd_eval)

    compare = sub.add_parser("compare", help="accuracy deltas between two tab-separated reports")
    compare.add_argument("report_a", type=Path)
    compare.add_argument("report_b", type=Path)
    compare.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (AlblidError, OSError) as exc:
        message = " ".join(str(exc).split())
        print(f"alblid {args.command}: error: {message}", file=sys.stderr)
        for rejection in getattr(exc, "rejections", ())[:20]:
            print(f"  {rejection.source}\t{rejection.reason}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
