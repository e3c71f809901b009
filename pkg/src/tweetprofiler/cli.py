"""Command-line interface.

Subcommands: train, predict, evaluate, sweep, report, synth. Defaults encode
the final operating point of the pipeline (min_df=10, C=1.0, gamma=auto,
10 folds). Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric or
convergence error. Errors print a single diagnostic line on stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .corpus import Corpus, load_corpus, write_corpus
from .errors import TweetProfilerError, UsageError
from .evaluation import cross_validate, reports_to_csv, sweep_min_df
from .model_io import ProfileModel, load_model, save_model
from .svm import RbfSvmClassifier
from .synthetic import default_synth_spec, generate_synthetic_corpus
from .vectorizer import (
    DocumentTermVectorizer,
    top_terms_by_class,
    vocabulary_to_lines,
)

TASKS = ("gender", "variety")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # map argparse failures onto exit code 1
        raise UsageError(message)


def _gamma(text: str):
    if text == "auto":
        return "auto"
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"gamma must be 'auto' or a number, got {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError("gamma must be positive")
    return value


def _df_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError("df range must look like A..B")
    try:
        bounds = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad df range {text!r}")
    if bounds[0] < 1 or bounds[1] < bounds[0]:
        raise argparse.ArgumentTypeError(f"bad df range {text!r}")
    return bounds


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="tweetprofiler",
        description="Profile tweet authors: gender and language-variety prediction "
        "from bag-of-words features and an RBF-kernel SVM.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_corpus(p, truth_help="truth file (default: CORPUS/truth.txt)"):
        p.add_argument("--corpus", required=True, metavar="DIR", help="corpus directory")
        p.add_argument("--truth", metavar="FILE", help=truth_help)

    def add_svm(p):
        p.add_argument("--min-df", type=int, default=10, metavar="N",
                       help="minimum document frequency (default 10)")
        p.add_argument("--c", type=float, default=1.0, metavar="X",
                       help="SVM box constraint (default 1.0)")
        p.add_argument("--gamma", type=_gamma, default="auto", metavar="auto|X",
                       help="RBF kernel width (default auto = 1/n_features)")
        p.add_argument("--seed", type=int, default=0, metavar="S",
                       help="random seed (default 0)")

    p = sub.add_parser("train", help="train gender + variety models, write a model file")
    add_corpus(p)
    add_svm(p)
    p.add_argument("--model", required=True, metavar="FILE", help="model file to write")

    p = sub.add_parser("predict", help="predict gender and variety for a corpus")
    p.add_argument("--corpus", required=True, metavar="DIR", help="corpus directory")
    p.add_argument("--model", required=True, metavar="FILE", help="trained model file")
    p.add_argument("--out", required=True, metavar="PATH",
                   help="predictions file (truth-file syntax)")

    p = sub.add_parser("evaluate", help="cross-validate both tasks, emit CSV")
    add_corpus(p)
    add_svm(p)
    p.add_argument("--folds", type=int, default=10, metavar="K",
                   help="number of folds (default 10)")
    p.add_argument("--out", default="-", metavar="PATH", help="CSV path (default stdout)")

    p = sub.add_parser("sweep", help="cross-validate across a min-df range, emit CSV")
    add_corpus(p)
    add_svm(p)
    p.add_argument("--folds", type=int, default=10, metavar="K",
                   help="number of folds (default 10)")
    p.add_argument("--df-range", type=_df_range, default=(2, 25), metavar="A..B",
                   help="inclusive min-df range (default 2..25)")
    p.add_argument("--out", default="-", metavar="PATH", help="CSV path (default stdout)")

    p = sub.add_parser("report", help="per-class top-k term frequencies")
    add_corpus(p)
    p.add_argument("--min-df", type=int, default=10, metavar="N",
                   help="minimum document frequency (default 10)")
    p.add_argument("--top-k", type=int, default=20, metavar="N",
                   help="terms per class (default 20)")
    p.add_argument("--out", default="-", metavar="PATH", help="output path (default stdout)")
    p.add_argument("--vocab-out", metavar="FILE",
                   help="also export the fitted vocabulary (term, column, df)")

    p = sub.add_parser("synth", help="generate a synthetic corpus on disk")
    p.add_argument("--corpus", required=True, metavar="DIR", help="output directory")
    p.add_argument("--truth", metavar="FILE",
                   help="truth file to write (default: CORPUS/truth.txt)")
    p.add_argument("--n-authors", type=int, default=200, metavar="N")
    p.add_argument("--tweets-per-author", type=int, default=100, metavar="N")
    p.add_argument("--signal-rate", type=float, default=0.3, metavar="R")
    p.add_argument("--varieties", type=int, default=3, metavar="N",
                   help="number of variety classes (default 3)")
    p.add_argument("--language", default="en", choices=("ar", "en", "es", "pt"))
    p.add_argument("--seed", type=int, default=0, metavar="S")

    return parser


def _truth_path(args) -> Path:
    if args.truth:
        return Path(args.truth)
    fallback = Path(args.corpus) / "truth.txt"
    if not fallback.is_file():
        raise UsageError(
            "this command needs a labeled corpus: pass --truth or place "
            f"truth.txt in {args.corpus}"
        )
    return fallback


def _load_labeled(args) -> Corpus:
    return load_corpus(args.corpus, _truth_path(args))


def _write_output(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def cmd_train(args) -> int:
    corpus = _load_labeled(args)
    vectorizer = DocumentTermVectorizer(min_df=args.min_df)
    X = vectorizer.fit(corpus.documents()).transform(corpus.documents())
    gender = RbfSvmClassifier(C=args.c, gamma=args.gamma, seed=args.seed)
    gender.fit(X, corpus.task_labels("gender"))
    variety = RbfSvmClassifier(C=args.c, gamma=args.gamma, seed=args.seed)
    variety.fit(X, corpus.task_labels("variety"))
    save_model(
        ProfileModel(
            language=corpus.language,
            min_df=args.min_df,
            C=args.c,
            gamma=args.gamma,
            lowercase=False,
            vocabulary=vectorizer.vocabulary_,
            gender=gender,
            variety=variety,
        ),
        args.model,
    )
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    corpus = load_corpus(args.corpus)
    vectorizer = DocumentTermVectorizer.from_vocabulary(
        model.vocabulary, lowercase=model.lowercase
    )
    X = vectorizer.transform(corpus.documents())
    genders = model.gender.predict(X)
    varieties = model.variety.predict(X)
    lines = [
        f"{author.author_id}:::{gender}:::{variety}"
        for author, gender, variety in zip(corpus.authors, genders, varieties)
    ]
    _write_output(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_evaluate(args) -> int:
    corpus = _load_labeled(args)
    reports = [
        cross_validate(corpus, task, min_df=args.min_df, C=args.c,
                       gamma=args.gamma, k=args.folds, seed=args.seed)
        for task in TASKS
    ]
    _write_output(args.out, reports_to_csv(reports))
    return 0


def cmd_sweep(args) -> int:
    corpus = _load_labeled(args)
    reports = []
    for task in TASKS:
        reports.extend(
            sweep_min_df(corpus, task, df_range=args.df_range, C=args.c,
                         gamma=args.gamma, k=args.folds, seed=args.seed)
        )
    _write_output(args.out, reports_to_csv(reports))
    return 0


def cmd_report(args) -> int:
    corpus = _load_labeled(args)
    vectorizer = DocumentTermVectorizer(min_df=args.min_df)
    X = vectorizer.fit(corpus.documents()).transform(corpus.documents())
    if args.vocab_out:
        _write_output(
            args.vocab_out,
            "\n".join(vocabulary_to_lines(vectorizer.vocabulary_)) + "\n",
        )
    sections = []
    for task in TASKS:
        labels = corpus.task_labels(task)
        per_class, common = top_terms_by_class(
            X, vectorizer.vocabulary_, labels, args.top_k
        )
        for cls, ranked in per_class.items():
            sections.append(f"# task={task} class={cls} top={args.top_k}")
            sections.extend(
                f"{rank} {term} {count}"
                for rank, (term, count) in enumerate(ranked, start=1)
            )
        sections.append(f"# task={task} common terms")
        for term, counts in common.items():
            by_class = " ".join(f"{cls}={count}" for cls, count in counts.items())
            sections.append(f"{term} {by_class}")
    _write_output(args.out, "\n".join(sections) + "\n")
    return 0


def cmd_synth(args) -> int:
    spec = default_synth_spec(
        n_authors=args.n_authors,
        tweets_per_author=args.tweets_per_author,
        signal_rate=args.signal_rate,
        n_varieties=args.varieties,
        seed=args.seed,
        language=args.language,
    )
    corpus = generate_synthetic_corpus(spec)
    truth = Path(args.truth) if args.truth else Path(args.corpus) / "truth.txt"
    write_corpus(corpus, args.corpus, truth)
    return 0


_COMMANDS = {
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "report": cmd_report,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except TweetProfilerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
