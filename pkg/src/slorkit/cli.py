"""Command-line entry point.

Subcommands: ingest, train-bpe, train-lm, corrupt, score, evaluate,
pipeline, version.  Exit codes: 0 success, 1 usage error, 2 data error,
3 numeric/training failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from . import corpus as corpus_mod
from . import corruption as corruption_mod
from . import evaluation as evaluation_mod
from . import scorer as scorer_mod
from .config import load_config
from .errors import DataError, TrainingError
from .lm import KneserNeyLm, TinyRnnLm, UnigramLm, load_model, save_model
from .lm.io import LM_FORMAT_VERSION
from .pipeline import run_pipeline
from .tokenizer import BPE_FORMAT_VERSION, BpeTokenizer


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the toolkit reserves 2 for data
    errors, so usage problems exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _cmd_ingest(args) -> int:
    reject = corpus_mod.LATIN_LETTER_RANGES if args.reject_latin else ()
    sentences = corpus_mod.ingest_dir(args.in_dir, args.min_tokens, args.max_tokens, reject)
    split = corpus_mod.split_corpus(sentences, args.train, args.val, args.test, args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    hdr = f"config=cli seed={args.seed}"
    corpus_mod.write_sentences(out / "train.txt", split.train, hdr)
    corpus_mod.write_sentences(out / "validation.txt", split.validation, hdr)
    corpus_mod.write_sentences(out / "test.txt", split.test, hdr)
    corpus_mod.write_manifest(out / "manifest.tsv", split, hdr)
    print(
        f"ingested {len(sentences)} sentences -> "
        f"train={len(split.train)} val={len(split.validation)} test={len(split.test)}"
    )
    return 0


def _cmd_train_bpe(args) -> int:
    sentences = corpus_mod.read_sentence_file(args.corpus)
    model = BpeTokenizer(num_merges=args.merges).fit(sentences)
    model.save(args.out)
    print(f"trained {len(model.merges_)} merges, vocab size {len(model.vocab_)} -> {args.out}")
    return 0


def _cmd_train_lm(args) -> int:
    sentences = corpus_mod.read_sentence_file(args.corpus)
    token_lists = [list(s.tokens) for s in sentences]
    val_lists = None
    if args.val_corpus:
        val_lists = [list(s.tokens) for s in corpus_mod.read_sentence_file(args.val_corpus)]
    if args.bpe:
        bpe = BpeTokenizer.load(args.bpe)
        token_lists = bpe.transform(token_lists)
        if val_lists is not None:
            val_lists = bpe.transform(val_lists)
    if args.kind == "unigram":
        model = UnigramLm(smoothing_k=args.smoothing_k).fit(token_lists)
    elif args.kind == "kn":
        model = KneserNeyLm(
            order=args.order, discount=args.discount, unk_min_count=args.unk_min_count
        ).fit(token_lists)
    else:
        model = TinyRnnLm(
            emb_dim=args.emb,
            hidden_dim=args.hidden,
            learning_rate=args.lr,
            epochs=args.epochs,
            batch_size=args.batch_size,
            seed=args.seed,
            unk_min_count=args.unk_min_count,
            verbose=1,
        ).fit(token_lists, validation=val_lists)
    save_model(model, args.out)
    print(f"trained {args.kind} model on {len(token_lists)} sentences -> {args.out}")
    return 0


def _cmd_corrupt(args) -> int:
    sources = corpus_mod.read_sentence_file(args.sentences)
    graded = corruption_mod.build_graded_testset(sources, args.total, seed=args.seed)
    corruption_mod.write_graded(args.out, graded)
    if args.ratings_out:
        ratings = [
            evaluation_mod.HumanRating(sentence_id=g.sentence_id, score=g.label) for g in graded
        ]
        evaluation_mod.write_ratings(args.ratings_out, ratings)
    counts = {}
    for g in graded:
        counts[g.label] = counts.get(g.label, 0) + 1
    print(f"wrote {len(graded)} graded examples {dict(sorted(counts.items(), reverse=True))}")
    return 0


def _read_score_input(args):
    if args.input_format == "graded":
        graded = corruption_mod.read_graded(args.sentences)
        return [
            corpus_mod.Sentence(
                id=g.sentence_id,
                text=g.corrupted_text,
                tokens=tuple(g.corrupted_text.split()),
            )
            for g in graded
        ]
    return corpus_mod.read_sentence_file(args.sentences)


def _cmd_score(args) -> int:
    lm = load_model(args.lm)
    unigram = load_model(args.unigram)
    if not isinstance(unigram, UnigramLm):
        raise DataError(f"{args.unigram} is not a unigram model file")
    bpe = BpeTokenizer.load(args.bpe) if args.bpe else None
    scores = []
    for sent in _read_score_input(args):
        if bpe is not None:
            s = scorer_mod.wpslor(lm, unigram, bpe, sent)
        else:
            s = scorer_mod.slor(lm, unigram, sent)
        if args.baseline == "mean-logp":
            s.slor = scorer_mod.mean_log_prob(lm, sent)
        scores.append(s)
    hdr = "baseline=mean-logp" if args.baseline == "mean-logp" else ""
    scorer_mod.write_scores(args.out, scores, hdr)
    print(f"scored {len(scores)} sentences -> {args.out}")
    return 0


def _cmd_evaluate(args) -> int:
    scores = scorer_mod.read_scores(args.scores)
    ratings = evaluation_mod.read_ratings(args.ratings)
    report = evaluation_mod.evaluate(scores, ratings)
    evaluation_mod.write_report(args.out, report)
    print(f"pearson_r = {report.pearson_r:.6f} over {report.n} matched sentences")
    return 0


def _cmd_pipeline(args) -> int:
    overrides = {}
    for item in args.set or []:
        if "=" not in item:
            raise ValueError(f"--set expects section.key=value, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    cfg = load_config(args.config, overrides)
    run_pipeline(cfg, force=args.force, log=print)
    return 0


def _cmd_version(args) -> int:
    print(f"slorkit {__version__}")
    print(
        f"formats: bpe={BPE_FORMAT_VERSION} lm={LM_FORMAT_VERSION} "
        f"scores={scorer_mod.SCORES_FORMAT_VERSION} "
        f"graded={corruption_mod.GRADED_FORMAT_VERSION} "
        f"ratings={evaluation_mod.RATINGS_FORMAT_VERSION} "
        f"report={evaluation_mod.REPORT_FORMAT_VERSION}"
    )
    print(
        "rng: corruption and splits use Python random.Random (Mersenne Twister); "
        "model init/training uses numpy default_rng (PCG64)"
    )
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="slorkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="clean, filter, dedupe, and split a corpus")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", dest="out_dir", required=True)
    p.add_argument("--min-tokens", type=int, default=8)
    p.add_argument("--max-tokens", type=int, default=25)
    p.add_argument("--reject-latin", action="store_true")
    p.add_argument("--seed", type=int, default=13)
    p.add_argument("--train", type=int, required=True)
    p.add_argument("--val", type=int, default=0)
    p.add_argument("--test", type=int, default=0)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("train-bpe", help="train a BPE subword model")
    p.add_argument("--corpus", required=True)
    p.add_argument("--merges", type=int, default=4000)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train_bpe)

    p = sub.add_parser("train-lm", help="train a language model")
    p.add_argument("--kind", choices=("unigram", "kn", "rnn"), required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--bpe", help="encode the corpus with this BPE model first")
    p.add_argument("--order", type=int, default=5)
    p.add_argument("--discount", type=float, default=0.75)
    p.add_argument("--smoothing-k", type=float, default=1.0)
    p.add_argument("--unk-min-count", type=int, default=2)
    p.add_argument("--emb", type=int, default=32)
    p.add_argument("--hidden", type=int, default=64)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--lr", type=float, default=0.001)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--val-corpus", help="validation sentences for early stopping")
    p.set_defaults(func=_cmd_train_lm)

    p = sub.add_parser("corrupt", help="generate a graded corruption test set")
    p.add_argument("--sentences", required=True)
    p.add_argument("--total", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--ratings-out", help="also write an id/score ratings file")
    p.set_defaults(func=_cmd_corrupt)

    p = sub.add_parser("score", help="score sentences for fluency")
    p.add_argument("--lm", required=True)
    p.add_argument("--unigram", required=True)
    p.add_argument("--bpe")
    p.add_argument("--sentences", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--baseline", choices=("mean-logp",))
    p.add_argument("--input-format", choices=("lines", "graded"), default="lines")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("evaluate", help="correlate scores with ratings")
    p.add_argument("--scores", required=True)
    p.add_argument("--ratings", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("pipeline", help="run every stage from one config file")
    p.add_argument("--config", required=True)
    p.add_argument("--force", action="store_true", help="ignore cached stage outputs")
    p.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE")
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("version", help="print tool, format, and RNG versions")
    p.set_defaults(func=_cmd_version)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except DataError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (TrainingError, FloatingPointError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
