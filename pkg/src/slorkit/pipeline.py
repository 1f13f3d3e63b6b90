"""End-to-end pipeline: ingest -> (train-bpe) -> train-lm -> corrupt ->
score -> evaluate.

Each stage is keyed by a hash of its parameters and the content of its
input files; a stage whose outputs already exist with a matching hash in
their header is skipped, which makes reruns cheap and interrupted runs
resumable.  Output headers carry the stage hash and the driving seed, and
artifacts contain no absolute paths, so identical configs reproduce
byte-identical output trees.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Callable, Dict, List, Optional

from . import corpus as corpus_mod
from . import corruption as corruption_mod
from . import evaluation as evaluation_mod
from . import scorer as scorer_mod
from .config import PipelineConfig
from .errors import DataError, SlorkitError
from .lm import KneserNeyLm, TinyRnnLm, UnigramLm, load_model, save_model
from .tokenizer import BpeTokenizer

_LOCK_NAME = ".slorkit.lock"


def _stage_hash(stage: str, params: dict, input_files: List[Path]) -> str:
    digest = hashlib.sha256()
    digest.update(json.dumps({"stage": stage, "params": params}, sort_keys=True).encode())
    for f in input_files:
        digest.update(Path(f).name.encode())
        digest.update(Path(f).read_bytes())
    return digest.hexdigest()[:16]


def _header(stage_hash: str, seed: int) -> str:
    return f"config={stage_hash} seed={seed}"


def _outputs_current(outputs: List[Path], stage_hash: str) -> bool:
    want = corpus_mod.COMMENT_PREFIX + f"config={stage_hash} "
    for out in outputs:
        if not Path(out).exists():
            return False
        with open(out, "rb") as fh:
            first = fh.readline().decode("utf-8", errors="replace")
        if not first.startswith(want):
            return False
    return True


def _build_lm(cfg: PipelineConfig):
    if cfg.lm_kind == "unigram":
        return UnigramLm(smoothing_k=cfg.smoothing_k)
    if cfg.lm_kind == "kn":
        return KneserNeyLm(order=cfg.order, discount=cfg.discount, unk_min_count=cfg.unk_min_count)
    return TinyRnnLm(
        emb_dim=cfg.emb_dim,
        hidden_dim=cfg.hidden_dim,
        learning_rate=cfg.learning_rate,
        epochs=cfg.epochs,
        batch_size=cfg.batch_size,
        seed=cfg.lm_seed,
        unk_min_count=cfg.unk_min_count,
    )


def run_pipeline(
    cfg: PipelineConfig, force: bool = False, log: Optional[Callable[[str], None]] = None
) -> Dict[str, Path]:
    """Run every stage, reusing cached outputs; returns artifact paths."""
    say = log or (lambda msg: None)
    cfg.validate()
    corpus_files = sorted(Path(cfg.corpus_dir).glob("*.txt"))
    if not corpus_files:
        raise DataError(f"no *.txt files found in {cfg.corpus_dir}")

    out = Path(cfg.out_dir)
    corpus_dir = out / "corpus"
    eval_dir = out / "eval"
    models_dir = cfg.models_path
    for d in (out, corpus_dir, eval_dir, models_dir):
        d.mkdir(parents=True, exist_ok=True)

    lock = out / _LOCK_NAME
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        os.close(fd)
    except FileExistsError:
        raise DataError(f"output directory is locked by another pipeline run: {lock}")

    artifacts: Dict[str, Path] = {
        "train": corpus_dir / "train.txt",
        "validation": corpus_dir / "validation.txt",
        "test": corpus_dir / "test.txt",
        "manifest": corpus_dir / "manifest.tsv",
        "bpe": models_dir / "bpe.model",
        "lm": models_dir / "lm.model",
        "unigram": models_dir / "unigram.model",
        "graded": eval_dir / "graded.tsv",
        "ratings": eval_dir / "ratings.tsv",
        "scores": eval_dir / "scores.tsv",
        "report": eval_dir / "report.txt",
    }
    try:
        _run_stages(cfg, corpus_files, artifacts, force, say)
    except SlorkitError:
        raise
    finally:
        lock.unlink(missing_ok=True)
    if cfg.regime != "bpe":
        artifacts.pop("bpe")
    return artifacts


def _run_stage(name, say, stage_hash, outputs, force, build):
    if not force and _outputs_current(outputs, stage_hash):
        say(f"stage {name}: cached")
        return
    say(f"stage {name}: running")
    try:
        build()
    except SlorkitError as e:
        raise type(e)(f"stage {name}: {e}") from e


def _run_stages(cfg, corpus_files, artifacts, force, say):
    # ingest ------------------------------------------------------------------
    ingest_params = {
        "min_tokens": cfg.min_tokens,
        "max_tokens": cfg.max_tokens,
        "reject_latin": cfg.reject_latin,
        "seed": cfg.corpus_seed,
        "sizes": [cfg.train_n, cfg.val_n, cfg.test_n],
    }
    ingest_hash = _stage_hash("ingest", ingest_params, corpus_files)
    ingest_outputs = [artifacts[k] for k in ("train", "validation", "test", "manifest")]

    def do_ingest():
        reject = corpus_mod.LATIN_LETTER_RANGES if cfg.reject_latin else ()
        sentences = corpus_mod.ingest_dir(
            cfg.corpus_dir, cfg.min_tokens, cfg.max_tokens, reject
        )
        split = corpus_mod.split_corpus(
            sentences, cfg.train_n, cfg.val_n, cfg.test_n, cfg.corpus_seed
        )
        hdr = _header(ingest_hash, cfg.corpus_seed)
        corpus_mod.write_sentences(artifacts["train"], split.train, hdr)
        corpus_mod.write_sentences(artifacts["validation"], split.validation, hdr)
        corpus_mod.write_sentences(artifacts["test"], split.test, hdr)
        corpus_mod.write_manifest(artifacts["manifest"], split, hdr)

    _run_stage("ingest", say, ingest_hash, ingest_outputs, force, do_ingest)

    # train-bpe ------------------------------------------------------------------
    use_bpe = cfg.regime == "bpe"
    if use_bpe:
        bpe_params = {"num_merges": cfg.num_merges}
        bpe_hash = _stage_hash("train-bpe", bpe_params, [artifacts["train"]])

        def do_bpe():
            sentences = corpus_mod.read_sentence_file(artifacts["train"])
            model = BpeTokenizer(num_merges=cfg.num_merges).fit(sentences)
            model.save(artifacts["bpe"], _header(bpe_hash, cfg.corpus_seed))

        _run_stage("train-bpe", say, bpe_hash, [artifacts["bpe"]], force, do_bpe)

    # train-lm (conditional model plus the unigram companion) ----------------------
    lm_params = {
        "kind": cfg.lm_kind,
        "order": cfg.order,
        "discount": cfg.discount,
        "smoothing_k": cfg.smoothing_k,
        "unk_min_count": cfg.unk_min_count,
        "emb_dim": cfg.emb_dim,
        "hidden_dim": cfg.hidden_dim,
        "epochs": cfg.epochs,
        "batch_size": cfg.batch_size,
        "learning_rate": cfg.learning_rate,
        "seed": cfg.lm_seed,
        "regime": cfg.regime,
    }
    lm_inputs = [artifacts["train"], artifacts["validation"]]
    if use_bpe:
        lm_inputs.append(artifacts["bpe"])
    lm_hash = _stage_hash("train-lm", lm_params, lm_inputs)

    def do_train_lm():
        train = corpus_mod.read_sentence_file(artifacts["train"])
        val = corpus_mod.read_sentence_file(artifacts["validation"])
        train_tokens = [list(s.tokens) for s in train]
        val_tokens = [list(s.tokens) for s in val]
        if use_bpe:
            bpe = BpeTokenizer.load(artifacts["bpe"])
            train_tokens = bpe.transform(train_tokens)
            val_tokens = bpe.transform(val_tokens)
        model = _build_lm(cfg)
        if isinstance(model, TinyRnnLm) and val_tokens:
            model.fit(train_tokens, validation=val_tokens)
        else:
            model.fit(train_tokens)
        hdr = _header(lm_hash, cfg.lm_seed)
        save_model(model, artifacts["lm"], hdr)
        save_model(
            UnigramLm(smoothing_k=cfg.smoothing_k).fit(train_tokens),
            artifacts["unigram"],
            hdr,
        )

    _run_stage(
        "train-lm", say, lm_hash, [artifacts["lm"], artifacts["unigram"]], force, do_train_lm
    )

    # corrupt -------------------------------------------------------------------
    corrupt_params = {"total": cfg.corrupt_total, "seed": cfg.corrupt_seed}
    corrupt_hash = _stage_hash("corrupt", corrupt_params, [artifacts["test"]])

    def do_corrupt():
        sources = corpus_mod.read_sentence_file(artifacts["test"])
        graded = corruption_mod.build_graded_testset(
            sources, cfg.corrupt_total, seed=cfg.corrupt_seed
        )
        hdr = _header(corrupt_hash, cfg.corrupt_seed)
        corruption_mod.write_graded(artifacts["graded"], graded, hdr)
        ratings = [
            evaluation_mod.HumanRating(sentence_id=g.sentence_id, score=g.label)
            for g in graded
        ]
        evaluation_mod.write_ratings(artifacts["ratings"], ratings, hdr)

    _run_stage(
        "corrupt", say, corrupt_hash, [artifacts["graded"], artifacts["ratings"]], force, do_corrupt
    )

    # score ---------------------------------------------------------------------
    score_params = {"baseline": cfg.baseline, "regime": cfg.regime}
    score_inputs = [artifacts["graded"], artifacts["lm"], artifacts["unigram"]]
    if use_bpe:
        score_inputs.append(artifacts["bpe"])
    score_hash = _stage_hash("score", score_params, score_inputs)

    def do_score():
        graded = corruption_mod.read_graded(artifacts["graded"])
        lm = load_model(artifacts["lm"])
        unigram = load_model(artifacts["unigram"])
        bpe = BpeTokenizer.load(artifacts["bpe"]) if use_bpe else None
        scores = []
        for g in graded:
            sent = corpus_mod.Sentence(
                id=g.sentence_id,
                text=g.corrupted_text,
                tokens=tuple(g.corrupted_text.split()),
            )
            if bpe is not None:
                s = scorer_mod.wpslor(lm, unigram, bpe, sent)
            else:
                s = scorer_mod.slor(lm, unigram, sent)
            if cfg.baseline == "mean-logp":
                s.slor = scorer_mod.mean_log_prob(lm, sent)
            scores.append(s)
        scorer_mod.write_scores(artifacts["scores"], scores, _header(score_hash, cfg.lm_seed))

    _run_stage("score", say, score_hash, [artifacts["scores"]], force, do_score)

    # evaluate --------------------------------------------------------------------
    eval_hash = _stage_hash("evaluate", {}, [artifacts["scores"], artifacts["ratings"]])

    def do_evaluate():
        scores = scorer_mod.read_scores(artifacts["scores"])
        ratings = evaluation_mod.read_ratings(artifacts["ratings"])
        report = evaluation_mod.evaluate(scores, ratings)
        evaluation_mod.write_report(
            artifacts["report"], report, _header(eval_hash, cfg.corrupt_seed)
        )
        say(f"pearson_r = {report.pearson_r:.6f} over {report.n} sentences")

    _run_stage("evaluate", say, eval_hash, [artifacts["report"]], force, do_evaluate)
