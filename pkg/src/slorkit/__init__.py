"""Reference-free sentence fluency scoring over trainable language models."""

from .config import PipelineConfig, load_config
from .corpus import (
    CorpusSplit,
    Sentence,
    clean_text,
    dedupe,
    filter_sentences,
    ingest_dir,
    sentence_id,
    split_corpus,
)
from .corruption import (
    CorruptionSpec,
    GradedExample,
    apply_spec,
    build_graded_testset,
    corrupt_tokens,
    delete_word,
    duplicate_word,
    misspell,
    scramble,
)
from .errors import DataError, SlorkitError, TrainingError
from .evaluation import CorrelationReport, HumanRating, evaluate, pearson, spearman
from .lm import (
    KneserNeyLm,
    LanguageModel,
    TinyRnnLm,
    UnigramLm,
    load_model,
    perplexity,
    save_model,
    sentence_log_prob,
)
from .pipeline import run_pipeline
from .scorer import FluencyScore, SlorScorer, mean_log_prob, slor, wpslor
from .tokenizer import BpeTokenizer, whitespace_tokenize

__version__ = "0.1.0"

__all__ = [
    "PipelineConfig",
    "load_config",
    "CorpusSplit",
    "Sentence",
    "clean_text",
    "dedupe",
    "filter_sentences",
    "ingest_dir",
    "sentence_id",
    "split_corpus",
    "CorruptionSpec",
    "GradedExample",
    "apply_spec",
    "build_graded_testset",
    "corrupt_tokens",
    "delete_word",
    "duplicate_word",
    "misspell",
    "scramble",
    "DataError",
    "SlorkitError",
    "TrainingError",
    "CorrelationReport",
    "HumanRating",
    "evaluate",
    "pearson",
    "spearman",
    "KneserNeyLm",
    "LanguageModel",
    "TinyRnnLm",
    "UnigramLm",
    "load_model",
    "perplexity",
    "save_model",
    "sentence_log_prob",
    "run_pipeline",
    "FluencyScore",
    "SlorScorer",
    "mean_log_prob",
    "slor",
    "wpslor",
    "BpeTokenizer",
    "whitespace_tokenize",
]
