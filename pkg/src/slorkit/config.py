"""Declarative pipeline configuration.

One INI-style file with key = value sections per stage; command-line
--set section.key=value entries override it.  Paths are validated before
any stage runs.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Dict, Optional

from .errors import DataError

_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


@dataclass
class PipelineConfig:
    # [paths]
    corpus_dir: str = ""
    out_dir: str = ""
    model_dir: str = ""  # defaults to <out_dir>/models
    # [corpus]
    min_tokens: int = 8
    max_tokens: int = 25
    reject_latin: bool = False
    corpus_seed: int = 13
    train_n: int = 0
    val_n: int = 0
    test_n: int = 0
    # [tokenizer]
    regime: str = "word"  # word | bpe
    num_merges: int = 4000
    # [lm]
    lm_kind: str = "kn"  # unigram | kn | rnn
    order: int = 5
    discount: float = 0.75
    smoothing_k: float = 1.0
    unk_min_count: int = 2
    emb_dim: int = 32
    hidden_dim: int = 64
    epochs: int = 5
    batch_size: int = 32
    learning_rate: float = 0.001
    lm_seed: int = 1
    # [corruption]
    corrupt_total: int = 500
    corrupt_seed: int = 99
    # [scorer]
    baseline: str = "none"  # none | mean-logp

    def validate(self) -> None:
        if not self.corpus_dir or not Path(self.corpus_dir).is_dir():
            raise DataError(f"corpus_dir does not exist: {self.corpus_dir!r}")
        if not self.out_dir:
            raise DataError("out_dir is required")
        if self.regime not in ("word", "bpe"):
            raise ValueError(f"tokenizer regime must be word or bpe, got {self.regime!r}")
        if self.lm_kind not in ("unigram", "kn", "rnn"):
            raise ValueError(f"lm kind must be unigram, kn, or rnn, got {self.lm_kind!r}")
        if self.baseline not in ("none", "mean-logp"):
            raise ValueError(f"baseline must be none or mean-logp, got {self.baseline!r}")
        if min(self.train_n, self.val_n, self.test_n) < 0 or self.train_n == 0:
            raise ValueError("split sizes must be set; train_n must be > 0")
        if self.corrupt_total < 2:
            raise ValueError("corrupt_total must be >= 2 for evaluation")

    @property
    def models_path(self) -> Path:
        return Path(self.model_dir) if self.model_dir else Path(self.out_dir) / "models"


# maps "section.key" in the file to a PipelineConfig field
_KEY_MAP: Dict[str, str] = {
    "paths.corpus_dir": "corpus_dir",
    "paths.out_dir": "out_dir",
    "paths.model_dir": "model_dir",
    "corpus.min_tokens": "min_tokens",
    "corpus.max_tokens": "max_tokens",
    "corpus.reject_latin": "reject_latin",
    "corpus.seed": "corpus_seed",
    "corpus.train": "train_n",
    "corpus.val": "val_n",
    "corpus.test": "test_n",
    "tokenizer.regime": "regime",
    "tokenizer.num_merges": "num_merges",
    "lm.kind": "lm_kind",
    "lm.order": "order",
    "lm.discount": "discount",
    "lm.smoothing_k": "smoothing_k",
    "lm.unk_min_count": "unk_min_count",
    "lm.emb_dim": "emb_dim",
    "lm.hidden_dim": "hidden_dim",
    "lm.epochs": "epochs",
    "lm.batch_size": "batch_size",
    "lm.learning_rate": "learning_rate",
    "lm.seed": "lm_seed",
    "corruption.total": "corrupt_total",
    "corruption.seed": "corrupt_seed",
    "scorer.baseline": "baseline",
}


def _convert(value: str, target_type: type):
    if target_type is bool:
        v = value.strip().lower()
        if v in _BOOL_TRUE:
            return True
        if v in _BOOL_FALSE:
            return False
        raise ValueError(f"expected a boolean, got {value!r}")
    return target_type(value)


def load_config(path, overrides: Optional[Dict[str, str]] = None) -> PipelineConfig:
    """Parse a config file and apply section.key=value overrides."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise DataError(f"config file not found: {path}")
    cfg = PipelineConfig()
    types = {f.name: f.type for f in fields(PipelineConfig)}
    type_of = {"str": str, "int": int, "float": float, "bool": bool}
    for section in parser.sections():
        for key, value in parser.items(section):
            dotted = f"{section}.{key}"
            field_name = _KEY_MAP.get(dotted)
            if field_name is None:
                raise ValueError(f"unknown config key {dotted!r}")
            setattr(cfg, field_name, _convert(value, type_of[types[field_name]]))
    for dotted, value in (overrides or {}).items():
        field_name = _KEY_MAP.get(dotted)
        if field_name is None:
            raise ValueError(f"unknown config key {dotted!r}")
        setattr(cfg, field_name, _convert(value, type_of[types[field_name]]))
    return cfg
