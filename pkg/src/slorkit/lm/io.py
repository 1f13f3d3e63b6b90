"""Versioned model files.

Unigram and Kneser-Ney models are stored as text (vocabulary counts and
raw n-gram counts); loading rebuilds the probability tables through the
same code path as fit(), so reloaded models score bit-identically.  The
RNN file keeps a text header plus a length-prefixed binary section of
little-endian float64 weights.
"""

from __future__ import annotations

import struct
from collections import Counter
from pathlib import Path
from typing import Dict, Optional

import numpy as np

from ..errors import DataError
from .kneser_ney import KneserNeyLm
from .rnn import TinyRnnLm
from .unigram import UnigramLm
from .vocab import Vocabulary

LM_FORMAT_VERSION = "v1"

_COMMENT = "#: "

_RNN_PARAM_ORDER = (
    "emb",
    "w_z",
    "u_z",
    "b_z",
    "w_r",
    "u_r",
    "b_r",
    "w_h",
    "u_h",
    "b_h",
    "w_out",
    "b_out",
)


def _vocab_lines(vocab: Vocabulary) -> list:
    lines = [f"vocab {len(vocab.counts)}"]
    for t in sorted(vocab.counts):
        lines.append(f"{t}\t{vocab.counts[t]}")
    return lines


def _parse_vocab(lines: list, pos: int):
    head = lines[pos]
    if not head.startswith("vocab "):
        raise DataError("missing vocab section in model file")
    n = int(head.split()[1])
    counts = {}
    for ln in lines[pos + 1 : pos + 1 + n]:
        tok, cnt = ln.split("\t")
        counts[tok] = int(cnt)
    return Vocabulary(counts), pos + 1 + n


def save_model(model, path, header: str = "") -> None:
    if isinstance(model, UnigramLm):
        _save_unigram(model, path, header)
    elif isinstance(model, KneserNeyLm):
        _save_kn(model, path, header)
    elif isinstance(model, TinyRnnLm):
        _save_rnn(model, path, header)
    else:
        raise ValueError(f"cannot serialize model of type {type(model).__name__}")


def load_model(path):
    """Load any model file, dispatching on its header line."""
    data = Path(path).read_bytes()
    text_end = data.find(b"\nbinary ")
    head = data if text_end < 0 else data[:text_end]
    lines = [ln for ln in head.decode("utf-8").split("\n") if not ln.startswith(_COMMENT)]
    lines = [ln for ln in lines if ln != ""]
    if not lines:
        raise DataError(f"{path}: empty model file")
    kind = lines[0].split()
    if len(kind) < 3 or kind[0] != "lm" or kind[2] != LM_FORMAT_VERSION:
        raise DataError(f"{path}: not an lm {LM_FORMAT_VERSION} model file")
    if kind[1] == "unigram":
        return _load_unigram(lines)
    if kind[1] == "kn":
        return _load_kn(lines)
    if kind[1] == "rnn":
        return _load_rnn(lines, data)
    raise DataError(f"{path}: unknown model kind {kind[1]!r}")


def _header_fields(line: str) -> Dict[str, str]:
    return dict(part.split("=", 1) for part in line.split()[3:])


# -- unigram -----------------------------------------------------------------


def _save_unigram(model: UnigramLm, path, header: str) -> None:
    lines = []
    if header:
        lines.append(_COMMENT + header)
    lines.append(f"lm unigram {LM_FORMAT_VERSION} k={model.smoothing_k!r}")
    lines.extend(_vocab_lines(model.vocab_))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _load_unigram(lines: list) -> UnigramLm:
    fields = _header_fields(lines[0])
    vocab, _ = _parse_vocab(lines, 1)
    return UnigramLm(smoothing_k=float(fields["k"]))._from_counts(vocab)


# -- kneser-ney ----------------------------------------------------------------


def _save_kn(model: KneserNeyLm, path, header: str) -> None:
    lines = []
    if header:
        lines.append(_COMMENT + header)
    lines.append(
        f"lm kn {LM_FORMAT_VERSION} order={model.order} "
        f"discount={model.discount!r} unk_min_count={model.unk_min_count}"
    )
    lines.extend(_vocab_lines(model.vocab_))
    id_to_token = model.vocab_.id_to_token
    for k in range(1, model.order + 1):
        table = model.raw_counts_[k]
        lines.append(f"ngrams {k} {len(table)}")
        rows = sorted(
            (" ".join(id_to_token[i] for i in gram), c) for gram, c in table.items()
        )
        for gram_text, c in rows:
            lines.append(f"{gram_text}\t{c}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _load_kn(lines: list) -> KneserNeyLm:
    fields = _header_fields(lines[0])
    order = int(fields["order"])
    model = KneserNeyLm(
        order=order,
        discount=float(fields["discount"]),
        unk_min_count=int(fields["unk_min_count"]),
    )
    vocab, pos = _parse_vocab(lines, 1)
    to_id = vocab.token_to_id
    raw: Dict[int, Counter] = {}
    for _ in range(order):
        head = lines[pos].split()
        if head[0] != "ngrams":
            raise DataError("missing ngrams section in kn model file")
        k, count = int(head[1]), int(head[2])
        table: Counter = Counter()
        for ln in lines[pos + 1 : pos + 1 + count]:
            gram_text, c = ln.split("\t")
            table[tuple(to_id[t] for t in gram_text.split(" "))] = int(c)
        raw[k] = table
        pos += 1 + count
    return model._from_raw_counts(vocab, raw)


# -- rnn -----------------------------------------------------------------------


def _save_rnn(model: TinyRnnLm, path, header: str) -> None:
    lines = []
    if header:
        lines.append(_COMMENT + header)
    lines.append(
        f"lm rnn {LM_FORMAT_VERSION} emb={model.emb_dim} hidden={model.hidden_dim} "
        f"lr={model.learning_rate!r} epochs={model.epochs} batch_size={model.batch_size} "
        f"seed={model.seed} patience={model.patience} unk_min_count={model.unk_min_count}"
    )
    lines.extend(_vocab_lines(model.vocab_))
    blobs = []
    for name in _RNN_PARAM_ORDER:
        arr = np.ascontiguousarray(model.params_[name], dtype="<f8")
        raw = arr.tobytes()
        blobs.append(struct.pack("<Q", len(raw)) + raw)
    body = b"".join(blobs)
    with open(path, "wb") as fh:
        fh.write(("\n".join(lines) + "\n").encode("utf-8"))
        fh.write(f"binary {len(body)}\n".encode("utf-8"))
        fh.write(body)


def _load_rnn(lines: list, data: bytes) -> TinyRnnLm:
    fields = _header_fields(lines[0])
    model = TinyRnnLm(
        emb_dim=int(fields["emb"]),
        hidden_dim=int(fields["hidden"]),
        learning_rate=float(fields["lr"]),
        epochs=int(fields["epochs"]),
        batch_size=int(fields["batch_size"]),
        seed=int(fields["seed"]),
        patience=int(fields["patience"]),
        unk_min_count=int(fields["unk_min_count"]),
    )
    vocab, _ = _parse_vocab(lines, 1)
    model.vocab_ = vocab
    marker = data.find(b"\nbinary ")
    if marker < 0:
        raise DataError("rnn model file has no binary section")
    nl = data.index(b"\n", marker + 1)
    offset = nl + 1
    vocab_size = len(vocab)
    emb, hid = model.emb_dim, model.hidden_dim
    shapes = {
        "emb": (vocab_size, emb),
        "w_z": (emb, hid),
        "u_z": (hid, hid),
        "b_z": (hid,),
        "w_r": (emb, hid),
        "u_r": (hid, hid),
        "b_r": (hid,),
        "w_h": (emb, hid),
        "u_h": (hid, hid),
        "b_h": (hid,),
        "w_out": (hid, vocab_size),
        "b_out": (vocab_size,),
    }
    params = {}
    for name in _RNN_PARAM_ORDER:
        (length,) = struct.unpack_from("<Q", data, offset)
        offset += 8
        arr = np.frombuffer(data[offset : offset + length], dtype="<f8").copy()
        offset += length
        params[name] = arr.reshape(shapes[name])
    model.params_ = params
    return model
