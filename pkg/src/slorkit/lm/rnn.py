"""Small gated recurrent language model trained with backprop through time.

Single GRU layer over learned embeddings, softmax output, next-token
cross-entropy, Adam updates.  Forward/backward are plain numpy functions
over a parameter dict so gradients can be checked against finite
differences.  Everything is deterministic for a fixed seed (numpy PCG64).

Cell, per step:
    z = sigmoid(x Wz + h Uz + bz)
    r = sigmoid(x Wr + h Ur + br)
    g = tanh(x Wh + (r * h) Uh + bh)
    h' = (1 - z) * h + z * g
Output logits = h' Wo + bo with the begin-of-sentence column masked out,
so per-step distributions over predictable tokens sum to one.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sklearn.base import BaseEstimator

from ..errors import TrainingError
from ..validation import as_token_lists, check_fitted, check_token_list
from .base import LOG_PROB_FLOOR, LanguageModel
from .vocab import BOS_ID, EOS_ID, Vocabulary

_MASKED_LOGIT = -1e30

Params = Dict[str, np.ndarray]


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-x))


def init_params(vocab_size: int, emb_dim: int, hidden_dim: int, rng: np.random.Generator) -> Params:
    def mat(rows, cols):
        return rng.normal(0.0, 1.0 / np.sqrt(rows), size=(rows, cols))

    return {
        "emb": rng.normal(0.0, 0.1, size=(vocab_size, emb_dim)),
        "w_z": mat(emb_dim, hidden_dim),
        "u_z": mat(hidden_dim, hidden_dim),
        "b_z": np.zeros(hidden_dim),
        "w_r": mat(emb_dim, hidden_dim),
        "u_r": mat(hidden_dim, hidden_dim),
        "b_r": np.zeros(hidden_dim),
        "w_h": mat(emb_dim, hidden_dim),
        "u_h": mat(hidden_dim, hidden_dim),
        "b_h": np.zeros(hidden_dim),
        "w_out": mat(hidden_dim, vocab_size),
        "b_out": np.zeros(vocab_size),
    }


def _forward(params: Params, x_ids: np.ndarray):
    """Run the cell over a batch; returns per-step log-probs and caches."""
    batch, steps = x_ids.shape
    hidden = params["u_z"].shape[0]
    h = np.zeros((batch, hidden))
    log_probs = []
    caches = []
    for t in range(steps):
        ids_t = x_ids[:, t]
        x = params["emb"][ids_t]
        z = _sigmoid(x @ params["w_z"] + h @ params["u_z"] + params["b_z"])
        r = _sigmoid(x @ params["w_r"] + h @ params["u_r"] + params["b_r"])
        rh = r * h
        g = np.tanh(x @ params["w_h"] + rh @ params["u_h"] + params["b_h"])
        h_new = (1.0 - z) * h + z * g
        logits = h_new @ params["w_out"] + params["b_out"]
        logits[:, BOS_ID] = _MASKED_LOGIT
        m = logits.max(axis=1, keepdims=True)
        lse = m + np.log(np.exp(logits - m).sum(axis=1, keepdims=True))
        log_probs.append(logits - lse)
        caches.append((ids_t, x, z, r, rh, g, h))
        h = h_new
    return np.stack(log_probs, axis=1), caches


def loss_value(params: Params, x_ids: np.ndarray, y_ids: np.ndarray, mask: np.ndarray) -> float:
    """Mean next-token cross-entropy over unmasked positions."""
    log_probs, _ = _forward(params, x_ids)
    batch, steps = x_ids.shape
    picked = log_probs[np.arange(batch)[:, None], np.arange(steps)[None, :], y_ids]
    return float(-(picked * mask).sum() / mask.sum())


def loss_and_grads(
    params: Params, x_ids: np.ndarray, y_ids: np.ndarray, mask: np.ndarray
) -> Tuple[float, Params]:
    """Loss plus analytic gradients via backprop through time."""
    log_probs, caches = _forward(params, x_ids)
    batch, steps = x_ids.shape
    denom = mask.sum()
    picked = log_probs[np.arange(batch)[:, None], np.arange(steps)[None, :], y_ids]
    loss = float(-(picked * mask).sum() / denom)

    grads: Params = {k: np.zeros_like(v) for k, v in params.items()}
    dh = np.zeros((batch, params["u_z"].shape[0]))
    for t in range(steps - 1, -1, -1):
        ids_t, x, z, r, rh, g, h_prev = caches[t]
        h_new = (1.0 - z) * h_prev + z * g
        probs = np.exp(log_probs[:, t, :])
        dlogits = probs.copy()
        dlogits[np.arange(batch), y_ids[:, t]] -= 1.0
        dlogits *= (mask[:, t] / denom)[:, None]

        grads["w_out"] += h_new.T @ dlogits
        grads["b_out"] += dlogits.sum(axis=0)
        dh = dh + dlogits @ params["w_out"].T

        dg = dh * z
        dz = dh * (g - h_prev)
        dh_prev = dh * (1.0 - z)

        da_h = dg * (1.0 - g * g)
        grads["w_h"] += x.T @ da_h
        grads["u_h"] += rh.T @ da_h
        grads["b_h"] += da_h.sum(axis=0)
        drh = da_h @ params["u_h"].T
        dr = drh * h_prev
        dh_prev = dh_prev + drh * r

        da_z = dz * z * (1.0 - z)
        grads["w_z"] += x.T @ da_z
        grads["u_z"] += h_prev.T @ da_z
        grads["b_z"] += da_z.sum(axis=0)
        dh_prev = dh_prev + da_z @ params["u_z"].T

        da_r = dr * r * (1.0 - r)
        grads["w_r"] += x.T @ da_r
        grads["u_r"] += h_prev.T @ da_r
        grads["b_r"] += da_r.sum(axis=0)
        dh_prev = dh_prev + da_r @ params["u_r"].T

        dx = da_z @ params["w_z"].T + da_r @ params["w_r"].T + da_h @ params["w_h"].T
        np.add.at(grads["emb"], ids_t, dx)
        dh = dh_prev
    return loss, grads


class TinyRnnLm(LanguageModel, BaseEstimator):
    """GRU language model sized for desk-scale corpora."""

    def __init__(
        self,
        emb_dim: int = 32,
        hidden_dim: int = 64,
        learning_rate: float = 0.001,
        epochs: int = 5,
        batch_size: int = 32,
        seed: int = 0,
        patience: int = 2,
        clip_norm: float = 5.0,
        unk_min_count: int = 1,
        verbose: int = 0,
    ):
        self.emb_dim = emb_dim
        self.hidden_dim = hidden_dim
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.batch_size = batch_size
        self.seed = seed
        self.patience = patience
        self.clip_norm = clip_norm
        self.unk_min_count = unk_min_count
        self.verbose = verbose

    # -- training ------------------------------------------------------------

    def _batches(self, seqs: List[List[int]], order: np.ndarray):
        for start in range(0, len(order), self.batch_size):
            chunk = [seqs[i] for i in order[start : start + self.batch_size]]
            steps = max(len(s) + 1 for s in chunk)
            x = np.zeros((len(chunk), steps), dtype=np.int64)
            y = np.zeros((len(chunk), steps), dtype=np.int64)
            m = np.zeros((len(chunk), steps))
            for b, s in enumerate(chunk):
                n = len(s) + 1
                x[b, :n] = [BOS_ID] + s
                y[b, :n] = s + [EOS_ID]
                m[b, :n] = 1.0
            yield x, y, m

    def _corpus_loss(self, seqs: List[List[int]]) -> float:
        total, count = 0.0, 0
        order = np.arange(len(seqs))
        for x, y, m in self._batches(seqs, order):
            total += loss_value(self.params_, x, y, m) * m.sum()
            count += m.sum()
        return total / count

    def fit(self, corpus: Iterable, validation: Optional[Iterable] = None) -> "TinyRnnLm":
        if min(self.emb_dim, self.hidden_dim) < 1:
            raise ValueError("embedding and hidden dimensions must be >= 1")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")
        token_lists = [t for t in as_token_lists(corpus) if t]
        if not token_lists:
            raise TrainingError("cannot train an RNN model on an empty corpus")
        vocab = Vocabulary.from_corpus(token_lists, min_count=self.unk_min_count)
        self.vocab_ = vocab
        seqs = [vocab.encode(t) for t in token_lists]
        val_seqs = None
        if validation is not None:
            val_seqs = [vocab.encode(t) for t in as_token_lists(validation) if t]

        rng = np.random.default_rng(self.seed)
        self.params_ = init_params(len(vocab), self.emb_dim, self.hidden_dim, rng)
        adam_m = {k: np.zeros_like(v) for k, v in self.params_.items()}
        adam_v = {k: np.zeros_like(v) for k, v in self.params_.items()}
        b1, b2, eps = 0.9, 0.999, 1e-8
        step = 0

        self.train_losses_: List[float] = []
        self.val_losses_: List[float] = []
        best_val = np.inf
        best_params = None
        stale = 0
        for epoch in range(1, self.epochs + 1):
            order = rng.permutation(len(seqs))
            epoch_loss, epoch_n = 0.0, 0
            for x, y, m in self._batches(seqs, order):
                loss, grads = loss_and_grads(self.params_, x, y, m)
                if not np.isfinite(loss):
                    raise TrainingError(f"non-finite training loss at epoch {epoch}")
                if self.clip_norm:
                    norm = np.sqrt(sum(float((g * g).sum()) for g in grads.values()))
                    if norm > self.clip_norm:
                        scale = self.clip_norm / norm
                        for g in grads.values():
                            g *= scale
                step += 1
                for k, p in self.params_.items():
                    adam_m[k] = b1 * adam_m[k] + (1 - b1) * grads[k]
                    adam_v[k] = b2 * adam_v[k] + (1 - b2) * grads[k] ** 2
                    m_hat = adam_m[k] / (1 - b1**step)
                    v_hat = adam_v[k] / (1 - b2**step)
                    p -= self.learning_rate * m_hat / (np.sqrt(v_hat) + eps)
                    if not np.isfinite(p).all():
                        raise TrainingError(f"non-finite parameters at epoch {epoch}")
                epoch_loss += loss * m.sum()
                epoch_n += m.sum()
            self.train_losses_.append(epoch_loss / epoch_n)
            if val_seqs:
                val = self._corpus_loss(val_seqs)
                self.val_losses_.append(val)
                if self.verbose:
                    print(
                        f"epoch {epoch}: train_loss={self.train_losses_[-1]:.4f} "
                        f"val_loss={val:.4f}"
                    )
                if val < best_val:
                    best_val = val
                    best_params = {k: v.copy() for k, v in self.params_.items()}
                    stale = 0
                else:
                    stale += 1
                    if stale >= self.patience:
                        break  # early stopping on validation loss
            elif self.verbose:
                print(f"epoch {epoch}: train_loss={self.train_losses_[-1]:.4f}")
        if best_params is not None:
            self.params_ = best_params
        return self

    # -- scoring ---------------------------------------------------------------

    def predict_proba(self, tokens: Sequence[str]) -> np.ndarray:
        """Next-token distributions after each prefix; rows sum to one."""
        check_fitted(self, "params_", "vocab_")
        check_token_list(tokens)
        ids = self.vocab_.encode(tokens)
        x = np.array([[BOS_ID] + ids], dtype=np.int64)
        log_probs, _ = _forward(self.params_, x)
        return np.exp(log_probs[0])

    def token_log_probs(self, tokens: Sequence[str]) -> List[float]:
        check_fitted(self, "params_", "vocab_")
        check_token_list(tokens)
        ids = self.vocab_.encode(tokens)
        x = np.array([[BOS_ID] + ids], dtype=np.int64)
        log_probs, _ = _forward(self.params_, x)
        targets = ids + [EOS_ID]
        return [
            max(float(log_probs[0, t, w]), LOG_PROB_FLOOR) for t, w in enumerate(targets)
        ]
