"""Character-trigram word tagger with an act head and a slot head.

Each word is embedded as the sum of its character-trigram embeddings,
passed through a tanh, and classified twice: one softmax over dialogue-act
tags and one over IOB slot tags. The two heads share the embedding matrix
and are trained jointly with a masked categorical crossentropy: a word
whose gold tag is O and which the model already tags O contributes nothing,
so the ubiquitous O class cannot swamp the loss. The summed loss is
minimized with Adam. Training is bit-reproducible for a fixed seed.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .iob import O_TAG, TaggedUtterance, word_trigrams

PAD = 0
UNK = 1


@dataclass
class TrainConfig:
    dim: int = 64
    lr: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    epochs: int = 12
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        for name in ("dim", "lr", "beta1", "beta2", "eps", "epochs", "batch_size"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


class DivergenceError(RuntimeError):
    """Raised when parameters go non-finite during training."""


def encode_words(words: list[str], vocab: dict[str, int], width: int) -> np.ndarray:
    """Trigram-id matrix (n_words, width), PAD-filled."""
    ids = np.full((len(words), width), PAD, dtype=np.int64)
    for i, word in enumerate(words):
        for j, tri in enumerate(word_trigrams(word)[:width]):
            ids[i, j] = vocab.get(tri, UNK)
    return ids


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _log_softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=1, keepdims=True))


class TrigramTagger(BaseEstimator):
    """Estimator over tagged utterances: ``fit`` builds the trigram vocab and
    trains both heads; ``predict`` tags word lists."""

    def __init__(self, dim=64, lr=0.01, beta1=0.9, beta2=0.999, eps=1e-8, epochs=12, batch_size=32, seed=0):
        self.dim = dim
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.epochs = epochs
        self.batch_size = batch_size
        self.seed = seed

    # -- construction -------------------------------------------------------

    def _build(self, tagged: list[TaggedUtterance], rng: np.random.Generator) -> None:
        trigrams = sorted({tri for utt in tagged for w in utt.words for tri in word_trigrams(w)})
        self.vocab_ = {tri: i + 2 for i, tri in enumerate(trigrams)}  # 0=PAD, 1=UNK
        self.act_labels_ = [O_TAG] + sorted({t for utt in tagged for t in utt.act_tags if t != O_TAG})
        self.slot_labels_ = [O_TAG] + sorted({t for utt in tagged for t in utt.slot_tags if t != O_TAG})
        # a word of length L has exactly L padded trigrams
        self.width_ = max(len(w) for utt in tagged for w in utt.words)
        scale = 0.1
        n_vocab = len(self.vocab_) + 2
        self.params_ = {
            "E": rng.normal(0.0, scale, (n_vocab, self.dim)),
            "Wa": rng.normal(0.0, scale, (self.dim, len(self.act_labels_))),
            "ba": np.zeros(len(self.act_labels_)),
            "Ws": rng.normal(0.0, scale, (self.dim, len(self.slot_labels_))),
            "bs": np.zeros(len(self.slot_labels_)),
        }
        self.params_["E"][PAD] = 0.0

    def _encode_tags(self, utt: TaggedUtterance) -> tuple[np.ndarray, np.ndarray]:
        act_index = {t: i for i, t in enumerate(self.act_labels_)}
        slot_index = {t: i for i, t in enumerate(self.slot_labels_)}
        acts = np.array([act_index.get(t, 0) for t in utt.act_tags], dtype=np.int64)
        slots = np.array([slot_index.get(t, 0) for t in utt.slot_tags], dtype=np.int64)
        return acts, slots

    # -- forward / loss ------------------------------------------------------

    def forward_ids(self, ids: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Hidden states and per-word act/slot distributions."""
        h = np.tanh(self.params_["E"][ids].sum(axis=1))
        act_probs = _softmax(h @ self.params_["Wa"] + self.params_["ba"])
        slot_probs = _softmax(h @ self.params_["Ws"] + self.params_["bs"])
        return h, act_probs, slot_probs

    def forward(self, words: list[str]) -> tuple[np.ndarray, np.ndarray]:
        """Per-word (act distribution, slot distribution) for raw words."""
        ids = encode_words(words, self.vocab_, self.width_)
        _, act_probs, slot_probs = self.forward_ids(ids)
        return act_probs, slot_probs

    def loss_and_grads(self, ids: np.ndarray, act_gold: np.ndarray, slot_gold: np.ndarray):
        """Masked summed crossentropy of both heads and its exact gradients."""
        E, Wa, ba, Ws, bs = (self.params_[k] for k in ("E", "Wa", "ba", "Ws", "bs"))
        s = E[ids].sum(axis=1)
        h = np.tanh(s)
        za = h @ Wa + ba
        zs = h @ Ws + bs

        loss = 0.0
        dh = np.zeros_like(h)
        grads = {"E": np.zeros_like(E), "Wa": np.zeros_like(Wa), "ba": np.zeros_like(ba),
                 "Ws": np.zeros_like(Ws), "bs": np.zeros_like(bs)}

        for z, gold, w_key, b_key in ((za, act_gold, "Wa", "ba"), (zs, slot_gold, "Ws", "bs")):
            logp = _log_softmax(z)
            pred = z.argmax(axis=1)
            mask = ~((gold == 0) & (pred == 0))  # index 0 is the O tag
            loss += -(logp[np.arange(len(gold)), gold] * mask).sum()
            dz = np.exp(logp)
            dz[np.arange(len(gold)), gold] -= 1.0
            dz *= mask[:, None]
            grads[w_key] = h.T @ dz
            grads[b_key] = dz.sum(axis=0)
            dh += dz @ self.params_[w_key].T

        ds = (1.0 - h * h) * dh
        np.add.at(grads["E"], ids.ravel(), np.repeat(ds, ids.shape[1], axis=0))
        grads["E"][PAD] = 0.0
        return float(loss), grads

    # -- training ------------------------------------------------------------

    def fit(self, tagged: list[TaggedUtterance], y=None):
        if not tagged:
            raise ValueError("cannot train on an empty corpus")
        rng = np.random.default_rng(self.seed)
        self._build(tagged, rng)
        encoded = [
            (encode_words(utt.words, self.vocab_, self.width_), *self._encode_tags(utt))
            for utt in tagged
            if utt.words
        ]
        moments = {k: (np.zeros_like(v), np.zeros_like(v)) for k, v in self.params_.items()}
        step = 0
        self.loss_history_ = []
        for _ in range(self.epochs):
            order = rng.permutation(len(encoded))
            epoch_loss = 0.0
            for start in range(0, len(order), self.batch_size):
                chunk = [encoded[i] for i in order[start : start + self.batch_size]]
                ids = np.concatenate([c[0] for c in chunk])
                act_gold = np.concatenate([c[1] for c in chunk])
                slot_gold = np.concatenate([c[2] for c in chunk])
                loss, grads = self.loss_and_grads(ids, act_gold, slot_gold)
                if not np.isfinite(loss):
                    raise DivergenceError(f"loss became {loss} at step {step}")
                epoch_loss += loss
                step += 1
                for key, grad in grads.items():
                    m, v = moments[key]
                    m *= self.beta1
                    m += (1 - self.beta1) * grad
                    v *= self.beta2
                    v += (1 - self.beta2) * grad * grad
                    m_hat = m / (1 - self.beta1**step)
                    v_hat = v / (1 - self.beta2**step)
                    self.params_[key] -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)
                self.params_["E"][PAD] = 0.0
            self.loss_history_.append(epoch_loss)
        return self

    # -- inference -----------------------------------------------------------

    def predict(self, words: list[str]) -> tuple[list[str], list[str]]:
        """Argmax (act tags, slot tags) for one utterance."""
        if not words:
            return [], []
        act_probs, slot_probs = self.forward(words)
        acts = [self.act_labels_[i] for i in act_probs.argmax(axis=1)]
        slots = [self.slot_labels_[i] for i in slot_probs.argmax(axis=1)]
        return acts, slots

    # -- persistence ----------------------------------------------------------

    def save(self, path) -> None:
        header = {
            "format_version": 1,
            "vocab": self.vocab_,
            "act_labels": self.act_labels_,
            "slot_labels": self.slot_labels_,
            "width": self.width_,
            "config": self.get_params(),
        }
        np.savez(path, header=np.array(json.dumps(header)), **self.params_)

    @classmethod
    def load(cls, path) -> "TrigramTagger":
        data = np.load(path, allow_pickle=False)
        header = json.loads(str(data["header"]))
        if header.get("format_version") != 1:
            raise ValueError(f"unsupported checkpoint version {header.get('format_version')}")
        tagger = cls(**header["config"])
        tagger.vocab_ = {k: int(v) for k, v in header["vocab"].items()}
        tagger.act_labels_ = list(header["act_labels"])
        tagger.slot_labels_ = list(header["slot_labels"])
        tagger.width_ = int(header["width"])
        tagger.params_ = {k: data[k] for k in ("E", "Wa", "ba", "Ws", "bs")}
        return tagger


def train(config: TrainConfig, tagged: list[TaggedUtterance]) -> TrigramTagger:
    """Functional wrapper: train a tagger under an explicit config."""
    return TrigramTagger(**asdict(config)).fit(tagged)


@dataclass
class F1Score:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int


def f1(gold: list[str], pred: list[str]) -> F1Score:
    """Micro-averaged word-level F1 over non-O tags."""
    if len(gold) != len(pred):
        raise ValueError(f"misaligned tag streams: {len(gold)} vs {len(pred)}")
    tp = fp = fn = 0
    for g, p in zip(gold, pred):
        if p != O_TAG and p == g:
            tp += 1
        if p != O_TAG and p != g:
            fp += 1
        if g != O_TAG and p != g:
            fn += 1
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    score = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return F1Score(precision, recall, score, tp, fp, fn)
