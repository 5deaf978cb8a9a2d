"""Skip-gram word embeddings with negative sampling, trained from scratch.

For every (center, context) pair inside the window the trainer maximizes

    log sigmoid(u_ctx . v_ctr) + sum_k log sigmoid(-u_k . v_ctr)

with ``negatives`` noise tokens drawn from the unigram^power distribution.
The reference mode is single-threaded and bit-for-bit reproducible under a
fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import CHEM_KEYWORD, KEYWORDS, NUM_KEYWORD, UNK_KEYWORD, TokenizedSentence
from .errors import EmptyCorpus, NonFiniteLoss, ParseError, ZeroVector


@dataclass
class Vocab:
    """Token inventory with training-stream counts.

    Tokens kept here occurred at least ``min_count`` times or are one of the
    ``<NUM>``/``<CHEM>``/``<UNK>`` keywords; the ``<UNK>`` count absorbs every
    dropped token so the sampling distribution matches the training stream.
    """

    tokens: list[str]
    counts: list[int]
    min_count: int = 5
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        self.index = {t: i for i, t in enumerate(self.tokens)}

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def id_of(self, token: str) -> int:
        """Token id, resolving unknown tokens to ``<UNK>``."""
        got = self.index.get(token)
        return got if got is not None else self.index[UNK_KEYWORD]

    @property
    def unk_id(self) -> int:
        return self.index[UNK_KEYWORD]


def build_vocab(corpus: list[TokenizedSentence], min_count: int = 5) -> Vocab:
    """Count normalized tokens and keep those at or above ``min_count``.

    Keywords are always present.  Ids are dense from 0, ordered by
    descending count then token string, so builds are deterministic.
    """
    counts: dict[str, int] = {}
    total = 0
    for sentence in corpus:
        for token in sentence.tokens:
            counts[token.normalized] = counts.get(token.normalized, 0) + 1
            total += 1
    if total == 0:
        raise EmptyCorpus("no tokens in corpus")

    kept = {}
    dropped = 0
    for token, count in counts.items():
        if count >= min_count or token in KEYWORDS:
            kept[token] = count
        else:
            dropped += count
    for kw in (NUM_KEYWORD, CHEM_KEYWORD, UNK_KEYWORD):
        kept.setdefault(kw, 0)
    kept[UNK_KEYWORD] += dropped

    ordered = sorted(kept, key=lambda t: (-kept[t], t))
    return Vocab(tokens=ordered, counts=[kept[t] for t in ordered], min_count=min_count)


@dataclass
class SgnsConfig:
    dim: int = 100
    negatives: int = 10
    window: int = 5
    epochs: int = 5
    initial_lr: float = 0.025
    seed: int = 0
    unigram_power: float = 0.75

    def __post_init__(self):
        if self.dim <= 0 or self.negatives < 1 or self.window < 1:
            raise ValueError("dim > 0, negatives >= 1, window >= 1 required")


@dataclass
class EmbeddingTable:
    vocab: Vocab
    input_vectors: np.ndarray
    output_vectors: np.ndarray
    epoch_losses: list[float] = field(default_factory=list)

    def vector(self, token: str) -> np.ndarray:
        return self.input_vectors[self.vocab.id_of(token)]


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def pair_loss(center_vec: np.ndarray, ctx_vec: np.ndarray, neg_vecs: np.ndarray) -> float:
    """Negative log-likelihood of one positive pair plus its negatives."""
    pos = float(np.dot(ctx_vec, center_vec))
    negs = neg_vecs @ center_vec
    return -float(np.log(_sigmoid(pos)) + np.sum(np.log(_sigmoid(-negs))))


def pair_gradients(center_vec: np.ndarray, ctx_vec: np.ndarray, neg_vecs: np.ndarray):
    """Analytic gradients of :func:`pair_loss`.

    Returns ``(loss, d_center, d_ctx, d_negs)``; the trainer applies exactly
    these, so a finite-difference check of this function validates training.
    """
    pos_score = _sigmoid(float(np.dot(ctx_vec, center_vec)))
    neg_scores = _sigmoid(neg_vecs @ center_vec)
    loss = -(np.log(pos_score) + np.sum(np.log1p(-neg_scores)))
    g_pos = pos_score - 1.0
    d_center = g_pos * ctx_vec + neg_scores @ neg_vecs
    d_ctx = g_pos * center_vec
    d_negs = neg_scores[:, None] * center_vec[None, :]
    return float(loss), d_center, d_ctx, d_negs


def _noise_cdf(vocab: Vocab, power: float) -> np.ndarray:
    weights = np.asarray(vocab.counts, dtype=np.float64) ** power
    weights[np.asarray(vocab.counts) == 0] = 0.0
    total = weights.sum()
    if total <= 0:
        raise EmptyCorpus("noise distribution has no mass")
    return np.cumsum(weights / total)


def sample_negatives(cdf: np.ndarray, rng: np.random.Generator, n: int) -> np.ndarray:
    return np.searchsorted(cdf, rng.random(n), side="right")


def train_sgns(
    corpus: list[TokenizedSentence],
    config: SgnsConfig,
    vocab: Vocab | None = None,
) -> EmbeddingTable:
    """Train input/output vectors on a normalized corpus.

    The learning rate decays linearly from ``initial_lr`` down to
    ``1e-4 * initial_lr`` over all pair updates.  Negatives that collide with
    the positive context are skipped, as is conventional.
    """
    if vocab is None:
        vocab = build_vocab(corpus)
    sentences = [
        [vocab.id_of(t.normalized) for t in s.tokens] for s in corpus if s.tokens
    ]
    if not sentences:
        raise EmptyCorpus("no sentences to train on")

    rng = np.random.Generator(np.random.PCG64(config.seed))
    size = len(vocab)
    input_vectors = (rng.random((size, config.dim)) - 0.5) / config.dim
    output_vectors = np.zeros((size, config.dim))
    cdf = _noise_cdf(vocab, config.unigram_power)

    pairs_per_epoch = 0
    for ids in sentences:
        n = len(ids)
        for i in range(n):
            lo = max(0, i - config.window)
            hi = min(n, i + config.window + 1)
            pairs_per_epoch += hi - lo - 1
    total_pairs = max(1, pairs_per_epoch * config.epochs)

    floor = 1e-4 * config.initial_lr
    seen = 0
    epoch_losses: list[float] = []
    for epoch in range(config.epochs):
        loss_sum = 0.0
        for ids in sentences:
            n = len(ids)
            for i, center in enumerate(ids):
                lo = max(0, i - config.window)
                hi = min(n, i + config.window + 1)
                for j in range(lo, hi):
                    if j == i:
                        continue
                    ctx = ids[j]
                    lr = max(config.initial_lr * (1.0 - seen / total_pairs), floor)
                    seen += 1
                    negs = sample_negatives(cdf, rng, config.negatives)
                    negs = negs[negs != ctx]
                    out_ids = np.concatenate(([ctx], negs))
                    center_vec = input_vectors[center]
                    out_vecs = output_vectors[out_ids]
                    loss, d_center, d_ctx, d_negs = pair_gradients(
                        center_vec, out_vecs[0], out_vecs[1:]
                    )
                    loss_sum += loss
                    grads = np.vstack((d_ctx[None, :], d_negs))
                    np.add.at(output_vectors, out_ids, -lr * grads)
                    input_vectors[center] -= lr * d_center
        mean_loss = loss_sum / max(1, pairs_per_epoch)
        if not np.isfinite(mean_loss):
            raise NonFiniteLoss(
                f"epoch {epoch}: mean pair loss {mean_loss}; try a lower initial_lr"
            )
        epoch_losses.append(mean_loss)

    return EmbeddingTable(
        vocab=vocab,
        input_vectors=input_vectors,
        output_vectors=output_vectors,
        epoch_losses=epoch_losses,
    )


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("cosine similarity of a zero vector is undefined")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def nearest_neighbors(
    table: EmbeddingTable, token: str, k: int
) -> list[tuple[str, float]]:
    """Top-k tokens by cosine over input vectors, query excluded, ties broken
    by ascending vocabulary id."""
    query_id = table.vocab.id_of(token)
    query = table.input_vectors[query_id]
    qn = np.linalg.norm(query)
    norms = np.linalg.norm(table.input_vectors, axis=1)
    safe = np.where(norms == 0, 1.0, norms)
    sims = (table.input_vectors @ query) / (safe * (qn if qn else 1.0))
    sims = np.where(norms == 0, -1.0, sims)
    order = sorted(
        (i for i in range(len(table.vocab)) if i != query_id),
        key=lambda i: (-sims[i], i),
    )
    return [(table.vocab.tokens[i], float(sims[i])) for i in order[:k]]


def save_embeddings(table: EmbeddingTable, path) -> None:
    """Text format: header ``|V| dim``, then one ``token v1 ... vdim`` line
    per token."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(table.vocab)} {table.input_vectors.shape[1]}\n")
        for i, token in enumerate(table.vocab.tokens):
            values = " ".join(f"{v:.8f}" for v in table.input_vectors[i])
            fh.write(f"{token} {values}\n")


def load_embeddings(path) -> EmbeddingTable:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ParseError(f"{path}: malformed header")
        try:
            size, dim = int(header[0]), int(header[1])
        except ValueError:
            raise ParseError(f"{path}: malformed header") from None
        tokens: list[str] = []
        rows = []
        for line_no, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split(" ")
            if len(parts) != dim + 1:
                raise ParseError(f"{path}:{line_no}: expected {dim + 1} fields")
            tokens.append(parts[0])
            try:
                rows.append([float(x) for x in parts[1:]])
            except ValueError:
                raise ParseError(f"{path}:{line_no}: non-numeric vector entry") from None
    if len(tokens) != size:
        raise ParseError(f"{path}: header claims {size} tokens, found {len(tokens)}")
    if UNK_KEYWORD not in tokens:
        raise ParseError(f"{path}: vocabulary lacks {UNK_KEYWORD}")
    vocab = Vocab(tokens=tokens, counts=[0] * len(tokens))
    vectors = np.asarray(rows, dtype=np.float64)
    if not np.all(np.isfinite(vectors)):
        raise ParseError(f"{path}: non-finite vector entries")
    return EmbeddingTable(
        vocab=vocab,
        input_vectors=vectors,
        output_vectors=np.zeros_like(vectors),
    )
