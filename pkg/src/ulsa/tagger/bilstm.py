"""Bi-directional LSTM token tagger over frozen word embeddings.

Forward and backward recurrences (hidden size 32 each by default) are
concatenated and projected to the 9 tag classes; training minimizes per-token
categorical cross-entropy with padding masked out, using adaptive-moment
gradient descent and early stopping on validation loss.

Everything, including backpropagation through time, is implemented here so
the arithmetic can be verified against central finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..actions import CLASS_ORDER, ActionTerm
from ..corpus import TokenizedSentence, normalize_token
from ..dataset import AnnotatedSentence
from ..embeddings import EmbeddingTable
from ..errors import EmptyTrainingSet, NonFiniteLoss


@dataclass
class BilstmConfig:
    hidden: int = 32
    dropout: float = 0.2
    classes: int = 9
    embedding_dim: int = 100
    epochs_max: int = 100
    patience: int = 5
    batch_size: int = 32
    lr: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.hidden <= 0:
            raise ValueError("hidden must be positive")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")


@dataclass
class TaggerModel:
    embeddings: EmbeddingTable
    params: dict[str, np.ndarray]
    config: BilstmConfig
    labels: tuple[ActionTerm, ...] = CLASS_ORDER
    history: list[dict] = field(default_factory=list)

    def encode(self, surfaces: list[str]) -> np.ndarray:
        vocab = self.embeddings.vocab
        return np.array(
            [vocab.id_of(normalize_token(s)) for s in surfaces], dtype=np.int64
        )


PARAM_NAMES = ("fwd_Wx", "fwd_Wh", "fwd_b", "bwd_Wx", "bwd_Wh", "bwd_b", "out_W", "out_b")


def init_params(embedding_dim: int, hidden: int, classes: int, rng: np.random.Generator):
    """Uniform init scaled by fan-in; forget-gate biases start at 1."""
    def uniform(shape, k):
        return rng.uniform(-k, k, size=shape)

    k_rec = 1.0 / np.sqrt(hidden)
    k_out = 1.0 / np.sqrt(2 * hidden)
    params = {}
    for direction in ("fwd", "bwd"):
        params[f"{direction}_Wx"] = uniform((embedding_dim, 4 * hidden), k_rec)
        params[f"{direction}_Wh"] = uniform((hidden, 4 * hidden), k_rec)
        bias = np.zeros(4 * hidden)
        bias[hidden : 2 * hidden] = 1.0
        params[f"{direction}_b"] = bias
    params["out_W"] = uniform((2 * hidden, classes), k_out)
    params["out_b"] = np.zeros(classes)
    return params


def _sigmoid(x):
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _direction_forward(X, mask, Wx, Wh, b, reverse: bool):
    B, T, _ = X.shape
    H = Wh.shape[0]
    pre = X @ Wx + b
    h = np.zeros((B, H))
    c = np.zeros((B, H))
    outputs = np.zeros((B, T, H))
    cache = {
        name: np.zeros((B, T, H))
        for name in ("i", "f", "o", "g", "tanh_c", "c_prev", "h_prev")
    }
    steps = range(T - 1, -1, -1) if reverse else range(T)
    for t in steps:
        z = pre[:, t] + h @ Wh
        gi = _sigmoid(z[:, :H])
        gf = _sigmoid(z[:, H : 2 * H])
        go = _sigmoid(z[:, 2 * H : 3 * H])
        gg = np.tanh(z[:, 3 * H :])
        c_new = gf * c + gi * gg
        tanh_c = np.tanh(c_new)
        h_new = go * tanh_c
        m = mask[:, t][:, None]
        cache["i"][:, t] = gi
        cache["f"][:, t] = gf
        cache["o"][:, t] = go
        cache["g"][:, t] = gg
        cache["tanh_c"][:, t] = tanh_c
        cache["c_prev"][:, t] = c
        cache["h_prev"][:, t] = h
        h = m * h_new + (1.0 - m) * h
        c = m * c_new + (1.0 - m) * c
        outputs[:, t] = h
    cache["steps"] = steps
    return outputs, cache


def _direction_backward(dOut, X, mask, Wx, Wh, cache):
    B, T, H = dOut.shape
    dz_all = np.zeros((B, T, 4 * H))
    dh_next = np.zeros((B, H))
    dc_next = np.zeros((B, H))
    for t in reversed(list(cache["steps"])):
        m = mask[:, t][:, None]
        gi = cache["i"][:, t]
        gf = cache["f"][:, t]
        go = cache["o"][:, t]
        gg = cache["g"][:, t]
        tanh_c = cache["tanh_c"][:, t]
        c_prev = cache["c_prev"][:, t]

        dh_total = dOut[:, t] + dh_next
        dh_new = m * dh_total
        dh_skip = (1.0 - m) * dh_total
        dc_new = m * dc_next
        dc_skip = (1.0 - m) * dc_next

        do = dh_new * tanh_c
        dc_new = dc_new + dh_new * go * (1.0 - tanh_c**2)
        df = dc_new * c_prev
        di = dc_new * gg
        dg = dc_new * gi
        dc_prev = dc_new * gf + dc_skip

        dz = np.concatenate(
            (
                di * gi * (1.0 - gi),
                df * gf * (1.0 - gf),
                do * go * (1.0 - go),
                dg * (1.0 - gg**2),
            ),
            axis=1,
        )
        dz_all[:, t] = dz
        dh_next = dh_skip + dz @ Wh.T
        dc_next = dc_prev

    dz_flat = dz_all.reshape(B * T, 4 * H)
    grads = {
        "Wx": X.reshape(B * T, -1).T @ dz_flat,
        "Wh": cache["h_prev"].reshape(B * T, H).T @ dz_flat,
        "b": dz_flat.sum(axis=0),
    }
    return grads


def _softmax(logits):
    shifted = logits - logits.max(axis=-1, keepdims=True)
    ex = np.exp(shifted)
    return ex / ex.sum(axis=-1, keepdims=True)


def batch_forward(params, X, mask, dropout: float = 0.0, rng=None):
    """Probabilities (B, T, classes) plus the cache needed for backprop."""
    if dropout > 0.0:
        keep = 1.0 - dropout
        drop_in = (rng.random(X.shape) < keep) / keep
        X = X * drop_in
    else:
        drop_in = None
    h_fwd, cache_fwd = _direction_forward(
        X, mask, params["fwd_Wx"], params["fwd_Wh"], params["fwd_b"], reverse=False
    )
    h_bwd, cache_bwd = _direction_forward(
        X, mask, params["bwd_Wx"], params["bwd_Wh"], params["bwd_b"], reverse=True
    )
    concat = np.concatenate((h_fwd, h_bwd), axis=2)
    if dropout > 0.0:
        keep = 1.0 - dropout
        drop_cat = (rng.random(concat.shape) < keep) / keep
        concat = concat * drop_cat
    else:
        drop_cat = None
    logits = concat @ params["out_W"] + params["out_b"]
    probs = _softmax(logits)
    cache = {
        "X": X,
        "mask": mask,
        "concat": concat,
        "probs": probs,
        "fwd": cache_fwd,
        "bwd": cache_bwd,
        "drop_cat": drop_cat,
    }
    return probs, cache


def batch_loss_and_grads(params, X, mask, labels, dropout: float = 0.0, rng=None):
    """Mean masked cross-entropy and gradients for every parameter tensor."""
    probs, cache = batch_forward(params, X, mask, dropout, rng)
    B, T, C = probs.shape
    n_valid = float(mask.sum())
    if n_valid == 0:
        raise ValueError("batch contains no unmasked tokens")
    token_ll = np.log(
        np.clip(probs[np.arange(B)[:, None], np.arange(T)[None, :], labels], 1e-300, None)
    )
    loss = -float((token_ll * mask).sum()) / n_valid

    dlogits = probs.copy()
    dlogits[np.arange(B)[:, None], np.arange(T)[None, :], labels] -= 1.0
    dlogits *= mask[:, :, None] / n_valid

    concat = cache["concat"]
    H = params["fwd_Wh"].shape[0]
    dlogits_flat = dlogits.reshape(B * T, C)
    grads = {
        "out_W": concat.reshape(B * T, 2 * H).T @ dlogits_flat,
        "out_b": dlogits_flat.sum(axis=0),
    }
    dconcat = dlogits @ params["out_W"].T
    if cache["drop_cat"] is not None:
        dconcat = dconcat * cache["drop_cat"]
    d_fwd = _direction_backward(
        dconcat[:, :, :H], cache["X"], mask, params["fwd_Wx"], params["fwd_Wh"], cache["fwd"]
    )
    d_bwd = _direction_backward(
        dconcat[:, :, H:], cache["X"], mask, params["bwd_Wx"], params["bwd_Wh"], cache["bwd"]
    )
    for key, grad in d_fwd.items():
        grads[f"fwd_{key}"] = grad
    for key, grad in d_bwd.items():
        grads[f"bwd_{key}"] = grad
    return loss, grads


class _Adam:
    def __init__(self, params, lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = lr
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}
        self.t = 0

    def step(self, params, grads):
        self.t += 1
        b1t = 1.0 - self.beta1**self.t
        b2t = 1.0 - self.beta2**self.t
        for key, grad in grads.items():
            self.m[key] = self.beta1 * self.m[key] + (1.0 - self.beta1) * grad
            self.v[key] = self.beta2 * self.v[key] + (1.0 - self.beta2) * grad**2
            m_hat = self.m[key] / b1t
            v_hat = self.v[key] / b2t
            params[key] -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def encode_sentence(s: AnnotatedSentence, table: EmbeddingTable):
    vocab = table.vocab
    ids = np.array(
        [vocab.id_of(normalize_token(a.token)) for a in s.annotations], dtype=np.int64
    )
    labels = np.array([CLASS_ORDER.index(a.tag) for a in s.annotations], dtype=np.int64)
    return ids, labels


def _make_batch(encoded, table: EmbeddingTable):
    lengths = [len(ids) for ids, _ in encoded]
    B, T = len(encoded), max(lengths)
    X = np.zeros((B, T, table.input_vectors.shape[1]))
    mask = np.zeros((B, T))
    labels = np.zeros((B, T), dtype=np.int64)
    for row, (ids, labs) in enumerate(encoded):
        n = len(ids)
        X[row, :n] = table.input_vectors[ids]
        mask[row, :n] = 1.0
        labels[row, :n] = labs
    return X, mask, labels


def dataset_loss(params, encoded, table, batch_size=64) -> float:
    """Mean per-token cross-entropy over a dataset, dropout disabled."""
    total, count = 0.0, 0.0
    for start in range(0, len(encoded), batch_size):
        X, mask, labels = _make_batch(encoded[start : start + batch_size], table)
        loss, _ = batch_loss_and_grads(params, X, mask, labels)
        n = mask.sum()
        total += loss * n
        count += n
    return total / count


def train_bilstm(
    train: list[AnnotatedSentence],
    validation: list[AnnotatedSentence],
    embeddings: EmbeddingTable,
    config: BilstmConfig,
) -> TaggerModel:
    """Train with early stopping; returns the best-validation checkpoint.

    Training stops once validation loss has not improved for ``patience``
    consecutive epochs.  Deterministic under ``config.seed``.
    """
    if not train:
        raise EmptyTrainingSet("training set is empty")
    dim = embeddings.input_vectors.shape[1]
    if dim != config.embedding_dim:
        config = BilstmConfig(**{**config.__dict__, "embedding_dim": dim})

    rng = np.random.Generator(np.random.PCG64(config.seed))
    params = init_params(dim, config.hidden, config.classes, rng)
    optimizer = _Adam(params, lr=config.lr)

    encoded_train = [encode_sentence(s, embeddings) for s in train]
    encoded_val = [encode_sentence(s, embeddings) for s in validation]

    best_params = {k: v.copy() for k, v in params.items()}
    best_val = np.inf
    bad_epochs = 0
    history: list[dict] = []

    for epoch in range(config.epochs_max):
        order = rng.permutation(len(encoded_train))
        epoch_loss, epoch_tokens = 0.0, 0.0
        for start in range(0, len(order), config.batch_size):
            batch = [encoded_train[i] for i in order[start : start + config.batch_size]]
            X, mask, labels = _make_batch(batch, embeddings)
            loss, grads = batch_loss_and_grads(
                params, X, mask, labels, dropout=config.dropout, rng=rng
            )
            if not np.isfinite(loss):
                raise NonFiniteLoss(f"epoch {epoch}: batch loss {loss}")
            optimizer.step(params, grads)
            n = mask.sum()
            epoch_loss += loss * n
            epoch_tokens += n
        train_loss = epoch_loss / max(epoch_tokens, 1.0)

        if encoded_val:
            val_loss = dataset_loss(params, encoded_val, embeddings)
            if not np.isfinite(val_loss):
                raise NonFiniteLoss(f"epoch {epoch}: validation loss {val_loss}")
        else:
            val_loss = train_loss
        history.append({"epoch": epoch, "train_loss": train_loss, "val_loss": val_loss})

        if val_loss < best_val:
            best_val = val_loss
            best_params = {k: v.copy() for k, v in params.items()}
            bad_epochs = 0
        else:
            bad_epochs += 1
            if bad_epochs >= config.patience:
                break

    return TaggerModel(
        embeddings=embeddings,
        params=best_params,
        config=config,
        history=history,
    )


def sentence_scores(model: TaggerModel, surfaces: list[str]) -> np.ndarray:
    """Per-token class probabilities for one sentence (dropout disabled)."""
    ids = model.encode(surfaces)
    X = model.embeddings.input_vectors[ids][None, :, :]
    mask = np.ones((1, len(surfaces)))
    probs, _ = batch_forward(model.params, X, mask)
    return probs[0]


def predict(model: TaggerModel, sentence: TokenizedSentence | list[str]) -> list[ActionTerm]:
    """Per-token argmax tags; output length equals token count."""
    surfaces = (
        [t.surface for t in sentence.tokens]
        if isinstance(sentence, TokenizedSentence)
        else list(sentence)
    )
    if not surfaces:
        return []
    probs = sentence_scores(model, surfaces)
    return [model.labels[int(i)] for i in probs.argmax(axis=1)]


def gradient_check(
    seed: int = 0,
    hidden: int = 4,
    dim: int = 6,
    vocab_size: int = 8,
    classes: int = 9,
    lengths: tuple[int, ...] = (3, 5),
    h: float = 1e-5,
    zero_inputs: bool = False,
) -> float:
    """Max relative error between analytic gradients and central finite
    differences over every parameter tensor, on a toy batch."""
    rng = np.random.Generator(np.random.PCG64(seed))
    vectors = rng.normal(scale=0.5, size=(vocab_size, dim))
    if zero_inputs:
        vectors[:] = 0.0
    params = init_params(dim, hidden, classes, rng)
    for key in ("fwd_Wx", "fwd_Wh", "bwd_Wx", "bwd_Wh", "out_W"):
        params[key] = rng.normal(scale=0.4, size=params[key].shape)

    B, T = len(lengths), max(lengths)
    X = np.zeros((B, T, dim))
    mask = np.zeros((B, T))
    labels = np.zeros((B, T), dtype=np.int64)
    for row, n in enumerate(lengths):
        ids = rng.integers(0, vocab_size, size=n)
        X[row, :n] = vectors[ids]
        mask[row, :n] = 1.0
        labels[row, :n] = rng.integers(0, classes, size=n)

    _, analytic = batch_loss_and_grads(params, X, mask, labels)

    def loss_at(p):
        loss, _ = batch_loss_and_grads(p, X, mask, labels)
        return loss

    worst = 0.0
    for name in PARAM_NAMES:
        tensor = params[name]
        grad = analytic[name]
        it = np.nditer(tensor, flags=["multi_index"])
        while not it.finished:
            idx = it.multi_index
            original = tensor[idx]
            tensor[idx] = original + h
            hi = loss_at(params)
            tensor[idx] = original - h
            lo = loss_at(params)
            tensor[idx] = original
            numeric = (hi - lo) / (2 * h)
            denom = max(abs(grad[idx]) + abs(numeric), 1e-8)
            worst = max(worst, abs(grad[idx] - numeric) / denom)
            it.iternext()
    return worst
