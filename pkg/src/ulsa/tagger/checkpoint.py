"""Single-file model checkpoints.

Layout: 8-byte magic ``ULSA-TAG``, little-endian u32 format version,
u32 header length, a JSON header (dims, labels, vocabulary, tensor table),
then every tensor's values as little-endian float64 in row-major order.
The file is self-contained: the frozen embedding matrix is stored alongside
the recurrent parameters, so tagging needs no separate embeddings file.
"""

from __future__ import annotations

import json
import os
import struct
import tempfile

import numpy as np

from ..actions import ActionTerm
from ..embeddings import EmbeddingTable, Vocab
from ..errors import CheckpointError
from .bilstm import PARAM_NAMES, BilstmConfig, TaggerModel

MAGIC = b"ULSA-TAG"
VERSION = 1


def save_checkpoint(model: TaggerModel, path) -> None:
    tensors: list[tuple[str, np.ndarray]] = [("embedding", model.embeddings.input_vectors)]
    tensors += [(name, model.params[name]) for name in PARAM_NAMES]

    header = {
        "embedding_dim": int(model.embeddings.input_vectors.shape[1]),
        "hidden": int(model.config.hidden),
        "classes": int(model.config.classes),
        "dropout": float(model.config.dropout),
        "labels": [t.value for t in model.labels],
        "vocab": list(model.embeddings.vocab.tokens),
        "tensors": [[name, list(t.shape)] for name, t in tensors],
    }
    header_bytes = json.dumps(header, separators=(",", ":"), ensure_ascii=False).encode(
        "utf-8"
    )

    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ckpt-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<II", VERSION, len(header_bytes)))
            fh.write(header_bytes)
            for _, tensor in tensors:
                fh.write(np.ascontiguousarray(tensor, dtype="<f8").tobytes())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_checkpoint(path) -> TaggerModel:
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise CheckpointError(f"{path}: not a tagger checkpoint (bad magic)")
        fixed = fh.read(8)
        if len(fixed) != 8:
            raise CheckpointError(f"{path}: truncated header")
        version, header_len = struct.unpack("<II", fixed)
        if version != VERSION:
            raise CheckpointError(
                f"{path}: checkpoint format version {version}, expected {VERSION}"
            )
        try:
            header = json.loads(fh.read(header_len).decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise CheckpointError(f"{path}: unreadable header: {exc}") from exc

        tensors: dict[str, np.ndarray] = {}
        for name, shape in header["tensors"]:
            count = int(np.prod(shape)) if shape else 1
            raw = fh.read(count * 8)
            if len(raw) != count * 8:
                raise CheckpointError(f"{path}: truncated tensor {name!r}")
            tensors[name] = np.frombuffer(raw, dtype="<f8").reshape(shape).copy()
        if fh.read(1):
            raise CheckpointError(f"{path}: trailing bytes after last tensor")

    expected = {"embedding", *PARAM_NAMES}
    if set(tensors) != expected:
        missing = expected - set(tensors)
        raise CheckpointError(f"{path}: missing tensors {sorted(missing)}")
    for name, tensor in tensors.items():
        if not np.all(np.isfinite(tensor)):
            raise CheckpointError(f"{path}: non-finite values in tensor {name!r}")

    vocab = Vocab(tokens=list(header["vocab"]), counts=[0] * len(header["vocab"]))
    embedding = tensors.pop("embedding")
    if embedding.shape != (len(vocab), header["embedding_dim"]):
        raise CheckpointError(f"{path}: embedding shape does not match header dims")
    table = EmbeddingTable(
        vocab=vocab,
        input_vectors=embedding,
        output_vectors=np.zeros_like(embedding),
    )
    config = BilstmConfig(
        hidden=header["hidden"],
        dropout=header["dropout"],
        classes=header["classes"],
        embedding_dim=header["embedding_dim"],
    )
    labels = tuple(ActionTerm(name) for name in header["labels"])
    return TaggerModel(embeddings=table, params=tensors, config=config, labels=labels)
