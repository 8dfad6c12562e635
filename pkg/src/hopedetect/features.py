"""Text-to-vector layer: sparse TF-IDF or dense ingested embeddings.

Tokenization is whitespace-only; normalization has already stripped
punctuation. Embedding files are one space-separated vector per line, with
optional ``#`` header lines recording the producer model and layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyCorpus,
    EmptyVocabulary,
    NonNumericValue,
    RowCountMismatch,
)

DEFAULT_EMBEDDING_DIM = 768
DEFAULT_TOKEN_LIMIT = 512


@dataclass(frozen=True)
class Vocabulary:
    index: dict[str, int]  # term -> dense index 0..V-1, lexicographic order
    doc_freq: dict[int, int]
    num_docs: int
    min_df: int

    def __len__(self):
        return len(self.index)


@dataclass(frozen=True)
class FeatureVector:
    kind: str  # "sparse" | "dense"
    dim: int
    sparse: dict[int, float] = field(default_factory=dict)
    dense: np.ndarray | None = None

    def to_array(self) -> np.ndarray:
        if self.kind == "dense":
            return self.dense
        arr = np.zeros(self.dim)
        for i, w in self.sparse.items():
            arr[i] = w
        return arr


def build_vocab(docs, min_df: int = 1) -> Vocabulary:
    if not docs:
        raise EmptyCorpus("no documents")
    if min_df < 1:
        raise ValueError(f"min_df must be >= 1, got {min_df}")
    df: dict[str, int] = {}
    for doc in docs:
        for term in set(doc.split()):
            df[term] = df.get(term, 0) + 1
    kept = sorted(t for t, c in df.items() if c >= min_df)
    if not kept:
        raise EmptyVocabulary(f"no term reaches document frequency {min_df}")
    index = {t: i for i, t in enumerate(kept)}
    return Vocabulary(
        index=index,
        doc_freq={index[t]: df[t] for t in kept},
        num_docs=len(docs),
        min_df=min_df,
    )


def tfidf_vectorize(doc: str, vocab: Vocabulary) -> FeatureVector:
    """tf * ln((1+N)/(1+df)), L2-normalized when nonzero; OOV terms ignored."""
    tf: dict[int, int] = {}
    for term in doc.split():
        i = vocab.index.get(term)
        if i is not None:
            tf[i] = tf.get(i, 0) + 1
    weights = {
        i: c * math.log((1 + vocab.num_docs) / (1 + vocab.doc_freq[i]))
        for i, c in tf.items()
    }
    norm = math.sqrt(sum(w * w for w in weights.values()))
    if norm > 0:
        weights = {i: w / norm for i, w in weights.items()}
    else:
        weights = {}
    return FeatureVector(kind="sparse", dim=len(vocab), sparse=weights)


def load_embeddings(path, expected_dim: int = DEFAULT_EMBEDDING_DIM,
                    n_rows: int | None = None) -> list[FeatureVector]:
    """One dense vector per line, aligned to dataset row order."""
    vectors: list[FeatureVector] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != expected_dim:
                raise DimensionMismatch(
                    f"expected {expected_dim} values, got {len(tokens)}", line_no
                )
            try:
                values = np.array([float(t) for t in tokens])
            except ValueError:
                bad = next(t for t in tokens if not _is_float(t))
                raise NonNumericValue(bad, line_no) from None
            vectors.append(FeatureVector(kind="dense", dim=expected_dim, dense=values))
    if n_rows is not None and len(vectors) != n_rows:
        raise RowCountMismatch(
            f"{path}: {len(vectors)} vectors for {n_rows} dataset rows"
        )
    return vectors


def save_embeddings(vectors, path, header: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(f"# {header}\n")
        for vec in vectors:
            fh.write(" ".join(f"{v:.9g}" for v in vec.to_array()) + "\n")


def validate_token_budget(text: str, limit: int = DEFAULT_TOKEN_LIMIT) -> bool:
    """True iff the whitespace token count fits the embedding producer's window."""
    if limit <= 0:
        raise ValueError(f"limit must be positive, got {limit}")
    return len(text.split()) <= limit


def _is_float(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False
