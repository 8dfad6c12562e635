"""Classical classifiers and the majority-voting ensemble.

Three trainers (softmax regression, one-vs-rest linear SVM, random forest),
a shared predict, majority voting with a documented tie-break, ensemble
training over reshuffled splits, and ingestion of externally produced
prediction files. All training is deterministic given its seed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .corpus import Label, make_split, parse_label
from .errors import (
    DimMismatch,
    EmptyPredictions,
    RowCountMismatch,
    SingleClass,
)

MODEL_VERSION = "model-v1"

# Canonical label order used for tie-breaking.
CLASS_ORDER = (Label.HOPE, Label.NOT_HOPE, Label.NOT_LANGUAGE)


@dataclass
class TreeNode:
    feature: int = -1  # -1 marks a leaf
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    label: int = -1  # class index at leaves

    def is_leaf(self) -> bool:
        return self.feature < 0


@dataclass
class DecisionTree:
    root: TreeNode
    max_depth: int

    def predict_one(self, x: np.ndarray) -> int:
        node = self.root
        while not node.is_leaf():
            node = node.left if x[node.feature] < node.threshold else node.right
        return node.label


@dataclass
class TrainedModel:
    kind: str  # "logreg" | "linear_svm" | "random_forest"
    classes: list[str]
    dim: int
    train_seed: int
    hyperparams: dict[str, float] = field(default_factory=dict)
    weights: np.ndarray | None = None  # classes x dim
    bias: np.ndarray | None = None
    trees: list[DecisionTree] = field(default_factory=list)


@dataclass(frozen=True)
class EnsembleConfig:
    k: int
    base_seed: int
    member_kind: str  # trainer kind or "external_predictions"
    fraction_train: float = 0.9
    tie_break: str = "MajorityClassPrior"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"ensemble size must be >= 1, got {self.k}")
        if self.k % 2 == 0:
            warnings.warn(
                f"even ensemble size {self.k}: ties will fall to the tie-break rule"
            )


def _as_matrix(X) -> np.ndarray:
    if isinstance(X, np.ndarray):
        return np.asarray(X, dtype=float)
    arrays = [v.to_array() if hasattr(v, "to_array") else np.asarray(v, float) for v in X]
    dims = {a.shape[0] for a in arrays}
    if len(dims) != 1:
        raise DimMismatch(f"inconsistent vector dimensions: {sorted(dims)}")
    return np.vstack(arrays)


def _encode_labels(y, classes=None):
    if classes is None:
        classes = sorted(set(y), key=lambda c: str(c))
    lut = {c: i for i, c in enumerate(classes)}
    return np.array([lut[v] for v in y]), [str(c) for c in classes]


def _check_training_input(X: np.ndarray, y_idx: np.ndarray, n_classes: int):
    if X.shape[0] != len(y_idx) or X.shape[0] < 2:
        raise DimMismatch(
            f"{X.shape[0]} vectors vs {len(y_idx)} labels (need >= 2 rows)"
        )
    if n_classes < 2:
        raise SingleClass("training data contains a single class")


# ---------------------------------------------------------------------------
# Softmax regression


def logreg_objective(W, b, X, y_idx, l2):
    """Mean cross-entropy plus L2 penalty on the weights (not the bias)."""
    z = X @ W.T + b
    z -= z.max(axis=1, keepdims=True)
    logp = z - np.log(np.exp(z).sum(axis=1, keepdims=True))
    nll = -logp[np.arange(len(y_idx)), y_idx].mean()
    return nll + 0.5 * l2 * float((W * W).sum())


def logreg_gradient(W, b, X, y_idx, l2):
    z = X @ W.T + b
    z -= z.max(axis=1, keepdims=True)
    p = np.exp(z)
    p /= p.sum(axis=1, keepdims=True)
    onehot = np.zeros_like(p)
    onehot[np.arange(len(y_idx)), y_idx] = 1.0
    delta = (p - onehot) / len(y_idx)
    return delta.T @ X + l2 * W, delta.sum(axis=0)


def train_logreg(X, y, lr: float = 0.1, epochs: int = 500, l2: float = 1e-4,
                 seed: int = 0, classes=None) -> TrainedModel:
    Xm = _as_matrix(X)
    y_idx, class_names = _encode_labels(y, classes)
    _check_training_input(Xm, y_idx, len(class_names))
    W = np.zeros((len(class_names), Xm.shape[1]))
    b = np.zeros(len(class_names))
    for _ in range(epochs):
        gW, gb = logreg_gradient(W, b, Xm, y_idx, l2)
        W -= lr * gW
        b -= lr * gb
    return TrainedModel(
        kind="logreg", classes=class_names, dim=Xm.shape[1], train_seed=seed,
        hyperparams={"lr": lr, "epochs": epochs, "l2": l2},
        weights=W, bias=b,
    )


# ---------------------------------------------------------------------------
# One-vs-rest linear SVM


def svm_objective(W, b, X, signs, C):
    """Per-class hinge loss (mean) times C plus 0.5*||w||^2, summed over rows.

    ``signs`` is a classes x n matrix of +-1 one-vs-rest targets.
    """
    margins = X @ W.T + b  # n x classes
    hinge = np.maximum(0.0, 1.0 - signs.T * margins)
    return float(C * hinge.mean(axis=0).sum() + 0.5 * (W * W).sum())


def svm_gradient(W, b, X, signs, C):
    margins = X @ W.T + b
    active = (signs.T * margins < 1.0).astype(float)  # subgradient choice at the kink
    coef = -(signs.T * active) / X.shape[0]
    return C * (coef.T @ X) + W, C * coef.sum(axis=0)


def train_linear_svm(X, y, lr: float = 0.01, epochs: int = 500, C: float = 1.0,
                     seed: int = 0, classes=None) -> TrainedModel:
    Xm = _as_matrix(X)
    y_idx, class_names = _encode_labels(y, classes)
    _check_training_input(Xm, y_idx, len(class_names))
    signs = np.where(
        np.arange(len(class_names))[:, None] == y_idx[None, :], 1.0, -1.0
    )
    W = np.zeros((len(class_names), Xm.shape[1]))
    b = np.zeros(len(class_names))
    for _ in range(epochs):
        gW, gb = svm_gradient(W, b, Xm, signs, C)
        W -= lr * gW
        b -= lr * gb
    return TrainedModel(
        kind="linear_svm", classes=class_names, dim=Xm.shape[1], train_seed=seed,
        hyperparams={"lr": lr, "epochs": epochs, "C": C},
        weights=W, bias=b,
    )


# ---------------------------------------------------------------------------
# Random forest


def _gini(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts / total
    return float(1.0 - (p * p).sum())


def _grow_tree(X, y_idx, n_classes, indices, depth, max_depth, n_feats, rng):
    counts = np.bincount(y_idx[indices], minlength=n_classes)
    majority = int(counts.argmax())  # argmax ties fall to the lowest class index
    if depth >= max_depth or counts.max() == counts.sum():
        return TreeNode(label=majority)

    dim = X.shape[1]
    feats = rng.permutation(dim)[:n_feats] if n_feats < dim else np.arange(dim)
    best = None  # (impurity, feature, threshold)
    for f in sorted(feats):
        values = np.unique(X[indices, f])
        if len(values) < 2:
            continue
        for threshold in (values[:-1] + values[1:]) / 2.0:
            mask = X[indices, f] < threshold
            left, right = indices[mask], indices[~mask]
            lc = np.bincount(y_idx[left], minlength=n_classes)
            rc = np.bincount(y_idx[right], minlength=n_classes)
            impurity = (len(left) * _gini(lc) + len(right) * _gini(rc)) / len(indices)
            if best is None or impurity < best[0] - 1e-12:
                best = (impurity, f, float(threshold))
    if best is None:
        return TreeNode(label=majority)
    _, f, threshold = best
    mask = X[indices, f] < threshold
    return TreeNode(
        feature=int(f),
        threshold=threshold,
        left=_grow_tree(X, y_idx, n_classes, indices[mask], depth + 1, max_depth,
                        n_feats, rng),
        right=_grow_tree(X, y_idx, n_classes, indices[~mask], depth + 1, max_depth,
                         n_feats, rng),
    )


def train_random_forest(X, y, n_trees: int = 100, max_depth: int = 16,
                        feature_frac: float | None = None, seed: int = 0,
                        classes=None, bootstrap: bool = True) -> TrainedModel:
    """Bagged Gini trees with a per-node random feature subset.

    feature_frac=None uses the sqrt(dim)/dim rule. ``bootstrap=False`` is a
    test hook that trains every tree on the full sample.
    """
    if n_trees < 1:
        raise ValueError(f"n_trees must be >= 1, got {n_trees}")
    Xm = _as_matrix(X)
    y_idx, class_names = _encode_labels(y, classes)
    if Xm.shape[0] != len(y_idx) or Xm.shape[0] < 1:
        raise DimMismatch(f"{Xm.shape[0]} vectors vs {len(y_idx)} labels")
    dim = Xm.shape[1]
    if feature_frac is None:
        n_feats = max(1, int(np.ceil(np.sqrt(dim))))
        feature_frac = n_feats / dim
    else:
        if not 0 < feature_frac <= 1:
            raise ValueError(f"feature_frac must be in (0,1], got {feature_frac}")
        n_feats = max(1, int(np.ceil(feature_frac * dim)))
    rng = np.random.default_rng(seed)
    n = Xm.shape[0]
    trees = []
    for _ in range(n_trees):
        sample = rng.integers(0, n, size=n) if bootstrap else np.arange(n)
        root = _grow_tree(Xm, y_idx, len(class_names), np.asarray(sample), 0,
                          max_depth, n_feats, rng)
        trees.append(DecisionTree(root=root, max_depth=max_depth))
    return TrainedModel(
        kind="random_forest", classes=class_names, dim=dim, train_seed=seed,
        hyperparams={"n_trees": n_trees, "max_depth": max_depth,
                     "feature_frac": feature_frac},
        trees=trees,
    )


# ---------------------------------------------------------------------------
# Prediction and voting


def predict(model: TrainedModel, x) -> tuple[str, dict[str, float]]:
    """Argmax over class scores; ties fall to the first class in model order."""
    vec = x.to_array() if hasattr(x, "to_array") else np.asarray(x, dtype=float)
    if vec.shape[0] != model.dim:
        raise DimMismatch(f"vector dim {vec.shape[0]} != model dim {model.dim}")
    if model.kind == "logreg":
        z = model.weights @ vec + model.bias
        z -= z.max()
        p = np.exp(z)
        raw = p / p.sum()
    elif model.kind == "linear_svm":
        raw = model.weights @ vec + model.bias
    elif model.kind == "random_forest":
        votes = np.bincount(
            [t.predict_one(vec) for t in model.trees], minlength=len(model.classes)
        )
        raw = votes / votes.sum()
    else:
        raise ValueError(f"unknown model kind {model.kind!r}")
    label = model.classes[int(np.argmax(raw))]
    return label, {c: float(s) for c, s in zip(model.classes, raw)}


def majority_vote(predictions, tie_break: str = "MajorityClassPrior") -> str:
    """Mode of the votes; ties resolved per tie_break.

    ClassOrder: first label in canonical order among the tied.
    MajorityClassPrior: NotHope wins any tie it takes part in (class skew
    prior); other ties fall back to canonical order.
    """
    preds = [str(p.value) if isinstance(p, Label) else str(p) for p in predictions]
    if not preds:
        raise EmptyPredictions("no votes")
    counts: dict[str, int] = {}
    for p in preds:
        counts[p] = counts.get(p, 0) + 1
    top = max(counts.values())
    tied = [p for p, c in counts.items() if c == top]
    if len(tied) == 1:
        return tied[0]
    if tie_break == "MajorityClassPrior" and Label.NOT_HOPE.value in tied:
        return Label.NOT_HOPE.value
    canonical = [c.value for c in CLASS_ORDER]
    return min(tied, key=lambda p: (canonical.index(p) if p in canonical else
                                    len(canonical), p))


_TRAINERS = {
    "logreg": train_logreg,
    "linear_svm": train_linear_svm,
    "random_forest": train_random_forest,
}


def train_ensemble(data, X, y, cfg: EnsembleConfig, **trainer_params):
    """Train cfg.k members, each on a fresh shuffled split of the data.

    ``data`` carries the row ids used for splitting; ``X``/``y`` are the
    id-aligned feature vectors and labels. Returns (models, member_records)
    where each record holds the member's split seed and validation ids.
    """
    trainer = _TRAINERS[cfg.member_kind]
    models, records = [], []
    for i in range(cfg.k):
        member_seed = cfg.base_seed + i
        plan = make_split(data, member_seed, cfg.fraction_train)
        train_ids = plan.train_ids()
        model = trainer(
            [X[j] for j in train_ids], [y[j] for j in train_ids],
            seed=member_seed, **trainer_params,
        )
        models.append(model)
        records.append({"seed": member_seed, "validation_ids": plan.validation_ids()})
    return models, records


def ensemble_predict(models, x, tie_break: str = "MajorityClassPrior") -> str:
    return majority_vote([predict(m, x)[0] for m in models], tie_break)


def save_model(model: TrainedModel, path) -> None:
    """Versioned header plus decimal-text parameter payload."""
    with open(path, "w", encoding="utf-8") as fh:
        hp = " ".join(f"{k}={v!r}" for k, v in sorted(model.hyperparams.items()))
        fh.write(
            f"# {MODEL_VERSION}\tkind={model.kind}\tdim={model.dim}\t"
            f"classes={','.join(model.classes)}\tseed={model.train_seed}\t{hp}\n"
        )
        if model.kind in ("logreg", "linear_svm"):
            for row in model.weights:
                fh.write("w " + " ".join(repr(float(v)) for v in row) + "\n")
            fh.write("b " + " ".join(repr(float(v)) for v in model.bias) + "\n")
        else:
            for tree in model.trees:
                fh.write(f"tree {tree.max_depth}\n")
                _write_nodes(fh, tree.root)

def _write_nodes(fh, node: TreeNode) -> None:
    # Pre-order; leaves first-field -1.
    if node.is_leaf():
        fh.write(f"n -1 {node.label}\n")
    else:
        fh.write(f"n {node.feature} {node.threshold!r}\n")
        _write_nodes(fh, node.left)
        _write_nodes(fh, node.right)


def _read_nodes(lines) -> TreeNode:
    parts = next(lines).split()
    if parts[1] == "-1":
        return TreeNode(label=int(parts[2]))
    node = TreeNode(feature=int(parts[1]), threshold=float(parts[2]))
    node.left = _read_nodes(lines)
    node.right = _read_nodes(lines)
    return node


def load_model(path) -> TrainedModel:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if not header.startswith(f"# {MODEL_VERSION}"):
            raise ValueError(f"unrecognized model header in {path}")
        meta = dict(part.split("=", 1) for part in header.split("\t")[1:-1])
        hp = {}
        for chunk in header.split("\t")[-1].split():
            k, v = chunk.split("=", 1)
            hp[k] = float(v)
        body = [ln.rstrip("\n") for ln in fh if ln.strip()]
    kind = meta["kind"]
    model = TrainedModel(
        kind=kind, classes=meta["classes"].split(","), dim=int(meta["dim"]),
        train_seed=int(meta["seed"]), hyperparams=hp,
    )
    if kind in ("logreg", "linear_svm"):
        rows = [np.array([float(v) for v in ln[2:].split()])
                for ln in body if ln.startswith("w ")]
        model.weights = np.vstack(rows)
        bias_line = next(ln for ln in body if ln.startswith("b "))
        model.bias = np.array([float(v) for v in bias_line[2:].split()])
    else:
        it = iter(body)
        for ln in it:
            if ln.startswith("tree "):
                depth = int(ln.split()[1])
                model.trees.append(DecisionTree(root=_read_nodes(it), max_depth=depth))
    return model


def load_external_predictions(paths, n_rows: int):
    """Read k prediction files (one label alias per line) into a k x n matrix."""
    matrix = []
    for path in paths:
        labels = []
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                labels.append(parse_label(line, line_no).value)
        if len(labels) != n_rows:
            raise RowCountMismatch(f"{path}: {len(labels)} rows, expected {n_rows}")
        matrix.append(labels)
    return matrix
