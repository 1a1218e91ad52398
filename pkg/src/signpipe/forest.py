"""Random forest built from scratch: CART trees, Gini splits, mode voting.

Trees grow on bootstrap resamples with a random ceil(sqrt(d))-feature subset
per node; candidate thresholds are midpoints between consecutive distinct
sorted values. Prediction is the mode of per-tree votes and the probability
of a class is the fraction of trees voting for it. All randomness derives
from (seed, tree index) so parallel and serial training agree.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .io import read_blocks, write_blocks
from .rng import substream


@dataclass(frozen=True)
class ForestHyperparams:
    """Defaults are the tuned values; see SEARCH_SPACE for the full grid."""

    n_estimators: int = 200
    max_depth: int | None = 20
    min_samples_split: int = 5
    min_samples_leaf: int = 2
    bootstrap: bool = True

    def __post_init__(self):
        if self.n_estimators < 1:
            raise ValueError(f"n_estimators must be >= 1, got {self.n_estimators}")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1 or None, got {self.max_depth}")
        if self.min_samples_split < 2:
            raise ValueError(f"min_samples_split must be >= 2, got {self.min_samples_split}")
        if self.min_samples_leaf < 1:
            raise ValueError(f"min_samples_leaf must be >= 1, got {self.min_samples_leaf}")


# Enumeration order fixes grid-search tie-breaks: earliest wins.
SEARCH_SPACE: dict[str, tuple] = {
    "n_estimators": (100, 200, 300),
    "max_depth": (None, 10, 20, 30),
    "min_samples_split": (2, 5, 10),
    "min_samples_leaf": (1, 2, 4),
    "bootstrap": (True, False),
}


@dataclass
class Tree:
    """Flat node arrays; feature == -1 marks a leaf.

    Leaves record the majority class of their training samples (histogram
    argmax, lowest class index on ties) plus the sample count.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    leaf_class: np.ndarray
    leaf_count: np.ndarray

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Route all rows to leaves; returns per-row class indices."""
        node = np.zeros(len(X), dtype=np.intp)
        while True:
            feat = self.feature[node]
            alive = feat >= 0
            if not alive.any():
                return self.leaf_class[node]
            rows = np.flatnonzero(alive)
            cur = node[rows]
            go_left = X[rows, feat[rows]] <= self.threshold[cur]
            node[rows] = np.where(go_left, self.left[cur], self.right[cur])


@dataclass
class Forest:
    hyperparams: ForestHyperparams
    n_classes: int
    n_features: int
    trees: list[Tree]


def _best_split(Xn: np.ndarray, yn: np.ndarray, n_classes: int, min_leaf: int):
    """Best (column, threshold, weighted Gini) over the given feature columns.

    Ties resolve to the earliest column, then the lowest threshold. Returns
    None when no split satisfies the leaf-size constraint.
    """
    n, m = Xn.shape
    order = np.argsort(Xn, axis=0, kind="stable")
    V = np.take_along_axis(Xn, order, axis=0)
    L = yn[order]
    onehot = np.zeros((n, m, n_classes), dtype=np.int64)
    onehot[np.arange(n)[:, None], np.arange(m)[None, :], L] = 1
    left = np.cumsum(onehot, axis=0, dtype=np.int64)
    total = left[-1]
    right = total[None, :, :] - left
    nl = np.arange(1, n + 1, dtype=np.float64)[:, None]
    nr = np.float64(n) - nl
    gl = 1.0 - (left.astype(np.float64) ** 2).sum(axis=2) / nl**2
    with np.errstate(divide="ignore", invalid="ignore"):
        gr = 1.0 - (right.astype(np.float64) ** 2).sum(axis=2) / nr**2
    weighted = (nl * gl + nr * gr) / n
    cut_ok = V[1:] > V[:-1]
    cut_ok &= (nl[:-1] >= min_leaf) & (nr[:-1] >= min_leaf)
    if not cut_ok.any():
        return None
    costs = np.where(cut_ok, weighted[:-1], np.inf)
    flat = np.argmin(costs.T.ravel())  # column-major: earliest column wins ties
    col, pos = divmod(flat, n - 1)
    return int(col), float((V[pos, col] + V[pos + 1, col]) / 2.0), float(costs[pos, col])


def _grow_tree(
    X: np.ndarray, y: np.ndarray, n_classes: int, hp: ForestHyperparams, rng: np.random.Generator
) -> Tree:
    n, d = X.shape
    m = int(np.ceil(np.sqrt(d)))
    if hp.bootstrap:
        idx = rng.integers(0, n, size=n)
    else:
        idx = np.arange(n)

    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    leaf_class: list[int] = []
    leaf_count: list[int] = []

    def new_node() -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        leaf_class.append(-1)
        leaf_count.append(0)
        return len(feature) - 1

    # Preorder DFS with an explicit stack; RNG draws happen in pop order, so
    # the structure is reproducible without recursion-depth limits.
    root = new_node()
    stack: list[tuple[int, np.ndarray, int]] = [(root, idx, 0)]
    while stack:
        node, rows, depth = stack.pop()
        yn = y[rows]
        hist = np.bincount(yn, minlength=n_classes)
        splittable = (
            len(rows) >= hp.min_samples_split
            and (hp.max_depth is None or depth < hp.max_depth)
            and hist.max() < len(rows)  # not pure
        )
        split = None
        if splittable:
            feats = rng.choice(d, size=min(m, d), replace=False)
            split = _best_split(X[np.ix_(rows, feats)], yn, n_classes, hp.min_samples_leaf)
        if split is None:
            leaf_class[node] = int(np.argmax(hist))
            leaf_count[node] = len(rows)
            continue
        col, thr, _ = split
        feature[node] = int(feats[col])
        threshold[node] = thr
        go_left = X[rows, feature[node]] <= thr
        lnode, rnode = new_node(), new_node()
        left[node], right[node] = lnode, rnode
        stack.append((rnode, rows[~go_left], depth + 1))
        stack.append((lnode, rows[go_left], depth + 1))

    return Tree(
        feature=np.array(feature, dtype=np.int32),
        threshold=np.array(threshold, dtype=np.float64),
        left=np.array(left, dtype=np.int32),
        right=np.array(right, dtype=np.int32),
        leaf_class=np.array(leaf_class, dtype=np.int32),
        leaf_count=np.array(leaf_count, dtype=np.int64),
    )


def train_forest(X: np.ndarray, y: np.ndarray, hp: ForestHyperparams, seed: int) -> Forest:
    """Grow n_estimators trees; tree i draws from substream (seed, "tree", i)."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError(f"expected (N, d) features with N labels, got {X.shape} / {y.shape}")
    if len(X) < hp.min_samples_split:
        raise ValueError(f"need at least {hp.min_samples_split} samples, got {len(X)}")
    n_classes = int(y.max()) + 1
    if len(np.unique(y)) < 2:
        raise ValueError("need at least 2 distinct classes")
    trees = [
        _grow_tree(X, y, n_classes, hp, substream(seed, "tree", i))
        for i in range(hp.n_estimators)
    ]
    return Forest(hyperparams=hp, n_classes=n_classes, n_features=X.shape[1], trees=trees)


def _votes(forest: Forest, X: np.ndarray, n_trees: int | None = None) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != forest.n_features:
        raise ValueError(f"expected {forest.n_features} features, got {X.shape[1]}")
    trees = forest.trees if n_trees is None else forest.trees[:n_trees]
    counts = np.zeros((len(X), forest.n_classes), dtype=np.int64)
    rows = np.arange(len(X))
    for tree in trees:
        counts[rows, tree.predict(X)] += 1
    return counts


def majority_vote(votes: np.ndarray, n_classes: int | None = None) -> int:
    """Mode of a vote multiset; ties go to the lowest class index."""
    counts = np.bincount(np.asarray(votes, dtype=np.int64), minlength=n_classes or 0)
    return int(np.argmax(counts))


def predict_proba(forest: Forest, X: np.ndarray) -> np.ndarray:
    """(N, C) distribution: fraction of trees voting for each class."""
    counts = _votes(forest, X)
    return counts / len(forest.trees)


def predict_class(forest: Forest, X: np.ndarray) -> np.ndarray:
    """Mode over per-tree votes; ties go to the lowest class index."""
    return np.argmax(_votes(forest, X), axis=1)


def grid_search(
    X: np.ndarray,
    y: np.ndarray,
    search_space: dict[str, tuple] | None = None,
    k: int = 5,
    seed: int = 0,
) -> tuple[ForestHyperparams, list[dict]]:
    """Exhaustive k-fold CV over the hyperparameter cross-product.

    Returns the accuracy maximizer (ties to earliest enumeration order) and
    one result row per configuration. Because tree i depends only on
    (seed, i), forests over the same data that differ only in n_estimators
    share their tree prefix; the evaluation exploits that by growing the
    largest forest once per fold and scoring vote prefixes.
    """
    space = search_space or SEARCH_SPACE
    if not space:
        raise ValueError("search space must be non-empty")
    if k < 2:
        raise ValueError(f"need k >= 2 folds, got {k}")
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if len(X) < k:
        raise ValueError(f"fewer samples ({len(X)}) than folds ({k})")
    keys = list(space.keys())
    configs = [dict(zip(keys, combo)) for combo in itertools.product(*(space[k] for k in keys))]

    perm = substream(seed, "cv").permutation(len(X))
    folds = np.array_split(perm, k)
    sizes = sorted(set(cfg.get("n_estimators", ForestHyperparams().n_estimators) for cfg in configs))
    max_size = max(sizes)

    # Accuracy per (structural config, fold, forest size); structural config
    # is everything except n_estimators.
    cache: dict[tuple, dict[int, list[float]]] = {}
    for cfg in configs:
        struct = tuple((kk, vv) for kk, vv in sorted(cfg.items()) if kk != "n_estimators")
        if struct in cache:
            continue
        hp_full = ForestHyperparams(**{**cfg, "n_estimators": max_size})
        by_size: dict[int, list[float]] = {s: [] for s in sizes}
        for fold in folds:
            mask = np.ones(len(X), dtype=bool)
            mask[fold] = False
            forest = train_forest(X[mask], y[mask], hp_full, seed)
            for s in sizes:
                pred = np.argmax(_votes(forest, X[fold], n_trees=s), axis=1)
                by_size[s].append(float(np.mean(pred == y[fold])))
        cache[struct] = by_size

    rows: list[dict] = []
    best_cfg: dict | None = None
    best_acc = -1.0
    for cfg in configs:
        struct = tuple((kk, vv) for kk, vv in sorted(cfg.items()) if kk != "n_estimators")
        fold_accs = cache[struct][cfg.get("n_estimators", ForestHyperparams().n_estimators)]
        mean_acc = float(np.mean(fold_accs))
        rows.append({**cfg, "fold_accuracies": fold_accs, "mean_accuracy": mean_acc})
        if mean_acc > best_acc:
            best_acc = mean_acc
            best_cfg = cfg
    assert best_cfg is not None
    return ForestHyperparams(**best_cfg), rows


def save_forest(path, forest: Forest) -> None:
    """Versioned flat serialization; round-trips bit-exactly."""
    hp = forest.hyperparams
    meta = {
        "schema": "forest/1",
        "n_classes": forest.n_classes,
        "n_features": forest.n_features,
        "n_trees": len(forest.trees),
        "hyperparams": {
            "n_estimators": hp.n_estimators,
            "max_depth": hp.max_depth,
            "min_samples_split": hp.min_samples_split,
            "min_samples_leaf": hp.min_samples_leaf,
            "bootstrap": hp.bootstrap,
        },
    }
    offsets = np.cumsum([0] + [len(t.feature) for t in forest.trees]).astype(np.int64)
    arrays = {
        "offsets": offsets,
        "feature": np.concatenate([t.feature for t in forest.trees]),
        "threshold": np.concatenate([t.threshold for t in forest.trees]),
        "left": np.concatenate([t.left for t in forest.trees]),
        "right": np.concatenate([t.right for t in forest.trees]),
        "leaf_class": np.concatenate([t.leaf_class for t in forest.trees]),
        "leaf_count": np.concatenate([t.leaf_count for t in forest.trees]),
    }
    write_blocks(path, meta, arrays)


def load_forest(path) -> Forest:
    meta, arrays = read_blocks(path)
    if meta.get("schema") != "forest/1":
        raise ValueError(f"{path}: not a forest model file (schema {meta.get('schema')!r})")
    hp = ForestHyperparams(**meta["hyperparams"])
    offsets = arrays["offsets"]
    trees = []
    for i in range(meta["n_trees"]):
        lo, hi = offsets[i], offsets[i + 1]
        trees.append(
            Tree(
                feature=arrays["feature"][lo:hi],
                threshold=arrays["threshold"][lo:hi],
                left=arrays["left"][lo:hi],
                right=arrays["right"][lo:hi],
                leaf_class=arrays["leaf_class"][lo:hi],
                leaf_count=arrays["leaf_count"][lo:hi],
            )
        )
    return Forest(
        hyperparams=hp,
        n_classes=meta["n_classes"],
        n_features=meta["n_features"],
        trees=trees,
    )
