"""Gain-ratio decision tree with pessimistic-error pruning.

Splits are binary numeric tests ``x[f] <= t`` with thresholds at midpoints
between sorted distinct values.  The split maximising gain ratio wins; ties
go to the lower feature index, then the lower threshold.  A node becomes a
leaf when it is pure, smaller than the minimum split size, or has no
separating threshold at all.  When every candidate has zero information
gain but the node is still impure (classic example: an XOR-style pattern),
the first candidate (lowest feature, lowest threshold) is taken instead of
giving up, so consistent training data is always fit exactly.

Pruning replaces a subtree by a leaf when the leaf's pessimistic error
estimate (continuity-corrected upper confidence bound at confidence 0.25)
does not exceed the sum over the subtree's leaves.  Subtree raising is not
performed.

The growth and prediction routines are written as plain-Python loop kernels
and compiled with numba when it is importable; the interpreted originals
(`grow_kernel_py`, `predict_kernel_py`) remain available as the slow
reference for differential tests, and both paths make identical choices.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field, replace

import numpy as np

from .base import TrainingMatrix, check_features

#: gains at or below this are treated as zero (float noise from entropy sums)
GAIN_EPS = 1e-12


@dataclass(frozen=True)
class TreeConfig:
    """Growth and pruning knobs.

    min_node_size: nodes with fewer cases than this become leaves (the
    default 2 only stops at single-case nodes, which are pure anyway).
    """

    min_node_size: int = 2
    prune: bool = True
    confidence: float = 0.25

    def __post_init__(self) -> None:
        if self.min_node_size < 1:
            raise ValueError("min_node_size must be at least 1")
        if not 0.0 < self.confidence < 0.5:
            raise ValueError("confidence must be in (0, 0.5)")


def grow_kernel(
    X, y, idx, feature_table, min_node_size,
    node_feature, node_threshold, node_left, node_right, node_n, node_pos,
):
    """Grow a tree over the samples ``idx`` (duplicates allowed).

    ``feature_table`` row j holds the sorted candidate feature indices for
    node j; a single-row table is shared by all nodes.  The ``node_*``
    output arrays must hold at least ``2*len(idx) + 1`` entries.  Mutates
    ``idx`` (in-place partitioning) and returns the node count.
    Leaves have ``node_feature == -1``.
    """
    n_total = idx.shape[0]
    table_rows = feature_table.shape[0]
    m = feature_table.shape[1]

    values = np.empty(n_total, dtype=np.float64)
    labels = np.empty(n_total, dtype=np.int64)
    left_buf = np.empty(n_total, dtype=np.int64)
    right_buf = np.empty(n_total, dtype=np.int64)

    stack_node = np.empty(2 * n_total + 2, dtype=np.int64)
    stack_start = np.empty(2 * n_total + 2, dtype=np.int64)
    stack_end = np.empty(2 * n_total + 2, dtype=np.int64)
    stack_node[0] = 0
    stack_start[0] = 0
    stack_end[0] = n_total
    sp = 1
    node_count = 1

    while sp > 0:
        sp -= 1
        node = stack_node[sp]
        start = stack_start[sp]
        end = stack_end[sp]
        n_node = end - start

        pos = 0
        for i in range(start, end):
            pos += y[idx[i]]
        node_n[node] = n_node
        node_pos[node] = pos

        best_f = -1
        best_t = 0.0
        if 0 < pos < n_node and n_node >= min_node_size:
            p1 = pos / n_node
            p0 = 1.0 - p1
            h_parent = -(p1 * math.log2(p1) + p0 * math.log2(p0))

            best_ratio = -1.0
            found_gain = False
            first_f = -1
            first_t = 0.0
            table_row = node if table_rows > 1 else 0
            for fi in range(m):
                f = feature_table[table_row, fi]
                for i in range(n_node):
                    values[i] = X[idx[start + i], f]
                    labels[i] = y[idx[start + i]]
                order = np.argsort(values[:n_node], kind="mergesort")
                cum_pos = 0
                for i in range(n_node - 1):
                    cum_pos += labels[order[i]]
                    lo = values[order[i]]
                    hi = values[order[i + 1]]
                    if lo == hi:
                        continue
                    threshold = (lo + hi) / 2.0
                    if first_f == -1:
                        first_f = f
                        first_t = threshold
                    nl = i + 1
                    nr = n_node - nl
                    pl = cum_pos
                    pr = pos - pl
                    h_left = 0.0
                    if 0 < pl < nl:
                        q = pl / nl
                        h_left = -(q * math.log2(q) + (1.0 - q) * math.log2(1.0 - q))
                    h_right = 0.0
                    if 0 < pr < nr:
                        q = pr / nr
                        h_right = -(q * math.log2(q) + (1.0 - q) * math.log2(1.0 - q))
                    wl = nl / n_node
                    wr = nr / n_node
                    gain = h_parent - wl * h_left - wr * h_right
                    if gain > GAIN_EPS:
                        split_info = -(wl * math.log2(wl) + wr * math.log2(wr))
                        ratio = gain / split_info
                        if ratio > best_ratio:
                            best_ratio = ratio
                            best_f = f
                            best_t = threshold
                            found_gain = True
            if not found_gain and first_f != -1:
                # impure node where every split is uninformative: take the
                # first separating candidate rather than stopping short
                best_f = first_f
                best_t = first_t

        if best_f == -1:
            node_feature[node] = -1
            node_threshold[node] = 0.0
            node_left[node] = -1
            node_right[node] = -1
        else:
            nl = 0
            nr = 0
            for i in range(start, end):
                sample = idx[i]
                if X[sample, best_f] <= best_t:
                    left_buf[nl] = sample
                    nl += 1
                else:
                    right_buf[nr] = sample
                    nr += 1
            for i in range(nl):
                idx[start + i] = left_buf[i]
            for i in range(nr):
                idx[start + nl + i] = right_buf[i]

            left_id = node_count
            right_id = node_count + 1
            node_count += 2
            node_feature[node] = best_f
            node_threshold[node] = best_t
            node_left[node] = left_id
            node_right[node] = right_id
            stack_node[sp] = right_id
            stack_start[sp] = start + nl
            stack_end[sp] = end
            sp += 1
            stack_node[sp] = left_id
            stack_start[sp] = start
            stack_end[sp] = start + nl
            sp += 1

    return node_count


def predict_kernel(node_feature, node_threshold, node_left, node_right,
                   node_n, node_pos, X, out):
    """Walk each row to its leaf and emit the leaf's defective fraction."""
    for r in range(X.shape[0]):
        node = 0
        while node_feature[node] != -1:
            if X[r, node_feature[node]] <= node_threshold[node]:
                node = node_left[node]
            else:
                node = node_right[node]
        out[r] = node_pos[node] / node_n[node]


grow_kernel_py = grow_kernel
predict_kernel_py = predict_kernel
try:  # pragma: no cover - exercised indirectly by differential tests
    from numba import njit

    grow_kernel = njit(cache=True)(grow_kernel_py)
    predict_kernel = njit(cache=True)(predict_kernel_py)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def _pessimistic_errors(n: int, errors: int, z: float) -> float:
    """Continuity-corrected upper confidence bound on the error count."""
    f = min(1.0, (errors + 0.5) / n)
    bound = (
        f
        + z * z / (2.0 * n)
        + z * math.sqrt(f * (1.0 - f) / n + z * z / (4.0 * n * n))
    ) / (1.0 + z * z / n)
    return n * min(1.0, bound)


def prune_tree(node_feature, node_threshold, node_left, node_right,
               node_n, node_pos, confidence: float) -> None:
    """Collapse subtrees whose pessimistic error a single leaf can match.

    Works bottom-up in place; collapsed internal nodes become leaves and
    their descendants turn unreachable.  Iterative post-order walk, so
    arbitrarily deep trees are fine.
    """
    z = statistics.NormalDist().inv_cdf(1.0 - confidence)
    estimate = np.empty(node_feature.shape[0], dtype=np.float64)
    stack: list[tuple[int, bool]] = [(0, False)]
    while stack:
        node, children_done = stack.pop()
        n = int(node_n[node])
        leaf_errors = min(int(node_pos[node]), n - int(node_pos[node]))
        leaf_estimate = _pessimistic_errors(n, leaf_errors, z)
        if node_feature[node] == -1:
            estimate[node] = leaf_estimate
        elif not children_done:
            stack.append((node, True))
            stack.append((int(node_left[node]), False))
            stack.append((int(node_right[node]), False))
        else:
            subtree = estimate[int(node_left[node])] + estimate[int(node_right[node])]
            if leaf_estimate <= subtree:
                node_feature[node] = -1
                node_threshold[node] = 0.0
                node_left[node] = -1
                node_right[node] = -1
                estimate[node] = leaf_estimate
            else:
                estimate[node] = subtree


@dataclass
class DecisionTreeModel:
    kind = "decision_tree"

    n_features: int
    config: TreeConfig
    node_feature: np.ndarray
    node_threshold: np.ndarray
    node_left: np.ndarray
    node_right: np.ndarray
    node_n: np.ndarray
    node_pos: np.ndarray
    train_meta: dict = field(default_factory=dict)

    @property
    def node_count(self) -> int:
        return int(self.node_feature.shape[0])

    @property
    def depth(self) -> int:
        deepest = 0
        stack = [(0, 0)]
        while stack:
            node, depth = stack.pop()
            if self.node_feature[node] == -1:
                deepest = max(deepest, depth)
            else:
                stack.append((int(self.node_left[node]), depth + 1))
                stack.append((int(self.node_right[node]), depth + 1))
        return deepest

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = check_features(self.n_features, X)
        scores = np.empty(X.shape[0], dtype=np.float64)
        predict_kernel(
            self.node_feature, self.node_threshold, self.node_left,
            self.node_right, self.node_n, self.node_pos,
            np.ascontiguousarray(X), scores,
        )
        return np.column_stack([1.0 - scores, scores])

    def to_dict(self) -> dict:
        return {
            "format": 1,
            "kind": self.kind,
            "n_features": self.n_features,
            "config": {
                "min_node_size": self.config.min_node_size,
                "prune": self.config.prune,
                "confidence": self.config.confidence,
            },
            "nodes": {
                "feature": self.node_feature.tolist(),
                "threshold": self.node_threshold.tolist(),
                "left": self.node_left.tolist(),
                "right": self.node_right.tolist(),
                "n": self.node_n.tolist(),
                "pos": self.node_pos.tolist(),
            },
            "train_meta": self.train_meta,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "DecisionTreeModel":
        nodes = payload["nodes"]
        return cls(
            n_features=payload["n_features"],
            config=TreeConfig(**payload["config"]),
            node_feature=np.array(nodes["feature"], dtype=np.int64),
            node_threshold=np.array(nodes["threshold"], dtype=np.float64),
            node_left=np.array(nodes["left"], dtype=np.int64),
            node_right=np.array(nodes["right"], dtype=np.int64),
            node_n=np.array(nodes["n"], dtype=np.int64),
            node_pos=np.array(nodes["pos"], dtype=np.int64),
            train_meta=dict(payload["train_meta"]),
        )


def grow_tree_arrays(
    X: np.ndarray,
    y: np.ndarray,
    sample_idx: np.ndarray,
    feature_table: np.ndarray,
    min_node_size: int,
    kernel=None,
) -> tuple[np.ndarray, ...]:
    """Run the growth kernel and trim the node arrays to size."""
    n = sample_idx.shape[0]
    cap = 2 * n + 1
    node_feature = np.empty(cap, dtype=np.int64)
    node_threshold = np.empty(cap, dtype=np.float64)
    node_left = np.empty(cap, dtype=np.int64)
    node_right = np.empty(cap, dtype=np.int64)
    node_n = np.empty(cap, dtype=np.int64)
    node_pos = np.empty(cap, dtype=np.int64)
    run = grow_kernel if kernel is None else kernel
    count = run(
        np.ascontiguousarray(X, dtype=np.float64),
        np.ascontiguousarray(y, dtype=np.int64),
        sample_idx, feature_table, min_node_size,
        node_feature, node_threshold, node_left, node_right, node_n, node_pos,
    )
    return (
        node_feature[:count].copy(), node_threshold[:count].copy(),
        node_left[:count].copy(), node_right[:count].copy(),
        node_n[:count].copy(), node_pos[:count].copy(),
    )


def train_tree(data: TrainingMatrix, config: TreeConfig | None = None) -> DecisionTreeModel:
    """Grow (and by default prune) a tree on the full training set."""
    config = config or TreeConfig()
    feature_table = np.arange(data.n_features, dtype=np.int64)[None, :]
    arrays = grow_tree_arrays(
        data.X, data.y, np.arange(data.n_rows, dtype=np.int64),
        feature_table, config.min_node_size,
    )
    if config.prune:
        prune_tree(*arrays, confidence=config.confidence)
    return DecisionTreeModel(
        n_features=data.n_features,
        config=config,
        node_feature=arrays[0], node_threshold=arrays[1],
        node_left=arrays[2], node_right=arrays[3],
        node_n=arrays[4], node_pos=arrays[5],
        train_meta={"n_train": data.n_rows},
    )
