"""Training-data selection for cross-project defect prediction.

A source pool is the set of candidate training cases for one target
dataset.  In strict mode the pool contains every case of every dataset
whose *project* differs from the target's project, so no variant of the
target system can leak into training.  Mixed mode relaxes this to also
admit releases of the target project whose name sorts before the target
(i.e. its history), excluding the target itself and anything newer.

Three filters pick training cases from the pool:

* global: the whole pool.
* nearest-neighbour: for each target case, its k nearest pool cases by
  Euclidean distance; the union is the training set.
* clustering-based: pool and target cases are clustered together with
  k-means; clusters without target cases are discarded, remaining pool
  cases are attached to their nearest in-cluster target case, and each
  target case contributes its nearest attached pool case.

Distances are computed on min-max scaled features by default (scaling
parameters from pool plus target combined); ``normalize=False`` uses raw
feature values.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np

from .clustering import default_k, kmeans
from .data import Case, Corpus, Dataset

logger = logging.getLogger(__name__)

#: chunk rows when forming (targets x pool) distance blocks, to bound memory
_CHUNK = 256


@dataclass(frozen=True)
class PoolEntry:
    """One pool case with its provenance."""

    case: Case
    origin: str
    origin_row: int


@dataclass(frozen=True)
class SourcePool:
    """Candidate training cases for one target dataset."""

    entries: tuple[PoolEntry, ...]
    target: str
    excluded_project: str
    mode: str

    @cached_property
    def feature_matrix(self) -> np.ndarray:
        out = np.empty((len(self.entries), 20), dtype=np.float64)
        for i, entry in enumerate(self.entries):
            out[i] = entry.case.metrics.as_floats()
        out.flags.writeable = False
        return out

    @cached_property
    def labels(self) -> np.ndarray:
        out = np.fromiter(
            (e.case.defective for e in self.entries), dtype=bool, count=len(self.entries)
        )
        out.flags.writeable = False
        return out

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class TrainingSelection:
    """Sorted pool indices chosen by one filter."""

    filter_name: str
    selected: tuple[int, ...]
    parameters: Mapping[str, object] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.selected)


def build_pool(corpus: Corpus, target: Dataset, mode: str = "strict") -> SourcePool:
    """Assemble the source pool for a target dataset.

    strict: exclude every release of the target's project.
    mixed: exclude only the target itself and same-project releases whose
    name does not sort before the target's.
    """
    if mode not in ("strict", "mixed"):
        raise ValueError(f"unknown pool mode {mode!r}")
    entries: list[PoolEntry] = []
    for ds in corpus:
        if ds.project == target.project:
            if mode == "strict":
                continue
            if ds.name >= target.name:
                continue
        for row, case in enumerate(ds.cases):
            entries.append(PoolEntry(case, ds.name, row))
    if not entries:
        raise ValueError(
            f"empty source pool for target {target.name!r} (mode={mode}); "
            f"the corpus has no other project"
        )
    return SourcePool(tuple(entries), target.name, target.project, mode)


def _minmax_scale_pair(pool: np.ndarray, target: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Scale both matrices into [0, 1] per feature, bounds taken over both.

    Constant features map to 0 everywhere, so they never contribute to
    distances."""
    combined_min = np.minimum(pool.min(axis=0), target.min(axis=0))
    combined_max = np.maximum(pool.max(axis=0), target.max(axis=0))
    span = combined_max - combined_min
    safe = np.where(span > 0.0, span, 1.0)
    return (pool - combined_min) / safe, (target - combined_min) / safe


def _spaces(pool: SourcePool, target: Dataset, normalize: bool) -> tuple[np.ndarray, np.ndarray]:
    if normalize:
        return _minmax_scale_pair(pool.feature_matrix, target.feature_matrix)
    return pool.feature_matrix, target.feature_matrix


def _sq_distances(block: np.ndarray, points: np.ndarray) -> np.ndarray:
    d2 = (
        np.einsum("ij,ij->i", block, block)[:, None]
        + np.einsum("ij,ij->i", points, points)[None, :]
        - 2.0 * block @ points.T
    )
    np.maximum(d2, 0.0, out=d2)
    return d2


def global_filter(pool: SourcePool) -> TrainingSelection:
    """Use the entire pool as training data."""
    return TrainingSelection("global", tuple(range(len(pool))))


def burak_filter(
    pool: SourcePool, target: Dataset, k: int = 10, normalize: bool = True
) -> TrainingSelection:
    """Union of each target case's k nearest pool cases.

    Distance ties are broken towards the lower pool index, so the result is
    deterministic.  When the pool holds fewer than k cases the whole pool is
    selected (with a warning).
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    n_pool = len(pool)
    if k >= n_pool:
        if k > n_pool:
            logger.warning(
                "pool for %s has only %d cases; k=%d selects all of them",
                target.name, n_pool, k,
            )
        return TrainingSelection(
            "burak", tuple(range(n_pool)), {"k": k, "normalize": normalize}
        )

    pool_space, target_space = _spaces(pool, target, normalize)
    chosen = np.zeros(n_pool, dtype=bool)
    for start in range(0, target_space.shape[0], _CHUNK):
        block = target_space[start:start + _CHUNK]
        d2 = _sq_distances(block, pool_space)
        # exact k-nearest with ties to the lower pool index: everything
        # strictly below the k-th smallest value, then the lowest-index
        # cases at the k-th value until k are taken
        kth = np.partition(d2, k - 1, axis=1)[:, k - 1:k]
        below = d2 < kth
        need = k - below.sum(axis=1, keepdims=True)
        at_kth = d2 == kth
        take_at_kth = at_kth & (np.cumsum(at_kth, axis=1, dtype=np.int64) <= need)
        chosen |= (below | take_at_kth).any(axis=0)
    return TrainingSelection(
        "burak",
        tuple(np.flatnonzero(chosen).tolist()),
        {"k": k, "normalize": normalize},
    )


def peters_filter(
    pool: SourcePool,
    target: Dataset,
    k_clusters: int | None = None,
    seed: int = 0,
    normalize: bool = True,
    fallback_k: int = 10,
) -> TrainingSelection:
    """Cluster pool and target together, then pick one pool case per target
    case from its own cluster.

    Clusters containing no target case are discarded.  Within a retained
    cluster every pool case is attached to its nearest target case; each
    target case then contributes its nearest attached pool case (if any).
    If no retained cluster contains pool cases the filter falls back to the
    nearest-neighbour filter.  The selection size is therefore at most the
    number of target cases.
    """
    pool_space, target_space = _spaces(pool, target, normalize)
    n_pool = pool_space.shape[0]
    n_target = target_space.shape[0]
    points = np.vstack([pool_space, target_space])
    k = default_k(points.shape[0]) if k_clusters is None else k_clusters

    clustering = kmeans(points, k, seed)
    pool_clusters = clustering.assignments[:n_pool]
    target_clusters = clustering.assignments[n_pool:]

    retained = np.unique(target_clusters)
    chosen: set[int] = set()
    any_pool_case = False
    for cid in retained:
        pool_members = np.flatnonzero(pool_clusters == cid)
        if pool_members.size == 0:
            continue
        any_pool_case = True
        target_members = np.flatnonzero(target_clusters == cid)
        # attach each pool case to its nearest target case (ties: lower
        # target index); then give each target case its nearest attached
        # pool case (ties: lower pool index, hence the strict <)
        best_d = np.full(target_members.size, np.inf)
        best_pool = np.full(target_members.size, -1, dtype=np.int64)
        for start in range(0, pool_members.size, _CHUNK):
            rows = pool_members[start:start + _CHUNK]
            d2 = _sq_distances(pool_space[rows], target_space[target_members])
            attached_to = d2.argmin(axis=1)
            row_min = d2[np.arange(rows.size), attached_to]
            for r in range(rows.size):
                t = attached_to[r]
                if row_min[r] < best_d[t]:
                    best_d[t] = row_min[r]
                    best_pool[t] = rows[r]
        chosen.update(int(p) for p in best_pool if p >= 0)

    params: dict[str, object] = {
        "k_clusters": int(k), "seed": seed, "normalize": normalize, "fallback": False,
    }
    if not any_pool_case:
        logger.warning(
            "no retained cluster for %s contains pool cases; "
            "falling back to the nearest-neighbour filter", target.name,
        )
        fallback = burak_filter(pool, target, k=fallback_k, normalize=normalize)
        params.update({"fallback": True, "k": fallback_k})
        return TrainingSelection("peters", fallback.selected, params)

    return TrainingSelection("peters", tuple(sorted(chosen)), params)


FILTERS = ("global", "burak", "peters")


def select_training_data(
    filter_name: str,
    pool: SourcePool,
    target: Dataset,
    k: int = 10,
    k_clusters: int | None = None,
    seed: int = 0,
    normalize: bool = True,
) -> TrainingSelection:
    """Dispatch one of the three filters by name."""
    if filter_name == "global":
        return global_filter(pool)
    if filter_name == "burak":
        return burak_filter(pool, target, k=k, normalize=normalize)
    if filter_name == "peters":
        return peters_filter(
            pool, target, k_clusters=k_clusters, seed=seed, normalize=normalize,
            fallback_k=k,
        )
    raise ValueError(f"unknown filter {filter_name!r}; expected one of {FILTERS}")
