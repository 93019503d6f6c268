"""Shared learner plumbing: training matrices, prediction, serialization.

Every model exposes ``kind``, ``n_features``, ``train_meta`` and
``predict_proba(X) -> (n, 2)`` with column 0 the defect-free and column 1
the defective probability (rows sum to 1).  :func:`predict` turns scores
into labels with the fixed 0.5 threshold; the tie score 0.5 maps to
defect-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Protocol, Sequence, runtime_checkable

import numpy as np

from ..data import Case


@dataclass(frozen=True)
class TrainingMatrix:
    """Feature matrix and boolean labels of one training set."""

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        if self.X.ndim != 2 or self.y.ndim != 1:
            raise ValueError("X must be 2-D and y 1-D")
        if self.X.shape[0] != self.y.shape[0]:
            raise ValueError(f"row mismatch: {self.X.shape[0]} features vs {self.y.shape[0]} labels")
        if self.X.shape[0] == 0:
            raise ValueError("training set is empty")

    @classmethod
    def from_cases(cls, cases: Iterable[Case]) -> "TrainingMatrix":
        cases = list(cases)
        X = np.array([c.metrics.as_floats() for c in cases], dtype=np.float64)
        y = np.fromiter((c.defective for c in cases), dtype=bool, count=len(cases))
        return cls(X, y)

    @property
    def n_rows(self) -> int:
        return int(self.X.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.X.shape[1])


@runtime_checkable
class Model(Protocol):
    kind: str
    n_features: int
    train_meta: dict

    def predict_proba(self, X: np.ndarray) -> np.ndarray: ...

    def to_dict(self) -> dict: ...


def check_features(model_features: int, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model_features:
        raise ValueError(
            f"feature dimension mismatch: model expects {model_features}, "
            f"got array of shape {X.shape}"
        )
    return X


def predict(model: Model, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Score cases and threshold at 0.5.

    Returns (labels, scores): labels[i] is True (defective) exactly when
    scores[i] > 0.5, so a 0.5 tie predicts defect-free.
    """
    scores = model.predict_proba(X)[:, 1]
    return scores > 0.5, scores


def model_from_dict(payload: dict) -> Model:
    """Rebuild a serialized model; inverse of each model's ``to_dict``."""
    from .naive_bayes import GaussianNBModel
    from .forest import RandomForestModel
    from .tree import DecisionTreeModel

    if payload.get("format") != 1:
        raise ValueError(f"unsupported model format {payload.get('format')!r}")
    kind = payload.get("kind")
    for cls in (GaussianNBModel, DecisionTreeModel, RandomForestModel):
        if kind == cls.kind:
            return cls.from_dict(payload)
    raise ValueError(f"unknown model kind {kind!r}")
