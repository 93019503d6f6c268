"""Gaussian naive Bayes for binary defect labels.

Per-class feature means and (population) variances with a small variance
floor, Laplace-smoothed class priors, and log-space scoring with
max-subtraction so extreme densities cannot overflow.  Training on a
single-class sample yields a degenerate model that predicts that class
with probability 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .base import TrainingMatrix, check_features

#: lower bound applied to per-feature variances
VARIANCE_FLOOR = 1e-9


@dataclass
class GaussianNBModel:
    kind = "naive_bayes"

    n_features: int
    log_prior: np.ndarray  # shape (2,): [defect-free, defective]
    means: np.ndarray | None  # shape (2, d); None for single-class models
    variances: np.ndarray | None
    single_class: bool
    train_meta: dict = field(default_factory=dict)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = check_features(self.n_features, X)
        n = X.shape[0]
        if self.single_class:
            out = np.zeros((n, 2), dtype=np.float64)
            out[:, int(np.argmax(self.log_prior))] = 1.0
            return out
        # log joint = log prior + sum of per-feature log densities
        log_joint = np.empty((n, 2), dtype=np.float64)
        for c in range(2):
            diff = X - self.means[c]
            log_joint[:, c] = self.log_prior[c] - 0.5 * np.sum(
                np.log(2.0 * np.pi * self.variances[c]) + diff * diff / self.variances[c],
                axis=1,
            )
        shifted = log_joint - log_joint.max(axis=1, keepdims=True)
        likel = np.exp(shifted)
        return likel / likel.sum(axis=1, keepdims=True)

    def to_dict(self) -> dict:
        return {
            "format": 1,
            "kind": self.kind,
            "n_features": self.n_features,
            "log_prior": self.log_prior.tolist(),
            "means": None if self.means is None else self.means.tolist(),
            "variances": None if self.variances is None else self.variances.tolist(),
            "single_class": self.single_class,
            "train_meta": self.train_meta,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "GaussianNBModel":
        return cls(
            n_features=payload["n_features"],
            log_prior=np.array(payload["log_prior"], dtype=np.float64),
            means=None if payload["means"] is None else np.array(payload["means"]),
            variances=None
            if payload["variances"] is None
            else np.array(payload["variances"]),
            single_class=payload["single_class"],
            train_meta=dict(payload["train_meta"]),
        )


def train_naive_bayes(data: TrainingMatrix) -> GaussianNBModel:
    """Fit class-conditional Gaussians with Laplace-smoothed priors."""
    n = data.n_rows
    counts = np.array([int(np.sum(~data.y)), int(np.sum(data.y))])
    log_prior = np.log((counts + 1.0) / (n + 2.0))
    meta = {"n_train": n, "class_counts": counts.tolist()}

    if counts.min() == 0:
        return GaussianNBModel(
            n_features=data.n_features,
            log_prior=log_prior,
            means=None,
            variances=None,
            single_class=True,
            train_meta=meta,
        )

    means = np.empty((2, data.n_features), dtype=np.float64)
    variances = np.empty((2, data.n_features), dtype=np.float64)
    for c, mask in enumerate((~data.y, data.y)):
        rows = data.X[mask]
        means[c] = rows.mean(axis=0)
        variances[c] = np.maximum(rows.var(axis=0), VARIANCE_FLOOR)
    return GaussianNBModel(
        n_features=data.n_features,
        log_prior=log_prior,
        means=means,
        variances=variances,
        single_class=False,
        train_meta=meta,
    )
