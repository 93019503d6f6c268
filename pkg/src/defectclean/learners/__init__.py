"""Defect prediction learners: naive Bayes, decision tree, random forest."""

from .base import Model, TrainingMatrix, model_from_dict, predict
from .forest import ForestConfig, RandomForestModel, default_feature_count, train_forest
from .naive_bayes import GaussianNBModel, train_naive_bayes
from .tree import DecisionTreeModel, TreeConfig, train_tree

#: learner names accepted by the experiment harness and CLI
LEARNER_NAMES = ("naive_bayes", "decision_tree", "random_forest")


def train(
    name: str,
    data: TrainingMatrix,
    seed: int = 0,
    tree_config: TreeConfig | None = None,
    forest_config: ForestConfig | None = None,
) -> Model:
    """Train one learner by name (only the forest consumes the seed)."""
    if name == "naive_bayes":
        return train_naive_bayes(data)
    if name == "decision_tree":
        return train_tree(data, tree_config)
    if name == "random_forest":
        return train_forest(data, forest_config, seed=seed)
    raise ValueError(f"unknown learner {name!r}; expected one of {LEARNER_NAMES}")


__all__ = [
    "Model",
    "TrainingMatrix",
    "GaussianNBModel",
    "DecisionTreeModel",
    "RandomForestModel",
    "TreeConfig",
    "ForestConfig",
    "LEARNER_NAMES",
    "train",
    "train_naive_bayes",
    "train_tree",
    "train_forest",
    "default_feature_count",
    "predict",
    "model_from_dict",
]
