"""Experiment orchestration: original vs cleaned corpus across filters,
learners and metrics.

One experiment evaluates every requested target dataset twice, once against
the original corpus and once against the corpus with identical and
inconsistent cases removed.  For each variant the harness builds the target's
source pool from that same variant, applies each training-data filter,
trains each learner on the filtered cases, predicts the target and scores
F-measure and AUC.  The paired scores become change rates.

Determinism: every randomized step (clustering inits, forest bootstraps,
subsampling) derives its seed from the run seed plus the combination's
identifying strings, so results do not depend on evaluation order or worker
count.  Re-running a config yields byte-identical reports.

Config files are plain ``key = value`` text (see :data:`CONFIG_KEYS`);
lists are comma-separated, ``#`` starts a comment.
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .cleaning import clean_corpus
from .data import Corpus, Dataset, load_corpus
from .evaluation import ChangeRate, ConfusionMatrix, auc, change_rate, f_measure
from .learners import ForestConfig, TrainingMatrix, predict, train
from .rng import derive_seed
from .selection import build_pool, select_training_data

logger = logging.getLogger(__name__)

METRICS = ("fmeasure", "auc")
VARIANTS = ("original", "cleaned")

#: environment variable consulted for the worker count (the only env knob)
WORKERS_ENV = "DEFECTCLEAN_WORKERS"

#: accepted config-file keys and their parsed types
CONFIG_KEYS = {
    "corpus": "path to the corpus directory",
    "targets": '"all" or comma-separated dataset names',
    "filters": "subset of global,burak,peters",
    "learners": "subset of naive_bayes,decision_tree,random_forest",
    "seed": "integer run seed",
    "burak_k": "neighbours per target case (default 10)",
    "peters_clusters": '"auto" or a cluster count',
    "normalize": "true/false: min-max scale features for distances",
    "pool_mode": "strict or mixed",
    "sample_cap": '"none" or per-dataset case cap (seeded stratified subsample)',
    "clean_pool_only": "true/false: evaluate cleaned runs on the original target",
    "forest_trees": "trees per random forest (default 100)",
}


@dataclass(frozen=True)
class ExperimentConfig:
    corpus_dir: Path | None
    targets: tuple[str, ...] | str = "all"
    filters: tuple[str, ...] = ("global", "burak", "peters")
    learners: tuple[str, ...] = ("naive_bayes", "decision_tree", "random_forest")
    seed: int = 0
    burak_k: int = 10
    peters_clusters: int | None = None
    normalize: bool = True
    pool_mode: str = "strict"
    sample_cap: int | None = None
    clean_pool_only: bool = False
    forest_trees: int = 100

    def __post_init__(self) -> None:
        if self.pool_mode not in ("strict", "mixed"):
            raise ValueError(f"pool_mode must be strict or mixed, got {self.pool_mode!r}")
        if self.sample_cap is not None and self.sample_cap < 2:
            raise ValueError("sample_cap must be at least 2")
        if self.burak_k < 1:
            raise ValueError("burak_k must be at least 1")
        if self.forest_trees < 1:
            raise ValueError("forest_trees must be at least 1")

    def as_dict(self) -> dict:
        return {
            "corpus": None if self.corpus_dir is None else str(self.corpus_dir),
            "targets": list(self.targets) if isinstance(self.targets, tuple) else self.targets,
            "filters": list(self.filters),
            "learners": list(self.learners),
            "seed": self.seed,
            "burak_k": self.burak_k,
            "peters_clusters": self.peters_clusters,
            "normalize": self.normalize,
            "pool_mode": self.pool_mode,
            "sample_cap": self.sample_cap,
            "clean_pool_only": self.clean_pool_only,
            "forest_trees": self.forest_trees,
        }


@dataclass(frozen=True)
class ExperimentResult:
    """Scores of one (target, filter, learner, metric) combination in both
    variants, with their change rate."""

    target: str
    filter_name: str
    learner: str
    metric: str
    original: float | None
    cleaned: float | None
    change: ChangeRate
    note: str = ""
    provenance: Mapping[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class ExperimentRun:
    config: ExperimentConfig
    results: tuple[ExperimentResult, ...]
    dataset_sizes: Mapping[str, Mapping[str, int]]


def _parse_list(value: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in value.split(",") if part.strip())


def _parse_bool(key: str, value: str) -> bool:
    lowered = value.lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"{key}: expected true/false, got {value!r}")


def parse_config(text: str, base_dir: Path | None = None) -> ExperimentConfig:
    """Parse the key=value config format; unknown keys are errors."""
    raw: dict[str, str] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"line {line_no}: expected key = value, got {line.strip()!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ValueError(f"line {line_no}: unknown key {key!r}")
        if key in raw:
            raise ValueError(f"line {line_no}: duplicate key {key!r}")
        raw[key] = value

    kwargs: dict[str, object] = {}
    if "corpus" in raw:
        path = Path(raw["corpus"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        kwargs["corpus_dir"] = path
    else:
        kwargs["corpus_dir"] = None
    if "targets" in raw:
        kwargs["targets"] = "all" if raw["targets"].strip() == "all" else _parse_list(raw["targets"])
    if "filters" in raw:
        kwargs["filters"] = _parse_list(raw["filters"])
    if "learners" in raw:
        kwargs["learners"] = _parse_list(raw["learners"])
    for key in ("seed", "burak_k", "forest_trees"):
        if key in raw:
            kwargs[key] = int(raw[key])
    if "peters_clusters" in raw:
        value = raw["peters_clusters"]
        kwargs["peters_clusters"] = None if value.lower() == "auto" else int(value)
    if "sample_cap" in raw:
        value = raw["sample_cap"]
        kwargs["sample_cap"] = None if value.lower() in ("none", "off") else int(value)
    for key in ("normalize", "clean_pool_only"):
        if key in raw:
            kwargs[key] = _parse_bool(key, raw[key])
    if "pool_mode" in raw:
        kwargs["pool_mode"] = raw["pool_mode"]
    return ExperimentConfig(**kwargs)


def _cap_dataset(ds: Dataset, cap: int, seed: int) -> Dataset:
    """Stratified subsample down to ``cap`` cases, preserving row order and
    keeping both label strata non-empty whenever they were."""
    n = ds.case_count
    if n <= cap:
        return ds
    rng = np.random.default_rng(seed)
    defective = np.flatnonzero(ds.labels)
    clean = np.flatnonzero(~ds.labels)
    quota_def = int(round(cap * defective.size / n))
    if defective.size:
        quota_def = max(quota_def, 1)
    quota_def = min(quota_def, defective.size, cap - (1 if clean.size else 0))
    quota_clean = cap - quota_def
    if quota_clean > clean.size:
        quota_def += quota_clean - clean.size
        quota_clean = clean.size
    keep = np.sort(
        np.concatenate([
            rng.choice(defective, size=quota_def, replace=False),
            rng.choice(clean, size=quota_clean, replace=False),
        ])
    )
    return ds.replace_cases([ds.cases[i] for i in keep])


def _apply_cap(corpus: Corpus, config: ExperimentConfig) -> Corpus:
    if config.sample_cap is None:
        return corpus
    capped = [
        _cap_dataset(ds, config.sample_cap, derive_seed(config.seed, "sample_cap", ds.name))
        for ds in corpus
    ]
    return Corpus(tuple(capped))


# state shared with forked worker processes
_STATE: dict = {}


def _variant_scores(target_name: str, variant: str) -> tuple[dict, dict, dict]:
    """Score every (filter, learner, metric) of one target in one variant.

    Returns (scores, notes, info) keyed by combination tuples; a None score
    always comes with a reason in notes.
    """
    config: ExperimentConfig = _STATE["config"]
    corpus: Corpus = _STATE[variant]
    target = corpus.get(target_name)
    eval_target = (
        _STATE["original"].get(target_name)
        if variant == "cleaned" and config.clean_pool_only
        else target
    )

    scores: dict[tuple[str, str, str], float | None] = {}
    notes: dict[tuple[str, str, str], str] = {}
    info: dict[str, dict] = {}

    def mark_all(reason: str) -> None:
        for f in config.filters:
            for l in config.learners:
                for metric in METRICS:
                    scores[(f, l, metric)] = None
                    notes[(f, l, metric)] = reason

    if eval_target.case_count == 0:
        mark_all(f"{variant}: target has no cases left to evaluate")
        return scores, notes, info
    try:
        pool = build_pool(corpus, target, config.pool_mode)
    except ValueError as exc:
        mark_all(f"{variant}: {exc}")
        return scores, notes, info

    test_X = eval_target.feature_matrix
    test_y = eval_target.labels
    single_class_test = bool(test_y.all() or not test_y.any())

    for filter_name in config.filters:
        filter_seed = derive_seed(config.seed, target_name, variant, "filter", filter_name)
        selection = select_training_data(
            filter_name, pool, eval_target,
            k=config.burak_k, k_clusters=config.peters_clusters,
            seed=filter_seed, normalize=config.normalize,
        )
        rows = np.fromiter(selection.selected, dtype=np.int64, count=len(selection))
        training = TrainingMatrix(pool.feature_matrix[rows], pool.labels[rows])
        info[filter_name] = {
            "selection_size": len(selection),
            "selection_parameters": dict(selection.parameters),
            "train_defective": int(training.y.sum()),
            "pool_size": len(pool),
        }
        for learner in config.learners:
            learner_seed = derive_seed(
                config.seed, target_name, variant, filter_name, learner
            )
            model = train(
                learner, training, seed=learner_seed,
                forest_config=ForestConfig(trees=config.forest_trees),
            )
            labels, case_scores = predict(model, test_X)
            cm = ConfusionMatrix.from_predictions(test_y, labels)
            scores[(filter_name, learner, "fmeasure")] = f_measure(cm)
            notes[(filter_name, learner, "fmeasure")] = ""
            auc_score = auc(case_scores, test_y)
            scores[(filter_name, learner, "auc")] = auc_score
            notes[(filter_name, learner, "auc")] = (
                f"{variant}: auc undefined, target labels are single-class"
                if auc_score is None and single_class_test
                else ""
            )
    return scores, notes, info


def _target_results(target_name: str) -> list[ExperimentResult]:
    config: ExperimentConfig = _STATE["config"]
    per_variant = {v: _variant_scores(target_name, v) for v in VARIANTS}

    results = []
    for filter_name in config.filters:
        for learner in config.learners:
            for metric in METRICS:
                key = (filter_name, learner, metric)
                original = per_variant["original"][0].get(key)
                cleaned = per_variant["cleaned"][0].get(key)
                change = change_rate(original, cleaned)
                reasons = [
                    per_variant[v][1].get(key, "") for v in VARIANTS
                ]
                if (
                    change.rate_percent is None
                    and original is not None
                    and cleaned is not None
                ):
                    reasons.append("change undefined: original score is 0")
                note = "; ".join(r for r in reasons if r)
                provenance = {
                    "seed": config.seed,
                    "pool_mode": config.pool_mode,
                    "normalize": config.normalize,
                    "sample_cap": config.sample_cap,
                    "selection": {
                        v: per_variant[v][2].get(filter_name) for v in VARIANTS
                    },
                }
                results.append(
                    ExperimentResult(
                        target=target_name,
                        filter_name=filter_name,
                        learner=learner,
                        metric=metric,
                        original=original,
                        cleaned=cleaned,
                        change=change,
                        note=note,
                        provenance=provenance,
                    )
                )
    return results


def _worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        count = int(raw)
    except ValueError:
        logger.warning("ignoring non-integer %s=%r", WORKERS_ENV, raw)
        return 1
    return max(1, count)


def run_experiment(config: ExperimentConfig, corpus: Corpus | None = None) -> ExperimentRun:
    """Execute the full grid; deterministic for a given config and corpus."""
    started = time.monotonic()
    if corpus is None:
        if config.corpus_dir is None:
            raise ValueError("config names no corpus directory and no corpus was given")
        corpus = load_corpus(config.corpus_dir)

    for name in ([] if config.targets == "all" else config.targets):
        corpus.get(name)  # raises CorpusError for unknown targets

    original = _apply_cap(corpus, config)
    cleaned, _ = clean_corpus(original)
    targets = (
        [ds.name for ds in original]
        if config.targets == "all"
        else list(config.targets)
    )
    sizes = {
        ds.name: {
            "loaded": corpus.get(ds.name).case_count,
            "original": ds.case_count,
            "cleaned": cleaned.get(ds.name).case_count,
        }
        for ds in original
    }

    global _STATE
    _STATE = {"config": config, "original": original, "cleaned": cleaned}
    workers = _worker_count()
    if workers > 1 and len(targets) > 1:
        # fork inherits _STATE; results are reassembled in target order, so
        # the outcome is identical to the serial run
        import multiprocessing

        context = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=workers, mp_context=context) as pool:
            chunks = list(pool.map(_target_results, targets))
    else:
        chunks = [_target_results(t) for t in targets]

    results = tuple(r for chunk in chunks for r in chunk)
    logger.info(
        "experiment finished: %d targets, %d result rows, %.1fs",
        len(targets), len(results), time.monotonic() - started,
    )
    return ExperimentRun(config=config, results=results, dataset_sizes=sizes)
