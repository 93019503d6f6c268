"""Synthetic corpora in the standard 20-metric schema.

Used by the demos and the test suite: generated datasets look like real
class-level defect data (counts, ratios, a defect-rate signal learners can
pick up) and can be salted with exact duplicates and label-inconsistent
copies at chosen rates.  Everything is driven by explicit seeds.
"""

from __future__ import annotations

from decimal import Decimal
from typing import Sequence

import numpy as np

from .data import Case, Corpus, Dataset, MetricVector, N_METRICS, split_project

#: metric positions generated as 2-decimal ratios instead of counts
_RATIO_COLUMNS = frozenset({9, 11, 13, 14, 19})  # lcom3, dam, mfa, cam, avg_cc


def _random_metrics(rng: np.random.Generator, defective: bool) -> MetricVector:
    """Counts and ratios with a mild shift for defective cases, so the
    label is learnable but noisy."""
    shift = 4 if defective else 0
    values = []
    for col in range(N_METRICS):
        if col in _RATIO_COLUMNS:
            values.append(Decimal(int(rng.integers(0, 101))) / Decimal(100))
        else:
            values.append(Decimal(int(rng.integers(0, 12 + shift))))
    return MetricVector(tuple(values))


def random_case(rng: np.random.Generator, name: str, defect_rate: float) -> Case:
    defective = bool(rng.random() < defect_rate)
    return Case(
        class_name=name,
        metrics=_random_metrics(rng, defective),
        bug_count=int(rng.integers(1, 4)) if defective else 0,
    )


def synthetic_dataset(
    name: str,
    seed: int,
    cases: int = 60,
    defect_rate: float = 0.3,
    duplicate_rate: float = 0.0,
    inconsistent_rate: float = 0.0,
    class_prefix: str = "org.synthetic",
) -> Dataset:
    """One dataset with optional injected problems.

    ``duplicate_rate`` appends that fraction of exact row copies;
    ``inconsistent_rate`` appends copies with the opposite label (the copy
    of a defective case gets bug count 0 and vice versa).  Appended rows are
    shuffled into the dataset, so problems are not clustered at the end.
    """
    rng = np.random.default_rng(seed)
    base = [
        random_case(rng, f"{class_prefix}.C{i:04d}", defect_rate)
        for i in range(cases)
    ]
    extras: list[Case] = []
    for _ in range(int(round(duplicate_rate * cases))):
        source = base[int(rng.integers(len(base)))]
        extras.append(Case(source.class_name + "Copy", source.metrics, source.bug_count))
    for _ in range(int(round(inconsistent_rate * cases))):
        source = base[int(rng.integers(len(base)))]
        extras.append(
            Case(
                source.class_name + "Flip",
                source.metrics,
                0 if source.defective else 1,
            )
        )
    rows = base + extras
    order = rng.permutation(len(rows))
    project, release = split_project(name)
    return Dataset(project, release, name, tuple(rows[i] for i in order))


def synthetic_corpus(
    seed: int,
    releases: Sequence[str] = (
        "alpha1.0", "alpha1.1", "beta2.0", "beta2.1", "gamma1.0",
    ),
    cases: int = 60,
    defect_rate: float = 0.3,
    duplicate_rate: float = 0.0,
    inconsistent_rate: float = 0.0,
) -> Corpus:
    """A small multi-project corpus; per-dataset seeds derive from ``seed``."""
    datasets = []
    for i, name in enumerate(releases):
        datasets.append(
            synthetic_dataset(
                name,
                seed=seed * 1000003 + i,
                cases=cases,
                defect_rate=defect_rate,
                duplicate_rate=duplicate_rate,
                inconsistent_rate=inconsistent_rate,
            )
        )
    return Corpus(tuple(datasets))


def collision_dataset(
    seed: int,
    cases: int = 80,
    name: str = "grid1.0",
    active_features: int = 3,
    grid: int = 3,
    defect_rate: float = 0.4,
) -> Dataset:
    """Dataset drawn from a tiny discrete feature grid.

    With few active features over a small value grid, exact feature
    collisions (hence duplicates and inconsistencies) occur naturally, which
    is what the cleaning and quality property tests need.  Formatting of the
    constant features varies ("1" vs "1.0" vs "1.00") to exercise canonical
    numeric equality end to end.
    """
    rng = np.random.default_rng(seed)
    spellings = ("1", "1.0", "1.00")
    rows = []
    for i in range(cases):
        values = []
        for col in range(N_METRICS):
            if col < active_features:
                values.append(Decimal(int(rng.integers(0, grid))))
            else:
                values.append(Decimal(spellings[int(rng.integers(len(spellings)))]))
        defective = bool(rng.random() < defect_rate)
        rows.append(
            Case(
                class_name=f"G{i:03d}",
                metrics=MetricVector(tuple(values)),
                bug_count=int(rng.integers(1, 3)) if defective else 0,
            )
        )
    project, release = split_project(name)
    return Dataset(project, release, name, tuple(rows))
