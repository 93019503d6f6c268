"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import os
from decimal import Decimal
from pathlib import Path

import numpy as np
import pytest

from defectclean.data import Case, Dataset, MetricVector, N_METRICS, split_project

#: directory holding the real public corpus CSVs, when available
REAL_CORPUS_ENV = "JURECZKO_DATA_DIR"
REAL_CORPUS_DEFAULT = Path(__file__).resolve().parent.parent / "data" / "jureczko"


def real_corpus_dir() -> Path | None:
    override = os.environ.get(REAL_CORPUS_ENV)
    candidate = Path(override) if override else REAL_CORPUS_DEFAULT
    if candidate.is_dir() and any(candidate.glob("*.csv")):
        return candidate
    return None


requires_real_corpus = pytest.mark.skipif(
    real_corpus_dir() is None,
    reason=(
        "real corpus CSVs not present; place the public class-level defect "
        f"CSVs under {REAL_CORPUS_DEFAULT} or set ${REAL_CORPUS_ENV}"
    ),
)


def vector(*values: object) -> MetricVector:
    """Build a 20-dim metric vector from a short prefix, padding with zeros."""
    padded = list(values) + [0] * (N_METRICS - len(values))
    return MetricVector(tuple(Decimal(str(v)) for v in padded))


def case(name: str, defective: bool, *values: object) -> Case:
    return Case(name, vector(*values), 1 if defective else 0)


def dataset(name: str, cases: list[Case]) -> Dataset:
    project, release = split_project(name)
    return Dataset(project, release, name, tuple(cases))


def random_vector(rng: np.random.Generator, grid: int = 4, active: int = 4) -> MetricVector:
    """Low-cardinality vector; collisions across draws are likely."""
    values = [Decimal(int(rng.integers(0, grid))) for _ in range(active)]
    values += [Decimal(0)] * (N_METRICS - active)
    return MetricVector(tuple(values))


def random_problem_dataset(
    rng: np.random.Generator,
    max_cases: int = 200,
    name: str = "rand1.0",
) -> Dataset:
    """Random dataset over a tiny feature grid: duplicates and label
    conflicts arise naturally and frequently."""
    n = int(rng.integers(1, max_cases + 1))
    cases = []
    for i in range(n):
        cases.append(
            Case(
                f"C{i}",
                random_vector(rng),
                int(rng.integers(0, 3)),  # bug counts 0..2, so both labels occur
            )
        )
    return dataset(name, cases)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260815)
