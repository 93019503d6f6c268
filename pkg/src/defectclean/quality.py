"""Detection of identical and inconsistent cases.

Two cases are *identical* when all 20 metric values and the label agree;
a case is *inconsistent* when some other case has the same 20 metric values
but the opposite label.  Counts are case counts, not pair counts: a case is
counted once as identical if it has at least one full-row-equal partner, and
once as inconsistent if its feature group carries both labels.

Within-release analysis groups the cases of one dataset; cross-release
analysis compares two releases of the same project by evaluating every pair
in the cross product of their cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .data import Case, Corpus, Dataset, MetricVector


@dataclass(frozen=True)
class FeatureGroup:
    """All cases of one dataset sharing one metric vector."""

    key: MetricVector
    member_indices: tuple[int, ...]
    labels: tuple[bool, ...]

    @property
    def size(self) -> int:
        return len(self.member_indices)

    @property
    def mixed(self) -> bool:
        """True when the group carries both labels."""
        return len(set(self.labels)) > 1


@dataclass(frozen=True)
class WithinQualityReport:
    """Identical/inconsistent counts for one dataset."""

    dataset: str
    case_count: int
    identical_case_count: int
    inconsistent_case_count: int
    identical_groups: tuple[FeatureGroup, ...]
    inconsistent_groups: tuple[FeatureGroup, ...]

    @property
    def problem_free(self) -> bool:
        return self.identical_case_count == 0 and self.inconsistent_case_count == 0


@dataclass(frozen=True)
class CrossReleaseReport:
    """Identical/inconsistent pair counts between two releases of a project."""

    project: str
    release_a: str
    release_b: str
    identical_pair_count: int
    inconsistent_pair_count: int


def _group_by_features(cases: Sequence[Case]) -> dict[MetricVector, list[int]]:
    groups: dict[MetricVector, list[int]] = {}
    for i, case in enumerate(cases):
        groups.setdefault(case.metrics, []).append(i)
    return groups


def within_quality(dataset: Dataset) -> WithinQualityReport:
    """Count identical and inconsistent cases inside one dataset.

    Both counts are invariant under row permutation.  Groups are reported in
    first-occurrence order.
    """
    cases = dataset.cases
    feature_groups = _group_by_features(cases)
    row_groups: dict[tuple[MetricVector, bool], list[int]] = {}
    for i, case in enumerate(cases):
        row_groups.setdefault(case.row_key, []).append(i)

    identical = [
        FeatureGroup(key, tuple(members), tuple(label for _ in members))
        for (key, label), members in row_groups.items()
        if len(members) >= 2
    ]
    inconsistent = []
    for key, members in feature_groups.items():
        labels = tuple(cases[i].defective for i in members)
        if len(set(labels)) > 1:
            inconsistent.append(FeatureGroup(key, tuple(members), labels))

    return WithinQualityReport(
        dataset=dataset.name,
        case_count=len(cases),
        identical_case_count=sum(g.size for g in identical),
        inconsistent_case_count=sum(g.size for g in inconsistent),
        identical_groups=tuple(identical),
        inconsistent_groups=tuple(inconsistent),
    )


def cross_release_quality(older: Dataset, newer: Dataset) -> CrossReleaseReport:
    """Count identical and inconsistent pairs across two releases.

    Every (case of older, case of newer) pair is examined: a pair is
    identical when metrics and label agree, inconsistent when the metrics
    agree and the labels differ.  Both datasets must belong to the same
    project and be distinct releases.
    """
    if older.project != newer.project:
        raise ValueError(
            f"cross-release comparison needs one project, got "
            f"{older.project!r} and {newer.project!r}"
        )
    if older.name == newer.name:
        raise ValueError(f"cannot compare release {older.name!r} with itself")

    def label_counts(ds: Dataset) -> dict[MetricVector, tuple[int, int]]:
        counts: dict[MetricVector, tuple[int, int]] = {}
        for case in ds.cases:
            pos, neg = counts.get(case.metrics, (0, 0))
            if case.defective:
                pos += 1
            else:
                neg += 1
            counts[case.metrics] = (pos, neg)
        return counts

    counts_a = label_counts(older)
    counts_b = label_counts(newer)
    identical = 0
    inconsistent = 0
    for key, (pos_a, neg_a) in counts_a.items():
        pos_b, neg_b = counts_b.get(key, (0, 0))
        identical += pos_a * pos_b + neg_a * neg_b
        inconsistent += pos_a * neg_b + neg_a * pos_b

    return CrossReleaseReport(
        project=older.project,
        release_a=older.name,
        release_b=newer.name,
        identical_pair_count=identical,
        inconsistent_pair_count=inconsistent,
    )


def release_pairs(corpus: Corpus) -> list[tuple[Dataset, Dataset]]:
    """All within-project release pairs, projects and releases in name order.

    Every unordered pair of releases of a multi-release project appears
    once, oriented with the lexicographically smaller dataset name first.
    """
    pairs = []
    for project in sorted(corpus.projects):
        names = corpus.projects[project]
        for i in range(len(names)):
            for j in range(i + 1, len(names)):
                pairs.append((corpus.get(names[i]), corpus.get(names[j])))
    return pairs


def corpus_quality(
    corpus: Corpus, include_pairs: bool = True
) -> tuple[list[WithinQualityReport], list[CrossReleaseReport]]:
    """Within-release reports for every dataset, plus cross-release reports
    for every release pair when ``include_pairs`` is set."""
    within = [within_quality(ds) for ds in corpus]
    cross = []
    if include_pairs:
        cross = [cross_release_quality(a, b) for a, b in release_pairs(corpus)]
    return within, cross
