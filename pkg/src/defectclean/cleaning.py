"""Two-step removal of identical and inconsistent cases.

Step 1 removes duplicate rows: of every set of cases with equal metrics and
equal label, only the first occurrence survives.  Step 2 then removes
inconsistent cases: every feature group that still carries both labels is
dropped entirely.  The order matters; running the steps the other way round
deletes more (see the order-sensitivity tests).

:func:`clean` is the production implementation (single pass, hash grouping).
:func:`clean_oracle` is a deliberately naive quadratic re-implementation of
the same pairwise deletion procedure, kept as an independent reference for
differential testing; do not use it on large datasets.
"""

from __future__ import annotations

from dataclasses import dataclass

from .data import Case, Corpus, Dataset, MetricVector


@dataclass(frozen=True)
class CleanResult:
    """Outcome of cleaning one dataset."""

    cleaned: Dataset
    removed_duplicates: int
    removed_inconsistent: int
    removed_defective: int
    removed_indices: tuple[int, ...]

    @property
    def removed_total(self) -> int:
        return self.removed_duplicates + self.removed_inconsistent


@dataclass(frozen=True)
class CleanSummaryRow:
    """One dataset's line of a corpus cleaning summary."""

    dataset: str
    case_count: int
    removed_cases: int
    defective_count: int
    removed_defective: int


def clean(dataset: Dataset) -> CleanResult:
    """Remove duplicate rows, then label-inconsistent feature groups.

    Surviving cases keep their original relative order, and the cleaned
    dataset keeps the project, release and name of the input.  Idempotent:
    cleaning a cleaned dataset removes nothing.
    """
    cases = dataset.cases

    seen_rows: set[tuple[MetricVector, bool]] = set()
    survivors: list[int] = []
    removed_dup: list[int] = []
    for i, case in enumerate(cases):
        key = case.row_key
        if key in seen_rows:
            removed_dup.append(i)
        else:
            seen_rows.add(key)
            survivors.append(i)

    label_sets: dict[MetricVector, set[bool]] = {}
    for i in survivors:
        label_sets.setdefault(cases[i].metrics, set()).add(cases[i].defective)
    removed_inc = [i for i in survivors if len(label_sets[cases[i].metrics]) > 1]
    final = [i for i in survivors if len(label_sets[cases[i].metrics]) == 1]

    removed = sorted(removed_dup + removed_inc)
    return CleanResult(
        cleaned=dataset.replace_cases([cases[i] for i in final]),
        removed_duplicates=len(removed_dup),
        removed_inconsistent=len(removed_inc),
        removed_defective=sum(1 for i in removed if cases[i].defective),
        removed_indices=tuple(removed),
    )


def clean_oracle(dataset: Dataset, size_bound: int = 2000) -> CleanResult:
    """Quadratic pairwise reference implementation of :func:`clean`.

    Walks the case list with explicit index loops: first deleting every
    later case that equals an earlier one in metrics and label, then
    deleting both members of every remaining equal-metrics pair whose labels
    differ.  Only intended for differential testing; refuses datasets larger
    than ``size_bound``.
    """
    if dataset.case_count > size_bound:
        raise ValueError(
            f"oracle is quadratic; dataset has {dataset.case_count} cases, "
            f"bound is {size_bound}"
        )
    rows: list[tuple[int, MetricVector, bool]] = [
        (i, c.metrics, c.defective) for i, c in enumerate(dataset.cases)
    ]

    removed_dup = 0
    i = 0
    while i < len(rows):
        j = i + 1
        while j < len(rows):
            if rows[j][1] == rows[i][1] and rows[j][2] == rows[i][2]:
                del rows[j]
                removed_dup += 1
            else:
                j += 1
        i += 1

    removed_inc = 0
    i = 0
    while i < len(rows):
        j = i + 1
        hit = False
        while j < len(rows):
            if rows[j][1] == rows[i][1] and rows[j][2] != rows[i][2]:
                del rows[j]
                removed_inc += 1
                hit = True
            else:
                j += 1
        if hit:
            del rows[i]
            removed_inc += 1
        else:
            i += 1

    surviving = [idx for idx, _, _ in rows]
    removed = sorted(set(range(dataset.case_count)) - set(surviving))
    return CleanResult(
        cleaned=dataset.replace_cases([dataset.cases[i] for i in surviving]),
        removed_duplicates=removed_dup,
        removed_inconsistent=removed_inc,
        removed_defective=sum(1 for i in removed if dataset.cases[i].defective),
        removed_indices=tuple(removed),
    )


def clean_corpus(corpus: Corpus) -> tuple[Corpus, list[CleanSummaryRow]]:
    """Clean every dataset of a corpus.

    Returns the cleaned corpus (same dataset names, same order) and one
    summary row per dataset with post-cleaning case/defective counts and
    the number of removed cases.
    """
    cleaned = []
    summary = []
    for ds in corpus:
        result = clean(ds)
        cleaned.append(result.cleaned)
        summary.append(
            CleanSummaryRow(
                dataset=ds.name,
                case_count=result.cleaned.case_count,
                removed_cases=result.removed_total,
                defective_count=result.cleaned.defective_count,
                removed_defective=result.removed_defective,
            )
        )
    return Corpus(tuple(cleaned)), summary
