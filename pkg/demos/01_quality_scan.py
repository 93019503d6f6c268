"""
Finding identical and inconsistent cases in a defect corpus
===========================================================

A case is a java class described by 20 static code metrics plus a
defective/defect-free label.  Two cases are *identical* when all 20 metrics
and the label agree; they are *inconsistent* when the metrics agree but the
labels differ.  Both kinds inflate or contradict the training signal, so the
first step of any study on this data should be counting them.
"""

from defectclean.data import Case, Corpus, Dataset
from defectclean.datagen import synthetic_corpus, synthetic_dataset
from defectclean.quality import corpus_quality, within_quality

# A small five-release corpus with problems injected on purpose.  Swap this
# for load_corpus("data/jureczko") to scan the real thing.
corpus = synthetic_corpus(seed=7, duplicate_rate=0.2, inconsistent_rate=0.1)

print("within-release scan")
print(f"{'dataset':<12} {'cases':>5} {'inconsistent':>12} {'identical':>10}")
for ds in corpus:
    report = within_quality(ds)
    print(f"{ds.name:<12} {report.case_count:>5} "
          f"{report.inconsistent_case_count:>12} {report.identical_case_count:>10}")

# The counts are case counts: every member of a qualifying feature group is
# counted, so they can never be exactly 1.
worst = max((within_quality(ds) for ds in corpus),
            key=lambda r: r.inconsistent_case_count)
print(f"\nmost conflicted dataset: {worst.dataset}")
for group in worst.inconsistent_groups[:3]:
    labels = ["defective" if d else "clean" for d in group.labels]
    print(f"  rows {list(group.member_indices)} share one metric vector "
          f"but are labelled {labels}")

# Releases of the same project overlap heavily because most classes do not
# change between versions, which matters if you plan to mix releases in one
# training pool.  Model that here: delta1.1 carries 25 classes over from
# delta1.0 unchanged, relabels 5 of them, and adds 30 new ones.
old = synthetic_dataset("delta1.0", seed=41, cases=50)
carried = list(old.cases[:25])
for i in range(5):
    c = carried[i]
    carried[i] = Case(c.class_name, c.metrics, 0 if c.defective else 1)
new = synthetic_dataset("delta1.1", seed=42, cases=30)
evolved = Dataset("delta", "1.1", "delta1.1",
                  tuple(carried) + new.cases)
project = Corpus((old, evolved))

# Pair counts are cross products: a metric vector seen a times in release A
# and b times in release B contributes a*b pairs.
print("\ncross-release scan (same project only)")
_, cross = corpus_quality(project, include_pairs=True)
for pair in cross:
    print(f"{pair.project}: {pair.release_a} vs {pair.release_b}: "
          f"{pair.identical_pair_count} identical pairs, "
          f"{pair.inconsistent_pair_count} inconsistent pairs")
