"""Dataset model and CSV round-trip tests.

The canonical-value oracle here is ``fractions.Fraction``: two metric cell
strings denote the same number exactly when their Fractions are equal, so
canonicalize_metric must agree with that verdict on every pair.
"""

from __future__ import annotations

import io
from decimal import Decimal
from fractions import Fraction

import numpy as np
import pytest

from defectclean.data import (
    Case,
    Corpus,
    CorpusError,
    Dataset,
    EmptyDatasetError,
    METRIC_NAMES,
    MetricVector,
    N_METRICS,
    ParseError,
    PROMISE_HEADER,
    SchemaError,
    canonical_str,
    canonicalize_metric,
    load_corpus,
    parse_dataset,
    serialize_dataset,
    split_project,
    write_corpus,
)
from defectclean.datagen import synthetic_corpus, synthetic_dataset

from .conftest import case, dataset, vector


def make_csv(rows: list[list[str]], header=PROMISE_HEADER) -> io.StringIO:
    lines = [",".join(header)]
    lines += [",".join(row) for row in rows]
    return io.StringIO("\n".join(lines) + "\n")


def data_row(project="demo", version="1.0", name="a.B", metrics=None, bug="0"):
    metrics = metrics if metrics is not None else ["1"] * N_METRICS
    return [project, version, name, *metrics, bug]


class TestCanonicalize:
    def test_formatting_variants_compare_equal(self):
        spellings = ["1", "1.0", "1.00", "01", "1.000000", "1e0", "0.1e1"]
        values = [canonicalize_metric(s) for s in spellings]
        assert len(set(values)) == 1
        assert len({hash(v) for v in values}) == 1

    def test_agrees_with_fraction_oracle_on_random_pairs(self, rng):
        digits = "0123456789"
        def random_literal():
            whole = "".join(rng.choice(list(digits), size=int(rng.integers(1, 3))))
            if rng.random() < 0.5:
                frac = "".join(rng.choice(list(digits), size=int(rng.integers(1, 4))))
                return f"{whole}.{frac}"
            return whole

        for _ in range(2000):
            a, b = random_literal(), random_literal()
            expected = Fraction(a) == Fraction(b)
            assert (canonicalize_metric(a) == canonicalize_metric(b)) == expected, (a, b)

    def test_close_but_distinct_values_stay_distinct(self):
        assert canonicalize_metric("0.1") != canonicalize_metric("0.10000000001")
        assert canonicalize_metric("1000000000000001") != canonicalize_metric(
            "1000000000000002"
        )

    @pytest.mark.parametrize("bad", ["", "  ", "abc", "1.2.3", "nan", "inf", "-inf", "-1", "-0.5"])
    def test_rejects_invalid_text(self, bad):
        with pytest.raises(ParseError):
            canonicalize_metric(bad)

    def test_canonical_str_strips_insignificant_zeros(self):
        assert canonical_str(Decimal("1.00")) == "1"
        assert canonical_str(Decimal("2.50")) == "2.5"
        assert canonical_str(Decimal("0.0")) == "0"
        assert canonical_str(Decimal("100")) == "100"
        assert canonical_str(Decimal("0.125")) == "0.125"

    def test_canonical_str_identical_for_equal_values(self, rng):
        for _ in range(500):
            value = int(rng.integers(0, 10_000))
            scale = int(rng.integers(0, 4))
            a = Decimal(value).scaleb(-scale)  # value * 10^-scale
            text = format(a, "f")
            pad = int(rng.integers(0, 3))
            if pad:
                text += ("" if "." in text else ".") + "0" * pad
            b = Decimal(text)
            assert a == b
            assert canonical_str(a) == canonical_str(b)


class TestMetricVectorAndCase:
    def test_equality_ignores_formatting(self):
        a = MetricVector(tuple(Decimal(s) for s in ["1.0"] * N_METRICS))
        b = MetricVector(tuple(Decimal(s) for s in ["1.00"] * N_METRICS))
        assert a == b and hash(a) == hash(b)

    def test_wrong_arity_rejected(self):
        with pytest.raises(ValueError):
            MetricVector(tuple(Decimal(1) for _ in range(N_METRICS - 1)))

    def test_negative_and_nonfinite_rejected(self):
        bad = [Decimal(1)] * N_METRICS
        bad[3] = Decimal("-1")
        with pytest.raises(ValueError):
            MetricVector(tuple(bad))
        bad[3] = Decimal("NaN")
        with pytest.raises(ValueError):
            MetricVector(tuple(bad))

    def test_label_follows_bug_count(self):
        assert not case("a", False).defective
        assert case("a", True).defective
        assert Case("x", vector(1), 3).defective
        with pytest.raises(ValueError):
            Case("x", vector(1), -1)


class TestSplitProject:
    @pytest.mark.parametrize(
        "name,expected",
        [
            ("ant1.7", ("ant", "1.7")),
            ("jedit4.3", ("jedit", "4.3")),
            ("camel1.0", ("camel", "1.0")),
            ("prop1", ("prop", "1")),
            ("prop6", ("prop", "6")),
            ("berek", ("berek", "")),
            ("forrest0.8", ("forrest", "0.8")),
            ("xercesinit", ("xerces", "init")),
            ("xerces1.2", ("xerces", "1.2")),
            ("log4j1.0", ("log4j", "1.0")),
            ("pbeans2", ("pbeans", "2")),
            ("elearning", ("elearning", "")),
            ("tomcat", ("tomcat", "")),
        ],
    )
    def test_known_names(self, name, expected):
        assert split_project(name) == expected

    def test_all_public_dataset_names_group_into_expected_projects(self):
        # the 65 class-level dataset names of the public corpus
        names = [
            "ant1.7", "arc", "berek",
            "camel1.0", "camel1.2", "camel1.4", "camel1.6",
            "ckjm", "elearning", "forrest0.6", "forrest0.7", "forrest0.8",
            "intercafe", "ivy1.1", "ivy1.4", "ivy2.0",
            "jedit3.2", "jedit4.0", "jedit4.1", "jedit4.2", "jedit4.3",
            "kalkulator", "log4j1.0", "log4j1.1", "log4j1.2",
            "lucene2.0", "lucene2.2", "lucene2.4",
            "nieruchomosci", "pdftranslator",
            "poi1.5", "poi2.0", "poi2.5", "poi3.0",
            "prop1", "prop2", "prop3", "prop4", "prop5", "prop6",
            "redaktor", "serapion", "skarbonka", "sklebagd",
            "synapse1.0", "synapse1.1", "synapse1.2",
            "systemdata", "szybkafucha", "termoproject", "tomcat",
            "velocity1.4", "velocity1.5", "velocity1.6",
            "workflow", "wspomaganiepi",
            "xalan2.4", "xalan2.5", "xalan2.6", "xalan2.7",
            "xerces1.2", "xerces1.3", "xerces1.4", "xercesinit", "zuzel",
        ]
        assert len(names) == len(set(names)) == 65
        projects = {}
        for name in names:
            project, release = split_project(name)
            assert project + release == name
            projects.setdefault(project, []).append(name)
        assert len(projects) == 32
        # multi-release families group together
        assert len(projects["camel"]) == 4
        assert len(projects["forrest"]) == 3
        assert len(projects["ivy"]) == 3
        assert len(projects["jedit"]) == 5
        assert len(projects["log4j"]) == 3
        assert len(projects["lucene"]) == 3
        assert len(projects["poi"]) == 4
        assert len(projects["prop"]) == 6
        assert len(projects["synapse"]) == 3
        assert len(projects["velocity"]) == 3
        assert len(projects["xalan"]) == 4
        assert len(projects["xerces"]) == 4  # includes the "init" release
        singles = [p for p, members in projects.items() if len(members) == 1]
        assert len(singles) == 20


class TestParseDataset:
    def test_parses_counts_labels_and_name(self):
        rows = [
            data_row(name="A", metrics=["1"] * N_METRICS, bug="0"),
            data_row(name="B", metrics=["2"] * N_METRICS, bug="1"),
            data_row(name="C", metrics=["3"] * N_METRICS, bug="5"),
        ]
        ds = parse_dataset(make_csv(rows))
        assert ds.name == "demo1.0"
        assert ds.project == "demo" and ds.release == "1.0"
        assert ds.case_count == 3
        assert ds.defective_count == 2
        assert ds.cases[2].bug_count == 5
        assert ds.cases[0].class_name == "A"

    def test_defective_ratio(self):
        rows = [data_row(bug="1")] * 3 + [data_row(bug="0")]
        ds = parse_dataset(make_csv(rows))
        assert ds.defective_ratio == pytest.approx(0.75)

    def test_name_override_controls_identity(self):
        ds = parse_dataset(make_csv([data_row()]), name="xercesinit")
        assert (ds.project, ds.release) == ("xerces", "init")

    def test_header_case_and_spacing_tolerated(self):
        header = [h.upper() + " " for h in PROMISE_HEADER]
        ds = parse_dataset(make_csv([data_row()], header=header))
        assert ds.case_count == 1

    def test_missing_column_named(self):
        header = list(PROMISE_HEADER[:-1])  # drop "bug"
        rows = [data_row()[:-1]]
        with pytest.raises(SchemaError, match="bug"):
            parse_dataset(make_csv(rows, header=header))

    def test_swapped_column_named(self):
        header = list(PROMISE_HEADER)
        header[4], header[5] = header[5], header[4]  # dit <-> noc
        with pytest.raises(SchemaError, match="noc"):
            parse_dataset(make_csv([data_row()], header=header))

    def test_extra_column_rejected(self):
        header = list(PROMISE_HEADER) + ["extra"]
        rows = [data_row() + ["1"]]
        with pytest.raises(SchemaError, match="extra"):
            parse_dataset(make_csv(rows, header=header))

    def test_bad_metric_cell_reports_row(self):
        rows = [data_row(), data_row(metrics=["1"] * 19 + ["oops"])]
        with pytest.raises(ParseError, match="row 2"):
            parse_dataset(make_csv(rows))

    def test_non_integer_bug_count_rejected(self):
        with pytest.raises(ParseError, match="bug"):
            parse_dataset(make_csv([data_row(bug="1.5")]))

    def test_empty_file_and_headerless_file(self):
        with pytest.raises(EmptyDatasetError):
            parse_dataset(io.StringIO(""))
        with pytest.raises(EmptyDatasetError):
            parse_dataset(make_csv([]))

    def test_blank_lines_skipped(self):
        stream = make_csv([data_row()])
        text = stream.getvalue() + "\n\n"
        ds = parse_dataset(io.StringIO(text))
        assert ds.case_count == 1


class TestRoundTrip:
    def test_serialize_parse_identity(self):
        for seed in range(5):
            original = synthetic_dataset("roundtrip1.0", seed=seed, cases=40,
                                         duplicate_rate=0.1, inconsistent_rate=0.1)
            buffer = io.StringIO()
            serialize_dataset(original, buffer)
            buffer.seek(0)
            parsed = parse_dataset(buffer, name="roundtrip1.0")
            assert parsed == original

    def test_equal_datasets_serialize_identically(self):
        # same numeric values spelled differently parse to equal datasets
        rows_a = [data_row(metrics=["1.0"] + ["2"] * 19, bug="0")]
        rows_b = [data_row(metrics=["1.00"] + ["2.0"] * 19, bug="0")]
        ds_a = parse_dataset(make_csv(rows_a), name="x1.0")
        ds_b = parse_dataset(make_csv(rows_b), name="x1.0")
        assert ds_a == ds_b
        out_a, out_b = io.StringIO(), io.StringIO()
        serialize_dataset(ds_a, out_a)
        serialize_dataset(ds_b, out_b)
        assert out_a.getvalue() == out_b.getvalue()

    def test_feature_matrix_matches_cases(self):
        ds = synthetic_dataset("m1.0", seed=3, cases=25)
        matrix = ds.feature_matrix
        assert matrix.shape == (25, N_METRICS)
        assert matrix[4].tolist() == list(ds.cases[4].metrics.as_floats())
        assert ds.labels.tolist() == [c.defective for c in ds.cases]


class TestCorpus:
    def test_load_corpus_from_directory(self, tmp_path):
        corpus = synthetic_corpus(seed=1)
        write_corpus(corpus, tmp_path)
        loaded = load_corpus(tmp_path)
        assert [ds.name for ds in loaded] == sorted(ds.name for ds in corpus)
        assert {ds.name: ds.case_count for ds in loaded} == {
            ds.name: ds.case_count for ds in corpus
        }
        assert loaded.projects["alpha"] == ("alpha1.0", "alpha1.1")

    def test_manifest_filters_and_validates(self, tmp_path):
        write_corpus(synthetic_corpus(seed=1), tmp_path)
        loaded = load_corpus(tmp_path, manifest=["alpha1.0", "beta2.0"])
        assert [ds.name for ds in loaded] == ["alpha1.0", "beta2.0"]
        with pytest.raises(CorpusError, match="missing"):
            load_corpus(tmp_path, manifest=["alpha1.0", "nosuch1.0"])

    def test_missing_directory(self, tmp_path):
        with pytest.raises(CorpusError, match="does not exist"):
            load_corpus(tmp_path / "nope")

    def test_parse_error_names_offending_file(self, tmp_path):
        write_corpus(synthetic_corpus(seed=1), tmp_path)
        bad = tmp_path / "beta2.0.csv"
        bad.write_text(bad.read_text() + "x,y\n")
        with pytest.raises(ParseError, match="beta2.0.csv"):
            load_corpus(tmp_path)

    def test_duplicate_names_rejected(self):
        ds = dataset("dup1.0", [case("a", False, 1)])
        with pytest.raises(CorpusError, match="duplicate"):
            Corpus((ds, ds))

    def test_get_unknown_dataset(self):
        corpus = synthetic_corpus(seed=1)
        with pytest.raises(CorpusError, match="nosuch"):
            corpus.get("nosuch")


def test_metric_names_are_the_standard_twenty():
    assert len(METRIC_NAMES) == 20
    assert METRIC_NAMES[0] == "wmc" and METRIC_NAMES[-1] == "avg_cc"
    assert PROMISE_HEADER[0] == PROMISE_HEADER[2] == "name"
