from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from shapelet_transfer import (
    SIGMA_EPSILON,
    DatasetFormatError,
    LabeledDataset,
    ResampleSpec,
    dataset_metadata,
    dataset_name_from_path,
    load_ucr_tsv,
    resample,
    resample_dataset,
    resample_spec_for,
    save_metadata,
    save_tsv,
)

from conftest import make_dataset, write_tsv
from oracles import gaussian_resample


class TestLoad:
    def test_basic_parse_and_label_remap(self, tmp_path):
        path = tmp_path / "Two.tsv"
        path.write_text("1\t0.0\t1.0\t2.0\n2\t3.0\t4.0\t5.0\n")
        ds = load_ucr_tsv(path)
        assert ds.name == "Two"
        assert ds.length == 3
        assert ds.classes == (0, 1)
        assert ds.raw_label_map == {"1": 0, "2": 1}
        np.testing.assert_array_equal(ds.labels, [0, 1])
        np.testing.assert_allclose(ds.values, [[0, 1, 2], [3, 4, 5]])

    def test_interior_nan_interpolated(self, tmp_path):
        path = tmp_path / "gap.tsv"
        path.write_text("1\t0.0\tNaN\t2.0\n2\t1.0\t1.0\t1.0\n")
        ds = load_ucr_tsv(path)
        np.testing.assert_allclose(ds.values[0], [0.0, 1.0, 2.0])

    def test_edge_nans_extend(self, tmp_path):
        path = tmp_path / "edge.tsv"
        path.write_text("1\tNaN\t1.0\t2.0\tNaN\n2\t0.0\t0.0\t0.0\t0.0\n")
        ds = load_ucr_tsv(path)
        np.testing.assert_allclose(ds.values[0], [1.0, 1.0, 2.0, 2.0])

    def test_empty_fields_treated_as_missing(self, tmp_path):
        path = tmp_path / "empty.tsv"
        path.write_text("1\t0.0\t\t2.0\n2\t1.0\t1.0\t1.0\n")
        ds = load_ucr_tsv(path)
        np.testing.assert_allclose(ds.values[0], [0.0, 1.0, 2.0])

    def test_short_rows_stretched_to_max_length(self, tmp_path):
        path = tmp_path / "var.tsv"
        path.write_text("1\t0.0\t1.0\t2.0\n1\t0.0\t1.0\t2.0\t3.0\t4.0\n2\t5\t5\t5\t5\t5\n")
        ds = load_ucr_tsv(path)
        assert ds.length == 5
        np.testing.assert_allclose(ds.values[0], [0.0, 0.5, 1.0, 1.5, 2.0])

    def test_whitespace_variant(self, tmp_path):
        path = tmp_path / "ws.txt"
        path.write_text("1 0.0 1.0 2.0\n2  3.0\t4.0 5.0\n")
        ds = load_ucr_tsv(path, whitespace=True)
        assert ds.length == 3
        np.testing.assert_allclose(ds.values[1], [3, 4, 5])

    def test_numeric_label_order_and_aliases(self, tmp_path):
        path = tmp_path / "neg.tsv"
        path.write_text("1\t0.0\t1.0\n-1\t2.0\t3.0\n1.0\t4.0\t5.0\n")
        ds = load_ucr_tsv(path)
        assert ds.raw_label_map == {"-1": 0, "1": 1}
        np.testing.assert_array_equal(ds.labels, [1, 0, 1])

    def test_train_suffix_stripped_from_name(self, tmp_path):
        assert dataset_name_from_path(tmp_path / "Coffee_TRAIN.tsv") == "Coffee"
        assert dataset_name_from_path(tmp_path / "Coffee_TEST.tsv") == "Coffee"
        assert dataset_name_from_path(tmp_path / "Coffee.tsv") == "Coffee"

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "void.tsv"
        path.write_text("\n\n")
        with pytest.raises(DatasetFormatError):
            load_ucr_tsv(path)

    def test_row_with_one_value_rejected(self, tmp_path):
        path = tmp_path / "short.tsv"
        path.write_text("1\t5.0\n")
        with pytest.raises(DatasetFormatError):
            load_ucr_tsv(path)

    def test_row_with_one_finite_value_rejected(self, tmp_path):
        path = tmp_path / "nanrow.tsv"
        path.write_text("1\t5.0\tNaN\tNaN\n")
        with pytest.raises(DatasetFormatError):
            load_ucr_tsv(path)

    def test_unparseable_label_rejected(self, tmp_path):
        path = tmp_path / "lbl.tsv"
        path.write_text("abc\t1.0\t2.0\n")
        with pytest.raises(DatasetFormatError):
            load_ucr_tsv(path)

    def test_loaded_counts_match_line_counting_script(self, tmp_path, rng):
        # Independent check: class counts and length recomputed by splitting
        # the raw text, never via the loader.
        rows = []
        for label, count in ((1, 4), (3, 2), (7, 5)):
            for _ in range(count):
                rows.append((label, rng.normal(size=12)))
        path = tmp_path / "counts.tsv"
        write_tsv(path, rows)
        ds = load_ucr_tsv(path)

        raw_lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
        raw_labels = [ln.split("\t")[0] for ln in raw_lines]
        raw_lengths = {len(ln.split("\t")) - 1 for ln in raw_lines}
        assert ds.n_series == len(raw_lines)
        assert ds.length == raw_lengths.pop() and not raw_lengths
        assert len(ds.classes) == len(set(raw_labels))
        for raw, internal in ds.raw_label_map.items():
            assert ds.class_indices(internal).size == raw_labels.count(raw)


class TestRoundTrip:
    def test_parse_serialize_reparse_identical(self, tmp_path, rng):
        for seed in range(5):
            ds = make_dataset(
                np.random.default_rng(seed), n_classes=3, per_class=2, length=9,
                name=f"rt{seed}",
            )
            path = tmp_path / f"rt{seed}.tsv"
            save_tsv(ds, path)
            again = load_ucr_tsv(path)
            assert again == ds

    def test_round_trip_preserves_raw_labels(self, tmp_path):
        path = tmp_path / "raw.tsv"
        path.write_text("5\t0.125\t2.5\n-2\t1.0\t3.0\n")
        ds = load_ucr_tsv(path)
        out = tmp_path / "raw_out.tsv"
        save_tsv(ds, out)
        assert out.read_text().splitlines()[0].split("\t")[0] == "5"
        assert load_ucr_tsv(out, name="raw") == load_ucr_tsv(path, name="raw")


class TestResample:
    def test_identity_when_length_kept_and_sigma_epsilon(self):
        spec = ResampleSpec(target_length=4, smoothing_sigma=SIGMA_EPSILON)
        np.testing.assert_array_equal(
            resample(np.array([1.0, 2.0, 3.0, 4.0]), spec), [1, 2, 3, 4]
        )

    @given(
        length=hst.integers(min_value=1, max_value=60),
        target=hst.integers(min_value=2, max_value=80),
        sigma=hst.floats(min_value=1e-3, max_value=8.0),
        level=hst.floats(min_value=-100, max_value=100),
    )
    @settings(max_examples=60, deadline=None)
    def test_constant_series_stay_constant(self, length, target, sigma, level):
        out = resample(np.full(length, level), ResampleSpec(target, sigma))
        assert out.shape == (target,)
        np.testing.assert_allclose(out, level, atol=1e-9)

    @given(
        data=hst.lists(
            hst.floats(min_value=-50, max_value=50), min_size=1, max_size=40
        ),
        target=hst.integers(min_value=2, max_value=50),
    )
    @settings(max_examples=60, deadline=None)
    def test_output_length_is_exact(self, data, target):
        spec = resample_spec_for(len(data), target)
        assert resample(np.array(data), spec).shape == (target,)

    def test_alternating_downsample_matches_convolution_oracle(self):
        series = np.tile([0.0, 1.0], 32)
        spec = ResampleSpec(target_length=8, smoothing_sigma=2.0)
        out = resample(series, spec)
        expected = gaussian_resample(series, 8, 2.0)
        np.testing.assert_allclose(out, expected, atol=1e-9)
        assert abs(out.mean() - 0.5) < 1e-6

    def test_random_series_match_convolution_oracle(self, rng):
        for _ in range(10):
            n = int(rng.integers(5, 120))
            target = int(rng.integers(2, 90))
            sigma = float(rng.uniform(0.2, 5.0))
            series = rng.normal(size=n)
            np.testing.assert_allclose(
                resample(series, ResampleSpec(target, sigma)),
                gaussian_resample(series, target, sigma),
                atol=1e-9,
            )

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            ResampleSpec(target_length=1, smoothing_sigma=1.0)
        with pytest.raises(ValueError):
            ResampleSpec(target_length=4, smoothing_sigma=0.0)
        with pytest.raises(ValueError):
            resample(np.array([]), ResampleSpec(4, 1.0))


class TestResampleDataset:
    def test_same_length_is_identity(self, rng):
        ds = make_dataset(rng, length=20)
        out = resample_dataset(ds, 20)
        np.testing.assert_allclose(out.values, ds.values, atol=1e-9)

    def test_downsample_length_and_labels(self, rng):
        ds = make_dataset(rng, n_classes=3, per_class=4, length=128)
        out = resample_dataset(ds, 60)
        assert out.length == 60
        assert out.n_series == ds.n_series
        np.testing.assert_array_equal(out.labels, ds.labels)

    def test_class_histogram_preserved(self, rng):
        ds = make_dataset(rng, n_classes=4, per_class=3, length=50)
        out = resample_dataset(ds, 25)
        for c in ds.classes:
            assert out.class_indices(c).size == ds.class_indices(c).size

    def test_sigma_rule(self):
        down = resample_spec_for(128, 60)
        assert down.smoothing_sigma == pytest.approx((128 / 60) / 2)
        up = resample_spec_for(60, 128)
        assert up.smoothing_sigma == SIGMA_EPSILON
        same = resample_spec_for(60, 60)
        assert same.smoothing_sigma == SIGMA_EPSILON


class TestMetadata:
    def test_sidecar_contents(self, tmp_path, rng):
        ds = make_dataset(rng, n_classes=2, per_class=2, length=16, name="meta")
        spec = resample_spec_for(32, 16)
        out = tmp_path / "meta.json"
        save_metadata(ds, out, resample=spec)
        data = json.loads(out.read_text())
        assert data["name"] == "meta"
        assert data["length"] == 16
        assert data["classes"] == [0, 1]
        assert data["raw_label_map"] == {"0": 0, "1": 1}
        assert data["resample"] == {"target_length": 16, "sigma": 1.0}

    def test_metadata_without_resample(self, rng):
        ds = make_dataset(rng, name="plain")
        assert "resample" not in dataset_metadata(ds)


class TestDatasetInvariants:
    def test_label_map_is_bijection_after_load(self, tmp_path, rng):
        rows = [(lbl, rng.normal(size=6)) for lbl in (4, 9, 4, 2, 9, 2)]
        path = tmp_path / "bij.tsv"
        write_tsv(path, rows)
        ds = load_ucr_tsv(path)
        assert sorted(ds.raw_label_map.values()) == list(range(len(ds.classes)))
        assert len(set(ds.raw_label_map)) == len(ds.raw_label_map)

    def test_non_contiguous_labels_rejected(self):
        with pytest.raises(ValueError):
            LabeledDataset(
                name="bad",
                values=np.zeros((2, 3)),
                labels=np.array([0, 2]),
            )

    def test_values_are_read_only(self, rng):
        ds = make_dataset(rng)
        with pytest.raises(ValueError):
            ds.values[0, 0] = 99.0
