from __future__ import annotations

import collections

import numpy as np
import pytest

from shapelet_transfer import (
    ConcatenatedClassSeries,
    ab_join,
    brute_force_join,
    concatenate_rest,
    cross_class_profiles,
    subsequences,
)

from oracles import naive_join_pure, naive_join_vec


def random_concat(rng, n_segments=None, window=None, lo=20, hi=120):
    window = window or int(rng.integers(3, 16))
    n_segments = n_segments or int(rng.integers(1, 4))
    segments = [
        rng.normal(size=int(rng.integers(max(window, lo // n_segments), hi)))
        for _ in range(n_segments)
    ]
    return ConcatenatedClassSeries.from_segments(segments, window)


def spans(series):
    return series.segment_spans()


class TestSubsequences:
    def test_single_segment(self):
        s = ConcatenatedClassSeries.from_segments([np.zeros(10)], window=4)
        np.testing.assert_array_equal(subsequences(s), np.arange(7))

    def test_boundary_positions_excluded(self):
        s = ConcatenatedClassSeries.from_segments([np.zeros(5), np.ones(5)], window=3)
        np.testing.assert_array_equal(subsequences(s), [0, 1, 2, 5, 6, 7])

    def test_boundary_positions_excluded_window_four(self):
        s = ConcatenatedClassSeries.from_segments([np.zeros(5), np.ones(5)], window=4)
        np.testing.assert_array_equal(subsequences(s), [0, 1, 5, 6])

    def test_short_segment_dropped_and_recorded(self):
        s = ConcatenatedClassSeries.from_segments(
            [np.zeros(3), np.ones(10), np.zeros(2)], window=4
        )
        assert s.dropped == (0, 2)
        assert s.values.size == 10
        np.testing.assert_array_equal(subsequences(s), np.arange(7))

    def test_all_segments_too_short(self):
        with pytest.raises(ValueError):
            ConcatenatedClassSeries.from_segments([np.zeros(3)], window=4)


class TestAbJoin:
    def test_identical_constant_series_give_zero(self):
        q = ConcatenatedClassSeries.from_segments([np.full(12, 3.0)], window=4)
        r = ConcatenatedClassSeries.from_segments([np.full(9, 3.0)], window=4)
        profile = ab_join(q, r)
        np.testing.assert_allclose(profile.distances, 0.0, atol=0)

    def test_unit_offset_closed_form(self):
        q = ConcatenatedClassSeries.from_segments([np.zeros(4)], window=4)
        r = ConcatenatedClassSeries.from_segments([np.ones(4)], window=4)
        profile = ab_join(q, r)
        assert profile.distances[0] == pytest.approx(2.0)
        assert profile.nn_index[0] == 0

    def test_matches_vectorized_oracle(self, rng):
        for _ in range(25):
            window = int(rng.integers(3, 16))
            q = random_concat(rng, window=window)
            r = random_concat(rng, window=window)
            profile = ab_join(q, r)
            dist, nn = naive_join_vec(
                q.values, spans(q), r.values, spans(r), window
            )
            np.testing.assert_allclose(profile.distances, dist, atol=1e-9)
            np.testing.assert_array_equal(profile.nn_index, nn)

    def test_self_join_matches_vectorized_oracle(self, rng):
        for _ in range(15):
            q = random_concat(rng)
            profile = ab_join(q, q, self_join=True)
            dist, nn = naive_join_vec(
                q.values, spans(q), q.values, spans(q), q.window, self_join=True
            )
            np.testing.assert_allclose(profile.distances, dist, atol=1e-9)
            np.testing.assert_array_equal(profile.nn_index, nn)

    def test_oracles_agree_with_pure_double_loop(self, rng):
        # Cross-validates the two test oracles and the in-tree reference.
        for _ in range(4):
            window = int(rng.integers(3, 7))
            q = random_concat(rng, window=window, hi=40)
            r = random_concat(rng, window=window, hi=40)
            vec = naive_join_vec(q.values, spans(q), r.values, spans(r), window)
            pure = naive_join_pure(
                q.values.tolist(), spans(q), r.values.tolist(), spans(r), window
            )
            np.testing.assert_allclose(vec[0], pure[0], atol=1e-9)
            reference = brute_force_join(q, r)
            np.testing.assert_allclose(reference.distances, pure[0], atol=1e-9)

    def test_self_join_respects_exclusion_zone(self, rng):
        for _ in range(10):
            q = random_concat(rng)
            profile = ab_join(q, q, self_join=True)
            valid = ~profile.mask
            for r in np.flatnonzero(valid):
                if profile.nn_index[r] >= 0:
                    assert abs(int(profile.nn_index[r]) - r) >= q.window

    def test_self_join_requires_same_object(self, rng):
        q = random_concat(rng, window=4)
        clone = ConcatenatedClassSeries(
            values=q.values.copy(), boundaries=q.boundaries, window=q.window
        )
        with pytest.raises(ValueError):
            ab_join(q, clone, self_join=True)

    def test_window_mismatch_rejected(self, rng):
        q = random_concat(rng, window=4)
        r = random_concat(rng, window=5)
        with pytest.raises(ValueError):
            ab_join(q, r)

    def test_masked_positions_carry_sentinels(self):
        q = ConcatenatedClassSeries.from_segments([np.zeros(5), np.ones(5)], window=4)
        r = ConcatenatedClassSeries.from_segments([np.ones(6)], window=4)
        profile = ab_join(q, r)
        assert profile.mask[3] and profile.mask[4]
        assert np.isinf(profile.distances[3])
        assert profile.nn_index[3] == -1

    def test_degenerate_self_join_has_no_neighbor(self):
        q = ConcatenatedClassSeries.from_segments([np.arange(4.0)], window=4)
        profile = ab_join(q, q, self_join=True)
        assert np.isinf(profile.distances[0])
        assert profile.nn_index[0] == -1
        assert not profile.mask[0]

    def test_appending_reference_series_never_increases_distance(self, rng):
        for _ in range(8):
            window = int(rng.integers(3, 10))
            q = random_concat(rng, window=window)
            base_segments = [
                rng.normal(size=int(rng.integers(window, 60))) for _ in range(2)
            ]
            r_small = ConcatenatedClassSeries.from_segments(base_segments, window)
            r_big = ConcatenatedClassSeries.from_segments(
                base_segments + [rng.normal(size=40)], window
            )
            d_small = ab_join(q, r_small).distances
            d_big = ab_join(q, r_big).distances
            assert np.all(d_big <= d_small + 1e-12)

    def test_permuting_series_preserves_distance_multiset(self, rng):
        window = 5
        segments = [rng.normal(size=int(rng.integers(8, 30))) for _ in range(4)]
        a = ConcatenatedClassSeries.from_segments(segments, window)
        b = ConcatenatedClassSeries.from_segments(segments[::-1], window)
        da = ab_join(a, a, self_join=True).distances
        db = ab_join(b, b, self_join=True).distances
        multiset = lambda d: collections.Counter(np.round(d[np.isfinite(d)], 9))
        assert multiset(da) == multiset(db)

    def test_znorm_mode_ignores_scale_and_offset(self, rng):
        base = rng.normal(size=40)
        q = ConcatenatedClassSeries.from_segments([base], window=8)
        r = ConcatenatedClassSeries.from_segments([3.0 * base + 10.0], window=8)
        profile = ab_join(q, r, z_normalize=True)
        valid = ~profile.mask
        np.testing.assert_allclose(profile.distances[valid], 0.0, atol=1e-7)

    def test_l1_metric_closed_form(self):
        q = ConcatenatedClassSeries.from_segments([np.zeros(4)], window=4)
        r = ConcatenatedClassSeries.from_segments([np.full(4, 2.0)], window=4)
        profile = ab_join(q, r, metric="l1")
        assert profile.distances[0] == pytest.approx(8.0)

    def test_unknown_metric_rejected(self, rng):
        q = random_concat(rng, window=4)
        with pytest.raises(ValueError):
            ab_join(q, q, self_join=True, metric="chebyshev")

    def test_json_dump_uses_null_for_masked(self):
        q = ConcatenatedClassSeries.from_segments([np.zeros(5), np.ones(5)], window=4)
        r = ConcatenatedClassSeries.from_segments([np.ones(6)], window=4)
        dump = ab_join(q, r).to_json_dict()
        assert dump["window"] == 4
        assert dump["distances"][3] is None
        assert dump["mask"][3] is True
        assert dump["nn_index"][3] == -1


class TestCrossClassProfiles:
    def _two_class(self, rng, window=4):
        per_class = {
            0: ConcatenatedClassSeries.from_segments(
                [rng.normal(size=20), rng.normal(size=15)], window
            ),
            1: ConcatenatedClassSeries.from_segments(
                [rng.normal(size=18), rng.normal(size=22)], window
            ),
        }
        return per_class

    def test_two_class_reduces_to_pairwise(self, rng):
        per_class = self._two_class(rng)
        own, other = cross_class_profiles(per_class, 0)
        own_direct = ab_join(per_class[0], per_class[0], self_join=True)
        other_direct = ab_join(per_class[0], per_class[1])
        np.testing.assert_array_equal(own.distances, own_direct.distances)
        np.testing.assert_array_equal(other.distances, other_direct.distances)

    def test_pattern_shared_across_classes_scores_zero(self, rng):
        motif = rng.normal(size=6)
        window = 6
        per_class = {
            0: ConcatenatedClassSeries.from_segments(
                [np.concatenate([motif, rng.normal(size=10)])], window
            ),
            1: ConcatenatedClassSeries.from_segments(
                [np.concatenate([rng.normal(size=9), motif])], window
            ),
        }
        _, other = cross_class_profiles(per_class, 0)
        assert other.distances[0] == pytest.approx(0.0, abs=1e-9)

    def test_three_class_rest_matches_oracle(self, rng):
        window = 4
        per_class = {
            c: ConcatenatedClassSeries.from_segments(
                [rng.normal(size=int(rng.integers(10, 25))) for _ in range(2)],
                window,
            )
            for c in range(3)
        }
        _, other = cross_class_profiles(per_class, 1)
        rest = concatenate_rest(per_class, exclude=1)
        dist, _ = naive_join_vec(
            per_class[1].values,
            per_class[1].segment_spans(),
            rest.values,
            rest.segment_spans(),
            window,
        )
        np.testing.assert_allclose(other.distances, dist, atol=1e-9)

    def test_requires_two_classes(self, rng):
        per_class = {0: random_concat(rng, window=4)}
        with pytest.raises(ValueError):
            cross_class_profiles(per_class, 0)

    def test_missing_class_rejected(self, rng):
        per_class = self._two_class(rng)
        with pytest.raises(ValueError):
            cross_class_profiles(per_class, 5)
