import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgedraw import (
    DegenerateHistogramError,
    GrayImage,
    Histogram256,
    derive_ed_thresholds,
    histogram,
    magnitude_histogram,
    otsu_threshold,
)

from conftest import random_gray
from reference import brute_force_otsu_argmax, within_class_variance


def hist_from_counts(counts: dict[int, int]) -> Histogram256:
    bins = np.zeros(256, dtype=np.int64)
    for level, count in counts.items():
        bins[level] = count
    return Histogram256(bins, int(bins.sum()))


def random_histogram(rng) -> Histogram256:
    kind = rng.integers(0, 3)
    bins = np.zeros(256, dtype=np.int64)
    if kind == 0:
        bins = rng.integers(0, 500, 256).astype(np.int64)
    elif kind == 1:  # sparse
        for level in rng.integers(0, 256, int(rng.integers(2, 9))):
            bins[level] += int(rng.integers(1, 1000))
    else:  # bimodal
        for center, spread, count in ((rng.integers(10, 100), 12, 4000), (rng.integers(120, 246), 9, 3000)):
            vals = np.clip(np.rint(rng.normal(center, spread, count)), 0, 255).astype(np.intp)
            bins += np.bincount(vals, minlength=256).astype(np.int64)
    if np.count_nonzero(bins) < 2:
        bins[10] += 1
        bins[200] += 1
    return Histogram256(bins, int(bins.sum()))


class TestHistogram:
    def test_two_by_two(self):
        img = GrayImage(np.array([[0, 0], [255, 255]], dtype=np.int64))
        h = histogram(img)
        assert h.bins[0] == 2 and h.bins[255] == 2
        assert h.bins.sum() == 4
        assert np.count_nonzero(h.bins) == 2

    def test_uniform(self):
        h = histogram(GrayImage(np.full((10, 10), 7, dtype=np.uint8)))
        assert h.bins[7] == 100 and h.total == 100

    def test_sums_match_pixel_count(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            img = random_gray(rng, int(rng.integers(1, 20)), int(rng.integers(1, 20)))
            h = histogram(img)
            assert int(h.bins.sum()) == img.width * img.height == h.total

    def test_magnitude_histogram_clips_and_rounds(self):
        mags = np.array([[0.4, 0.6], [255.4, 999.0]])
        h = magnitude_histogram(mags)
        assert h.bins[0] == 1 and h.bins[1] == 1 and h.bins[255] == 2

    def test_type_validation(self):
        with pytest.raises(ValueError, match="256 bins"):
            Histogram256(np.zeros(255, dtype=np.int64), 0)
        with pytest.raises(ValueError, match="total"):
            Histogram256(np.ones(256, dtype=np.int64), 9)


class TestOtsu:
    def test_two_spike_tie_break(self):
        # every t in 11..200 separates the two spikes identically; the
        # smallest maximizer wins
        h = hist_from_counts({10: 50, 200: 50})
        result = otsu_threshold(h)
        assert result.threshold == 11
        assert result.threshold == brute_force_otsu_argmax(h.bins)
        assert result.class_weights == (0.5, 0.5)
        assert result.class_means == (10.0, 200.0)

    def test_degenerate_single_level(self):
        with pytest.raises(DegenerateHistogramError):
            otsu_threshold(hist_from_counts({42: 1000}))

    def test_matches_brute_force(self):
        rng = np.random.default_rng(123)
        for _ in range(200):
            h = random_histogram(rng)
            assert otsu_threshold(h).threshold == brute_force_otsu_argmax(h.bins)

    def test_scale_invariance(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            h = random_histogram(rng)
            t = otsu_threshold(h).threshold
            for k in (2, 17, 1000):
                scaled = Histogram256(h.bins * k, h.total * k)
                assert otsu_threshold(scaled).threshold == t

    def test_result_invariants(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            h = random_histogram(rng)
            r = otsu_threshold(h)
            w0, w1 = r.class_weights
            mu0, mu1 = r.class_means
            mu_total = float(np.arange(256) @ h.bins) / h.total
            assert w0 + w1 == pytest.approx(1.0, abs=1e-9)
            assert w0 * mu0 + w1 * mu1 == pytest.approx(mu_total, abs=1e-6)
            assert r.between_class_variance >= 0
            assert 1 <= r.threshold <= 255

    def test_between_max_is_within_min(self):
        # maximizing the between-class form minimizes the within-class form
        rng = np.random.default_rng(9)
        for _ in range(25):
            h = random_histogram(rng)
            t = otsu_threshold(h).threshold
            best_within = min(within_class_variance(h.bins, u) for u in range(1, 256))
            assert within_class_variance(h.bins, t) <= best_within + 1e-6

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_matches_brute_force_property(self, seed):
        h = random_histogram(np.random.default_rng(seed))
        assert otsu_threshold(h).threshold == brute_force_otsu_argmax(h.bins)


class TestDerivedThresholds:
    def test_reference_values(self):
        t = derive_ed_thresholds(100)
        assert (t.grad_thr, t.anchor_thr) == (50.0, 6.7)

    def test_zero(self):
        t = derive_ed_thresholds(0)
        assert (t.grad_thr, t.anchor_thr) == (0.0, 0.0)

    def test_one_fifty(self):
        t = derive_ed_thresholds(150)
        assert t.grad_thr == 75.0
        assert t.anchor_thr == pytest.approx(10.05, abs=1e-12)

    @pytest.mark.parametrize("bad", [-1, 256, 1000])
    def test_out_of_range(self, bad):
        with pytest.raises(ValueError, match="out of range"):
            derive_ed_thresholds(bad)

    def test_exact_ratios_for_all_levels(self):
        for t in range(256):
            auto = derive_ed_thresholds(t)
            assert auto.grad_thr == 0.5 * t
            assert auto.anchor_thr == 0.067 * t
            if t > 0:
                assert auto.anchor_thr / auto.grad_thr == pytest.approx(0.134, abs=1e-12)

    def test_custom_ratios(self):
        t = derive_ed_thresholds(200, grad_ratio=0.4, anchor_ratio=0.1)
        assert (t.grad_thr, t.anchor_thr) == (80.0, 20.0)
