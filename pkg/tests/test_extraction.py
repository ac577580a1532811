import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from histoseg import (
    BinaryMask,
    DomainError,
    Fill,
    GrayImage,
    Methodology,
    SegmentSelection,
    binarize,
    build_histogram,
    extract_object,
    luminance_gray,
    rgb_to_yiq,
    run_pipeline,
    thresholds_m1,
)
from histoseg.thresholding import apply_segmentation


class TestSelectionAndMask:
    def test_empty_selection_rejected(self):
        with pytest.raises(DomainError):
            SegmentSelection(selected=frozenset())

    def test_negative_index_rejected(self):
        with pytest.raises(DomainError):
            SegmentSelection(selected=frozenset({-1}))

    def test_mask_bits_validated(self):
        with pytest.raises(DomainError):
            BinaryMask(np.full((2, 2), 3, dtype=np.uint8))

    def test_mask_gray_rendering(self):
        mask = BinaryMask(np.array([[0, 1], [1, 0]], dtype=np.uint8))
        assert mask.to_gray().values.tolist() == [[0, 255], [255, 0]]


class TestBinarize:
    def _segment(self, two_spike_hist):
        img = GrayImage(np.array([[50, 200], [200, 50]], dtype=np.uint8))
        ts = thresholds_m1(two_spike_hist, 3, 1.0, 1.0)
        return img, apply_segmentation(img, ts)

    def test_select_all_is_all_ones(self, two_spike_hist):
        _, seg = self._segment(two_spike_hist)
        sel = SegmentSelection(selected=frozenset(range(4)))
        assert (binarize(seg, sel).bits == 1).all()

    def test_bright_segment_indicator(self, two_spike_hist):
        img, seg = self._segment(two_spike_hist)
        bright_label = int(seg.labels[img.values == 200][0])
        mask = binarize(seg, SegmentSelection(selected=frozenset({bright_label})))
        assert np.array_equal(mask.bits == 1, img.values == 200)

    def test_out_of_range_index(self, two_spike_hist):
        _, seg = self._segment(two_spike_hist)
        with pytest.raises(DomainError):
            binarize(seg, SegmentSelection(selected=frozenset({9})))

    def test_complement_partitions_grid(self, two_spike_hist):
        _, seg = self._segment(two_spike_hist)
        n_segments = len(seg.source_thresholds.segment_means)
        chosen = {0, 2}
        rest = set(range(n_segments)) - chosen
        a = binarize(seg, SegmentSelection(selected=frozenset(chosen)))
        b = binarize(seg, SegmentSelection(selected=frozenset(rest)))
        assert ((a.bits + b.bits) == 1).all()


class TestExtractObject:
    def test_all_ones_mask_is_identity_gate(self, halves_rgb):
        yiq = rgb_to_yiq(halves_rgb)
        mask = BinaryMask(np.ones((halves_rgb.height, halves_rgb.width), dtype=np.uint8))
        res = extract_object(yiq, mask, Fill.BLACK)
        from histoseg import yiq_to_rgb

        assert np.array_equal(res.extracted_rgb.pixels, yiq_to_rgb(yiq).pixels)

    def test_single_pixel_mask(self, halves_rgb):
        yiq = rgb_to_yiq(halves_rgb)
        bits = np.zeros((halves_rgb.height, halves_rgb.width), dtype=np.uint8)
        bits[3, 4] = 1
        res = extract_object(yiq, BinaryMask(bits), Fill.BLACK)
        diff = np.abs(res.extracted_rgb.pixels[3, 4].astype(int)
                      - halves_rgb.pixels[3, 4].astype(int))
        assert diff.max() <= 1
        rest = np.delete(res.extracted_rgb.pixels.reshape(-1, 3),
                         3 * halves_rgb.width + 4, axis=0)
        assert (rest == 0).all()

    def test_white_fill_renders_true_white(self, halves_rgb):
        yiq = rgb_to_yiq(halves_rgb)
        gray = luminance_gray(yiq)
        bits = (gray.values < 128).astype(np.uint8)  # keep the dark object
        res = extract_object(yiq, BinaryMask(bits), Fill.WHITE)
        background = res.extracted_rgb.pixels[bits == 0]
        assert (background == 255).all()

    def test_extracted_y_preserved_inside_mask(self, halves_rgb):
        yiq = rgb_to_yiq(halves_rgb)
        gray = luminance_gray(yiq)
        bits = (gray.values >= 128).astype(np.uint8)
        res = extract_object(yiq, BinaryMask(bits), Fill.BLACK)
        assert np.array_equal(res.extracted_y.values[bits == 1],
                              gray.values[bits == 1])
        assert (res.extracted_y.values[bits == 0] == 0).all()

    def test_dimension_mismatch(self, halves_rgb):
        yiq = rgb_to_yiq(halves_rgb)
        with pytest.raises(DomainError):
            extract_object(yiq, BinaryMask(np.ones((2, 2), dtype=np.uint8)), Fill.BLACK)


class TestPipeline:
    def test_halves_bright_extraction(self, halves_rgb):
        gray = luminance_gray(rgb_to_yiq(halves_rgb))
        # find which segment holds the bright half under an n=1 split
        ts = thresholds_m1(build_histogram(gray), 1, 1.0, 1.0)
        assert ts.thresholds == (120,)
        res = run_pipeline(halves_rgb, Methodology.M1, 1, 1.0, 1.0,
                           SegmentSelection(selected=frozenset({1})))
        out = res.extraction.extracted_rgb.pixels
        left, right = out[:, :50], out[:, 50:]
        assert (left == 0).all()
        assert np.abs(right.astype(int) - 180).max() <= 1

    def test_select_all_round_trip(self, all_fixture_images):
        for name, img in all_fixture_images.items():
            res = run_pipeline(img, Methodology.M1, 3, 1.0, 1.0,
                               SegmentSelection(selected=frozenset({0, 1, 2, 3})))
            diff = np.abs(res.extraction.extracted_rgb.pixels.astype(int)
                          - img.pixels.astype(int))
            assert diff.max() <= 1, name

    def test_no_pixel_leaks_across_mask(self, two_spike_rgb):
        res = run_pipeline(two_spike_rgb, Methodology.M1, 3, 1.0, 1.0,
                           SegmentSelection(selected=frozenset({3})))
        gray = res.gray.values
        selected_mean = res.threshold_set.segment_means[3]
        assert np.array_equal(res.extraction.mask.bits == 1,
                              res.segmented.mapped.values == selected_mean)
        assert set(np.unique(gray[res.extraction.mask.bits == 1])) == {200}

    def test_even_n_rejected_before_work(self, halves_rgb):
        with pytest.raises(DomainError):
            run_pipeline(halves_rgb, Methodology.M1, 2, 1.0, 1.0,
                         SegmentSelection(selected=frozenset({0})))

    @given(arrays(np.uint8, (16, 16, 3), elements=st.integers(0, 255)),
           st.sampled_from([1, 3]))
    @settings(max_examples=30, deadline=None)
    def test_select_all_round_trip_property(self, pixels, n):
        from histoseg import RgbImage

        img = RgbImage(pixels)
        sel = SegmentSelection(selected=frozenset(range(n + 1)))
        res = run_pipeline(img, Methodology.M2, n, 1.0, 1.0, sel)
        diff = np.abs(res.extraction.extracted_rgb.pixels.astype(int)
                      - pixels.astype(int))
        assert diff.max() <= 1
