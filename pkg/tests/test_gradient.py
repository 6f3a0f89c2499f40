import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgedraw import (
    GrayImage,
    ImageTooSmallError,
    OPERATORS,
    UnknownOperatorError,
    combine_magnitude,
    convolve3x3,
    gaussian_kernel,
    gradient_field,
    kernel_for,
    magnitude_to_gray,
    smooth,
)

from conftest import random_gray
from reference import compose_kernels, naive_convolve3x3, naive_convolve_full

# Gx forms of all eight registered operators with their |coefficient| sums
EXPECTED_KERNELS = {
    "sobel": ([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], 8),
    "prewitt": ([[-1, 0, 1], [-1, 0, 1], [-1, 0, 1]], 6),
    "kirsch": ([[-3, -3, 5], [-3, 0, 5], [-3, -3, 5]], 30),
    "kitchen": ([[-2, 0, 2], [-3, 0, 3], [-2, 0, 2]], 14),
    "kayyali": ([[-6, 0, 6], [0, 0, 0], [6, 0, -6]], 24),
    "scharr": ([[-3, 0, 3], [-10, 0, 10], [-3, 0, 3]], 32),
    "kroon": ([[-17, 0, 17], [-61, 0, 61], [-17, 0, 17]], 190),
    "orhei": ([[-1, 0, 1], [-4, 0, 4], [-1, 0, 1]], 12),
}

SYMMETRIC_PAIR_OPS = ("sobel", "prewitt", "scharr", "kroon", "orhei", "kitchen")


def vertical_step(height=8, width=8, step_at=2, low=0, high=255) -> GrayImage:
    arr = np.full((height, width), low, dtype=np.int64)
    arr[:, step_at:] = high
    return GrayImage(arr)


class TestKernels:
    def test_registry_is_complete(self):
        assert set(OPERATORS) == set(EXPECTED_KERNELS)

    @pytest.mark.parametrize("name", sorted(EXPECTED_KERNELS))
    def test_coefficients_and_norm(self, name):
        coeffs, norm = EXPECTED_KERNELS[name]
        k = kernel_for(name)
        assert np.array_equal(k.coefficients, coeffs)
        assert k.weight_norm == norm

    def test_case_insensitive(self):
        assert kernel_for("Sobel").name == "sobel"

    def test_unknown_operator(self):
        with pytest.raises(UnknownOperatorError, match="gibberish"):
            kernel_for("gibberish")


class TestConvolve3x3:
    def test_zero_sum_kernel_on_constant(self):
        img = GrayImage(np.full((6, 7), 123, dtype=np.uint8))
        for name in OPERATORS:
            assert not convolve3x3(img, kernel_for(name)).any()

    def test_center_one_is_identity(self):
        rng = np.random.default_rng(1)
        img = random_gray(rng, 5, 9)
        ident = [[0, 0, 0], [0, 1, 0], [0, 0, 0]]
        assert np.array_equal(convolve3x3(img, ident), img.pixels)

    def test_vertical_step_sobel(self):
        # columns 0..1 at 0, columns 2.. at 255: both pixels adjacent to
        # the step see one full 255 column through the (1, 2, 1) side
        out = convolve3x3(vertical_step(), kernel_for("sobel"))
        assert (out[:, 1] == 1020).all()
        assert (out[:, 2] == 1020).all()
        assert (out[:, 4:] == 0).all()

    def test_image_too_small(self):
        with pytest.raises(ImageTooSmallError):
            convolve3x3(GrayImage(np.zeros((2, 5), dtype=np.uint8)), kernel_for("sobel"))

    def test_bad_kernel_shape(self):
        with pytest.raises(ValueError, match="3x3"):
            convolve3x3(vertical_step(), np.zeros((2, 2)))

    def test_matches_naive_reference(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            img = random_gray(rng, 16, 16)
            for name in OPERATORS:
                k = kernel_for(name)
                assert np.array_equal(convolve3x3(img, k), naive_convolve3x3(img.pixels, k.coefficients))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.sampled_from(sorted(OPERATORS)))
    def test_matches_naive_reference_property(self, seed, name):
        rng = np.random.default_rng(seed)
        img = random_gray(rng, int(rng.integers(3, 9)), int(rng.integers(3, 9)))
        k = kernel_for(name)
        assert np.array_equal(convolve3x3(img, k), naive_convolve3x3(img.pixels, k.coefficients))


class TestGaussianKernel:
    def test_size_three(self):
        k = gaussian_kernel(3)
        assert k.sigma == pytest.approx(0.8)
        assert k.weights.shape == (3, 3)
        assert k.weights.sum() == pytest.approx(1.0, abs=1e-9)

    def test_size_nine_sigma(self):
        assert gaussian_kernel(9).sigma == pytest.approx(1.7)

    @pytest.mark.parametrize("size", [4, 2, 1, 17, 0, -3])
    def test_invalid_sizes(self, size):
        with pytest.raises(ValueError, match="invalid Gaussian size"):
            gaussian_kernel(size)

    @pytest.mark.parametrize("size", [3, 5, 7, 9, 11, 13, 15])
    def test_normalized_and_symmetric(self, size):
        k = gaussian_kernel(size)
        assert k.weights.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.allclose(k.weights, np.flip(k.weights, axis=0))
        assert np.allclose(k.weights, np.flip(k.weights, axis=1))
        assert (k.weights >= 0).all()
        assert np.allclose(k.weights, np.outer(k.axis_weights, k.axis_weights))


class TestSmooth:
    def test_uniform_stays_uniform(self):
        img = GrayImage(np.full((9, 9), 77, dtype=np.uint8))
        assert (smooth(img, gaussian_kernel(3)).pixels == 77).all()

    def test_impulse_response_is_kernel(self):
        arr = np.zeros((9, 9), dtype=np.int64)
        arr[4, 4] = 255
        k = gaussian_kernel(3)
        out = smooth(GrayImage(arr), k).pixels
        expected = np.clip(np.floor(255.0 * k.weights + 0.5), 0, 255)
        assert np.array_equal(out[3:6, 3:6], expected)
        assert out[0, 0] == 0

    def test_matches_dense_reference(self):
        rng = np.random.default_rng(4)
        for size in (3, 5):
            k = gaussian_kernel(size)
            img = random_gray(rng, 10, 10)
            ref = np.clip(np.floor(naive_convolve_full(img.pixels, k.weights) + 0.5), 0, 255)
            assert np.abs(smooth(img, k).pixels.astype(float) - ref).max() <= 1

    def test_twice_equals_composed_kernel_on_interior(self):
        # replicate-padding a smoothed border is not the composed-kernel
        # border, so the +-1 equivalence is an interior statement
        rng = np.random.default_rng(5)
        k = gaussian_kernel(3)
        composed = compose_kernels(k.weights, k.weights)
        for _ in range(10):
            img = random_gray(rng, 12, 12)
            twice = smooth(smooth(img, k), k).pixels.astype(float)
            ref = np.clip(np.floor(naive_convolve_full(img.pixels, composed) + 0.5), 0, 255)
            assert np.abs(twice - ref)[2:-2, 2:-2].max() <= 1

    def test_image_too_small(self):
        with pytest.raises(ImageTooSmallError):
            smooth(GrayImage(np.zeros((4, 9), dtype=np.uint8)), gaussian_kernel(5))


class TestGradientField:
    def test_constant_image_is_flat(self):
        img = GrayImage(np.full((6, 6), 50, dtype=np.uint8))
        for name in OPERATORS:
            assert not gradient_field(img, name).magnitude.any()

    def test_combine_magnitude_modes(self):
        gx = np.array([[3.0]])
        gy = np.array([[4.0]])
        assert combine_magnitude(gx, gy, "approx")[0, 0] == 7.0
        assert combine_magnitude(gx, gy, "exact")[0, 0] == 5.0
        with pytest.raises(ValueError, match="magnitude mode"):
            combine_magnitude(gx, gy, "fast")

    def test_vertical_step_orientation(self):
        field = gradient_field(vertical_step(), "sobel")
        assert field.vertical[:, 1:3].all()
        assert (field.magnitude[:, 1:3] == 1020.0).all()

    def test_unknown_operator(self):
        with pytest.raises(UnknownOperatorError):
            gradient_field(vertical_step(), "nope")

    @pytest.mark.parametrize("name", sorted(OPERATORS))
    def test_approx_dominates_exact(self, name):
        rng = np.random.default_rng(6)
        img = random_gray(rng, 12, 12)
        approx = gradient_field(img, name, "approx").magnitude
        exact = gradient_field(img, name, "exact").magnitude
        assert (approx >= exact - 1e-12).all()
        assert (exact >= 0).all()

    def test_orientation_matches_components(self):
        rng = np.random.default_rng(7)
        for name in OPERATORS:
            img = random_gray(rng, 10, 10)
            f = gradient_field(img, name)
            assert np.array_equal(f.vertical, np.abs(f.gx) >= np.abs(f.gy))
            assert np.allclose(f.magnitude, np.abs(f.gx) + np.abs(f.gy))

    @pytest.mark.parametrize("name", SYMMETRIC_PAIR_OPS)
    def test_transpose_swaps_axes(self, name):
        rng = np.random.default_rng(8)
        img = random_gray(rng, 9, 14)
        f = gradient_field(img, name)
        ft = gradient_field(GrayImage(img.pixels.T), name)
        assert np.allclose(np.abs(ft.gx), np.abs(f.gy.T))
        assert np.allclose(np.abs(ft.gy), np.abs(f.gx.T))
        distinct = ~np.isclose(np.abs(f.gx), np.abs(f.gy))
        assert np.array_equal(ft.vertical.T[distinct], ~f.vertical[distinct])

    def test_ramp_response_is_operator_independent(self):
        # after weight-norm rescaling every operator reports the same
        # magnitude on a linear ramp, which is what makes one threshold
        # scale work for all of them
        ramp = GrayImage(np.tile(np.arange(0, 96, 4, dtype=np.int64), (10, 1)))
        interior = (slice(1, -1), slice(1, -1))
        reference = gradient_field(ramp, "sobel").magnitude[interior]
        for name in ("prewitt", "scharr", "kroon", "orhei", "kitchen"):
            assert np.allclose(gradient_field(ramp, name).magnitude[interior], reference)

    def test_magnitude_dump(self):
        flat = gradient_field(GrayImage(np.full((5, 5), 9, dtype=np.uint8)), "sobel")
        assert not magnitude_to_gray(flat).pixels.any()
        stepped = gradient_field(vertical_step(), "sobel")
        dumped = magnitude_to_gray(stepped).pixels
        assert dumped.max() == 255
