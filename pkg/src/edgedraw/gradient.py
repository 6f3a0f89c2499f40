"""First-order 3x3 derivative operators, Gaussian smoothing, gradient fields.

Each registered operator is stored in its x-derivative (Gx) form; the
y-derivative kernel is the transpose.  Gradient magnitudes are rescaled
by sum-of-absolute-coefficients relative to Sobel so every operator
shares one threshold scale: a unit-slope intensity ramp produces the
same normalized response under all of them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .raster import GrayImage

__all__ = [
    "UnknownOperatorError",
    "ImageTooSmallError",
    "Kernel3x3",
    "GaussianKernel",
    "GradientField",
    "OPERATORS",
    "kernel_for",
    "convolve3x3",
    "gaussian_kernel",
    "smooth",
    "combine_magnitude",
    "gradient_field",
    "magnitude_to_gray",
]


class UnknownOperatorError(ValueError):
    """Requested operator name is not registered."""


class ImageTooSmallError(ValueError):
    """Image is smaller than the kernel footprint."""


_COEFFS = {
    "sobel": [[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]],
    "prewitt": [[-1, 0, 1], [-1, 0, 1], [-1, 0, 1]],
    "kirsch": [[-3, -3, 5], [-3, 0, 5], [-3, -3, 5]],
    "kitchen": [[-2, 0, 2], [-3, 0, 3], [-2, 0, 2]],
    "kayyali": [[-6, 0, 6], [0, 0, 0], [6, 0, -6]],
    "scharr": [[-3, 0, 3], [-10, 0, 10], [-3, 0, 3]],
    "kroon": [[-17, 0, 17], [-61, 0, 61], [-17, 0, 17]],
    "orhei": [[-1, 0, 1], [-4, 0, 4], [-1, 0, 1]],
}

OPERATORS: tuple[str, ...] = tuple(_COEFFS)


@dataclass(frozen=True)
class Kernel3x3:
    """A named Gx coefficient grid plus its sum of absolute coefficients."""

    name: str
    coefficients: np.ndarray  # (3, 3) int64, read-only
    weight_norm: int

    def __post_init__(self):
        arr = np.asarray(self.coefficients, dtype=np.int64)
        arr.flags.writeable = False
        object.__setattr__(self, "coefficients", arr)


def kernel_for(name: str) -> Kernel3x3:
    """Look up a registered operator by name (case-insensitive)."""
    key = str(name).lower()
    try:
        coeffs = np.array(_COEFFS[key], dtype=np.int64)
    except KeyError:
        raise UnknownOperatorError(
            f"unknown operator {name!r}; choose from {', '.join(OPERATORS)}"
        ) from None
    return Kernel3x3(key, coeffs, int(np.abs(coeffs).sum()))


def convolve3x3(img: GrayImage, kernel) -> np.ndarray:
    """Correlate a 3x3 integer kernel over the image, replicating borders.

    ``kernel`` may be a Kernel3x3 or any 3x3 array of integers.  The
    response is the plain coefficient-times-intensity sum per pixel,
    returned signed and unclamped as an int64 array, so results are
    exact for any 8-bit input.
    """
    coeffs = kernel.coefficients if isinstance(kernel, Kernel3x3) else np.asarray(kernel)
    if coeffs.shape != (3, 3):
        raise ValueError(f"kernel must be 3x3, got {coeffs.shape}")
    px = img.pixels
    if px.shape[0] < 3 or px.shape[1] < 3:
        raise ImageTooSmallError(f"need at least 3x3 pixels, got {px.shape[1]}x{px.shape[0]}")
    padded = np.pad(px.astype(np.int64), 1, mode="edge")
    windows = sliding_window_view(padded, (3, 3))
    return np.einsum("ijkl,kl->ij", windows, coeffs.astype(np.int64))


@dataclass(frozen=True)
class GaussianKernel:
    """Normalized 2-D Gaussian; ``weights`` is the outer product of ``axis_weights``."""

    size: int
    sigma: float
    weights: np.ndarray  # (size, size), sums to 1
    axis_weights: np.ndarray  # (size,), 1-D separable factor

    def __post_init__(self):
        for field in ("weights", "axis_weights"):
            arr = np.asarray(getattr(self, field), dtype=np.float64)
            arr.flags.writeable = False
            object.__setattr__(self, field, arr)


def gaussian_kernel(size: int) -> GaussianKernel:
    """Build the smoothing kernel for an odd ``size`` in [3, 15].

    Sigma follows the usual size rule 0.3 * ((size - 1) / 2 - 1) + 0.8,
    so size 3 gives 0.8 and size 9 gives 1.7.
    """
    if size % 2 == 0 or not 3 <= size <= 15:
        raise ValueError(f"invalid Gaussian size {size}: need an odd value in [3, 15]")
    sigma = 0.3 * ((size - 1) / 2 - 1) + 0.8
    offsets = np.arange(size, dtype=np.float64) - (size - 1) / 2
    axis = np.exp(-(offsets**2) / (2.0 * sigma * sigma))
    axis /= axis.sum()
    return GaussianKernel(size, sigma, np.outer(axis, axis), axis)


def smooth(img: GrayImage, kernel: GaussianKernel) -> GrayImage:
    """Convolve with the Gaussian (replicated borders), round, clamp to [0, 255]."""
    h, w = img.pixels.shape
    if h < kernel.size or w < kernel.size:
        raise ImageTooSmallError(
            f"image {w}x{h} is smaller than the {kernel.size}x{kernel.size} kernel"
        )
    r = kernel.size // 2
    acc = img.pixels.astype(np.float64)
    acc = sliding_window_view(np.pad(acc, ((r, r), (0, 0)), mode="edge"), kernel.size, axis=0)
    acc = acc @ kernel.axis_weights
    acc = sliding_window_view(np.pad(acc, ((0, 0), (r, r)), mode="edge"), kernel.size, axis=1)
    acc = acc @ kernel.axis_weights
    return GrayImage(np.clip(np.floor(acc + 0.5), 0, 255).astype(np.uint8))


@dataclass(frozen=True)
class GradientField:
    """Per-pixel operator responses, magnitude, and binary edge orientation.

    ``gx``/``gy`` are already rescaled to the Sobel coefficient scale.
    ``vertical`` is True exactly where |gx| >= |gy| (a vertical edge:
    intensity changes along x).
    """

    gx: np.ndarray
    gy: np.ndarray
    magnitude: np.ndarray
    vertical: np.ndarray

    def __post_init__(self):
        for field in ("gx", "gy", "magnitude", "vertical"):
            arr = np.asarray(getattr(self, field))
            arr.flags.writeable = False
            object.__setattr__(self, field, arr)

    @property
    def width(self) -> int:
        return self.magnitude.shape[1]

    @property
    def height(self) -> int:
        return self.magnitude.shape[0]


def combine_magnitude(gx: np.ndarray, gy: np.ndarray, mode: str = "approx") -> np.ndarray:
    """|gx| + |gy| in ``approx`` mode, Euclidean norm in ``exact`` mode."""
    if mode == "approx":
        return np.abs(gx) + np.abs(gy)
    if mode == "exact":
        return np.hypot(gx, gy)
    raise ValueError(f"magnitude mode must be 'approx' or 'exact', got {mode!r}")


def gradient_field(img: GrayImage, operator: str, magnitude_mode: str = "approx") -> GradientField:
    """Compute Gx, Gy, magnitude and orientation for one operator.

    Gy uses the transposed kernel.  Both responses are scaled by
    weight_norm(sobel) / weight_norm(operator) before combining, which
    puts every operator on the Sobel threshold scale.
    """
    k = kernel_for(operator)
    scale = 8.0 / k.weight_norm  # sum of |sobel| coefficients is 8
    gx = convolve3x3(img, k.coefficients) * scale
    gy = convolve3x3(img, k.coefficients.T) * scale
    magnitude = combine_magnitude(gx, gy, magnitude_mode)
    return GradientField(gx, gy, magnitude, np.abs(gx) >= np.abs(gy))


def magnitude_to_gray(field: GradientField) -> GrayImage:
    """Linearly rescale the magnitude to [0, 255] for visual inspection."""
    m = field.magnitude
    peak = float(m.max())
    if peak <= 0.0:
        return GrayImage(np.zeros(m.shape, dtype=np.uint8))
    return GrayImage(np.floor(m / peak * 255.0 + 0.5).astype(np.uint8))
