"""Self-contained radix-2 FFT.

Iterative decimation-in-time Cooley-Tukey over power-of-two lengths:
bit-reversal permutation first, then log2(L) butterfly stages, each stage
vectorized across all blocks at once so the Python-level loop is only
log2(L) deep. Forward transform is unnormalized,
X(k) = sum_j x(j) exp(-2*pi*i*j*k / L); the inverse carries the 1/L factor.
"""

from __future__ import annotations

import numpy as np

from .errors import NotPowerOfTwo


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def bit_reverse_indices(n: int) -> np.ndarray:
    """Permutation sending index i to its bit reversal in log2(n) bits."""
    if not is_power_of_two(n):
        raise NotPowerOfTwo(f"length {n} is not a power of two")
    bits = n.bit_length() - 1
    rev = np.zeros(n, dtype=np.intp)
    for b in range(bits):
        rev |= ((np.arange(n) >> b) & 1) << (bits - 1 - b)
    return rev


def _radix2(x: np.ndarray, sign: float) -> np.ndarray:
    length = x.size
    if not is_power_of_two(length):
        raise NotPowerOfTwo(f"length {length} is not a power of two")
    out = np.asarray(x, dtype=np.complex128)[bit_reverse_indices(length)]
    span = 2
    while span <= length:
        half = span // 2
        twiddle = np.exp(sign * 2j * np.pi * np.arange(half) / span)
        blocks = out.reshape(-1, span)
        upper = blocks[:, :half].copy()
        lower = blocks[:, half:] * twiddle
        blocks[:, :half] = upper + lower
        blocks[:, half:] = upper - lower
        span <<= 1
    return out


def fft_forward(x: np.ndarray) -> np.ndarray:
    """Unnormalized forward DFT of a power-of-two-length array."""
    return _radix2(x, -1.0)


def fft_inverse(x: np.ndarray) -> np.ndarray:
    """Inverse DFT with 1/L normalization: fft_inverse(fft_forward(x)) == x."""
    out = _radix2(x, +1.0)
    out /= out.size
    return out
