"""Conventional-acquisition baseline and bookkeeping.

Synthesizes free-induction-decay traces from spectral lines plus complex
Gaussian noise, transforms them with the in-repo radix-2 FFT, averages
repeated shots (noise falls as sqrt(N)), and measures SNR as spectral peak
magnitude over the RMS of a signal-free window. Also carries the spin-budget
decade arithmetic and the register-size enhancement report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import fourier, rng
from .errors import (
    EmptyInput,
    EmptyWindow,
    LengthMismatch,
    LineAboveNyquist,
    NotPowerOfTwo,
    OutOfRange,
    WindowOverlap,
    ZeroNoiseFloor,
)


@dataclass
class FidTrace:
    """Complex time-domain acquisition: samples[j] at t = j * dwell_s."""

    samples: np.ndarray = field(repr=False)
    dwell_s: float = 1.0

    def __post_init__(self):
        if not fourier.is_power_of_two(len(self.samples)) or len(self.samples) < 2:
            raise NotPowerOfTwo(f"trace length {len(self.samples)} is not a power of two >= 2")
        if self.dwell_s <= 0:
            raise OutOfRange(f"dwell must be > 0, got {self.dwell_s}")

    @property
    def nyquist_hz(self) -> float:
        return 0.5 / self.dwell_s


@dataclass
class Spectrum:
    """Discrete transform of a trace; bin k sits at k / (L * dwell) Hz."""

    bins: np.ndarray = field(repr=False)
    bin_width_hz: float = 1.0


@dataclass(frozen=True)
class SpectralLine:
    """One resonance: frequency, amplitude, decay constant (inf = no decay)."""

    freq_hz: float
    amp: float = 1.0
    t2_s: float = math.inf

    def __post_init__(self):
        if self.amp < 0:
            raise OutOfRange(f"amplitude must be >= 0, got {self.amp}")
        if self.t2_s <= 0:
            raise OutOfRange(f"T2 must be > 0, got {self.t2_s}")


@dataclass(frozen=True)
class SnrReport:
    peak_mag: float
    noise_rms: float
    snr: float
    n_averages: int = 1

    def to_json_dict(self) -> dict:
        return {
            "peak_mag": self.peak_mag,
            "noise_rms": self.noise_rms,
            "snr": self.snr,
            "n_averages": self.n_averages,
        }


def synth_fid(
    lines: list[SpectralLine],
    length: int,
    dwell_s: float,
    noise_sigma: float = 0.0,
    seed: int = 0,
) -> FidTrace:
    """Sum of decaying phasors plus complex Gaussian noise.

    s(t_j) = sum_l A_l exp(2*pi*i*nu_l*t_j) exp(-t_j / T2_l) + noise, with
    independent Gaussian noise of std `noise_sigma` on each of the real and
    imaginary parts, drawn from the counter-based stream of `seed`.
    """
    if not fourier.is_power_of_two(length) or length < 2:
        raise NotPowerOfTwo(f"trace length {length} is not a power of two >= 2")
    if noise_sigma < 0:
        raise OutOfRange(f"noise sigma must be >= 0, got {noise_sigma}")
    nyquist = 0.5 / dwell_s
    t = np.arange(length) * dwell_s
    samples = np.zeros(length, dtype=np.complex128)
    for line in lines:
        if abs(line.freq_hz) >= nyquist:
            raise LineAboveNyquist(
                f"line at {line.freq_hz} Hz is not below Nyquist {nyquist} Hz"
            )
        decay = np.exp(-t / line.t2_s) if math.isfinite(line.t2_s) else 1.0
        samples += line.amp * decay * np.exp(2j * np.pi * line.freq_hz * t)
    if noise_sigma > 0:
        noise = rng.normals(seed, 2 * length)
        samples += noise_sigma * (noise[:length] + 1j * noise[length:])
    return FidTrace(samples, dwell_s)


def fft(trace: FidTrace) -> Spectrum:
    """Forward transform (unnormalized) into the frequency domain."""
    length = len(trace.samples)
    return Spectrum(fourier.fft_forward(trace.samples), 1.0 / (length * trace.dwell_s))


def ifft(spectrum: Spectrum) -> FidTrace:
    """Inverse of `fft`, recovering dwell from the bin width."""
    length = len(spectrum.bins)
    dwell = 1.0 / (length * spectrum.bin_width_hz)
    return FidTrace(fourier.fft_inverse(spectrum.bins), dwell)


def cat_average(traces: list[FidTrace]) -> FidTrace:
    """Pointwise arithmetic mean of repeated acquisitions.

    Accumulates in extended precision so the sum is exact for up to ~2000
    shots; in particular, averaging identical traces reproduces them bit for
    bit instead of drifting by an ulp from double rounding.
    """
    if not traces:
        raise EmptyInput("cat_average needs at least one trace")
    first = traces[0]
    for trace in traces[1:]:
        if len(trace.samples) != len(first.samples) or trace.dwell_s != first.dwell_s:
            raise LengthMismatch("all traces must share length and dwell")
    total = np.zeros(len(first.samples), dtype=np.clongdouble)
    for trace in traces:
        total += trace.samples
    mean = (total / len(traces)).astype(np.complex128)
    return FidTrace(mean, first.dwell_s)


def estimate_snr(
    spectrum: Spectrum,
    peak_window: tuple[int, int],
    noise_window: tuple[int, int],
    n_averages: int = 1,
) -> SnrReport:
    """Peak magnitude over a window divided by noise RMS over another.

    Windows are half-open bin ranges [start, stop); they must be non-empty,
    inside the spectrum, and disjoint.
    """
    mags = np.abs(spectrum.bins)
    for name, (start, stop) in (("peak", peak_window), ("noise", noise_window)):
        if stop <= start:
            raise EmptyWindow(f"{name} window [{start}, {stop}) is empty")
        if start < 0 or stop > len(mags):
            raise OutOfRange(f"{name} window [{start}, {stop}) outside spectrum")
    if peak_window[0] < noise_window[1] and noise_window[0] < peak_window[1]:
        raise WindowOverlap(f"windows {peak_window} and {noise_window} overlap")
    peak_mag = float(mags[peak_window[0]:peak_window[1]].max())
    noise_bins = mags[noise_window[0]:noise_window[1]]
    noise_rms = float(np.sqrt(np.mean(noise_bins * noise_bins)))
    if noise_rms < 1e-300:
        raise ZeroNoiseFloor("noise window RMS is zero")
    return SnrReport(peak_mag, noise_rms, peak_mag / noise_rms, n_averages)


# --- spin budget and enhancement bookkeeping --------------------------------

@dataclass(frozen=True)
class SpinBudget:
    """Ordered decade ledger; the first stage is the source population."""

    stages: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if not self.stages:
            raise EmptyInput("budget needs at least one stage")


@dataclass(frozen=True)
class BudgetStage:
    label: str
    exponent: int  # cumulative decade exponent at this stage
    population: int | float  # exact int for exponent >= 0


DEFAULT_BUDGET = SpinBudget(
    stages=(
        ("avogadro", 23),
        ("sample_tube", -3),
        ("boltzmann", -6),
        ("solute", -3),
    )
)


def spin_budget_chain(budget: SpinBudget = DEFAULT_BUDGET) -> list[BudgetStage]:
    """Running product of decades: stage populations 10^23 -> 10^20 -> ...

    Populations are exact integers whenever the cumulative exponent is
    non-negative (Python bigints, so 10**23 really is 10**23).
    """
    chain: list[BudgetStage] = []
    exponent = 0
    for label, decade in budget.stages:
        exponent += decade
        population = 10**exponent if exponent >= 0 else 10.0**exponent
        chain.append(BudgetStage(label, exponent, population))
    return chain


def enhancement_report(n_register_spins: int) -> dict:
    """Register-size bookkeeping for the claimed signal enhancement.

    Reports the exact register state count 2^n and, at n = 14, echoes the
    claimed factor-of-10 enhancement together with a note that the claim's
    own spin-count arithmetic (2^14 -> 10^12) does not follow from
    2^14 = 16384. No derived physical enhancement is asserted.
    """
    if not 1 <= n_register_spins <= 64:
        raise OutOfRange(f"register spins {n_register_spins} outside [1, 64]")
    report = {
        "n_register_spins": n_register_spins,
        "register_states": 2**n_register_spins,
        "paper_claimed_factor_at_14": 10.0 if n_register_spins == 14 else None,
        "notes": [
            "register_states grows exactly as 2^n",
            "claimed mapping 2^14 -> 10^12 spins is internally inconsistent "
            "(2^14 = 16384); no enhancement formula is derived here",
        ],
    }
    return report


# --- Monte Carlo averaging experiment ----------------------------------------

DEFAULT_CAT_LENGTH = 256
DEFAULT_CAT_DWELL_S = 1e-3
DEFAULT_CAT_LINE = SpectralLine(freq_hz=125.0, amp=1.0, t2_s=math.inf)
DEFAULT_CAT_NOISE_SIGMA = 1.0
# Line at 125 Hz lands in bin 32 of 256; windows stay clear of it.
DEFAULT_PEAK_WINDOW = (30, 35)
DEFAULT_NOISE_WINDOW = (128, 224)


def cat_snr(
    n_shots: int,
    seed: int,
    line: SpectralLine = DEFAULT_CAT_LINE,
    noise_sigma: float = DEFAULT_CAT_NOISE_SIGMA,
    length: int = DEFAULT_CAT_LENGTH,
    dwell_s: float = DEFAULT_CAT_DWELL_S,
) -> float:
    """SNR of the average of n_shots noisy acquisitions of one line.

    Shot j draws its noise from the derived stream mix(seed, j), so any
    (seed, n_shots) pair is reproducible and shots never share noise.
    """
    traces = [
        synth_fid([line], length, dwell_s, noise_sigma, seed=rng.mix(seed, shot))
        for shot in range(n_shots)
    ]
    averaged = cat_average(traces)
    report = estimate_snr(
        fft(averaged), DEFAULT_PEAK_WINDOW, DEFAULT_NOISE_WINDOW, n_averages=n_shots
    )
    return report.snr


def cat_experiment(
    n_list: list[int],
    n_seeds: int,
    master_seed: int = 0,
    line: SpectralLine = DEFAULT_CAT_LINE,
    noise_sigma: float = DEFAULT_CAT_NOISE_SIGMA,
    length: int = DEFAULT_CAT_LENGTH,
    dwell_s: float = DEFAULT_CAT_DWELL_S,
) -> list[tuple[int, float, float]]:
    """Mean and std of SNR at each averaging count N over n_seeds repeats."""
    rows = []
    for n_shots in n_list:
        level = rng.mix(master_seed, n_shots)  # two-level derivation: no reuse across N
        snrs = np.array(
            [
                cat_snr(
                    n_shots,
                    seed=rng.mix(level, i),
                    line=line,
                    noise_sigma=noise_sigma,
                    length=length,
                    dwell_s=dwell_s,
                )
                for i in range(n_seeds)
            ]
        )
        rows.append((n_shots, float(snrs.mean()), float(snrs.std())))
    return rows


def loglog_slope(rows: list[tuple[int, float, float]]) -> float | None:
    """OLS slope of log(mean snr) against log(N); None below two points."""
    if len(rows) < 2:
        return None
    x = np.log([n for n, _, _ in rows])
    y = np.log([mean for _, mean, _ in rows])
    x = x - x.mean()
    return float((x @ (y - y.mean())) / (x @ x))


def spectrum_to_csv(spectrum: Spectrum) -> str:
    """RFC-4180-style CSV: bin_index, freq_Hz, re, im, magnitude."""
    out = ["bin_index,freq_Hz,re,im,magnitude"]
    for k, value in enumerate(spectrum.bins):
        freq = k * spectrum.bin_width_hz
        out.append(
            f"{k},{freq:.17g},{value.real:.17g},{value.imag:.17g},{abs(value):.17g}"
        )
    return "\n".join(out) + "\n"
