"""Fourier-transform circuits and phase-encoded register states.

`qft_circuit` synthesizes the transform mapping |x> to
2^{-n/2} * sum_y exp(2*pi*i*x*y / 2^n) |y> out of Hadamard, controlled-phase
and bit-reversal swap gates; `dft_matrix` evaluates the same unitary directly
from that formula and serves as the independent oracle. `phase_encode` builds
the register state carrying a phase fraction gamma, which the inverse
transform concentrates near basis index round(gamma * 2^n).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OracleScaleExceeded, QubitCountExceeded
from .statevector import (
    ABSOLUTE_MAX_QUBITS,
    DEFAULT_MAX_QUBITS,
    ORACLE_MAX_QUBITS,
    Circuit,
    GateOp,
    StateVector,
    probabilities,
)


@dataclass(frozen=True)
class QftSpec:
    """Synthesis request: register size, direction, and swap policy.

    With `include_bit_reversal_swaps` the circuit's unitary IS the transform
    matrix; without, outputs appear in bit-reversed order (useful for gate
    count studies).
    """

    num_qubits: int
    inverse: bool = False
    include_bit_reversal_swaps: bool = True

    def __post_init__(self):
        # circuits are cheap; the memory guard lives on state construction
        if not 1 <= self.num_qubits <= ABSOLUTE_MAX_QUBITS:
            raise QubitCountExceeded(
                f"qubit count {self.num_qubits} outside [1, {ABSOLUTE_MAX_QUBITS}]"
            )


@dataclass(frozen=True)
class PhaseSample:
    """A phase fraction in [0, 1), as produced by whitening."""

    gamma: float

    def __post_init__(self):
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma must lie in [0, 1), got {self.gamma}")


def qft_circuit(spec: QftSpec | int) -> Circuit:
    """Fourier-transform circuit for a QftSpec (an int means forward, swaps on).

    The forward ladder applies, for each qubit j from the top, a Hadamard and
    then controlled phases of order m = k - j + 1 from every lower qubit k;
    the swap layer restores natural bit order. The inverse is the exact
    reversal with conjugated phases, so both directions use n Hadamards,
    n(n-1)/2 controlled phases of orders 2..n, and floor(n/2) swaps.
    """
    if isinstance(spec, int):
        spec = QftSpec(spec)
    n = spec.num_qubits
    ladder: list[GateOp] = []
    for j in range(n):
        ladder.append(GateOp.hadamard(j))
        for k in range(j + 1, n):
            ladder.append(
                GateOp.controlled_phase(k, j, order=k - j + 1, dagger=spec.inverse)
            )
    swaps = [GateOp.swap(j, n - 1 - j) for j in range(n // 2)]
    if spec.inverse:
        gates = swaps + ladder[::-1] if spec.include_bit_reversal_swaps else ladder[::-1]
    else:
        gates = ladder + swaps if spec.include_bit_reversal_swaps else ladder
    return Circuit(n, tuple(gates))


def inverse_qft_circuit(n: int) -> Circuit:
    return qft_circuit(QftSpec(n, inverse=True))


def dft_matrix(n: int) -> np.ndarray:
    """Unitary DFT matrix: entry (y, x) = 2^{-n/2} exp(2*pi*i*x*y / 2^n)."""
    if n > ORACLE_MAX_QUBITS:
        raise OracleScaleExceeded(
            f"dft_matrix limited to {ORACLE_MAX_QUBITS} qubits, got {n}"
        )
    if n < 1:
        raise QubitCountExceeded(f"qubit count {n} must be >= 1")
    dim = 1 << n
    idx = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(idx, idx) / dim) / np.sqrt(dim)


def phase_encode(
    gamma: PhaseSample | float, n: int, max_qubits: int = DEFAULT_MAX_QUBITS
) -> StateVector:
    """Register state 2^{-n/2} * sum_x exp(2*pi*i*gamma*x) |x>.

    For dyadic gamma = k / 2^n this equals the forward transform of |k>, so
    the inverse transform recovers |k> exactly.
    """
    if isinstance(gamma, PhaseSample):
        gamma = gamma.gamma
    elif not 0.0 <= gamma < 1.0:
        raise ValueError(f"gamma must lie in [0, 1), got {gamma}")
    if not 1 <= n <= max_qubits:
        raise QubitCountExceeded(f"qubit count {n} outside [1, {max_qubits}]")
    amps = phase_encode_block(np.array([gamma]), n)[0]
    return StateVector(n, amps)


def phase_encode_block(gammas: np.ndarray, n: int) -> np.ndarray:
    """Amplitude rows for many gammas at once, shape (len(gammas), 2**n)."""
    dim = 1 << n
    x = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(gammas, x)) / np.sqrt(dim)


def peak_readout(state: StateVector) -> tuple[int, float]:
    """Most likely outcome and its probability; ties go to the smaller index."""
    probs = probabilities(state)
    outcome = int(np.argmax(probs))  # argmax returns the first maximum
    return outcome, float(probs[outcome])


def concentration_sweep(
    n: int, grid_points: int, chunk_rows: int | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inverse-transform concentration over the grid gamma = j / grid_points.

    Encodes every grid phase, runs each through the inverse transform circuit
    (batched over rows of amplitudes, chunked to bound memory), and returns
    (gammas, argmax indices, peak probabilities). This is the empirical probe
    of how sharply a randomized phase concentrates onto one basis state.
    """
    from .statevector import _apply_gate_inplace  # batched kernel, same layout

    if grid_points < 2:
        raise ValueError(f"grid must have at least 2 points, got {grid_points}")
    circuit = qft_circuit(QftSpec(n, inverse=True))
    gammas = np.arange(grid_points) / grid_points
    if chunk_rows is None:
        chunk_rows = max(1, (1 << 21) >> n)  # ~32 MB of amplitudes per chunk
    argmax = np.empty(grid_points, dtype=np.int64)
    peaks = np.empty(grid_points, dtype=np.float64)
    for start in range(0, grid_points, chunk_rows):
        block = phase_encode_block(gammas[start : start + chunk_rows], n)
        for gate in circuit.gates:
            _apply_gate_inplace(block, n, gate)
        probs = block.real * block.real + block.imag * block.imag
        argmax[start : start + chunk_rows] = probs.argmax(axis=1)
        peaks[start : start + chunk_rows] = probs.max(axis=1)
    return gammas, argmax, peaks
