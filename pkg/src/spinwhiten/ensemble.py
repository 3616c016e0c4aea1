"""Classical Monte Carlo model of the target spins.

An ensemble holds M spins as flat arrays (orientation flag + transverse
phase). A 90-degree pulse tips longitudinal spins into the transverse plane
at phase 0; gradient whitening then overwrites each transverse phase with
2*pi*gamma_k, gamma_k drawn per spin from the counter-based stream of the
ensemble seed. The receiver observable is the coherent mean of unit phasors,
which whitening drives to O(1/sqrt(M)) — the reason a whitened ensemble
yields no conventional signal.

`dephase` is the density-matrix face of the same physics: averaging the
random phase factor over [0, 1) kills the off-diagonal elements of a qubit
state while leaving populations untouched.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from . import rng
from .errors import NonPositiveInput, NotTransverse

HBAR = 1.054571817e-34  # J*s
KB = 1.380649e-23  # J/K

TWO_PI = 2.0 * np.pi


class Orientation(enum.Enum):
    LONGITUDINAL = "longitudinal"
    TRANSVERSE = "transverse"


@dataclass(frozen=True)
class SpinState:
    """Scalar view of one spin; phase is meaningful only when transverse."""

    orientation: Orientation
    phase: float = 0.0


@dataclass
class SpinEnsemble:
    """M classical spins, stored as arrays; a value, never shared mutably.

    `seed` identifies the whitening stream: spin k receives
    gamma_k = uniform01(mix(seed, k)), independent of every other spin.
    """

    transverse: np.ndarray = field(repr=False)  # bool, shape (M,)
    phase: np.ndarray = field(repr=False)  # float64 radians in [0, 2*pi)
    seed: int = 0

    def __post_init__(self):
        if self.transverse.shape != self.phase.shape or self.transverse.ndim != 1:
            raise ValueError("orientation and phase arrays must be 1-D and equal length")
        if len(self.phase) < 1:
            raise ValueError("ensemble needs at least one spin")

    @classmethod
    def longitudinal(cls, count: int, seed: int) -> "SpinEnsemble":
        """Fresh thermal ensemble: every spin along z."""
        if count < 1:
            raise ValueError(f"spin count must be >= 1, got {count}")
        return cls(
            transverse=np.zeros(count, dtype=bool),
            phase=np.zeros(count, dtype=np.float64),
            seed=seed,
        )

    def __len__(self) -> int:
        return len(self.phase)

    def spin(self, k: int) -> SpinState:
        if self.transverse[k]:
            return SpinState(Orientation.TRANSVERSE, float(self.phase[k]))
        return SpinState(Orientation.LONGITUDINAL)


def pulse90(ensemble: SpinEnsemble) -> SpinEnsemble:
    """Tip longitudinal spins into the transverse plane at phase 0.

    Already-transverse spins keep their phase, so the pulse is idempotent in
    this model.
    """
    if ensemble.transverse.any():
        phase = np.where(ensemble.transverse, ensemble.phase, 0.0)
    else:
        phase = np.zeros(len(ensemble), dtype=np.float64)
    return SpinEnsemble(
        transverse=np.ones(len(ensemble), dtype=bool),
        phase=phase,
        seed=ensemble.seed,
    )


def gz_whiten(ensemble: SpinEnsemble) -> tuple[SpinEnsemble, np.ndarray]:
    """Randomize every transverse phase to 2*pi*gamma_k, gamma_k ~ U[0, 1).

    Returns the whitened ensemble and the gamma draws (spin k's phase
    fraction), which downstream phase encoding consumes. Requires a fully
    transverse ensemble: a gradient pulse cannot whiten longitudinal spins.
    """
    if not ensemble.transverse.all():
        raise NotTransverse("gz_whiten requires every spin in the transverse plane")
    gammas = rng.uniforms(ensemble.seed, len(ensemble))
    whitened = SpinEnsemble(
        transverse=ensemble.transverse.copy(),
        phase=gammas * TWO_PI,
        seed=ensemble.seed,
    )
    return whitened, gammas


def with_seed(ensemble: SpinEnsemble, seed: int) -> SpinEnsemble:
    """Same spins, different whitening stream."""
    return replace(ensemble, seed=seed)


def receiver_signal(ensemble: SpinEnsemble) -> complex:
    """Coherent coil observable: (1/M) * sum_k exp(i*phi_k).

    Longitudinal spins contribute zero; the normalization stays 1/M over the
    whole ensemble, so magnitude is bounded by the transverse fraction.
    """
    count = len(ensemble)
    if ensemble.transverse.all():
        ph = ensemble.phase
    else:
        ph = ensemble.phase[ensemble.transverse]
    return complex(np.cos(ph).sum(), np.sin(ph).sum()) / count


@dataclass(frozen=True)
class QubitDensity:
    """2x2 density matrix, validated on construction."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValueError(f"density matrix must be 2x2, got {m.shape}")
        if np.abs(m - m.conj().T).max() > 1e-12:
            raise ValueError("density matrix must be Hermitian within 1e-12")
        if abs(m.trace() - 1.0) > 1e-12:
            raise ValueError("density matrix trace must be 1 within 1e-12")
        if np.linalg.eigvalsh(m).min() < -1e-12:
            raise ValueError("density matrix must be positive semidefinite")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_bloch(cls, x: float, y: float, z: float) -> "QubitDensity":
        """rho = (I + x*X + y*Y + z*Z) / 2 for a Bloch vector of length <= 1."""
        return cls(0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]]))


def dephase(rho: QubitDensity) -> QubitDensity:
    """Full phase-damping channel: zero the coherences, keep the populations.

    This is the average of exp(2*pi*i*gamma) * rho_offdiag over gamma uniform
    in [0, 1); it is exactly idempotent.
    """
    return QubitDensity(np.diag(np.diag(rho.matrix)))


def thermal_polarization(field_t: float, temp_k: float, gyromag_ratio: float) -> float:
    """Boltzmann polarization p = tanh(hbar * gamma_g * B / (2 * kB * T)).

    Monotone increasing in field, decreasing in temperature; the tiny value
    for protons at laboratory fields (~4e-5 at 11.7 T, 300 K) is the
    sensitivity bottleneck of conventional acquisition.
    """
    for name, value in (("field_t", field_t), ("temp_k", temp_k),
                        ("gyromag_ratio", gyromag_ratio)):
        if value <= 0:
            raise NonPositiveInput(f"{name} must be > 0, got {value}")
    return float(np.tanh(HBAR * gyromag_ratio * field_t / (2.0 * KB * temp_k)))
