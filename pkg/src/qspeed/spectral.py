"""State containers, energy-weight distributions, dispersion statistics and
the three closed-form evolution-time bounds.

Time is measured in units of ``hbar / energy``. All containers are frozen
dataclasses holding read-only numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import DomainError, NormalizationError
from .numerics import HERMITIAN_ATOL, compute_constants, hermitian_eigvals

NORM_TOL = 1e-12
RENORM_TOL = 1e-9
DENSITY_TOL = 1e-10
MEDIAN_TOL = 1e-12


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _check_hbar(hbar: float) -> float:
    hbar = float(hbar)
    if not (hbar > 0 and math.isfinite(hbar)):
        raise DomainError(f"hbar must be positive and finite, got {hbar}")
    return hbar


def _renormalize(total: float, what: str) -> float:
    """Divisor that brings ``total`` to one; 1.0 when already within 1e-12."""
    if not abs(total - 1.0) <= RENORM_TOL:
        raise NormalizationError(f"{what} sum to {total!r}, not 1")
    return 1.0 if abs(total - 1.0) <= NORM_TOL else total


@dataclass(frozen=True)
class SpectralWeights:
    """Occupation probabilities of distinct energy levels, sorted by energy.

    Use :meth:`from_levels` to build one from raw ``(energy, weight)`` pairs;
    it merges duplicate energies and renormalizes sums within 1e-9 of one.
    """

    energies: np.ndarray
    weights: np.ndarray
    hbar: float = 1.0

    @classmethod
    def from_levels(cls, levels: Iterable[tuple[float, float]], hbar: float = 1.0):
        pairs = list(levels)
        if not pairs:
            raise DomainError("at least one energy level is required")
        e = np.array([p[0] for p in pairs], dtype=float)
        w = np.array([p[1] for p in pairs], dtype=float)
        return cls.from_arrays(e, w, hbar)

    @classmethod
    def from_arrays(cls, energies, weights, hbar: float = 1.0):
        e = np.asarray(energies, dtype=float).ravel()
        w = np.asarray(weights, dtype=float).ravel()
        if e.size == 0:
            raise DomainError("at least one energy level is required")
        if e.shape != w.shape:
            raise DomainError("energies and weights differ in length")
        if not np.all(np.isfinite(e)):
            raise DomainError("energies must be finite")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise DomainError("weights must be finite and nonnegative")
        w = w / _renormalize(math.fsum(w), "weights")
        uniq, inverse = np.unique(e, return_inverse=True)
        merged = np.zeros(uniq.size)
        np.add.at(merged, inverse, w)
        return cls(_readonly(uniq), _readonly(merged), _check_hbar(hbar))

    def __len__(self) -> int:
        return self.energies.size

    @property
    def levels(self) -> list[tuple[float, float]]:
        return list(zip(self.energies.tolist(), self.weights.tolist()))

    def shifted(self, offset: float) -> "SpectralWeights":
        return SpectralWeights.from_arrays(self.energies + offset, self.weights, self.hbar)


@dataclass(frozen=True)
class PureState:
    """Amplitudes over orthonormal energy eigenkets.

    Entries may share an energy (degenerate eigenkets, e.g. after
    purification); they are distinct kets and never interfere.
    """

    energies: np.ndarray
    amplitudes: np.ndarray
    hbar: float = 1.0

    @classmethod
    def from_levels(cls, levels: Iterable[tuple[float, complex]], hbar: float = 1.0):
        pairs = list(levels)
        if not pairs:
            raise DomainError("at least one energy level is required")
        return cls.from_arrays([p[0] for p in pairs], [p[1] for p in pairs], hbar)

    @classmethod
    def from_arrays(cls, energies, amplitudes, hbar: float = 1.0):
        e = np.asarray(energies, dtype=float).ravel()
        amp = np.asarray(amplitudes, dtype=complex).ravel()
        if e.size == 0:
            raise DomainError("at least one energy level is required")
        if e.shape != amp.shape:
            raise DomainError("energies and amplitudes differ in length")
        if not (np.all(np.isfinite(e)) and np.all(np.isfinite(amp))):
            raise DomainError("energies and amplitudes must be finite")
        norm = _renormalize(math.fsum(np.abs(amp) ** 2), "squared amplitudes")
        return cls(_readonly(e.copy()), _readonly(amp / math.sqrt(norm)), _check_hbar(hbar))

    @property
    def dim(self) -> int:
        return self.energies.size


@dataclass(frozen=True)
class DensityState:
    """Density matrix written in the energy eigenbasis."""

    energies: np.ndarray
    matrix: np.ndarray
    hbar: float = 1.0

    @classmethod
    def from_arrays(cls, energies, matrix, hbar: float = 1.0):
        e = np.asarray(energies, dtype=float).ravel()
        rho = np.array(matrix, dtype=complex)
        d = e.size
        if d == 0 or rho.shape != (d, d):
            raise DomainError(f"matrix shape {rho.shape} does not match {d} energies")
        if not (np.all(np.isfinite(e)) and np.all(np.isfinite(rho))):
            raise DomainError("energies and matrix must be finite")
        if np.abs(rho - rho.conj().T).max() > DENSITY_TOL:
            raise DomainError("density matrix is not Hermitian")
        rho = 0.5 * (rho + rho.conj().T)
        trace = float(np.trace(rho).real)
        if abs(trace - 1.0) > DENSITY_TOL:
            raise NormalizationError(f"density matrix has trace {trace!r}, not 1")
        lowest = hermitian_eigvals(rho)[0]
        if lowest < -DENSITY_TOL:
            raise DomainError(f"density matrix has negative eigenvalue {lowest:.3e}")
        return cls(_readonly(e.copy()), _readonly(rho), _check_hbar(hbar))

    @classmethod
    def from_pure(cls, state: PureState) -> "DensityState":
        psi = state.amplitudes
        return cls.from_arrays(state.energies, np.outer(psi, psi.conj()), state.hbar)

    @property
    def dim(self) -> int:
        return self.energies.size


@dataclass(frozen=True)
class DispersionStats:
    mean_energy: float
    ground_energy: float
    std_dev: float
    above_ground: float
    median: float
    aadm: float
    excess_kurtosis: Optional[float]

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class BoundReport:
    epsilon: float
    tau_teur: float
    tau_ml: float
    tau_c: float
    tau_numeric: Optional[float] = None
    hbar: float = field(default=1.0, compare=False)

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def weights_from_pure(state: PureState) -> SpectralWeights:
    return SpectralWeights.from_arrays(state.energies, np.abs(state.amplitudes) ** 2, state.hbar)


def weights_from_density(state: DensityState) -> SpectralWeights:
    diag = np.diagonal(state.matrix)
    if np.abs(diag.imag).max() > NORM_TOL:
        raise DomainError("density matrix diagonal is not real")
    trace = math.fsum(diag.real)
    if abs(trace - 1.0) > DENSITY_TOL:
        raise NormalizationError(f"density matrix has trace {trace!r}, not 1")
    return SpectralWeights.from_arrays(state.energies, np.clip(diag.real, 0.0, None), state.hbar)


def as_weights(state) -> SpectralWeights:
    """Energy-weight distribution of any supported state type."""
    if isinstance(state, SpectralWeights):
        return state
    if isinstance(state, PureState):
        return weights_from_pure(state)
    if isinstance(state, DensityState):
        return weights_from_density(state)
    raise TypeError(f"unsupported state type {type(state).__name__}")


def weighted_median(energies: np.ndarray, weights: np.ndarray) -> float:
    """Midpoint of the left and right limits of the inverse cumulative
    distribution at one half.

    ``energies`` must be sorted; a cumulative weight within 1e-12 of one half
    counts as exactly one half so that symmetric ties split evenly.
    """
    cum = np.cumsum(weights)
    lower = energies[np.searchsorted(cum, 0.5 - MEDIAN_TOL, side="left")]
    upper_idx = np.searchsorted(cum, 0.5 + MEDIAN_TOL, side="right")
    upper = energies[min(upper_idx, energies.size - 1)]
    return 0.5 * (float(lower) + float(upper))


def dispersion_stats(w) -> DispersionStats:
    """Mean, spreads, median and AADM of a weight distribution or state."""
    w = as_weights(w)
    occupied = w.weights > 0
    e, p = w.energies[occupied], w.weights[occupied]
    if e.size == 0:
        raise DomainError("no occupied energy levels")
    mean = float(np.dot(p, e))
    centred = e - mean
    var = float(np.dot(p, centred**2))
    std = math.sqrt(var)
    ground = float(e[0])
    median = weighted_median(e, p)
    aadm = float(np.dot(p, np.abs(e - median)))
    kurt = None
    if std > 0:
        kurt = float(np.dot(p, (centred / std) ** 4)) - 3.0
    return DispersionStats(
        mean_energy=mean,
        ground_energy=ground,
        std_dev=std,
        above_ground=float(np.dot(p, e - ground)),
        median=median,
        aadm=aadm,
        excess_kurtosis=kurt,
    )


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise DomainError(f"fidelity threshold must lie in [0, 1], got {eps}")
    return eps


def g_teur(eps: float) -> float:
    return 2.0 / math.pi * math.acos(math.sqrt(_check_eps(eps)))


def g_ml(eps: float) -> float:
    """Squared ``g_teur``: the usual approximation, exact only at 0 and 1."""
    return g_teur(eps) ** 2


def g_c(eps: float) -> float:
    return 1.0 - math.sqrt(_check_eps(eps))


def _scaled(numerator: float, dispersion: float) -> float:
    if numerator == 0.0:
        return 0.0
    if dispersion <= 0.0:
        return math.inf
    return numerator / dispersion


def bound_report(w, eps: float, stats: DispersionStats | None = None) -> BoundReport:
    """Evaluate the uncertainty, Margolus-Levitin and AADM bounds.

    ``w`` may be a :class:`SpectralWeights` or any state. A bound whose
    dispersion vanishes is infinite (a stationary state never decays),
    except at ``eps = 1`` where every bound is zero.
    """
    w = as_weights(w)
    eps = _check_eps(eps)
    stats = stats or dispersion_stats(w)
    A = compute_constants().A
    hbar = w.hbar
    return BoundReport(
        epsilon=eps,
        tau_teur=_scaled(g_teur(eps) * math.pi * hbar / 2.0, stats.std_dev),
        tau_ml=_scaled(g_ml(eps) * math.pi * hbar / 2.0, stats.above_ground),
        tau_c=_scaled(g_c(eps) * hbar / A, stats.aadm),
        hbar=hbar,
    )
