"""Exact unitary evolution under a Hamiltonian that is diagonal in the
stored basis: autocorrelation, pure and Uhlmann fidelity, purification, and
an earliest-crossing search used as the oracle for every bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DomainError
from .numerics import clamp_psd_spectrum, hermitian_eigen, psd_sqrt, trace_norm
from .spectral import (
    DensityState,
    PureState,
    SpectralWeights,
    as_weights,
    bound_report,
    dispersion_stats,
)

State = Union[PureState, DensityState]

# grid points per vectorized block during the forward scan
_PURE_CHUNK = 4096
_MIXED_CHUNK = 256
# subcells per refinement level
_SPLIT = 64
# round-off allowance on the root fidelity when excluding a cell; the mixed
# value goes through an eigensolver and carries a little more noise
_PURE_SLACK = 1e-12
_MIXED_SLACK = 1e-11


@dataclass(frozen=True)
class CrossingResult:
    tau: float
    fidelity_at_tau: float
    bracketing_interval: tuple[float, float]
    converged: bool


def autocorrelation(state, t):
    """``<phi(0)|phi(t)>`` for a pure state.

    For a density matrix this is ``Tr(rho exp(-iHt/hbar))``, the overlap of
    same-ancilla purifications. ``t`` may be an array.
    """
    w = as_weights(state)
    t = np.asarray(t, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(t, w.energies) / w.hbar)
    out = phases @ w.weights
    return complex(out) if out.ndim == 0 else out


def fidelity_pure(state, t):
    amp = autocorrelation(state, t)
    return float(abs(amp) ** 2) if np.ndim(amp) == 0 else np.abs(amp) ** 2


def _evolved_matrices(energies: np.ndarray, rho: np.ndarray, t, hbar: float) -> np.ndarray:
    phase = np.exp(-1j * np.multiply.outer(np.asarray(t, dtype=float), energies) / hbar)
    return phase[..., :, None] * rho * np.conj(phase[..., None, :])


def evolve_density(state: DensityState, t: float) -> DensityState:
    rho_t = _evolved_matrices(state.energies, state.matrix, float(t), state.hbar)
    rho_t.setflags(write=False)
    return DensityState(state.energies, rho_t, state.hbar)


def _root_fidelity(sqrt_a: np.ndarray, sqrt_b: np.ndarray) -> np.ndarray:
    """``Tr sqrt(sqrt(a) b sqrt(a))``, evaluated as the trace norm of
    ``sqrt(b) sqrt(a)``; ``sqrt_b`` may be a stack."""
    return trace_norm(sqrt_b @ sqrt_a)


def fidelity_mixed(a: DensityState, b: DensityState) -> float:
    """Uhlmann fidelity ``[Tr sqrt(sqrt(a) b sqrt(a))]**2``."""
    if a.dim != b.dim or not np.array_equal(a.energies, b.energies):
        raise DomainError("states live on different energy bases")
    root = float(_root_fidelity(psd_sqrt(a.matrix), psd_sqrt(b.matrix)))
    return root**2


def purify(state: DensityState) -> PureState:
    """Standard purification ``sum_k sqrt(p_k) |v_k>|k>``.

    The ancilla carries zero energy, so ket ``j * d + k`` has energy ``E_j``
    and the energy-weight distribution equals the diagonal of ``rho``.
    """
    p, v = hermitian_eigen(state.matrix)
    psi = v * np.sqrt(clamp_psd_spectrum(p))[None, :]
    d = state.dim
    return PureState.from_arrays(np.repeat(state.energies, d), psi.ravel(), state.hbar)


def partial_trace_ancilla(state: PureState, system_dim: int) -> np.ndarray:
    """Reduced density matrix of the first factor of a bipartite pure state."""
    if state.dim % system_dim:
        raise DomainError(f"dimension {state.dim} is not a multiple of {system_dim}")
    psi = state.amplitudes.reshape(system_dim, -1)
    return psi @ psi.conj().T


class _Profile:
    """Root fidelity ``s(t)`` with a Lipschitz constant and a scan step."""

    def __init__(self, state: State):
        self.weights = as_weights(state)
        self.hbar = self.weights.hbar
        self.stats = dispersion_stats(self.weights)
        occupied = self.weights.weights > 0
        spread = np.abs(self.weights.energies[occupied] - self.stats.median)
        self.bandwidth = float(spread.max())
        if isinstance(state, PureState):
            self.mixed = False
            self._e = self.weights.energies - self.stats.median
            self._w = self.weights.weights
            # |d/dt sum_j w_j exp(-i(E_j - M)t/hbar)| <= sum_j w_j |E_j - M| / hbar
            self.lipschitz = self.stats.aadm / self.hbar
            self.slack = _PURE_SLACK
        else:
            self.mixed = True
            self._e = state.energies - self.stats.median
            self._rho = np.asarray(state.matrix)
            self._sqrt_rho = psd_sqrt(self._rho)
            # every purification overlap moves no faster than Delta E / hbar
            self.lipschitz = self.stats.std_dev / self.hbar
            self.slack = _MIXED_SLACK

    def __call__(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if not self.mixed:
            return np.abs(np.exp(-1j * np.multiply.outer(t, self._e) / self.hbar) @ self._w)
        # evolution is a unitary conjugation, so it commutes with the square root
        sqrt_t = _evolved_matrices(self._e, self._sqrt_rho, t, self.hbar)
        return np.minimum(_root_fidelity(self._sqrt_rho, sqrt_t), 1.0)


def default_t_max(state: State, eps: float) -> float:
    """Twenty times the larger of the uncertainty and AADM bounds."""
    report = bound_report(as_weights(state), eps)
    horizon = max(report.tau_teur, report.tau_c)
    return 20.0 * horizon if math.isfinite(horizon) else math.inf


def earliest_crossing(
    state: State,
    eps: float,
    t_max: Optional[float] = None,
    tol: float = 1e-9,
) -> CrossingResult:
    """Smallest ``t`` in ``(0, t_max]`` where the fidelity with the initial
    state is at most ``eps``.

    The root fidelity ``s(t)`` is sampled on a grid of step
    ``pi hbar / (8 B)``, ``B`` being the largest distance of an occupied level
    from the median. A cell ``[a, b]`` can hold a point with
    ``s <= sqrt(eps)`` only if ``(s(a) + s(b) - L (b - a)) / 2 <= sqrt(eps)``,
    ``L`` a Lipschitz constant of ``s``; all other cells are discarded
    without further work. Surviving cells are subdivided in time order until
    their width falls below ``tol * max(a, tau_c)``, which also resolves the
    tangential zeros met at ``eps = 0``.
    """
    eps = float(eps)
    if not 0.0 <= eps < 1.0:
        raise DomainError(f"eps must lie in [0, 1), got {eps}")
    if not tol > 0:
        raise DomainError("tol must be positive")
    profile = _Profile(state)
    if t_max is None:
        t_max = default_t_max(state, eps)
    t_max = float(t_max)
    if not t_max > 0:
        raise DomainError(f"t_max must be positive, got {t_max}")
    not_found = CrossingResult(math.inf, math.nan, (0.0, t_max), False)
    if profile.lipschitz == 0.0 or profile.bandwidth == 0.0:
        return not_found
    if not math.isfinite(t_max):
        raise DomainError("t_max must be finite for a non-stationary state")

    target = math.sqrt(eps)
    L = profile.lipschitz
    tau_c = bound_report(profile.weights, eps).tau_c
    step = math.pi * profile.hbar / (8.0 * profile.bandwidth)
    n_steps = max(1, math.ceil(t_max / step))
    grid_step = t_max / n_steps
    chunk = _MIXED_CHUNK if profile.mixed else _PURE_CHUNK

    t_prev, s_prev = 0.0, 1.0
    for start in range(1, n_steps + 1, chunk):
        idx = np.arange(start, min(start + chunk, n_steps + 1))
        ts = idx * grid_step
        ts[-1] = t_max if idx[-1] == n_steps else ts[-1]
        ss = profile(ts)
        left_t = np.concatenate(([t_prev], ts[:-1]))
        left_s = np.concatenate(([s_prev], ss[:-1]))
        hit = _refine(profile, left_t, ts, left_s, ss, target, L, tol, tau_c)
        if hit is not None:
            tau, s_tau, (lo, hi) = hit
            return CrossingResult(float(tau), float(s_tau) ** 2, (float(lo), float(hi)), True)
        t_prev, s_prev = ts[-1], ss[-1]
    return not_found


def _refine(profile, a, b, sa, sb, target, L, tol, tau_c):
    """Earliest point with ``s <= target`` among time-ordered cells
    ``[a[i], b[i]]``, or ``None`` when the Lipschitz bound excludes them all.

    Works level by level: every cell that survives the bound, up to the
    first one ending at or below the target, is split into ``_SPLIT`` parts
    and all new points are evaluated in a single batch.
    """
    while a.size:
        keep = 0.5 * (sa + sb - L * (b - a)) <= target + profile.slack
        ends_below = np.flatnonzero(keep & (sb <= target))
        if ends_below.size:
            keep[ends_below[0] + 1:] = False
        live = np.flatnonzero(keep)
        if live.size == 0:
            return None
        a, b, sa, sb = a[live], b[live], sa[live], sb[live]
        if b[0] - a[0] <= tol * max(a[0], tau_c):
            return _settle(a, b, sa, sb, target)
        frac = np.arange(1, _SPLIT) / _SPLIT
        inner = a[:, None] + (b - a)[:, None] * frac[None, :]
        s_inner = profile(inner.ravel()).reshape(inner.shape)
        ts = np.concatenate((a[:, None], inner, b[:, None]), axis=1)
        ss = np.concatenate((sa[:, None], s_inner, sb[:, None]), axis=1)
        a, b = ts[:, :-1].ravel(), ts[:, 1:].ravel()
        sa, sb = ss[:, :-1].ravel(), ss[:, 1:].ravel()
    return None


def _settle(a, b, sa, sb, target):
    """Pick the answer among surviving cells of floor width.

    The first contiguous run of survivors either ends in a cell where ``s``
    drops to the target (a transversal crossing approached through cells
    within round-off of the target) or never gets there (a tangential touch,
    e.g. a zero of the overlap at ``eps = 0``); in the latter case the lowest
    sampled point of the run is returned.
    """
    gaps = np.flatnonzero(a[1:] != b[:-1])
    end = gaps[0] if gaps.size else a.size - 1
    if sb[end] <= target:
        return b[end], sb[end], (a[end], b[end])
    pts = np.concatenate((a[: end + 1], b[: end + 1]))
    vals = np.concatenate((sa[: end + 1], sb[: end + 1]))
    k = int(np.argmin(vals))
    cell = k if k <= end else k - end - 1
    return pts[k], vals[k], (a[cell], b[cell])
