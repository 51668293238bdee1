"""Small numeric kernels: the tangency constants, a cyclic Jacobi
eigensolver for Hermitian matrices, PSD square roots and scalar solvers.

The eigensolver accepts stacks of matrices with shape ``(..., d, d)`` so
that time scans can diagonalize a whole chunk of grid points at once.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BracketError, DomainError

HERMITIAN_ATOL = 1e-10
PSD_CLAMP = 1e-10
JACOBI_TOL = 1e-12
MAX_BISECTIONS = 200
# smallest relative eigenvalue of X^H X whose square root is still trusted
GRAM_FLOOR = 1e-6

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TangencyConstants:
    """Slope ``A`` of the steepest line through the origin touching
    ``1 - cos x`` again, and the abscissa ``x_m`` of that second contact."""

    A: float
    x_m: float

    @property
    def chord_residual(self) -> float:
        return self.A - (1.0 - math.cos(self.x_m)) / self.x_m

    @property
    def tangent_residual(self) -> float:
        return self.A - math.sin(self.x_m)


def find_root(
    f: Callable[[float], float],
    bracket: tuple[float, float],
    tol: float = 1e-12,
    max_iter: int = MAX_BISECTIONS,
) -> float:
    """Plain bisection on a bracket that straddles a sign change.

    Stops once the bracket is narrower than ``tol`` (or an exact zero is hit)
    and returns the midpoint. Raises :class:`BracketError` if ``f`` has the
    same strict sign at both ends.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if lo > hi:
        lo, hi = hi, lo
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f = {f_lo}, {f_hi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid in (lo, hi):
            break
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def golden_section_max(
    f: Callable[[float], float],
    bracket: tuple[float, float],
    tol: float = 1e-10,
    max_iter: int = MAX_BISECTIONS,
) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on ``bracket``; returns ``(x, f(x))``."""
    a, b = float(bracket[0]), float(bracket[1])
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _tangency_condition(x: float) -> float:
    # Zero of the derivative of (1 - cos x)/x, up to the factor 1/x**2.
    return x * math.sin(x) - (1.0 - math.cos(x))


@functools.lru_cache(maxsize=None)
def compute_constants(tol: float = 1e-13) -> TangencyConstants:
    """Locate ``x_m`` in ``(pi/2, pi)`` by bisection and derive ``A``."""
    if not tol > 0:
        raise DomainError("tol must be positive")
    x_m = find_root(_tangency_condition, (math.pi / 2, math.pi), tol=tol)
    return TangencyConstants(A=(1.0 - math.cos(x_m)) / x_m, x_m=x_m)


def inequality_margin(x, constants: TangencyConstants | None = None):
    """``cos x - (1 - A|x|)``, which is nonnegative everywhere."""
    A = (constants or compute_constants()).A
    x = np.asarray(x, dtype=float)
    out = np.cos(x) - (1.0 - A * np.abs(x))
    return float(out) if out.ndim == 0 else out


def _check_hermitian(a: np.ndarray) -> np.ndarray:
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise DomainError(f"expected square matrices, got shape {a.shape}")
    skew = np.abs(a - np.conj(np.swapaxes(a, -1, -2)))
    if skew.size and skew.max() > HERMITIAN_ATOL:
        raise DomainError(f"matrix is not Hermitian (max skew {skew.max():.3e})")
    return 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))


def hermitian_eigen(
    matrix, tol: float = JACOBI_TOL, max_sweeps: int = 60
) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose Hermitian matrices by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real symmetric Jacobi rotation that zeroes it. Sweeps stop
    when the off-diagonal Frobenius norm is at most ``tol * ||a||_F``. The
    test is purely relative, so a matrix of tiny norm still gets diagonalized
    instead of being passed through as already converged.

    Returns ascending eigenvalues and unitary eigenvectors (as columns), with
    the same leading batch shape as the input.
    """
    a = _check_hermitian(np.array(matrix, dtype=complex))
    batch_shape, d = a.shape[:-2], a.shape[-1]
    a = a.reshape(-1, d, d).copy()
    n = a.shape[0]
    v = np.broadcast_to(np.eye(d, dtype=complex), (n, d, d)).copy()
    scale = np.linalg.norm(a, axis=(1, 2))
    offdiag = ~np.eye(d, dtype=bool)
    pairs = [(p, q) for p in range(d - 1) for q in range(p + 1, d)]

    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a[:, offdiag]) ** 2, axis=1))
        if np.all(off <= tol * scale):
            break
        for p, q in pairs:
            apq = a[:, p, q]
            r = np.abs(apq)
            if not r.any():
                continue
            r_safe = np.where(r > 0, r, 1.0)
            # conj(phase) of the pivot; a zero pivot gets the identity rotation
            u = np.where(r > 0, np.conj(apq) / r_safe, 1.0)
            # tan of the smaller rotation angle, written to avoid overflow in zeta**2
            zeta = (a[:, q, q].real - a[:, p, p].real) / (2.0 * r_safe)
            t = np.copysign(r > 0, zeta) / (np.abs(zeta) + np.hypot(1.0, zeta))
            c = 1.0 / np.hypot(1.0, t)
            s = t * c
            c_, s_, su, cu = c[:, None], s[:, None], (s * u)[:, None], (c * u)[:, None]
            # columns p, q times U = [[c, s], [-s u, c u]]
            for m in (a, v):
                mp, mq = m[:, :, p].copy(), m[:, :, q]
                m[:, :, p] = c_ * mp - su * mq
                m[:, :, q] = s_ * mp + cu * mq
            # rows p, q times U^H
            rp, rq = a[:, p, :].copy(), a[:, q, :]
            a[:, p, :] = c_ * rp - np.conj(su) * rq
            a[:, q, :] = s_ * rp + np.conj(cu) * rq
            a[:, p, q] = 0.0
            a[:, q, p] = 0.0

    w = np.real(np.diagonal(a, axis1=1, axis2=2))
    order = np.argsort(w, axis=1)
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w.reshape(*batch_shape, d), v.reshape(*batch_shape, d, d)


def hermitian_eigvals(matrix, tol: float = JACOBI_TOL) -> np.ndarray:
    return hermitian_eigen(matrix, tol=tol)[0]


def clamp_psd_spectrum(w: np.ndarray) -> np.ndarray:
    """Zero eigenvalues indistinguishable from round-off.

    Raises :class:`DomainError` below ``-1e-10``; values under
    ``d * eps * max(1, lambda_max)`` become exactly zero so that their square
    roots do not inject ~1e-8 noise.
    """
    if w.size and w.min() < -PSD_CLAMP:
        raise DomainError(f"matrix is not positive semidefinite (eigenvalue {w.min():.3e})")
    floor = w.shape[-1] * np.finfo(float).eps * np.maximum(1.0, w[..., -1:])
    return np.where(w > floor, w, 0.0)


def psd_sqrt(matrix) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix (or stack)."""
    w, v = hermitian_eigen(matrix)
    root = np.sqrt(clamp_psd_spectrum(w))
    return (v * root[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def trace_norm(matrix) -> np.ndarray:
    """Sum of singular values of a square matrix (or stack).

    Singular values come from the eigenvalues of ``X^H X`` when the smallest
    one is at least ``1e-6`` of the largest. Otherwise squaring would push
    small singular values into round-off, so the matrix goes through the
    Hermitian dilation ``[[0, X], [X^H, 0]]`` instead. Its spectrum is
    ``+-sigma_i``, with absolute accuracy near ``eps * |X|``.
    """
    x = np.asarray(matrix, dtype=complex)
    batch_shape, d = x.shape[:-2], x.shape[-1]
    x = x.reshape(-1, d, d)
    xh = np.conj(np.swapaxes(x, -1, -2))
    lam = hermitian_eigvals(xh @ x)
    top = np.maximum(lam[:, -1], np.finfo(float).tiny)
    out = np.sum(np.sqrt(np.clip(lam, 0.0, None)), axis=-1)
    bad = lam[:, 0] < GRAM_FLOOR * top
    if bad.any():
        zero = np.zeros_like(x[bad])
        dilation = np.concatenate(
            (np.concatenate((zero, x[bad]), axis=-1), np.concatenate((xh[bad], zero), axis=-1)),
            axis=-2,
        )
        out[bad] = 0.5 * np.sum(np.abs(hermitian_eigvals(dilation)), axis=-1)
    return out.reshape(batch_shape)
