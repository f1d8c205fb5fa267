"""Matrix pencil baseline estimator.

Shifted copies of the Hankel matrix form the pencil Ybar - z*Yunder whose
rank-reducing numbers z sit at exp(2*pi*i*k/n) for the active frequencies
k; they are computed as eigenvalues of pinv(Yunder) @ Ybar after SVD
denoising of both matrices.  Estimated frequencies are snapped back to the
integer grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyEstimateError
from .fourier import Measurement, MeasurementModel, atom_matrix
from .pruning import RecoveryResult, least_squares
from .subspace import (
    DEFAULT_RANK_CONSTANT,
    build_hankel,
    estimate_rank,
    machine_rank_cutoff,
)


@dataclass(frozen=True)
class PencilConfig:
    """Denoising constant and the unit-circle acceptance band for eigenvalues."""

    denoise_constant: float = 1.5
    magnitude_band: tuple[float, float] = (0.7, 1.3)

    def __post_init__(self):
        lo, hi = self.magnitude_band
        if not 0 < lo <= 1 <= hi:
            raise ValueError(f"magnitude band must straddle 1, got [{lo}, {hi}]")
        if self.denoise_constant <= 0:
            raise ValueError("denoise constant must be > 0")


DEFAULT_PENCIL_CONFIG = PencilConfig()


def pencil_pair(Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(Ybar, Yunder): Y with its first row removed, Y with its last removed."""
    if Y.shape[0] < 2:
        raise ValueError(f"need at least 2 Hankel rows, got {Y.shape[0]}")
    return Y[1:, :], Y[:-1, :]


def _machine_cutoff(s: np.ndarray, shape: tuple[int, int]) -> float:
    return machine_rank_cutoff(s[0], max(shape)) if s[0] > 0 else np.inf


def denoise(M: np.ndarray, sigma: float, L: int, c: float) -> np.ndarray:
    """Zero every singular value at or below c*sigma*sqrt(L log L)."""
    if c <= 0:
        raise ValueError("denoise constant must be > 0")
    if sigma == 0.0:
        return M
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    keep = s > c * sigma * math.sqrt(L * math.log(L))
    return (U[:, keep] * s[keep]) @ Vh[keep]


def _values(y) -> np.ndarray:
    if isinstance(y, Measurement):
        return y.values
    return np.asarray(y, dtype=complex)


def grid_frequency(z: complex, n: int) -> int:
    """Nearest grid index to arg(z), wrapped into [-n/2, n/2)."""
    k = int(round(n * np.angle(z) / (2.0 * np.pi)))
    if k >= n // 2:
        k -= n
    if k < -n // 2:
        k += n
    return k


def pencil_frequencies(y, model: MeasurementModel | None = None,
                       sigma: float = 0.0,
                       config: PencilConfig = DEFAULT_PENCIL_CONFIG,
                       rank: int | None = None) -> list[int]:
    """Sorted grid frequencies estimated by the denoised matrix pencil.

    Keeps eigenvalues with modulus inside the acceptance band (the pencil
    also produces structural zeros, which the band rejects), snaps them to
    the grid, deduplicates, and returns at most r indices ranked by |z|
    proximity to 1, where r is the Hankel rank estimate.
    """
    if model is None:
        if not isinstance(y, Measurement):
            raise ValueError("model is required when y is a bare array")
        model = y.model
    v = _values(y)
    n, m, L = model.n, model.m, model.L
    Y = build_hankel(v, L)
    if rank is None:
        rank = estimate_rank(np.linalg.svd(Y, compute_uv=False), sigma, m,
                             DEFAULT_RANK_CONSTANT)
    ybar, yunder = pencil_pair(Y)

    U, s, Vh = np.linalg.svd(yunder, full_matrices=False)
    if sigma > 0:
        keep = s > config.denoise_constant * sigma * math.sqrt(L * math.log(L))
    else:
        keep = s > _machine_cutoff(s, yunder.shape)
    if not np.any(keep):
        raise EmptyEstimateError("denoising removed every pencil direction")
    ybar_d = denoise(ybar, sigma, L, config.denoise_constant)
    # pseudo-inverse truncated at the denoising rank
    pencil_matrix = (Vh[keep].conj().T / s[keep]) @ (U[:, keep].conj().T @ ybar_d)
    eigenvalues = np.linalg.eigvals(pencil_matrix)

    lo, hi = config.magnitude_band
    moduli = np.abs(eigenvalues)
    accepted = eigenvalues[(moduli >= lo) & (moduli <= hi)]
    if accepted.size == 0:
        raise EmptyEstimateError("no eigenvalue inside the magnitude band")

    best: dict[int, float] = {}
    for z in accepted:
        k = grid_frequency(z, n)
        proximity = abs(abs(z) - 1.0)
        if k not in best or proximity < best[k]:
            best[k] = proximity
    ranked = sorted(best.items(), key=lambda item: item[1])[:rank]
    return sorted(k for k, _ in ranked)


def pencil_recover(y, model: MeasurementModel | None = None,
                   sigma: float = 0.0,
                   config: PencilConfig = DEFAULT_PENCIL_CONFIG) -> RecoveryResult:
    """Pencil frequencies plus the least-squares amplitude solve."""
    if model is None:
        if not isinstance(y, Measurement):
            raise ValueError("model is required when y is a bare array")
        model = y.model
    support = pencil_frequencies(y, model, sigma, config)
    v = _values(y)
    coef = least_squares(v, support, model)
    dense = np.zeros(model.n, dtype=complex)
    dense[np.asarray(support) + model.n // 2] = coef
    residual = float(np.linalg.norm(v - atom_matrix(model, support) @ coef))
    return RecoveryResult(
        support=tuple(support),
        coefficients=dense,
        residual=residual,
    )
