"""Hankel range-space identification and superset selection.

The observations are juxtaposed into the Hankel matrix ``Y[i, j] = y[i+j]``
of shape L x (m-L+1), whose range in the noiseless case equals the span of
the active atoms restricted to their first L entries.  Membership of a
candidate atom is scored by the sine of its angle to a rank-r basis of that
range, and the superset is every candidate below a noise-calibrated
threshold.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DegenerateGapError
from .fourier import Measurement, MeasurementModel, atom_matrix

THRESHOLD_MODES = ("variance", "sqrt")

#: Accept noiseless angles up to this value when sigma = 0 (floating-point
#: zero for a double-precision subspace computation).
NOISELESS_ANGLE_TOL = 1e-8

#: Multiplier on sigma*sqrt(m log m) in the numerical-rank cutoff.
DEFAULT_RANK_CONSTANT = 2.0

#: Headroom over max_dim * eps in the noiseless rank cutoff: spurious
#: singular values of small Hankel matrices land a modest factor above the
#: textbook max_dim * u * s1 level.
_MACHINE_RANK_SAFETY = 64.0


def machine_rank_cutoff(s1: float, larger_dim: int) -> float:
    """Noiseless numerical-rank cutoff for a matrix with top singular value s1."""
    return s1 * larger_dim * np.finfo(float).eps * _MACHINE_RANK_SAFETY


def _values(y) -> np.ndarray:
    if isinstance(y, Measurement):
        return y.values
    return np.asarray(y, dtype=complex)


def build_hankel(y, L: int) -> np.ndarray:
    """Hankel matrix with entry (i, j) = y[i+j], i < L, j <= m-L.

    Uses all m samples: the result has shape L x (m-L+1).
    """
    v = _values(y)
    m = v.size
    if not 1 < L < m:
        raise ValueError(f"need 1 < L < m, got L={L}, m={m}")
    return scipy.linalg.hankel(v[:L], v[L - 1:])


def estimate_rank(singular_values, sigma: float, m: int,
                  rank_constant: float = DEFAULT_RANK_CONSTANT) -> int:
    """Count singular values above the noise floor, floored at 1.

    For sigma > 0 the cutoff is rank_constant * sigma * sqrt(m log m), the
    scale of the spectral norm of a Hankel matrix of noise.  For sigma = 0
    the cutoff is the machine-precision rule s1 * max(L, m-L+1) * eps (with
    a safety factor), where the larger Hankel dimension is recovered from
    m and the length of the (full, economy-size) spectrum.
    """
    s = np.asarray(singular_values, dtype=float)
    if s.size == 0:
        raise ValueError("empty singular value list")
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if sigma > 0:
        cutoff = rank_constant * sigma * math.sqrt(m * math.log(m))
    elif s[0] == 0.0:
        return 1
    else:
        cutoff = machine_rank_cutoff(s[0], max(s.size, m + 1 - s.size))
    return max(1, int(np.sum(s > cutoff)))


def range_basis(Y: np.ndarray, r: int) -> np.ndarray:
    """Orthonormal basis of the dominant rank-r left singular subspace."""
    if not 1 <= r <= min(Y.shape):
        raise ValueError(f"rank {r} outside [1, {min(Y.shape)}]")
    U, _, _ = np.linalg.svd(Y, full_matrices=False)
    return U[:, :r]


def atom_angle(a: np.ndarray, basis: np.ndarray) -> float:
    """sin of the angle between a vector and the span of an orthonormal basis.

    Computed as ||a - Q Q* a|| / ||a||; the explicit residual keeps small
    angles accurate where the Pythagorean shortcut would cancel.
    """
    a = np.asarray(a, dtype=complex)
    norm = np.linalg.norm(a)
    if norm == 0.0:
        raise ValueError("zero vector has no angle")
    if a.shape[0] != basis.shape[0]:
        raise ValueError("vector length does not match basis row count")
    resid = a - basis @ (basis.conj().T @ a)
    return min(1.0, float(np.linalg.norm(resid) / norm))


@dataclass
class HankelSpectrum:
    """Hankel matrix of the observations with its SVD-derived summaries."""

    matrix: np.ndarray = field(repr=False)
    singular_values: np.ndarray
    basis: np.ndarray = field(repr=False)
    rank_estimate: int


def hankel_spectrum(y, L: int, sigma: float,
                    rank_constant: float = DEFAULT_RANK_CONSTANT) -> HankelSpectrum:
    """Build the Hankel matrix and estimate its numerical rank and range."""
    Y = build_hankel(y, L)
    m = _values(y).size
    U, s, _ = np.linalg.svd(Y, full_matrices=False)
    r = estimate_rank(s, sigma, m, rank_constant)
    return HankelSpectrum(Y, s, U[:, :r], r)


def epsilon1(sigma: float, r: int, m: int, s1: float, s2: float,
             c: float = 1.0, scaling: str = "sqrt") -> float:
    """Angle-perturbation threshold sqrt(sigma*sqrt(r m log m)/(s1 - s2)).

    ``scaling`` controls where the confidence multiplier acts: "sqrt"
    scales the squared threshold (result is sqrt(c) * base), "linear"
    scales the threshold itself (result is c * base).
    """
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if r < 1:
        raise ValueError("rank must be >= 1")
    if s1 <= s2:
        raise DegenerateGapError(f"singular gap s1 - s2 = {s1 - s2} is not positive")
    base_sq = sigma * math.sqrt(r * m * math.log(m)) / (s1 - s2)
    if scaling == "sqrt":
        return math.sqrt(c * base_sq)
    if scaling == "linear":
        return c * math.sqrt(base_sq)
    raise ValueError(f"unknown scaling {scaling!r}")


def angle_threshold(singular_values: np.ndarray, r: int, sigma: float, m: int,
                    c: float = 1.0, mode: str = "variance") -> tuple[float, list[str]]:
    """Selection threshold on the angle values, with degenerate-gap fallbacks.

    ``variance`` (default) uses c * sigma*sqrt(r m log m) / gap, the scale
    of the subspace perturbation itself; ``sqrt`` uses the square root of
    that quantity.  The gap is s1 - s2, falling back to the rank-revealing
    gap s_r - s_{r+1} when s1 - s2 sits inside the noise floor, and to a
    flat 0.5 (with a warning) when both do.
    """
    if mode not in THRESHOLD_MODES:
        raise ValueError(f"unknown threshold mode {mode!r}")
    s = np.asarray(singular_values, dtype=float)
    flags: list[str] = []
    gap = s[0] - s[1] if s.size > 1 else s[0]
    if gap <= 10.0 * sigma:
        flags.append("gap-fallback-rank")
        gap = s[r - 1] - s[r] if r < s.size else 0.0
        if gap <= 10.0 * sigma:
            flags.append("gap-degenerate")
            warnings.warn(
                "singular gaps are inside the noise floor; "
                "using flat angle threshold 0.5",
                RuntimeWarning,
                stacklevel=2,
            )
            return 0.5, flags
    base_sq = sigma * math.sqrt(r * m * math.log(m)) / gap
    value = c * base_sq if mode == "variance" else math.sqrt(c * base_sq)
    return value, flags


@dataclass
class SupersetSelection:
    """Result of the support-identification phase."""

    omega: tuple[int, ...]
    gammas: np.ndarray = field(repr=False)
    epsilon1: float
    rank_estimate: int
    singular_values: np.ndarray = field(repr=False)
    flags: tuple[str, ...] = ()


def select_superset(y, model: MeasurementModel | None = None,
                    sigma: float = 0.0, c: float = 1.0, *,
                    threshold: float | None = None,
                    threshold_mode: str = "variance",
                    rank_constant: float = DEFAULT_RANK_CONSTANT,
                    noiseless_tol: float = NOISELESS_ANGLE_TOL,
                    rank: int | None = None) -> SupersetSelection:
    """Identify the candidate superset Omega = {k : gamma_k <= threshold}.

    gamma_k is the sine-angle between the L-row restriction of atom k and
    a rank-r basis of the Hankel range.  When no explicit ``threshold`` is
    given it is derived from the singular values (see
    :func:`angle_threshold`); at sigma = 0 the formula collapses to zero,
    so ``noiseless_tol`` is used instead.  If more than L candidates pass,
    only the L smallest-gamma ones are kept (ties broken toward smaller
    |k|, then smaller k): the retained subspace has dimension at most L.
    """
    if model is None:
        if not isinstance(y, Measurement):
            raise ValueError("model is required when y is a bare array")
        model = y.model
    v = _values(y)
    spectrum = hankel_spectrum(v, model.L, sigma, rank_constant)
    r = rank if rank is not None else spectrum.rank_estimate
    basis = spectrum.basis if r == spectrum.rank_estimate else range_basis(spectrum.matrix, r)

    candidates = atom_matrix(model, rows=model.L)
    resid = candidates - basis @ (basis.conj().T @ candidates)
    gammas = np.minimum(1.0, np.linalg.norm(resid, axis=0) / math.sqrt(model.L))

    flags: list[str] = []
    if threshold is None:
        if sigma == 0.0:
            threshold = noiseless_tol
        else:
            threshold, flags = angle_threshold(
                spectrum.singular_values, r, sigma, model.m, c, threshold_mode)

    ks = model.frequencies
    passing = gammas <= threshold
    omega = ks[passing]
    if omega.size > model.L:
        flags.append("superset-capped")
        order = np.lexsort((omega, np.abs(omega), gammas[passing]))
        omega = np.sort(omega[order[:model.L]])
    return SupersetSelection(
        omega=tuple(int(k) for k in omega),
        gammas=gammas,
        epsilon1=float(threshold),
        rank_estimate=r,
        singular_values=spectrum.singular_values,
        flags=tuple(flags),
    )
