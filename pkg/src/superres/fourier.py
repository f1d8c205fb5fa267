"""Partial-Fourier measurement model.

The sensing matrix has entries A[j, k] = exp(2*pi*i*j*k/n) over the first
m rows (j = 0..m-1) and all n frequency columns k in [-n/2, n/2), n even.
Columns are kept unnormalized (unit-modulus entries, norm sqrt(m)); angle
computations divide by norms explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NOISE_CONVENTIONS = ("circular", "real")


@dataclass(frozen=True)
class MeasurementModel:
    """Sensing geometry: ambient dimension n, row count m, Hankel rows L."""

    n: int
    m: int
    L: int

    def __post_init__(self):
        if self.n % 2 != 0 or self.n < 2:
            raise ValueError(f"n must be a positive even integer, got {self.n}")
        if not self.m <= self.n:
            raise ValueError(f"need m <= n, got m={self.m}, n={self.n}")
        if not 1 < self.L < self.m:
            raise ValueError(f"need 1 < L < m, got L={self.L}, m={self.m}")

    @property
    def frequencies(self) -> np.ndarray:
        """All candidate grid frequencies, ascending: -n/2 .. n/2 - 1."""
        return np.arange(-self.n // 2, self.n // 2)


def default_hankel_rows(m: int) -> int:
    """The experiments' rule L = floor(m/3), clamped into the valid range."""
    return min(max(2, m // 3), m - 1)


@dataclass(frozen=True)
class SparseSignal:
    """Ground-truth spike train: support indices and complex amplitudes."""

    n: int
    support: tuple[int, ...]
    amplitudes: tuple[complex, ...]

    def __post_init__(self):
        if self.n % 2 != 0 or self.n < 2:
            raise ValueError(f"n must be a positive even integer, got {self.n}")
        object.__setattr__(self, "support", tuple(int(k) for k in self.support))
        object.__setattr__(self, "amplitudes", tuple(complex(a) for a in self.amplitudes))
        if len(self.amplitudes) != len(self.support):
            raise ValueError("support and amplitudes must have equal length")
        lo, hi = -self.n // 2, self.n // 2
        for k in self.support:
            if not lo <= k < hi:
                raise ValueError(f"support index {k} outside [{lo}, {hi})")
        if any(b <= a for a, b in zip(self.support, self.support[1:])):
            raise ValueError("support indices must be strictly increasing")
        if any(a == 0 for a in self.amplitudes):
            raise ValueError("amplitudes must be nonzero")

    @property
    def sparsity(self) -> int:
        return len(self.support)

    def dense(self) -> np.ndarray:
        """Length-n coefficient vector, entry i holding frequency k = i - n/2."""
        x = np.zeros(self.n, dtype=complex)
        x[np.asarray(self.support) + self.n // 2] = self.amplitudes
        return x


@dataclass(frozen=True)
class NoiseSpec:
    """Additive Gaussian noise: scale sigma, RNG seed, real/complex convention.

    ``circular`` draws circularly-symmetric complex noise with per-entry
    variance sigma**2 (real and imaginary parts each N(0, sigma**2/2));
    ``real`` draws real N(0, sigma**2) entries.  Both satisfy
    E||e||^2 = m*sigma**2, which is what the threshold formulas consume.
    """

    sigma: float
    seed: int = 0
    convention: str = "circular"

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.convention not in NOISE_CONVENTIONS:
            raise ValueError(f"unknown noise convention {self.convention!r}")

    def draw(self, m: int) -> np.ndarray:
        if self.sigma == 0.0:
            return np.zeros(m, dtype=complex)
        rng = np.random.default_rng(self.seed)
        if self.convention == "real":
            return self.sigma * rng.standard_normal(m) + 0j
        z = rng.standard_normal((m, 2))
        return (z[:, 0] + 1j * z[:, 1]) * (self.sigma / np.sqrt(2.0))


@dataclass(frozen=True)
class Measurement:
    """Observed vector y of length model.m."""

    values: np.ndarray = field(repr=False)
    model: MeasurementModel

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", values)
        if values.shape != (self.model.m,):
            raise ValueError(
                f"measurement length {values.shape} does not match m={self.model.m}"
            )


def atom(model: MeasurementModel, k: int) -> np.ndarray:
    """Column k of the sensing matrix: (exp(2*pi*i*j*k/n))_{j=0..m-1}."""
    n = model.n
    if not -n // 2 <= k < n // 2:
        raise ValueError(f"frequency index {k} outside [{-n//2}, {n//2})")
    return atom_matrix(model, [k])[:, 0]


def atom_matrix(model: MeasurementModel, ks=None, rows: int | None = None) -> np.ndarray:
    """Stack of atoms restricted to the first ``rows`` rows (default all m).

    ``ks`` defaults to every candidate frequency in ascending order.
    """
    n = model.n
    if ks is None:
        ks = model.frequencies
    ks = np.asarray(ks, dtype=int)
    if ks.size and (ks.min() < -n // 2 or ks.max() >= n // 2):
        raise ValueError("frequency index outside the grid")
    rows = model.m if rows is None else rows
    if not 1 <= rows <= model.m:
        raise ValueError(f"row count {rows} outside [1, {model.m}]")
    return np.exp(2j * np.pi * np.outer(np.arange(rows), ks) / n)


def measure(signal: SparseSignal, model: MeasurementModel, noise: NoiseSpec) -> Measurement:
    """Observe y = A x0 + e for the given signal and noise draw."""
    if signal.n != model.n:
        raise ValueError(f"signal n={signal.n} does not match model n={model.n}")
    if signal.sparsity:
        y0 = atom_matrix(model, signal.support) @ np.asarray(signal.amplitudes)
    else:
        y0 = np.zeros(model.m, dtype=complex)
    return Measurement(y0 + noise.draw(model.m), model)


def grid_coherence(n: int, m: int) -> float:
    """Largest normalized inner product between distinct columns of the
    m-row, n-column partial Fourier matrix.

    By translation invariance <a_i, a_j> depends only on the lag d = j - i
    (mod n), so the pairwise maximum reduces to a sweep over lags
    d = 1..n-1 of |sin(pi*m*d/n)| / (m*|sin(pi*d/n)|), the Dirichlet
    kernel magnitude; the maximum sits at d = 1 (equivalently d = n-1).
    """
    if n % 2 != 0 or n < 2:
        raise ValueError(f"n must be a positive even integer, got {n}")
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    if m == n:
        return 0.0
    d = np.arange(1, n)
    num = np.abs(np.sin(np.pi * m * d / n))
    den = m * np.abs(np.sin(np.pi * d / n))
    return float(np.max(num / den))


def coherence(model: MeasurementModel) -> float:
    """Coherence of the model's sensing matrix; see :func:`grid_coherence`."""
    return grid_coherence(model.n, model.m)
