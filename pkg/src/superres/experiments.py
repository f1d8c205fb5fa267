"""Seeded recovery experiments and phase-transition diagrams.

Signal families, single-trial execution with a success verdict, and the
(noise level) x (measurement count / coherence) success-frequency grids.
Every random draw derives from the base seed and the cell/trial indices,
so serial and parallel runs of a grid agree bit for bit.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import RecoveryError
from .fourier import (
    Measurement,
    MeasurementModel,
    NoiseSpec,
    SparseSignal,
    default_hankel_rows,
    grid_coherence,
    measure,
)
from .pencil import DEFAULT_PENCIL_CONFIG, PencilConfig, pencil_recover
from .pruning import RecoveryResult, superset_recover

FAMILY_KINDS = ("well_separated", "five_cluster", "k_sparse_adjacent")
METHODS = ("superset", "pencil")

#: Success verdict: relative coefficient error below this value.
SUCCESS_THRESHOLD = 1e-3

#: Default sign patterns for the five spike clusters.
FIVE_CLUSTER_PATTERNS = ("+", "+", "++", "+-", "-+")


@dataclass(frozen=True)
class SignalFamily:
    """A named generator of ground-truth signals with its parameters."""

    kind: str
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind == "k_sparse_adjacent":
            k = self.parameters.get("k")
            if k not in (2, 3, 4):
                raise ValueError(f"k_sparse_adjacent needs k in {{2, 3, 4}}, got {k}")

    @property
    def label(self) -> str:
        if self.kind == "k_sparse_adjacent":
            return f"k{self.parameters['k']}"
        return self.kind


def well_separated_family(count: int = 29, magnitude: float | None = None) -> SignalFamily:
    return SignalFamily("well_separated",
                        {"count": count, "magnitude": magnitude})


def k_sparse_family(k: int, base: int = 100) -> SignalFamily:
    return SignalFamily("k_sparse_adjacent", {"k": k, "base": base})


def five_cluster_family(patterns: tuple[str, ...] = FIVE_CLUSTER_PATTERNS,
                        magnitude: float | None = None) -> SignalFamily:
    return SignalFamily("five_cluster",
                        {"patterns": tuple(patterns), "magnitude": magnitude})


_FAMILY_NAMES = {
    "k2": lambda: k_sparse_family(2),
    "k3": lambda: k_sparse_family(3),
    "k4": lambda: k_sparse_family(4),
    "well-separated": well_separated_family,
    "five-cluster": five_cluster_family,
}


def family_from_name(name: str) -> SignalFamily:
    """Resolve a CLI family name (k2, k3, k4, well-separated, five-cluster)."""
    try:
        return _FAMILY_NAMES[name]()
    except KeyError:
        raise ValueError(
            f"unknown family {name!r}; choose from {sorted(_FAMILY_NAMES)}") from None


def default_threshold_constant(family: SignalFamily) -> float:
    """Angle-threshold multiplier: 1 for well-separated and 2-sparse signals,
    5 for the clustered ones."""
    if family.kind == "well_separated":
        return 1.0
    if family.kind == "k_sparse_adjacent" and family.parameters["k"] == 2:
        return 1.0
    return 5.0


def _separated_support(n: int, count: int, gap: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw of ``count`` grid points with circular gaps >= ``gap``.

    The separation is enforced on the circle Z_n (atoms are periodic in k
    mod n), including the wrap-around gap between the last and first spike.
    """
    slack = n - count * gap
    if slack < 0:
        raise ValueError(
            f"cannot place {count} spikes with circular separation {gap} on {n} points")
    if count == 1:
        extras = np.array([slack])
    else:
        # uniform weak composition of the slack via stars and bars
        bars = np.sort(rng.choice(slack + count - 1, size=count - 1, replace=False))
        extras = np.diff(np.concatenate(([-1], bars, [slack + count - 1]))) - 1
    gaps = gap + extras
    start = int(rng.integers(0, n))
    positions = (start + np.concatenate(([0], np.cumsum(gaps[:-1])))) % n
    positions = np.where(positions >= n // 2, positions - n, positions)
    return np.sort(positions)


def _pattern_amplitudes(patterns, magnitude: float) -> tuple[list[int], list[float]]:
    offsets, values = [], []
    for i, pattern in enumerate(patterns):
        for j, ch in enumerate(pattern):
            if ch not in "+-":
                raise ValueError(f"cluster pattern characters must be + or -, got {ch!r}")
            offsets.append((i, j))
            values.append(magnitude if ch == "+" else -magnitude)
    return offsets, values


def make_signal(family: SignalFamily, n: int, m: int, seed: int = 0) -> SparseSignal:
    """Instantiate a ground-truth signal; deterministic for a given seed."""
    p = family.parameters
    if family.kind == "k_sparse_adjacent":
        k, base = p["k"], p.get("base", 100)
        support = [base + i for i in range(k)]
        amplitudes = [(-1) ** i / math.sqrt(k) for i in range(k)]
        return SparseSignal(n, tuple(support), tuple(amplitudes))

    if family.kind == "five_cluster":
        patterns = p.get("patterns", FIVE_CLUSTER_PATTERNS)
        total = sum(len(q) for q in patterns)
        magnitude = p.get("magnitude") or 1.0 / math.sqrt(total)
        bases = [round((i - (len(patterns) - 1) / 2) * n / len(patterns))
                 for i in range(len(patterns))]
        cells, values = _pattern_amplitudes(patterns, magnitude)
        support = [bases[i] + j for i, j in cells]
        return SparseSignal(n, tuple(support), tuple(values))

    count = p.get("count", 29)
    magnitude = p.get("magnitude") or 1.0 / math.sqrt(count)
    gap = math.ceil(4 * n / m)
    rng = np.random.default_rng(seed)
    support = _separated_support(n, count, gap, rng)
    signs = rng.integers(0, 2, size=count) * 2 - 1
    return SparseSignal(n, tuple(int(k) for k in support),
                        tuple(float(s) * magnitude for s in signs))


@dataclass
class TrialOutcome:
    """Verdict of one seeded recovery attempt."""

    success: bool
    relative_error: float | None = None
    result: RecoveryResult | None = None
    reason: str | None = None


def run_trial(signal: SparseSignal, model: MeasurementModel, sigma: float,
              method: str, seed: int, *,
              c: float = 1.0,
              epsilon2: float | None = None,
              pencil_config: PencilConfig = DEFAULT_PENCIL_CONFIG,
              noise_convention: str = "circular",
              success_threshold: float = SUCCESS_THRESHOLD) -> TrialOutcome:
    """Measure, recover, and score one trial; solver errors become failures."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    y = measure(signal, model, NoiseSpec(sigma, seed, noise_convention))
    try:
        if method == "superset":
            result = superset_recover(y, model, sigma, c, epsilon2=epsilon2)
        else:
            result = pencil_recover(y, model, sigma, pencil_config)
    except (RecoveryError, np.linalg.LinAlgError) as exc:
        return TrialOutcome(False, reason=type(exc).__name__)
    truth = signal.dense()
    rel = float(np.linalg.norm(result.coefficients - truth) / np.linalg.norm(truth))
    return TrialOutcome(rel < success_threshold, rel, result)


def trial_seed(base_seed: int, *indices: int) -> int:
    """Derive an independent integer seed from the base seed and indices.

    The index count is folded into the entropy: SeedSequence zero-pads its
    input, so (i, j) and (i, j, 0) would otherwise collide.
    """
    ss = np.random.SeedSequence(
        [int(base_seed), len(indices), *[int(i) for i in indices]])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class PhaseDiagram:
    """Empirical success frequencies over a (m, sigma) grid."""

    family: SignalFamily
    method: str
    n: int
    m_grid: tuple[int, ...]
    sigmas: tuple[float, ...]
    success: np.ndarray = field(repr=False)
    trials: int
    coherence_axis: tuple[float, ...]
    base_seed: int
    threshold_constant: float
    pencil_config: PencilConfig = DEFAULT_PENCIL_CONFIG
    noise_convention: str = "circular"


def _compute_cell(family: SignalFamily, n: int, m: int, sigma: float,
                  trials: int, method: str, base_seed: int, i: int, j: int,
                  c: float, pencil_config: PencilConfig,
                  noise_convention: str) -> float:
    try:
        model = MeasurementModel(n, m, default_hankel_rows(m))
        signal = make_signal(family, n, m, trial_seed(base_seed, i, j))
    except ValueError:
        return 0.0
    wins = 0
    for t in range(trials):
        outcome = run_trial(signal, model, sigma, method,
                            trial_seed(base_seed, i, j, t),
                            c=c, pencil_config=pencil_config,
                            noise_convention=noise_convention)
        wins += outcome.success
    return wins / trials


def _cell_worker(args) -> tuple[int, int, float]:
    i, j, rest = args
    return i, j, _compute_cell(*rest)


def default_jobs() -> int:
    """Worker count from the SUPERRES_JOBS environment variable (default 1)."""
    try:
        return max(1, int(os.environ.get("SUPERRES_JOBS", "1")))
    except ValueError:
        return 1


def phase_diagram(family: SignalFamily, n: int, m_grid, sigma_grid,
                  trials: int, method: str, base_seed: int = 0, *,
                  c: float | None = None,
                  pencil_config: PencilConfig = DEFAULT_PENCIL_CONFIG,
                  noise_convention: str = "circular",
                  jobs: int | None = None,
                  completed: dict[tuple[int, int], float] | None = None,
                  on_cell=None) -> PhaseDiagram:
    """Fill the success grid cell by cell with independently seeded trials.

    Each cell uses L = floor(m/3).  ``completed`` supplies already-known
    cell values (resume support) and ``on_cell`` is called as
    ``on_cell(i, j, value)`` after each newly computed cell.
    """
    m_grid = tuple(int(m) for m in m_grid)
    sigmas = tuple(float(s) for s in sigma_grid)
    if not m_grid or not sigmas:
        raise ValueError("grids must be nonempty")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if c is None:
        c = default_threshold_constant(family)
    jobs = default_jobs() if jobs is None else max(1, jobs)
    completed = dict(completed or {})

    success = np.zeros((len(m_grid), len(sigmas)))
    pending = []
    for i, m in enumerate(m_grid):
        for j, sigma in enumerate(sigmas):
            if (i, j) in completed:
                success[i, j] = completed[i, j]
            else:
                pending.append((i, j, (family, n, m, sigma, trials, method,
                                       base_seed, i, j, c, pencil_config,
                                       noise_convention)))

    if jobs > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for i, j, value in pool.map(_cell_worker, pending):
                success[i, j] = value
                if on_cell is not None:
                    on_cell(i, j, value)
    else:
        for task in pending:
            i, j, value = _cell_worker(task)
            success[i, j] = value
            if on_cell is not None:
                on_cell(i, j, value)

    axis = tuple(float(np.log10(1.0 - grid_coherence(n, m))) for m in m_grid)
    return PhaseDiagram(
        family=family,
        method=method,
        n=n,
        m_grid=m_grid,
        sigmas=sigmas,
        success=success,
        trials=trials,
        coherence_axis=axis,
        base_seed=base_seed,
        threshold_constant=c,
        pencil_config=pencil_config,
        noise_convention=noise_convention,
    )
