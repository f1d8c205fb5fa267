"""Iterative pruning of a candidate superset and the final least squares.

Each round scores every retained atom k by the projection difference
delta_k = ||P_Omega y - P_{Omega\\k} y||, removes the argmin while it stays
below the threshold, and solves min ||y - A_Omega x|| on the survivors.
Removal is strictly one atom per round.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import EmptyEstimateError, OvercompleteSupportError
from .fourier import Measurement, MeasurementModel, atom_matrix
from .subspace import NOISELESS_ANGLE_TOL, select_superset

GAP_METHODS = ("auto", "identity", "recompute")

#: Relative size of the smallest allowed R diagonal before the identity
#: path hands over to the per-candidate recompute.
_IDENTITY_COND_FLOOR = 1e-13


@dataclass
class RecoveryResult:
    """Support estimate with coefficients and the pruning history."""

    support: tuple[int, ...]
    coefficients: np.ndarray = field(repr=False)
    residual: float
    gammas: np.ndarray | None = field(default=None, repr=False)
    prune_trace: tuple[tuple[int, float], ...] = ()
    iterations: int = 0
    flags: tuple[str, ...] = ()


def _values(y) -> np.ndarray:
    if isinstance(y, Measurement):
        return y.values
    return np.asarray(y, dtype=complex)


def least_squares(y, omega, model: MeasurementModel) -> np.ndarray:
    """Coefficients minimizing ||y - A_omega x||, one per index in omega."""
    omega = list(omega)
    if len(omega) == 0:
        raise ValueError("empty support; the minimum allowed size is 1")
    if len(omega) > model.m:
        raise OvercompleteSupportError(
            f"support size {len(omega)} exceeds m={model.m}")
    A = atom_matrix(model, omega)
    coef, *_ = np.linalg.lstsq(A, _values(y), rcond=None)
    return coef


def _project(v: np.ndarray, A: np.ndarray) -> np.ndarray:
    Q, _ = np.linalg.qr(A)
    return Q @ (Q.conj().T @ v)


def projection_gap(y, omega, k: int, model: MeasurementModel) -> float:
    """delta_k = ||P_Omega y - P_{Omega\\k} y|| by explicit refactorization.

    Equals sin(angle(P_Omega y, Ran A_{Omega\\k})) * ||P_Omega y||.
    """
    omega = [int(j) for j in omega]
    if k not in omega:
        raise ValueError(f"index {k} is not in the candidate set")
    if len(omega) > model.m:
        raise OvercompleteSupportError(
            f"support size {len(omega)} exceeds m={model.m}")
    v = _values(y)
    py = _project(v, atom_matrix(model, omega))
    rest = [j for j in omega if j != k]
    if rest:
        pk = _project(v, atom_matrix(model, rest))
    else:
        pk = np.zeros_like(v)
    return float(np.linalg.norm(py - pk))


def _gaps_identity(v: np.ndarray, A: np.ndarray) -> np.ndarray | None:
    """All leave-one-out gaps from a single QR factorization.

    With G = (A*A)^-1 the residual of regressing column k on the others is
    A G e_k, of squared norm G_kk, so delta_k = |x_k| / sqrt(G_kk) where x
    is the least-squares coefficient vector.  Returns None when A is too
    ill-conditioned for the identity to hold any digits.
    """
    Q, R = np.linalg.qr(A)
    d = np.abs(np.diag(R))
    if d.min() <= d.max() * _IDENTITY_COND_FLOOR:
        return None
    coef = scipy.linalg.solve_triangular(R, Q.conj().T @ v)
    R_inv = scipy.linalg.solve_triangular(R, np.eye(R.shape[0], dtype=complex))
    g_diag = np.sum(np.abs(R_inv) ** 2, axis=1)
    gaps = np.abs(coef) / np.sqrt(g_diag)
    if not np.all(np.isfinite(gaps)):
        return None
    return gaps


def projection_gaps(y, omega, model: MeasurementModel,
                    method: str = "auto") -> np.ndarray:
    """delta_k for every k in omega, in omega's order."""
    if method not in GAP_METHODS:
        raise ValueError(f"unknown gap method {method!r}")
    omega = [int(j) for j in omega]
    if len(omega) > model.m:
        raise OvercompleteSupportError(
            f"support size {len(omega)} exceeds m={model.m}")
    v = _values(y)
    if method in ("auto", "identity"):
        gaps = _gaps_identity(v, atom_matrix(model, omega))
        if gaps is not None:
            return gaps
        if method == "identity":
            raise scipy.linalg.LinAlgError(
                "candidate atoms too ill-conditioned for the identity path")
    return np.array([projection_gap(v, omega, k, model) for k in omega])


def _argmin_with_ties(omega: np.ndarray, gaps: np.ndarray) -> int:
    # ties broken toward larger |k|, then larger k
    order = np.lexsort((-omega, -np.abs(omega), gaps))
    return int(order[0])


def prune(y, omega, model: MeasurementModel, epsilon2: float, *,
          gammas: np.ndarray | None = None,
          gap_method: str = "auto") -> RecoveryResult:
    """Remove sub-threshold atoms one at a time, then solve least squares.

    Terminates after at most |omega| rounds.  The last atom is never
    removed; if even a singleton scores below epsilon2 the result is
    flagged "possibly-zero-signal".
    """
    if epsilon2 < 0:
        raise ValueError("epsilon2 must be >= 0")
    kept = sorted(int(k) for k in omega)
    if len(kept) == 0:
        raise EmptyEstimateError("cannot prune an empty candidate set")
    if len(kept) > model.m:
        raise OvercompleteSupportError(
            f"candidate set size {len(kept)} exceeds m={model.m}")
    v = _values(y)
    trace: list[tuple[int, float]] = []
    flags: list[str] = []
    while True:
        arr = np.asarray(kept)
        gaps = projection_gaps(v, kept, model, gap_method)
        i0 = _argmin_with_ties(arr, gaps)
        if gaps[i0] >= epsilon2:
            break
        if len(kept) == 1:
            flags.append("possibly-zero-signal")
            break
        trace.append((kept[i0], float(gaps[i0])))
        kept.pop(i0)

    coef = least_squares(v, kept, model)
    dense = np.zeros(model.n, dtype=complex)
    dense[np.asarray(kept) + model.n // 2] = coef
    residual = float(np.linalg.norm(v - atom_matrix(model, kept) @ coef))
    return RecoveryResult(
        support=tuple(kept),
        coefficients=dense,
        residual=residual,
        gammas=gammas,
        prune_trace=tuple(trace),
        iterations=len(trace),
        flags=tuple(flags),
    )


def noiseless_recover(y, model: MeasurementModel,
                      tol: float = NOISELESS_ANGLE_TOL) -> RecoveryResult:
    """One-shot exact recovery: zero-angle selection plus a determined solve.

    Exact (to floating precision) whenever m > 2|T| and the Hankel row
    count satisfies |T|+1 <= L <= m-|T|-1.
    """
    selection = select_superset(y, model, sigma=0.0, noiseless_tol=tol)
    support = list(selection.omega)
    if len(support) > model.m:
        raise OvercompleteSupportError(
            f"{len(support)} candidates at tolerance {tol}; "
            f"the sparsity hypothesis looks violated")
    if len(support) == 0:
        raise EmptyEstimateError("no atom aligns with the measurement range")
    v = _values(y)
    coef = least_squares(v, support, model)
    dense = np.zeros(model.n, dtype=complex)
    dense[np.asarray(support) + model.n // 2] = coef
    residual = float(np.linalg.norm(v - atom_matrix(model, support) @ coef))
    return RecoveryResult(
        support=tuple(support),
        coefficients=dense,
        residual=residual,
        gammas=selection.gammas,
    )


def superset_recover(y, model: MeasurementModel | None = None,
                     sigma: float = 0.0, c: float = 1.0, *,
                     epsilon2: float | None = None,
                     gap_method: str = "auto",
                     **select_kwargs) -> RecoveryResult:
    """Full pipeline: superset selection followed by pruning.

    epsilon2 defaults to 10*sigma, the operating point of the noisy
    experiments (and to the noiseless angle tolerance at sigma = 0).
    """
    if model is None:
        if not isinstance(y, Measurement):
            raise ValueError("model is required when y is a bare array")
        model = y.model
    if epsilon2 is None:
        epsilon2 = 10.0 * sigma if sigma > 0 else NOISELESS_ANGLE_TOL
    selection = select_superset(y, model, sigma, c, **select_kwargs)
    if len(selection.omega) == 0:
        raise EmptyEstimateError(
            f"no candidate angle at or below {selection.epsilon1}")
    result = prune(y, selection.omega, model, epsilon2,
                   gammas=selection.gammas, gap_method=gap_method)
    if selection.flags:
        result.flags = result.flags + selection.flags
    return result
