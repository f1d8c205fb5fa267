"""Text file formats: signals, measurements, recovery documents, diagrams.

All floating-point values are written with 17 significant digits so that
every file round-trips bit-exactly back into memory.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .experiments import PhaseDiagram
from .fourier import Measurement, MeasurementModel, SparseSignal
from .pencil import PencilConfig
from .pruning import RecoveryResult


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------- signals

def write_signal(signal: SparseSignal, path) -> None:
    """Record format: an ``n`` line, then one ``index re im`` triple per spike."""
    lines = ["# superres sparse signal", f"n {signal.n}"]
    for k, a in zip(signal.support, signal.amplitudes):
        lines.append(f"{k} {_fmt(a.real)} {_fmt(a.imag)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_signal(path) -> SparseSignal:
    n = None
    support, amplitudes = [], []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "n":
            if len(parts) != 2:
                raise ValueError(f"malformed dimension line: {raw!r}")
            n = int(parts[1])
        else:
            if len(parts) != 3:
                raise ValueError(f"malformed spike line: {raw!r}")
            support.append(int(parts[0]))
            amplitudes.append(complex(float(parts[1]), float(parts[2])))
    if n is None:
        raise ValueError("signal file is missing the 'n' line")
    return SparseSignal(n, tuple(support), tuple(amplitudes))


# ------------------------------------------------------------ measurements

def write_measurement(measurement: Measurement, path, sigma: float | None = None) -> None:
    """CSV with columns j, re, im; model geometry kept in comment lines."""
    model = measurement.model
    header = [
        "# superres measurement",
        f"# n={model.n} m={model.m} L={model.L}"
        + (f" sigma={_fmt(sigma)}" if sigma is not None else ""),
        "j,re,im",
    ]
    rows = [f"{j},{_fmt(v.real)},{_fmt(v.imag)}"
            for j, v in enumerate(measurement.values)]
    Path(path).write_text("\n".join(header + rows) + "\n")


def read_measurement(path) -> tuple[Measurement, float | None]:
    """Returns the measurement and the recorded sigma (None when absent)."""
    meta: dict[str, str] = {}
    values: list[complex] = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line[1:].split():
                if "=" in token:
                    key, _, val = token.partition("=")
                    meta[key] = val
            continue
        if line.startswith("j,"):
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ValueError(f"malformed measurement row: {raw!r}")
        values.append(complex(float(parts[1]), float(parts[2])))
    try:
        model = MeasurementModel(int(meta["n"]), int(meta["m"]), int(meta["L"]))
    except KeyError as exc:
        raise ValueError(f"measurement file is missing model metadata {exc}") from None
    sigma = float(meta["sigma"]) if "sigma" in meta else None
    return Measurement(np.array(values, dtype=complex), model), sigma


# --------------------------------------------------------------- recoveries

def write_recovery(result: RecoveryResult, model: MeasurementModel, path,
                   method: str = "superset",
                   include_gammas: bool = False) -> None:
    support = list(result.support)
    coef = result.coefficients[np.asarray(support) + model.n // 2]
    doc = {
        "method": method,
        "n": model.n,
        "m": model.m,
        "L": model.L,
        "support": support,
        "coefficients": [[k, c.real, c.imag] for k, c in zip(support, coef)],
        "residual": result.residual,
        "iterations": result.iterations,
        "prune_trace": [[k, d] for k, d in result.prune_trace],
        "flags": list(result.flags),
    }
    if include_gammas and result.gammas is not None:
        doc["gammas"] = [float(g) for g in result.gammas]
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def read_recovery(path) -> tuple[RecoveryResult, MeasurementModel, str]:
    doc = json.loads(Path(path).read_text())
    model = MeasurementModel(doc["n"], doc["m"], doc["L"])
    dense = np.zeros(model.n, dtype=complex)
    for k, re, im in doc["coefficients"]:
        dense[int(k) + model.n // 2] = complex(re, im)
    gammas = np.asarray(doc["gammas"], dtype=float) if "gammas" in doc else None
    result = RecoveryResult(
        support=tuple(int(k) for k in doc["support"]),
        coefficients=dense,
        residual=float(doc["residual"]),
        gammas=gammas,
        prune_trace=tuple((int(k), float(d)) for k, d in doc["prune_trace"]),
        iterations=int(doc["iterations"]),
        flags=tuple(doc["flags"]),
    )
    return result, model, doc["method"]


def write_gamma_csv(gammas: np.ndarray, n: int, path) -> None:
    """Diagnostic dump of (k, gamma_k) for selection-profile plots."""
    ks = np.arange(-n // 2, n // 2)
    rows = ["k,gamma"] + [f"{k},{_fmt(g)}" for k, g in zip(ks, gammas)]
    Path(path).write_text("\n".join(rows) + "\n")


# ----------------------------------------------------------- phase diagrams

def write_phase_diagram_csv(diagram: PhaseDiagram, path) -> None:
    """Header row of sigma values; body rows of m, log10(1-mu), frequencies."""
    header = "m,log10_1m_coherence," + ",".join(_fmt(s) for s in diagram.sigmas)
    rows = [header]
    for i, m in enumerate(diagram.m_grid):
        cells = ",".join(_fmt(v) for v in diagram.success[i])
        rows.append(f"{m},{_fmt(diagram.coherence_axis[i])},{cells}")
    Path(path).write_text("\n".join(rows) + "\n")


def read_phase_diagram_csv(path) -> tuple[list[int], list[float], list[float], np.ndarray]:
    """Returns (m_grid, coherence_axis, sigmas, success matrix)."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    head = lines[0].split(",")
    sigmas = [float(s) for s in head[2:]]
    m_grid, axis, body = [], [], []
    for ln in lines[1:]:
        parts = ln.split(",")
        m_grid.append(int(parts[0]))
        axis.append(float(parts[1]))
        body.append([float(v) for v in parts[2:]])
    return m_grid, axis, sigmas, np.asarray(body)


def write_phase_diagram_json(diagram: PhaseDiagram, path,
                             extra_config: dict | None = None) -> None:
    """Sidecar with the fully resolved configuration and seeds."""
    doc = {
        "family": {"kind": diagram.family.kind,
                   "parameters": _jsonable(diagram.family.parameters)},
        "method": diagram.method,
        "n": diagram.n,
        "m_grid": list(diagram.m_grid),
        "sigmas": list(diagram.sigmas),
        "trials": diagram.trials,
        "base_seed": diagram.base_seed,
        "threshold_constant": diagram.threshold_constant,
        "pencil_config": asdict(diagram.pencil_config),
        "noise_convention": diagram.noise_convention,
        "hankel_rows_rule": "floor(m/3)",
        "coherence_axis": list(diagram.coherence_axis),
    }
    if extra_config:
        doc.update(_jsonable(extra_config))
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, PencilConfig):
        return asdict(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def write_phase_diagram_pgm(diagram: PhaseDiagram, path) -> None:
    """Portable graymap of the grid: white = certain success, black = none.

    Rows run over the m grid (top row = largest m, matching an axis that
    increases upward), columns over the sigma grid.
    """
    grid = np.flipud(np.rint(diagram.success * 255).astype(int))
    height, width = grid.shape
    lines = ["P2", f"{width} {height}", "255"]
    lines += [" ".join(str(v) for v in row) for row in grid]
    Path(path).write_text("\n".join(lines) + "\n")
