"""Reading and writing matrices, signals, weights, measures, ensembles and reports.

CSV conventions
---------------
* matrices and subspaces: optional first line ``dim,m,n`` followed by ``m``
  rows of ``n`` numbers (for a subspace, one spanning vector per row);
* vectors: numbers on one row or one per line;
* signals: header ``n,x1,..,xd`` (Z-window) or ``t,x1,..,xd`` (R-grid if the
  times are symmetric about 0, R+-grid if they start at 0);
* weights: header ``n,p``;
* measure density samples: header ``t,w``;
* ensembles: header ``t,draw_id,x1,..,xd``, rows grouped by draw.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import InvalidInputError, ShapeError
from .signals import Grid, MeasureDensity, SampledSignal, WeightSeq
from .stochastic import ProcessEnsemble


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _rows(path):
    with open(path, newline="") as fh:
        return [[c.strip() for c in row] for row in csv.reader(fh) if row and any(c.strip() for c in row)]


def _floats(rows, what):
    try:
        return np.array([[float(c) for c in row] for row in rows], dtype=float)
    except ValueError as exc:
        raise InvalidInputError(f"non-numeric entry in {what}: {exc}") from None


def read_matrix(path) -> np.ndarray:
    path = Path(path)
    if path.suffix.lower() == ".json":
        obj = json.loads(path.read_text())
        for key in ("matrix", "basis", "vectors"):
            if isinstance(obj, dict) and key in obj:
                obj = obj[key]
                break
        A = np.asarray(obj, dtype=float)
        if A.ndim == 1:
            A = A[None, :]
        return A
    rows = _rows(path)
    if rows and rows[0][0].lower() == "dim":
        try:
            m, n = int(rows[0][1]), int(rows[0][2])
        except (IndexError, ValueError):
            raise InvalidInputError("header must read 'dim,m,n'") from None
        A = _floats(rows[1:], path.name)
        if A.shape != (m, n):
            raise ShapeError(f"{path.name}: header says {m}x{n}, found {A.shape}")
        return A
    if not rows:
        raise InvalidInputError(f"{path.name} is empty")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ShapeError(f"{path.name}: ragged rows")
    return _floats(rows, path.name)


def read_vector(path) -> np.ndarray:
    path = Path(path)
    if path.suffix.lower() == ".json":
        obj = json.loads(path.read_text())
        if isinstance(obj, dict):
            obj = obj.get("x", obj.get("vector"))
        return np.asarray(obj, dtype=float).ravel()
    rows = _rows(path)
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]
    return _floats(rows, path.name).ravel()


def write_matrix_csv(path, A) -> None:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["dim", A.shape[0], A.shape[1]])
        for row in A:
            w.writerow([repr(float(v)) for v in row])


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def _uniform_step(t: np.ndarray) -> float:
    if t.size < 2:
        raise InvalidInputError("a sampled signal needs at least 2 points")
    step = (t[-1] - t[0]) / (t.size - 1)
    if not (step > 0) or np.max(np.abs(np.diff(t) - step)) > 1e-6 * step:
        raise InvalidInputError("signal times must be sorted with a uniform step")
    # undo the rounding of written times so that e.g. 0.05 reads back as 0.05
    return float(f"{step:.12g}")


def grid_from_times(t: np.ndarray, integer_index: bool = False) -> Grid:
    if integer_index:
        N = int(round(t[-1]))
        if t.size != 2 * N + 1 or np.any(t != np.arange(-N, N + 1)):
            raise InvalidInputError("an n-indexed signal must list n = -N, ..., N")
        return Grid.z_window(N)
    step = _uniform_step(t)
    k_min = int(round(t[0] / step))
    k_max = int(round(t[-1] / step))
    if k_max - k_min + 1 != t.size or np.max(np.abs(np.arange(k_min, k_max + 1) * step - t)) > 1e-9 * max(1.0, abs(t).max()):
        raise InvalidInputError("signal times are not integer multiples of the step")
    if k_min == 0:
        return Grid("r_plus_grid", step, 0, k_max)
    if k_min == -k_max:
        return Grid("r_grid", step, k_min, k_max)
    raise InvalidInputError("time grid must be symmetric about 0 or start at 0")


def read_signal(path, norm_kind=None) -> SampledSignal:
    rows = _rows(path)
    if not rows:
        raise InvalidInputError(f"{path} is empty")
    header = [c.lower() for c in rows[0]]
    if header[0] not in ("t", "n"):
        raise InvalidInputError("signal CSV needs a header starting with 't' or 'n'")
    data = _floats(rows[1:], str(path))
    if data.ndim != 2 or data.shape[1] < 2:
        raise ShapeError("signal CSV needs a time column and at least one value column")
    grid = grid_from_times(data[:, 0], integer_index=header[0] == "n")
    sig = SampledSignal(grid, data[:, 1:])
    if norm_kind is not None:
        sig = SampledSignal(grid, sig.values, norm_kind)
    return sig


def _fmt(v: float) -> str:
    return repr(float(v))


def write_signal_csv(path, sig: SampledSignal) -> None:
    first = "n" if sig.grid.kind == "z_window" else "t"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([first] + [f"x{i + 1}" for i in range(sig.dim)])
        for k, row in zip(sig.grid.indices, sig.values):
            tval = str(int(k)) if first == "n" else _fmt(k * sig.grid.step)
            w.writerow([tval] + [_fmt(v) for v in row])


def read_weights(path) -> WeightSeq:
    path = Path(path)
    if path.suffix.lower() == ".json":
        obj = json.loads(path.read_text())
        return WeightSeq(int(obj["N"]), np.asarray(obj["p"], dtype=float))
    rows = _rows(path)
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]
    data = _floats(rows, path.name)
    n = data[:, 0]
    N = int(round(n[-1]))
    if n.size != 2 * N + 1 or np.any(n != np.arange(-N, N + 1)):
        raise InvalidInputError("weights must list n = -N, ..., N")
    return WeightSeq(N, data[:, 1])


def write_weights_csv(path, p: WeightSeq) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "p"])
        for n, v in zip(p.n, p.p):
            w.writerow([int(n), _fmt(v)])


def read_measure(path, side: str = "line") -> MeasureDensity:
    path = Path(path)
    if path.suffix.lower() == ".json":
        obj = json.loads(path.read_text())
        obj.setdefault("side", side)
        return MeasureDensity.from_dict(obj)
    rows = _rows(path)
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]
    data = _floats(rows, path.name)
    return MeasureDensity((data[:, 0], data[:, 1]), [], side)


def read_ensemble(path, seed: int = 0) -> ProcessEnsemble:
    rows = _rows(path)
    header = [c.lower() for c in rows[0]]
    if header[:2] != ["t", "draw_id"]:
        raise InvalidInputError("ensemble CSV header must start with 't,draw_id'")
    data = _floats(rows[1:], str(path))
    ids = data[:, 1].astype(int)
    draw_ids = np.unique(ids)
    t0 = data[ids == draw_ids[0], 0]
    grid = grid_from_times(t0)
    d = data.shape[1] - 2
    draws = np.empty((draw_ids.size, grid.size, d))
    for j, k in enumerate(draw_ids):
        sel = data[ids == k]
        if sel.shape[0] != grid.size or np.any(sel[:, 0] != t0):
            raise ShapeError(f"draw {k} is not sampled on the common time grid")
        draws[j] = sel[:, 2:]
    return ProcessEnsemble.from_array(grid, draws, seed)


def write_ensemble_csv(path, x: ProcessEnsemble) -> None:
    t = x.t
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "draw_id"] + [f"x{i + 1}" for i in range(x.dim)])
        k = 0
        for block in x.iter_chunks():
            for path_values in block:
                for tv, row in zip(t, path_values):
                    w.writerow([_fmt(tv), k] + [_fmt(v) for v in row])
                k += 1


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if np.isnan(v):
            return "nan"
        if np.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return obj


def dumps_report(report: dict) -> str:
    """Canonical JSON: sorted keys, fixed indentation, non-finite floats as strings."""
    return json.dumps(_jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def profile_csv(radii, columns: dict) -> str:
    """Plot data: one row per radius, one column per named curve."""
    names = list(columns)
    lines = [",".join(["r"] + names)]
    for i, r in enumerate(radii):
        lines.append(",".join([_fmt(r)] + [_fmt(columns[n][i]) for n in names]))
    return "\n".join(lines) + "\n"
