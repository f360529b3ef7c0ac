"""Sampled bounded functions on Z-windows, symmetric R-grids and R+-grids,
plus discrete weights and measures used for ergodic means.

A grid point is stored by its integer index ``k``; its time is ``k * step``.
Keeping integer indices avoids drift when restricting to integers or to the
half-line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .errors import (
    DegenerateInputError,
    GridAlignmentError,
    InvalidInputError,
    OutOfRangeError,
    ShapeError,
)
from .normed import EUCLIDEAN, NormKind, norms

GRID_KINDS = ("z_window", "r_grid", "r_plus_grid")
_ALIGN_TOL = 1e-9


@dataclass(frozen=True)
class Grid:
    kind: str
    step: float
    k_min: int
    k_max: int

    def __post_init__(self):
        if self.kind not in GRID_KINDS:
            raise InvalidInputError(f"unknown grid kind {self.kind!r}")
        if not (self.step > 0) or not np.isfinite(self.step):
            raise InvalidInputError("grid step must be positive")
        if self.k_max < self.k_min:
            raise InvalidInputError("empty grid")
        if self.kind == "z_window" and (self.step != 1.0 or self.k_min != -self.k_max):
            raise InvalidInputError("a Z-window is {-N, ..., N} with step 1")
        if self.kind == "r_grid" and self.k_min != -self.k_max:
            raise InvalidInputError("an R-grid is symmetric about 0")
        if self.kind == "r_plus_grid" and self.k_min != 0:
            raise InvalidInputError("an R+-grid starts at 0")

    @classmethod
    def z_window(cls, N: int) -> "Grid":
        return cls("z_window", 1.0, -int(N), int(N))

    @classmethod
    def line(cls, r_max: float, step: float) -> "Grid":
        return cls("r_grid", float(step), -_steps(r_max, step), _steps(r_max, step))

    @classmethod
    def half_line(cls, r_max: float, step: float) -> "Grid":
        return cls("r_plus_grid", float(step), 0, _steps(r_max, step))

    @property
    def size(self) -> int:
        return self.k_max - self.k_min + 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    @property
    def t(self) -> np.ndarray:
        return self.indices * self.step

    @property
    def t_min(self) -> float:
        return self.k_min * self.step

    @property
    def t_max(self) -> float:
        return self.k_max * self.step

    def position(self, t: float) -> int:
        """Array position of grid time ``t``; raises if ``t`` is off-grid."""
        k = int(round(t / self.step))
        if abs(k * self.step - t) > _ALIGN_TOL * max(1.0, abs(t)):
            raise OutOfRangeError(f"t = {t} is not a grid point (step {self.step})")
        if not (self.k_min <= k <= self.k_max):
            raise OutOfRangeError(f"t = {t} lies outside [{self.t_min}, {self.t_max}]")
        return k - self.k_min

    def shift_steps(self, tau: float) -> int:
        """Convert a time shift to a whole number of steps."""
        s = int(round(tau / self.step))
        if abs(s * self.step - tau) > _ALIGN_TOL * max(1.0, abs(tau)):
            raise GridAlignmentError(f"shift {tau} is not a multiple of the step {self.step}")
        return s

    def to_dict(self) -> dict:
        return {"kind": self.kind, "step": self.step, "k_min": self.k_min, "k_max": self.k_max}


def _steps(r_max: float, step: float) -> int:
    if not (step > 0):
        raise InvalidInputError("grid step must be positive")
    K = int(round(r_max / step))
    if abs(K * step - r_max) > 1e-9 * max(1.0, abs(r_max)):
        raise GridAlignmentError(f"r_max = {r_max} is not a multiple of step = {step}")
    return K


@dataclass
class SampledSignal:
    """A bounded function U -> R^d known on a uniform grid."""

    grid: Grid
    values: np.ndarray
    norm_kind: NormKind = EUCLIDEAN

    def __post_init__(self):
        V = np.asarray(self.values, dtype=float)
        if V.ndim == 1:
            V = V[:, None]
        if V.ndim != 2 or V.shape[0] != self.grid.size or V.shape[1] < 1:
            raise ShapeError(f"values of shape {V.shape} do not fit a grid of {self.grid.size} points")
        if not np.all(np.isfinite(V)):
            raise InvalidInputError("signal has non-finite values")
        self.values = V

    @classmethod
    def from_function(cls, grid: Grid, fn, norm_kind: NormKind = EUCLIDEAN) -> "SampledSignal":
        return cls(grid, np.asarray(fn(grid.t), dtype=float), norm_kind)

    @property
    def t(self) -> np.ndarray:
        return self.grid.t

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def norms(self) -> np.ndarray:
        return norms(self.values, self.norm_kind)

    def sup_norm(self) -> float:
        return float(self.norms().max())

    def with_values(self, values) -> "SampledSignal":
        return SampledSignal(self.grid, values, self.norm_kind)

    def value_at(self, t: float) -> np.ndarray:
        return self.values[self.grid.position(t)]

    def same_support(self, other: "SampledSignal") -> bool:
        return self.grid == other.grid and self.values.shape == other.values.shape

    def __add__(self, other: "SampledSignal") -> "SampledSignal":
        if not self.same_support(other):
            raise ShapeError("signals live on different grids or dimensions")
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "SampledSignal") -> "SampledSignal":
        if not self.same_support(other):
            raise ShapeError("signals live on different grids or dimensions")
        return self.with_values(self.values - other.values)

    def scaled(self, lam: float) -> "SampledSignal":
        return self.with_values(lam * self.values)


@dataclass
class WeightSeq:
    """Nonnegative weights p_n for n in [-N, N]."""

    N: int
    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float).ravel()
        if p.size != 2 * self.N + 1:
            raise ShapeError(f"need {2 * self.N + 1} weights for the window [-{self.N}, {self.N}]")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise InvalidInputError("weights must be finite and nonnegative")
        self.p = p

    @classmethod
    def from_function(cls, fn: Callable[[np.ndarray], np.ndarray], N: int) -> "WeightSeq":
        n = np.arange(-N, N + 1)
        return cls(N, np.broadcast_to(np.asarray(fn(n), dtype=float), n.shape).copy())

    @classmethod
    def constant(cls, N: int, value: float = 1.0) -> "WeightSeq":
        return cls(N, np.full(2 * N + 1, float(value)))

    @property
    def n(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    def window(self, N: int) -> np.ndarray:
        if N > self.N or N < 0:
            raise OutOfRangeError(f"window {N} exceeds the weight support {self.N}")
        return self.p[self.N - N : self.N + N + 1]

    def window_sum(self, N: int) -> float:
        return float(self.window(N).sum())


DensitySpec = Union[float, Callable[[np.ndarray], np.ndarray], tuple]


@dataclass
class MeasureDensity:
    """A positive measure: a density (w.r.t. Lebesgue) plus point atoms.

    ``density`` is a constant, a callable ``t -> w(t)``, or a pair
    ``(t_samples, w_samples)`` interpolated linearly (constant beyond the
    ends).  ``side`` is ``line`` (means over [-r, r]) or ``half_line``
    (means over [0, r]).
    """

    density: DensitySpec = 1.0
    atoms: list = field(default_factory=list)
    side: str = "line"

    def __post_init__(self):
        if self.side not in ("line", "half_line"):
            raise InvalidInputError(f"unknown measure side {self.side!r}")
        if isinstance(self.density, tuple):
            ts, ws = (np.asarray(a, dtype=float) for a in self.density)
            if ts.shape != ws.shape or ts.ndim != 1 or np.any(np.diff(ts) <= 0):
                raise InvalidInputError("density samples need increasing t and matching w")
            if np.any(ws < 0):
                raise InvalidInputError("density must be nonnegative")
            self.density = (ts, ws)
        elif not callable(self.density):
            if not (float(self.density) >= 0):
                raise InvalidInputError("density must be nonnegative")
            self.density = float(self.density)
        atoms = []
        for point, mass in self.atoms:
            if not (mass >= 0):
                raise InvalidInputError("atom masses must be nonnegative")
            atoms.append((float(point), float(mass)))
        self.atoms = atoms

    @classmethod
    def lebesgue(cls, side: str = "line") -> "MeasureDensity":
        return cls(1.0, [], side)

    @classmethod
    def integer_atoms(cls, N: int, mass: float = 1.0, side: str = "line") -> "MeasureDensity":
        lo = -N if side == "line" else 0
        return cls(0.0, [(float(n), mass) for n in range(lo, N + 1)], side)

    def density_at(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if isinstance(self.density, float):
            return np.full(t.shape, self.density)
        if isinstance(self.density, tuple):
            ts, ws = self.density
            return np.interp(t, ts, ws)
        w = np.broadcast_to(np.asarray(self.density(t), dtype=float), t.shape)
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise InvalidInputError("density evaluated to a negative or non-finite value")
        return w

    def to_dict(self) -> dict:
        if isinstance(self.density, float):
            dens = {"kind": "constant", "value": self.density}
        elif isinstance(self.density, tuple):
            dens = {"kind": "samples", "t": self.density[0].tolist(), "w": self.density[1].tolist()}
        else:
            raise InvalidInputError("a callable density cannot be serialised")
        return {"side": self.side, "density": dens, "atoms": [list(a) for a in self.atoms]}

    @classmethod
    def from_dict(cls, obj: dict) -> "MeasureDensity":
        dens = obj.get("density", {"kind": "constant", "value": 1.0})
        if isinstance(dens, (int, float)):
            spec: DensitySpec = float(dens)
        elif dens.get("kind") == "constant":
            spec = float(dens["value"])
        elif dens.get("kind") == "samples":
            spec = (np.asarray(dens["t"], dtype=float), np.asarray(dens["w"], dtype=float))
        else:
            raise InvalidInputError(f"unknown density specification {dens!r}")
        return cls(spec, [tuple(a) for a in obj.get("atoms", [])], obj.get("side", "line"))


def require_positive(total: float, what: str) -> None:
    if not (total > 0):
        raise DegenerateInputError(f"{what} has zero mass on the probed window")
