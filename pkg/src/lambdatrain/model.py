"""Domain types for three-state Lambda-system pulse trains.

Units are natural: hbar = 1, times in units of a reference pulse width T,
Rabi frequencies and loss rates in units of 1/T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

# Complex amplitudes are plain Python ``complex``; propagators are 3x3 complex
# numpy arrays.  Serialization splits them into (re, im) pairs.
ComplexAmplitude = complex
Propagator3 = np.ndarray

NORM_TOL_ANALYTIC = 1e-9
NORM_TOL_NUMERIC = 1e-6

ShapeKind = Literal["gaussian", "rect", "sampled"]


def _require_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class StateVector:
    c1: complex
    c2: complex
    c3: complex

    def __post_init__(self) -> None:
        for name in ("c1", "c2", "c3"):
            value = complex(getattr(self, name))
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def ground(cls) -> "StateVector":
        return cls(1.0, 0.0, 0.0)

    @classmethod
    def from_array(cls, arr: Sequence[complex]) -> "StateVector":
        a = np.asarray(arr, dtype=complex).reshape(3)
        return cls(complex(a[0]), complex(a[1]), complex(a[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3], dtype=complex)

    def norm2(self) -> float:
        return abs(self.c1) ** 2 + abs(self.c2) ** 2 + abs(self.c3) ** 2

    def to_pairs(self) -> list[list[float]]:
        return [[c.real, c.imag] for c in (self.c1, self.c2, self.c3)]

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> "StateVector":
        if len(pairs) != 3:
            raise ValueError("state needs exactly three (re, im) pairs")
        return cls(*(complex(re, im) for re, im in pairs))


def state_populations(s: StateVector | Sequence[complex]) -> tuple[float, float, float]:
    """Return ``(P1, P2, P3)`` with ``P_n = |c_n|**2``."""
    if not isinstance(s, StateVector):
        s = StateVector.from_array(s)
    return abs(s.c1) ** 2, abs(s.c2) ** 2, abs(s.c3) ** 2


@dataclass(frozen=True)
class PulseShape:
    """Common time dependence ``f(t - center)`` of a pump/Stokes pair.

    ``gaussian``: ``exp(-(t/width)**2)``.
    ``rect``: 1 on ``|t| < width/2``, 1/2 on the edges, 0 outside.  The
    half value on an edge node makes RK4 accumulate the exact area when the
    edges fall on grid points.
    ``sampled``: linear interpolation of ``knots`` (``(time, value)`` relative
    to the pair center), zero outside the knot range.
    """

    kind: ShapeKind
    width: float = 1.0
    knots: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("gaussian", "rect", "sampled"):
            raise ValueError(f"unknown pulse shape {self.kind!r}")
        if self.kind == "sampled":
            knots = tuple((float(t), float(v)) for t, v in self.knots)
            if len(knots) < 2:
                raise ValueError("sampled shape needs at least two knots")
            times = [t for t, _ in knots]
            if any(b <= a for a, b in zip(times, times[1:])):
                raise ValueError("knot times must be strictly increasing")
            if any(v < 0 or not math.isfinite(v) for _, v in knots):
                raise ValueError("knot values must be finite and non-negative")
            object.__setattr__(self, "knots", knots)
            object.__setattr__(self, "width", times[-1] - times[0])
        else:
            _require_finite(width=self.width)
            if self.width <= 0:
                raise ValueError("pulse width must be positive")

    @classmethod
    def gaussian(cls, width: float = 1.0) -> "PulseShape":
        return cls("gaussian", width)

    @classmethod
    def rect(cls, duration: float = 1.0) -> "PulseShape":
        return cls("rect", duration)

    @classmethod
    def sampled(cls, knots: Sequence[tuple[float, float]]) -> "PulseShape":
        return cls("sampled", knots=tuple(knots))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "gaussian":
            return np.exp(-((t / self.width) ** 2))
        if self.kind == "rect":
            d = np.abs(t) - 0.5 * self.width
            edge = np.abs(d) <= 1e-9 * self.width
            return np.where(edge, 0.5, np.where(d < 0, 1.0, 0.0))
        times = np.array([k[0] for k in self.knots])
        values = np.array([k[1] for k in self.knots])
        return np.interp(t, times, values, left=0.0, right=0.0)

    def integral(self) -> float:
        """Exact ``∫ f(t) dt`` over the whole real line."""
        if self.kind == "gaussian":
            return math.sqrt(math.pi) * self.width
        if self.kind == "rect":
            return self.width
        return float(
            sum(0.5 * (v0 + v1) * (t1 - t0) for (t0, v0), (t1, v1) in zip(self.knots, self.knots[1:]))
        )

    def breakpoints(self) -> tuple[float, ...]:
        """Times (relative to center) where ``f`` is not smooth."""
        if self.kind == "rect":
            return (-0.5 * self.width, 0.5 * self.width)
        if self.kind == "sampled":
            return tuple(t for t, _ in self.knots)
        return ()

    def to_json(self) -> dict:
        if self.kind == "sampled":
            return {"kind": "sampled", "knots": [list(k) for k in self.knots]}
        return {"kind": self.kind, "width": self.width}

    @classmethod
    def from_json(cls, data: dict) -> "PulseShape":
        kind = data["kind"]
        if kind in ("rectangular", "rect"):
            return cls.rect(float(data["width"]))
        if kind == "sampled":
            return cls.sampled([tuple(k) for k in data["knots"]])
        return cls(kind, float(data["width"]))


@dataclass(frozen=True)
class PulsePair:
    """One coincident pump/Stokes pair.

    The pump peak is ``Ω sin(theta)`` and the Stokes peak ``Ω cos(theta)``, where
    ``Ω = area / ∫f`` makes the rms area equal ``area``.
    """

    theta: float
    area: float
    center: float
    shape: PulseShape

    def __post_init__(self) -> None:
        _require_finite(theta=self.theta, area=self.area, center=self.center)
        if not 0.0 <= self.theta <= 0.5 * math.pi:
            raise ValueError(f"mixing angle must lie in [0, pi/2], got {self.theta}")
        if self.area <= 0:
            raise ValueError(f"rms area must be positive, got {self.area}")

    @property
    def rabi_amplitude(self) -> float:
        return self.area / self.shape.integral()

    @property
    def pump_peak(self) -> float:
        return self.rabi_amplitude * math.sin(self.theta)

    @property
    def stokes_peak(self) -> float:
        return self.rabi_amplitude * math.cos(self.theta)

    def envelopes(self, t) -> tuple[np.ndarray, np.ndarray]:
        f = self.shape(np.asarray(t, dtype=float) - self.center)
        return self.pump_peak * f, self.stokes_peak * f

    def to_json(self) -> dict:
        return {
            "theta": round(self.theta, 7),
            "area": round(self.area, 7),
            "center": self.center,
            "shape": self.shape.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "PulsePair":
        return cls(
            theta=float(data["theta"]),
            area=float(data["area"]),
            center=float(data["center"]),
            shape=PulseShape.from_json(data["shape"]),
        )


@dataclass(frozen=True)
class SimulationGrid:
    t_start: float
    t_end: float
    dt: float

    def __post_init__(self) -> None:
        _require_finite(t_start=self.t_start, t_end=self.t_end, dt=self.dt)
        if self.t_end <= self.t_start:
            raise ValueError("t_start must be before t_end")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if (self.t_end - self.t_start) / self.dt < 100 * (1 - 1e-12):
            raise ValueError("grid must hold at least 100 steps")

    def to_json(self) -> dict:
        return {"t_start": self.t_start, "t_end": self.t_end, "dt": self.dt}


@dataclass(frozen=True)
class TrainSpec:
    pairs: tuple[PulsePair, ...]
    gamma: float
    spacing: float
    grid: SimulationGrid

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(self.pairs))
        _require_finite(gamma=self.gamma)
        if self.gamma < 0:
            raise ValueError("loss rate gamma must be non-negative")
        centers = [p.center for p in self.pairs]
        if any(b <= a for a, b in zip(centers, centers[1:])):
            raise ValueError("pair centers must be strictly increasing")

    @property
    def angles(self) -> list[float]:
        return [p.theta for p in self.pairs]

    def windows(self) -> list[tuple[float, float]]:
        """Per-pair time windows split at midpoints between consecutive centers."""
        if not self.pairs:
            return []
        centers = [p.center for p in self.pairs]
        edges = [self.grid.t_start]
        edges += [0.5 * (a + b) for a, b in zip(centers, centers[1:])]
        edges.append(self.grid.t_end)
        return list(zip(edges[:-1], edges[1:]))

    def envelopes(self, t) -> tuple[np.ndarray, np.ndarray]:
        """Total pump and Stokes Rabi frequencies at times ``t``."""
        t = np.asarray(t, dtype=float)
        pump = np.zeros_like(t)
        stokes = np.zeros_like(t)
        for pair in self.pairs:
            p, s = pair.envelopes(t)
            pump += p
            stokes += s
        return pump, stokes

    def with_gamma(self, gamma: float) -> "TrainSpec":
        return TrainSpec(self.pairs, gamma, self.spacing, self.grid)

    def with_dt(self, dt: float) -> "TrainSpec":
        grid = SimulationGrid(self.grid.t_start, self.grid.t_end, dt)
        return TrainSpec(self.pairs, self.gamma, self.spacing, grid)

    def to_json(self) -> dict:
        return {
            "pairs": [p.to_json() for p in self.pairs],
            "gamma": self.gamma,
            "spacing": self.spacing,
            "grid": self.grid.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "TrainSpec":
        pairs = tuple(PulsePair.from_json(p) for p in data.get("pairs", []))
        g = data["grid"]
        grid = SimulationGrid(float(g["t_start"]), float(g["t_end"]), float(g["dt"]))
        spacing = data.get("spacing")
        if spacing is None:
            centers = [p.center for p in pairs]
            spacing = centers[1] - centers[0] if len(centers) > 1 else 0.0
        return cls(pairs, float(data.get("gamma", 0.0)), float(spacing), grid)


@dataclass(frozen=True)
class TimeSeries:
    """Sampled trajectory: one row per recorded time.

    ``windows`` are the per-pair time windows; ``boundary_states`` holds the
    state at the grid node nearest each window's upper edge (the last one is
    the final state).
    """

    t: np.ndarray
    omega_p: np.ndarray
    omega_s: np.ndarray
    populations: np.ndarray  # shape (rows, 3)
    norm2: np.ndarray
    windows: tuple[tuple[float, float], ...] = ()
    boundary_times: np.ndarray = field(default_factory=lambda: np.empty(0))
    boundary_states: np.ndarray = field(default_factory=lambda: np.empty((0, 3), dtype=complex))
    final_state: StateVector | None = None

    @property
    def P1(self) -> np.ndarray:
        return self.populations[:, 0]

    @property
    def P2(self) -> np.ndarray:
        return self.populations[:, 1]

    @property
    def P3(self) -> np.ndarray:
        return self.populations[:, 2]

    def __len__(self) -> int:
        return len(self.t)

    def rows(self):
        for i in range(len(self.t)):
            yield (
                self.t[i],
                self.omega_p[i],
                self.omega_s[i],
                self.populations[i, 0],
                self.populations[i, 1],
                self.populations[i, 2],
                self.norm2[i],
            )

    def boundary_populations(self) -> np.ndarray:
        return np.abs(self.boundary_states) ** 2
