"""Fixed-step RK4 integration of the (optionally lossy) three-state Schrödinger equation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .model import StateVector, TimeSeries, TrainSpec

MIN_STEPS_PER_WIDTH = 100


class GridTooCoarseError(ValueError):
    """Time step too large for the narrowest pulse in the train."""


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    method: Literal["RK4Fixed"] = "RK4Fixed"
    record_stride: int = 1

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise ValueError("record_stride must be a positive integer")
        if self.method != "RK4Fixed":
            raise ValueError(f"unsupported method {self.method!r}")


def hamiltonian_at(t: float, envelopes: tuple[float, float], gamma: float) -> np.ndarray:
    """Hamiltonian ``(1/2) [[0, Ωp, 0], [Ωp, -iΓ, Ωs], [0, Ωs, 0]]`` (hbar = 1)."""
    omega_p, omega_s = envelopes
    if not (math.isfinite(omega_p) and math.isfinite(omega_s)) or omega_p < 0 or omega_s < 0:
        raise ValueError("envelopes must be finite and non-negative")
    if not math.isfinite(gamma) or gamma < 0:
        raise ValueError(f"loss rate must be non-negative, got {gamma}")
    return 0.5 * np.array(
        [[0, omega_p, 0], [omega_p, -1j * gamma, omega_s], [0, omega_s, 0]], dtype=complex
    )


def _step_count(span: float, dt: float) -> tuple[int, float]:
    n = max(1, math.ceil(span / dt - 1e-9))
    return n, span / n


def evolve(
    train: TrainSpec,
    config: IntegratorConfig | None = None,
    initial: StateVector | None = None,
) -> TimeSeries:
    """Integrate ``i dc/dt = H(t) c`` across the train's grid.

    The step is shrunk slightly, if needed, so an integer number of steps
    spans the grid exactly.
    """
    config = config or IntegratorConfig(dt=train.grid.dt)
    if train.pairs:
        narrowest = min(p.shape.width for p in train.pairs)
        if config.dt > narrowest / MIN_STEPS_PER_WIDTH * (1 + 1e-12):
            raise GridTooCoarseError(
                f"dt = {config.dt} exceeds width/{MIN_STEPS_PER_WIDTH} = {narrowest / MIN_STEPS_PER_WIDTH}"
            )
    state = (initial or StateVector.ground()).as_array()
    if abs(np.vdot(state, state).real - 1.0) > 1e-9:
        raise ValueError("initial state must be normalized")

    t0, t1 = train.grid.t_start, train.grid.t_end
    n, h = _step_count(t1 - t0, config.dt)
    # envelopes at every half step: index 2i is t_i, 2i+1 is t_i + h/2
    t_half = t0 + 0.5 * h * np.arange(2 * n + 1)
    pump, stokes = train.envelopes(t_half)
    a_list = (0.5 * pump).tolist()
    b_list = (0.5 * stokes).tolist()
    g = 0.5 * train.gamma

    windows = train.windows()
    boundary_idx = [min(n, max(0, round((hi - t0) / h))) for _, hi in windows[:-1]]
    if windows:
        boundary_idx.append(n)
    boundary_lookup: dict[int, list[int]] = {}
    for k, idx in enumerate(boundary_idx):
        boundary_lookup.setdefault(idx, []).append(k)
    boundary_states = np.zeros((len(boundary_idx), 3), dtype=complex)

    stride = int(config.record_stride)
    record = list(range(0, n + 1, stride))
    if record[-1] != n:
        record.append(n)
    rec_states = np.empty((len(record), 3), dtype=complex)
    r = 0

    c1, c2, c3 = (complex(x) for x in state)
    hh = 0.5 * h
    h6 = h / 6.0
    mj = -1j
    for i in range(n + 1):
        if r < len(record) and record[r] == i:
            rec_states[r] = (c1, c2, c3)
            r += 1
        if i in boundary_lookup:
            for k in boundary_lookup[i]:
                boundary_states[k] = (c1, c2, c3)
        if i == n:
            break
        j = 2 * i
        a, b = a_list[j], b_list[j]
        k11 = mj * a * c2
        k12 = mj * (a * c1 + b * c3) - g * c2
        k13 = mj * b * c2
        a, b = a_list[j + 1], b_list[j + 1]
        d1, d2, d3 = c1 + hh * k11, c2 + hh * k12, c3 + hh * k13
        k21 = mj * a * d2
        k22 = mj * (a * d1 + b * d3) - g * d2
        k23 = mj * b * d2
        d1, d2, d3 = c1 + hh * k21, c2 + hh * k22, c3 + hh * k23
        k31 = mj * a * d2
        k32 = mj * (a * d1 + b * d3) - g * d2
        k33 = mj * b * d2
        a, b = a_list[j + 2], b_list[j + 2]
        d1, d2, d3 = c1 + h * k31, c2 + h * k32, c3 + h * k33
        k41 = mj * a * d2
        k42 = mj * (a * d1 + b * d3) - g * d2
        k43 = mj * b * d2
        c1 += h6 * (k11 + 2.0 * k21 + 2.0 * k31 + k41)
        c2 += h6 * (k12 + 2.0 * k22 + 2.0 * k32 + k42)
        c3 += h6 * (k13 + 2.0 * k23 + 2.0 * k33 + k43)

    idx = np.asarray(record)
    pops = np.abs(rec_states) ** 2
    return TimeSeries(
        t=t0 + h * idx,
        omega_p=pump[2 * idx],
        omega_s=stokes[2 * idx],
        populations=pops,
        norm2=pops.sum(axis=1),
        windows=tuple(windows),
        boundary_times=t0 + h * np.asarray(boundary_idx, dtype=float),
        boundary_states=boundary_states,
        final_state=StateVector(c1, c2, c3),
    )


@dataclass(frozen=True)
class P2Peak:
    value: float
    per_pair: list[float]
    times: list[float]


def extract_p2_max(series: TimeSeries) -> P2Peak:
    """Global maximum of P2 and the maximum inside each pair window."""
    p2 = series.P2
    if len(p2) == 0:
        raise ValueError("empty time series")
    per_pair, times = [], []
    windows = series.windows or ((series.t[0], series.t[-1]),)
    last = len(windows) - 1
    for k, (lo, hi) in enumerate(windows):
        mask = (series.t >= lo) & ((series.t < hi) if k < last else (series.t <= hi))
        if not mask.any():
            per_pair.append(0.0)
            times.append(0.5 * (lo + hi))
            continue
        i = int(np.argmax(np.where(mask, p2, -np.inf)))
        per_pair.append(float(p2[i]))
        times.append(float(series.t[i]))
    if not series.windows:
        per_pair, times = [], []
    return P2Peak(float(p2.max()), per_pair, times)
