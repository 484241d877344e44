"""Build concrete pump/Stokes envelopes for a pulse-pair train."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.integrate import simpson

from .analytic import TWO_PI, mixing_angles
from .model import PulsePair, PulseShape, SimulationGrid, TrainSpec

DEFAULT_SPACING = 6.0  # in pulse widths
MIN_GAUSSIAN_SPACING = 4.0  # in pulse widths
DEFAULT_PADDING = 5.0  # grid margin beyond first/last center, in pulse widths
DEFAULT_STEPS_PER_WIDTH = 2000


class OverlapError(ValueError):
    """Pairs placed too close together for the per-pair propagator to apply."""


def calibrate_amplitude(shape: PulseShape, area: float) -> float:
    """Peak rms Rabi frequency Ω with ``Ω ∫f dt = area``.

    For the Gaussian ``exp(-(t/T)²)`` this is ``area / (sqrt(pi) T)``.
    """
    if not (math.isfinite(area) and area > 0):
        raise ValueError(f"area must be positive and finite, got {area}")
    integral = shape.integral()
    if integral <= 0:
        raise ValueError("pulse shape has zero integral")
    return area / integral


def min_spacing(shape: PulseShape) -> float:
    if shape.kind == "gaussian":
        return MIN_GAUSSIAN_SPACING * shape.width
    return shape.width


def build_train(
    n: int,
    shape: PulseShape | None = None,
    spacing: float | None = None,
    area: float = TWO_PI,
    angles: Sequence[float] | None = None,
    *,
    gamma: float = 0.0,
    dt: float | None = None,
    padding: float = DEFAULT_PADDING,
) -> TrainSpec:
    """Train of ``n`` equally spaced pairs centered at ``(k-1) * spacing``.

    Angles default to the optimal schedule. The grid spans
    ``padding`` widths beyond the first and last centers with step
    ``dt`` (default ``width / 2000``).
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"number of pairs must be a positive integer, got {n!r}")
    n = int(n)
    shape = shape or PulseShape.gaussian(1.0)
    width = shape.width
    if spacing is None:
        spacing = DEFAULT_SPACING * width
    if n > 1 and spacing < min_spacing(shape) * (1 - 1e-12):
        raise OverlapError(
            f"spacing {spacing} is below the minimum {min_spacing(shape)} "
            f"(4T for Gaussian width T) required to keep pairs separate"
        )
    calibrate_amplitude(shape, area)
    if angles is None:
        angles = mixing_angles(n)
    angles = [float(a) for a in angles]
    if len(angles) != n:
        raise ValueError(f"expected {n} angles, got {len(angles)}")
    pairs = tuple(PulsePair(theta, area, k * spacing, shape) for k, theta in enumerate(angles))
    if dt is None:
        dt = width / DEFAULT_STEPS_PER_WIDTH
    margin = padding * width
    if shape.kind == "sampled":
        lo = min(t for t, _ in shape.knots)
        hi = max(t for t, _ in shape.knots)
        grid = SimulationGrid(lo - margin, (n - 1) * spacing + hi + margin, dt)
    else:
        grid = SimulationGrid(-margin, (n - 1) * spacing + margin, dt)
    return TrainSpec(pairs, gamma, float(spacing), grid)


def _piecewise_simpson(fn, lo: float, hi: float, breakpoints: Sequence[float], dt: float) -> float:
    """Composite Simpson on ``[lo, hi]``, restarted at every breakpoint."""
    edges = sorted({lo, hi, *(b for b in breakpoints if lo < b < hi)})
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        m = max(2, 2 * math.ceil((b - a) / (2 * dt)))
        t = np.linspace(a, b, m + 1)
        y = fn(t)
        if len(breakpoints):
            # a step edge must take the value of the segment it bounds
            y[0] = fn(np.array([a + 1e-12 * (b - a)]))[0]
            y[-1] = fn(np.array([b - 1e-12 * (b - a)]))[0]
        total += simpson(y, x=t)
    return float(total)


def _train_breakpoints(train: TrainSpec) -> list[float]:
    return [p.center + b for p in train.pairs for b in p.shape.breakpoints()]


def measure_rms_area(train: TrainSpec, pair_index: int) -> float:
    """Quadrature of ``sqrt(Ωp² + Ωs²)`` over one pair's window."""
    if not 0 <= pair_index < len(train.pairs):
        raise IndexError(f"pair index {pair_index} out of range")
    lo, hi = train.windows()[pair_index]
    return accumulated_rms_area(train, lo, hi)


def accumulated_rms_area(train: TrainSpec, t0: float, t1: float) -> float:
    """rms pulse area accumulated between ``t0`` and ``t1``."""
    if t1 <= t0:
        return 0.0

    def rms(t):
        p, s = train.envelopes(t)
        return np.hypot(p, s)

    return _piecewise_simpson(rms, t0, t1, _train_breakpoints(train), train.grid.dt)


def pair_areas(train: TrainSpec, pair_index: int) -> tuple[float, float]:
    """Pump and Stokes areas of one pair's own envelopes over the whole grid."""
    pair = train.pairs[pair_index]
    lo, hi = train.grid.t_start, train.grid.t_end
    bps = [pair.center + b for b in pair.shape.breakpoints()]
    a_p = _piecewise_simpson(lambda t: pair.envelopes(t)[0], lo, hi, bps, train.grid.dt)
    a_s = _piecewise_simpson(lambda t: pair.envelopes(t)[1], lo, hi, bps, train.grid.dt)
    return a_p, a_s


def mirrored(train: TrainSpec) -> TrainSpec:
    """Time-reversed train with pump and Stokes swapped (angles -> pi/2 - angles, reversed)."""
    t_flip = train.grid.t_start + train.grid.t_end
    pairs = tuple(
        PulsePair(0.5 * math.pi - p.theta, p.area, t_flip - p.center, _reflect(p.shape))
        for p in reversed(train.pairs)
    )
    return TrainSpec(pairs, train.gamma, train.spacing, train.grid)


def _reflect(shape: PulseShape) -> PulseShape:
    if shape.kind != "sampled":
        return shape
    return PulseShape.sampled([(-t, v) for t, v in reversed(shape.knots)])
