"""Brute-force and cross-validation checks for optimal pulse-pair trains."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from .analytic import TWO_PI, mixing_angles, p2_max_bound, propagators
from .designer import accumulated_rms_area, build_train, measure_rms_area
from .integrator import IntegratorConfig, evolve, extract_p2_max
from .model import PulseShape

FEASIBILITY_TOL = 1e-6
MAX_SCAN_PAIRS = 3


class InfeasibleGridError(RuntimeError):
    """No angle tuple on the scan grid reaches complete transfer."""


@dataclass(frozen=True)
class ScanResult:
    angles: list[float]
    max_p2: float
    cell: float
    n_feasible: int
    per_pair: list[float] = field(default_factory=list)


def angle_grid(grid_points: int) -> np.ndarray:
    """Interior points ``j * (pi/2) / G`` for ``j = 1 .. G-1``."""
    return 0.5 * math.pi / grid_points * np.arange(1, grid_points)


def _apply(theta: np.ndarray, area: float, state: np.ndarray) -> np.ndarray:
    """``U(theta) @ state`` for every theta; output has theta's shape prepended to state's batch."""
    u = propagators(theta, area)  # (G, 3, 3)
    return np.einsum("gij,...j->g...i", u, state)


def _scan_tail(state: np.ndarray, prefix_peak: float, grid: np.ndarray, depth: int):
    """Vectorised scan over the last ``depth`` (1 or 2) angles from a fixed prefix state.

    Returns (final |c3|², worst transient P2) arrays of shape ``(G,) * depth``.
    """
    peaks = np.full((), prefix_peak)
    for _ in range(depth):
        mid = _apply(grid, math.pi, state)
        # new leading axis is this angle; move it behind existing ones
        mid = np.moveaxis(mid, 0, -2)
        state = np.moveaxis(_apply(grid, TWO_PI, state), 0, -2)
        peaks = np.maximum(peaks[..., None], np.abs(mid[..., 1]) ** 2)
    return np.abs(state[..., 2]) ** 2, peaks


def bruteforce_optimal_angles(n: int, grid_points: int = 720) -> ScanResult:
    """Exhaustive search for the complete-transfer schedule with the lowest transient P2.

    Every angle runs over the interior grid of ``(0, pi/2)``. A tuple is
    feasible when ``|U31|² >= 1 - 1e-6`` at area 2pi; its score is the
    largest per-pair peak P2, each taken at half area. Ties go to the
    lexicographically smallest tuple.
    """
    if n not in range(1, MAX_SCAN_PAIRS + 1):
        raise ValueError(f"exhaustive scan supports 1..{MAX_SCAN_PAIRS} pairs, got {n}")
    if grid_points < 90:
        raise ValueError("grid_points must be at least 90")
    grid = angle_grid(grid_points)
    cell = 0.5 * math.pi / grid_points
    depth = min(n, 2)
    ground = np.array([1, 0, 0], dtype=complex)

    best_score = math.inf
    best_idx: tuple[int, ...] | None = None
    n_feasible = 0
    for prefix in itertools.product(range(len(grid)), repeat=n - depth):
        state = ground
        peak = 0.0
        for j in prefix:
            mid = analytic.single_pair_propagator(grid[j], math.pi) @ state
            peak = max(peak, abs(mid[1]) ** 2)
            state = analytic.single_pair_propagator(grid[j], TWO_PI) @ state
        p3, peaks = _scan_tail(state, peak, grid, depth)
        feasible = p3 >= 1.0 - FEASIBILITY_TOL
        count = int(feasible.sum())
        if not count:
            continue
        n_feasible += count
        scores = np.where(feasible, peaks, np.inf)
        local = float(scores.min())
        # candidates within rounding of the minimum; argmax on a C-ordered mask is the smallest tuple
        tied = scores <= local + 1e-12
        tail = np.unravel_index(int(np.argmax(tied)), tied.shape)
        candidate = tuple(prefix) + tuple(int(i) for i in tail)
        if local < best_score - 1e-12 or (abs(local - best_score) <= 1e-12 and candidate < best_idx):
            best_score = min(best_score, local)
            best_idx = candidate
    if best_idx is None:
        raise InfeasibleGridError(f"no complete-transfer tuple on a {grid_points}-point grid")
    angles = [float(grid[i]) for i in best_idx]
    per_pair = [float(p) for p in analytic.pair_transient_maxima(angles)]
    return ScanResult(angles, max(per_pair), cell, n_feasible, per_pair)


def transfer_feasible_set(grid_points: int, n: int = 2) -> list[tuple[float, ...]]:
    """All grid tuples whose cascade at area 2pi gives ``|U31|² >= 1 - 1e-6``."""
    if n not in (1, 2):
        raise ValueError("feasible-set enumeration is implemented for one or two pairs")
    grid = angle_grid(grid_points)
    p3, _ = _scan_tail(np.array([1, 0, 0], dtype=complex), 0.0, grid, n)
    hits = np.argwhere(p3 >= 1.0 - FEASIBILITY_TOL)
    return [tuple(float(grid[i]) for i in row) for row in hits]


@dataclass
class CrosscheckReport:
    n: int
    dt: float
    boundary_deviation: list[float]  # max |ΔP_n| over boundaries, n = 1, 2, 3
    boundary_p3_numeric: list[float]
    boundary_p3_analytic: list[float]
    boundary_p2_numeric: list[float]
    p2_max_numeric: float
    p2_max_bound: float
    per_pair_p2_numeric: list[float]
    per_pair_p2_analytic: list[float]
    peak_area_fraction: list[float]

    @property
    def p2_deviation(self) -> float:
        return abs(self.p2_max_numeric - self.p2_max_bound)

    @property
    def max_deviation(self) -> float:
        return max(self.boundary_deviation)

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["p2_deviation"] = self.p2_deviation
        return d


def crosscheck_analytic_numeric(
    n: int, dt: float = 1 / 2000, *, spacing: float = 6.0, width: float = 1.0
) -> CrosscheckReport:
    """Integrate the optimal lossless train and compare against exact partial cascades."""
    angles = mixing_angles(n)
    train = build_train(n, spacing=spacing * width, dt=dt * width, angles=angles,
                        shape=PulseShape.gaussian(width))
    series = evolve(train, IntegratorConfig(dt=dt * width))
    numeric = series.boundary_populations()
    exact = np.abs(np.array(analytic.partial_cascades(angles))) ** 2
    peak = extract_p2_max(series)
    fractions = []
    for k, (t_peak, (lo, _)) in enumerate(zip(peak.times, series.windows)):
        fractions.append(accumulated_rms_area(train, lo, t_peak) / measure_rms_area(train, k))
    return CrosscheckReport(
        n=n,
        dt=dt,
        boundary_deviation=[float(x) for x in np.abs(numeric - exact).max(axis=0)],
        boundary_p3_numeric=[float(x) for x in numeric[:, 2]],
        boundary_p3_analytic=[float(x) for x in exact[:, 2]],
        boundary_p2_numeric=[float(x) for x in numeric[:, 1]],
        p2_max_numeric=peak.value,
        p2_max_bound=p2_max_bound(n),
        per_pair_p2_numeric=peak.per_pair,
        per_pair_p2_analytic=analytic.pair_transient_maxima(angles),
        peak_area_fraction=fractions,
    )
