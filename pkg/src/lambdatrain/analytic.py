"""Closed-form propagators for resonant, coincident pump/Stokes pairs (lossless)."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .model import StateVector, state_populations

TWO_PI = 2.0 * math.pi


def _check_angle_area(theta: float, area: float) -> None:
    if not (math.isfinite(theta) and math.isfinite(area)):
        raise ValueError("theta and area must be finite")
    if not 0.0 <= theta <= 0.5 * math.pi:
        raise ValueError(f"theta must lie in [0, pi/2], got {theta}")
    if area < 0:
        raise ValueError(f"area must be non-negative, got {area}")


def propagators(theta, area) -> np.ndarray:
    """Broadcasting version of :func:`single_pair_propagator`.

    Returns an array of shape ``broadcast(theta, area).shape + (3, 3)``.
    No range checks; callers own validation.
    """
    theta, area = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(area, dtype=float))
    s, c = np.sin(theta), np.cos(theta)
    q = np.sin(0.25 * area) ** 2
    h = np.sin(0.5 * area)
    u = np.empty(theta.shape + (3, 3), dtype=complex)
    u[..., 0, 0] = 1.0 - 2.0 * s * s * q
    u[..., 0, 1] = -1j * s * h
    u[..., 0, 2] = -np.sin(2.0 * theta) * q
    u[..., 1, 0] = u[..., 0, 1]
    u[..., 1, 1] = np.cos(0.5 * area)
    u[..., 1, 2] = -1j * c * h
    u[..., 2, 0] = u[..., 0, 2]
    u[..., 2, 1] = u[..., 1, 2]
    u[..., 2, 2] = 1.0 - 2.0 * c * c * q
    return u


def single_pair_propagator(theta: float, area: float) -> np.ndarray:
    """Exact 3x3 propagator of one pair with mixing angle ``theta`` and rms area ``area``."""
    _check_angle_area(theta, area)
    return propagators(theta, area)


def single_pair_final_populations(theta: float, area: float) -> tuple[float, float, float]:
    """Final ``(P1, P2, P3)`` after one pair, starting in state 1."""
    _check_angle_area(theta, area)
    s2 = math.sin(theta) ** 2
    q = math.sin(0.25 * area) ** 2
    p1 = (1.0 - 2.0 * s2 * q) ** 2
    p2 = s2 * math.sin(0.5 * area) ** 2
    p3 = math.sin(2.0 * theta) ** 2 * q * q
    return p1, p2, p3


def mixing_angles(n: int) -> list[float]:
    """Optimal schedule ``theta_k = (2k - 1) pi / (4N)``, k = 1..N.

    The upper half is written as ``pi/2 - theta`` of the lower half so the
    time-reversal (anagram) symmetry holds bit-for-bit.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"number of pairs must be a positive integer, got {n!r}")
    n = int(n)
    lower = [(2 * k - 1) * math.pi / (4 * n) for k in range(1, n // 2 + 1)]
    middle = [math.pi / 4] if n % 2 else []
    upper = [0.5 * math.pi - th for th in reversed(lower)]
    return lower + middle + upper


def cascade(angles: Sequence[float], area: float = TWO_PI) -> np.ndarray:
    """Total propagator ``U(theta_N) ... U(theta_1)``."""
    angles = list(angles)
    if not angles:
        raise ValueError("cascade needs at least one angle")
    total = np.eye(3, dtype=complex)
    for theta in angles:
        total = single_pair_propagator(theta, area) @ total
    return total


def partial_cascades(
    angles: Sequence[float], area: float = TWO_PI, initial: StateVector | None = None
) -> list[np.ndarray]:
    """States after each successive pair, ``[U(θ1)c, U(θ2)U(θ1)c, ...]``."""
    state = (initial or StateVector.ground()).as_array()
    out = []
    for theta in angles:
        state = single_pair_propagator(theta, area) @ state
        out.append(state)
    return out


def pair_transient_maxima(angles: Sequence[float], area: float = TWO_PI) -> list[float]:
    """Middle-state population of each pair at half its area, starting in state 1.

    For a pair entering with no population in state 2 the transient P2 is
    ``sin²(A(t)/2)`` times a constant, so the half-area value is the maximum.
    """
    state = StateVector.ground().as_array()
    maxima = []
    for theta in angles:
        mid = single_pair_propagator(theta, 0.5 * area) @ state
        maxima.append(float(abs(mid[1]) ** 2))
        state = single_pair_propagator(theta, area) @ state
    return maxima


def p2_max_bound(n: int) -> float:
    """Peak middle-state population ``sin²(pi / 4N)`` for the optimal N-pair train."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"number of pairs must be a positive integer, got {n!r}")
    return math.sin(math.pi / (4 * int(n))) ** 2


def final_populations(angles: Sequence[float], area: float = TWO_PI) -> tuple[float, float, float]:
    u = cascade(angles, area)
    return state_populations(u[:, 0])
