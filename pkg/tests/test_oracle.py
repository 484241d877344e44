import math

import numpy as np
import pytest

from lambdatrain.analytic import cascade, mixing_angles, p2_max_bound
from lambdatrain.oracle import (
    InfeasibleGridError,
    angle_grid,
    bruteforce_optimal_angles,
    crosscheck_analytic_numeric,
    transfer_feasible_set,
)

PI = math.pi


def test_angle_grid_is_open_interval():
    g = angle_grid(90)
    assert len(g) == 89
    assert g[0] == pytest.approx(PI / 180) and g[-1] == pytest.approx(PI / 2 - PI / 180)


def test_single_pair_scan():
    result = bruteforce_optimal_angles(1, 90)
    assert result.angles == pytest.approx([PI / 4])
    assert result.max_p2 == pytest.approx(0.5, abs=1e-12)
    assert result.n_feasible == 1


@pytest.mark.parametrize("n, grid_points", [(2, 720), (2, 100), (3, 180)])
def test_scan_recovers_optimal_schedule(n, grid_points):
    result = bruteforce_optimal_angles(n, grid_points)
    np.testing.assert_allclose(result.angles, mixing_angles(n), atol=result.cell * (1 + 1e-9))
    assert abs(result.max_p2 - p2_max_bound(n)) <= 2 * result.cell * PI
    # the winner really is feasible
    assert abs(cascade(result.angles)[2, 0]) ** 2 >= 1 - 1e-6


def test_scan_on_grid_hits_schedule_exactly():
    result = bruteforce_optimal_angles(2, 720)
    np.testing.assert_allclose(result.angles, [PI / 8, 3 * PI / 8], atol=1e-12)
    assert result.max_p2 == pytest.approx(math.sin(PI / 8) ** 2, abs=1e-12)
    assert result.per_pair == pytest.approx([result.max_p2] * 2, abs=1e-10)


def test_scan_rejects():
    with pytest.raises(ValueError):
        bruteforce_optimal_angles(4, 180)
    with pytest.raises(ValueError):
        bruteforce_optimal_angles(2, 50)


def test_infeasible_grid():
    # pi/4 is not a grid point when G is odd: no single-pair solution
    with pytest.raises(InfeasibleGridError):
        bruteforce_optimal_angles(1, 91)


def test_scan_minimum_matches_dense_line_search():
    """Independent check for N=2: feasible set is |θ2 - θ1| = π/4; scan the + branch directly."""
    t1 = np.linspace(1e-6, PI / 4 - 1e-6, 200001)
    worst = np.maximum(np.sin(t1) ** 2, np.sin(PI / 4 - t1) ** 2)
    assert worst.min() == pytest.approx(bruteforce_optimal_angles(2, 720).max_p2, abs=1e-9)
    assert t1[np.argmin(worst)] == pytest.approx(PI / 8, abs=1e-5)


def test_feasible_set_structure():
    points = transfer_feasible_set(720)
    cell = PI / 2 / 720
    assert any(abs(a - PI / 8) < 1e-12 and abs(b - 3 * PI / 8) < 1e-12 for a, b in points)
    assert any(abs(a - 0.1) <= cell and abs(b - 0.1 - PI / 4) <= cell for a, b in points)
    assert not any(abs(a - PI / 4) < 1e-12 and abs(b - PI / 4) < 1e-12 for a, b in points)
    # two reflections compose to a rotation by 2(θ2 - θ1), so both ±π/4 offsets transfer
    for a, b in points:
        assert abs(cascade([a, b])[2, 0]) ** 2 >= 1 - 1e-6
        assert abs(b - a) == pytest.approx(PI / 4, abs=1e-9)
    assert any(b > a for a, b in points) and any(b < a for a, b in points)


def test_equal_angles_never_transfer():
    assert abs(cascade([PI / 4, PI / 4])[2, 0]) < 1e-15


@pytest.mark.parametrize("n", [1, 3, 8])
def test_crosscheck(n):
    report = crosscheck_analytic_numeric(n)
    assert report.max_deviation < 1e-4
    assert report.p2_deviation < 1e-3
    assert max(report.per_pair_p2_analytic) - min(report.per_pair_p2_analytic) < 1e-10
    assert max(report.per_pair_p2_numeric) - min(report.per_pair_p2_numeric) < 1e-3
    assert (np.diff(report.boundary_p3_numeric) > 0).all()
    np.testing.assert_allclose(report.boundary_p3_numeric, report.boundary_p3_analytic, atol=1e-4)
    # the transient peak sits at half the pair's rms area
    np.testing.assert_allclose(report.peak_area_fraction, 0.5, rtol=0.02)
