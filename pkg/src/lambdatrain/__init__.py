"""Complete population transfer in a three-state Lambda system with trains of coincident pulse pairs."""

from .analytic import (
    cascade,
    mixing_angles,
    p2_max_bound,
    pair_transient_maxima,
    partial_cascades,
    single_pair_final_populations,
    single_pair_propagator,
)
from .designer import OverlapError, build_train, calibrate_amplitude, measure_rms_area
from .integrator import GridTooCoarseError, IntegratorConfig, evolve, extract_p2_max, hamiltonian_at
from .model import (
    PulsePair,
    PulseShape,
    SimulationGrid,
    StateVector,
    TimeSeries,
    TrainSpec,
    state_populations,
)
from .oracle import bruteforce_optimal_angles, crosscheck_analytic_numeric, transfer_feasible_set

__version__ = "0.1.0"
