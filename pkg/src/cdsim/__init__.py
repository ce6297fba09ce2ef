"""Entanglement of two dipole-coupled atoms, one of them inside a cavity."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    SystemParams,
    SubspaceBasis,
    Spectrum,
    build_basis,
    build_hamiltonian,
    analytic_spectrum,
    numeric_eig,
    spectrum,
    coupling_at_position,
)
from .dynamics import (  # noqa: E402
    StateVector,
    TwoAtomDensity,
    Propagator,
    initial_state,
    propagate,
    propagate_expm,
    reduce_to_atoms,
)
from .entanglement import ConcurrenceValue, concurrence, concurrence_x_state  # noqa: E402
from .experiments import (  # noqa: E402
    TimeGrid,
    SweepResult,
    Peak,
    sweep_time,
    sweep_grid,
    find_peaks,
    figure_scenarios,
)
