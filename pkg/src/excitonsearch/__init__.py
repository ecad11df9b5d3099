"""Exciton-mediated search on long-range lattices.

Dispersion of Frenkel excitons on power-law and LRIC rings, brute-force
spectral checks, golden-rule search times, and the loss channels that
compete with them.
"""

from .errors import *  # noqa: F401,F403
from .units import Quantity, convert, parse_quantity, thermal_energy
from .specfun import hurwitz_zeta, lerch, polylog, zeta
from .lattice import (
    DispersionCurve,
    LricRing,
    PowerLawChain,
    band_edge_energy,
    band_edge_limit,
    bandwidth_scaling_fit,
    coupling_regime,
    dispersion_closed,
    dispersion_curve,
    dispersion_direct,
)
from .oracle import build_hamiltonian, eigendecompose, evolve, half_life, level_spacing_scaling
from .greens import (
    PhononModel,
    SearchProblem,
    closed_form_times,
    coupling_squared,
    f_average,
    golden_rule_rate,
    green_function,
    lric_search_time,
)
from .rates import (
    CarrierParams,
    annihilation_time,
    band_shift,
    coherence_damping,
    compete_report,
    feasibility_condition,
    formation_time,
    scattering_time,
)
from .config import load_config, load_preset

__version__ = "0.1.0"
