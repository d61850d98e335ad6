"""Circuit-theoretic simulation of tightly coupled massive MIMO links built
from Chu antenna arrays."""

__version__ = "0.1.0"

from .chu import ChuElement, self_impedance
from .coupling import (
    COLINEAR,
    PARALLEL,
    ArrayGeometry,
    ImpedanceMatrix,
    Orientation,
    array_impedance,
    load_impedance_matrix,
    mutual_impedance,
    save_impedance_matrix,
)
from .errors import FormatError, InternalConsistencyError, NotPSDError, SolveError, ValidationError
from .network import (
    ChannelRealization,
    FrontEndConfig,
    MultiportBlocks,
    channel_matrix,
    noise_covariance,
    p_matrix,
    q_matrix,
    solve_link,
)
from .propagation import FadingDraw, LinkConfig, los_transimpedance, rayleigh_transimpedance, steering_vector
from .rate import (
    BandSet,
    FrequencyGrid,
    RateResult,
    achievable_rate,
    beamforming_snr,
    operational_bandwidth,
    voltage_budget,
    waterfill,
    whitened_eigenmodes,
)
from .scenario import Scenario, parse_scenario, serialize_scenario
from .sweeps import SweepSpec, Table, emit_table, read_table, run_sweep
from .tightcoupling import (
    TightCouplingReport,
    asymptotic_ratio,
    colinear_reactance_residual,
    optimum_ratio_sweep,
    polylog,
    tight_coupling_root,
    zeta3,
)
