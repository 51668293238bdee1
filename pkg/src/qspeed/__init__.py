"""Lower bounds on quantum evolution times and an exact-evolution oracle
to check them against."""

from .catalog import Row, TableRowSpec, analytic_tau, make_state, mc_dispersion_study, table1_report
from .dynamics import (
    CrossingResult,
    autocorrelation,
    earliest_crossing,
    evolve_density,
    fidelity_mixed,
    fidelity_pure,
    purify,
)
from .errors import BracketError, DomainError, NormalizationError, StateFileError
from .numerics import TangencyConstants, compute_constants, inequality_margin
from .spectral import (
    BoundReport,
    DensityState,
    DispersionStats,
    PureState,
    SpectralWeights,
    bound_report,
    dispersion_stats,
    g_c,
    g_ml,
    g_teur,
    weights_from_density,
    weights_from_pure,
)

__version__ = "0.1.0"
