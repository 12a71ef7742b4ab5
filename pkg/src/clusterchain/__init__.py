"""Exact solution and pairwise quantum correlations of the cluster-like spin chain."""

__version__ = "0.1.0"

from .analysis import (
    FitResult,
    SweepRow,
    entanglement_birth,
    exp_decay_fit,
    fit_measure,
    power_fit,
    sweep,
)
from .correlators import (
    SIGN,
    CorrelatorSet,
    correlator_set,
    magnetization,
    string_correlator,
    xx_correlator,
    yy_correlator,
    zz_correlator,
)
from .errors import ClusterChainError
from .gfunction import GVector, g_finite_sum, g_integral, g_vector
from .model import (
    BdGSolution,
    ModelParams,
    bdg_solve,
    bogoliubov_phase,
    dispersion,
    edge_splitting,
)
from .qinfo import (
    DiscordResult,
    MeasurementBasis,
    concurrence,
    discord,
    entropy,
    eof,
    measured_conditional_entropy,
    mutual_information,
)
from .rdm import TwoSiteRDM, build_rdm, validate_rdm
