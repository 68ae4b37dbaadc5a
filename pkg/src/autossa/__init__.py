"""Singular spectrum analysis with automatic identification of trend and harmonic components."""

from .core import (
    Decomposition,
    Eigentriple,
    FactorVectorParts,
    TrajectoryMatrix,
    decompose,
    devectorize,
    elementary_component,
    embed_1d,
    embed_2d,
    embed_mssa,
    mssa,
    reconstruct,
    split_factor_vector,
    ssa_1d,
    ssa_2d,
)
from .errors import DataError, DegenerateInputError, ParameterError
from .identify import (
    AngleIdConfig,
    FreqIdConfig,
    GroupingResult,
    TrendIdConfig,
    identify_periodic_angle,
    identify_periodic_freq,
    identify_trend,
    tau,
    tau_norm,
)
from .identify_2d import candidate_fields, identify_trend_2d
from .mssa_identify import (
    identify_periodic_angle_mssa_left,
    identify_periodic_angle_mssa_right,
    identify_periodic_freq_mssa_left,
    identify_periodic_freq_mssa_right,
    identify_trend_mssa_left,
    identify_trend_mssa_right,
)
from .spectral import (
    argmax_frequency,
    freq_contribution,
    freq_contribution_2d,
    periodogram_1d,
    periodogram_2d,
    rho_mean,
)

__version__ = "0.1.0"
