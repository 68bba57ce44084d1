"""Reflected Ornstein-Uhlenbeck processes: simulation and least-squares drift estimation."""

__version__ = "0.1.0"

from .exceptions import (DegeneratePathError, InvalidInputError, MissingDataError,
                         ReflectedOUError, ReplicationError, UnsupportedCombinationError)
from .kernel import (ModelParams, RngStream, SamplePath, Scheme, SimGrid, lepingle_step,
                     reflected_euler_step, simulate_path, skorokhod_map)
from .stationary import StationaryLaw, invariant_pdf, stationary_second_moment
from .estimators import (Estimate, Method, estimate, lse_continuous, lse_discrete,
                         lse_two_sided_continuous, lse_two_sided_discrete, martingale_residual,
                         moment_estimator)
from .montecarlo import (ExperimentConfig, McSummary, histogram, ks_statistic, normalized_errors,
                         run_experiment, summarize)
