"""Replicated estimation experiments and their summaries.

Replication ``i`` of an experiment simulates one path from
``RngStream(base_seed, i)`` and estimates ``theta`` from it.  Replications
may run on a thread pool (the path kernels release the GIL); results are
always reduced in replication order, so summaries do not depend on
scheduling.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math

import numpy as np
from scipy.special import ndtr

from .estimators import Method, estimate
from .exceptions import DegeneratePathError, InvalidInputError, ReplicationError
from .kernel import ModelParams, RngStream, Scheme, SimGrid, default_scheme, simulate_path

__all__ = [
    "ExperimentConfig",
    "McSummary",
    "Histogram",
    "run_experiment",
    "summarize",
    "normalized_errors",
    "ks_statistic",
    "histogram",
    "default_histogram_range",
]


@dataclass(frozen=True)
class ExperimentConfig:
    params: ModelParams
    grid: SimGrid
    scheme: Scheme | None = None
    method: Method = Method.LSE_DISCRETE
    n_replications: int = 1000
    base_seed: int = 0

    def __post_init__(self):
        scheme = default_scheme(self.params) if self.scheme is None else Scheme(self.scheme)
        object.__setattr__(self, "scheme", scheme)
        object.__setattr__(self, "method", Method(self.method))
        n_rep = self.n_replications
        if isinstance(n_rep, bool) or int(n_rep) != n_rep or n_rep < 2:
            raise InvalidInputError(f"n_replications must be an integer >= 2, got {n_rep!r}")
        object.__setattr__(self, "n_replications", int(n_rep))
        # validates the seed range
        RngStream(self.base_seed, 0)


@dataclass(frozen=True)
class McSummary:
    """One row of a simulation table.

    ``std_dev`` and ``asy_var`` use divisor ``N - 1``; ``mse`` is the mean of
    squared errors about the true value (divisor ``N``).  ``asy_var`` is the
    sample variance of ``sqrt(T) (theta_hat - theta)``.
    """

    bias: float
    std_dev: float
    mse: float
    asy_var: float
    n_replications: int
    theta_true: float


def summarize(theta_hats, theta_true, horizon_T):
    th = np.asarray(theta_hats, dtype=np.float64)
    n_rep = th.shape[0]
    if n_rep < 2:
        raise InvalidInputError("at least two replicates are needed")
    err = th - theta_true
    bias = float(np.mean(th)) - theta_true
    return McSummary(
        bias=bias,
        std_dev=float(np.std(th, ddof=1)),
        mse=float(np.mean(err * err)),
        asy_var=float(np.var(math.sqrt(horizon_T) * err, ddof=1)),
        n_replications=n_rep,
        theta_true=theta_true,
    )


def _replicate(config, i):
    path = simulate_path(config.params, config.grid, config.scheme, RngStream(config.base_seed, i))
    try:
        return estimate(path, config.method, sigma=config.params.sigma)
    except (DegeneratePathError, InvalidInputError) as exc:
        raise ReplicationError(i, exc) from exc


def run_experiment(config, jobs=1):
    """Run ``config.n_replications`` independent replications.

    Parameters
    ----------
    config : ExperimentConfig
    jobs : int
        Maximum number of replications in flight.

    Returns
    -------
    summary : McSummary
    samples : list of Estimate
        Indexed by replication (= stream id).

    Raises
    ------
    ReplicationError
        On the first degenerate replication; the experiment is aborted.
    """
    idx = range(config.n_replications)
    if jobs <= 1:
        samples = [_replicate(config, i) for i in idx]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            samples = list(pool.map(lambda i: _replicate(config, i), idx))
    summary = summarize([s.theta_hat for s in samples], config.params.theta, config.grid.T)
    return summary, samples


def normalized_errors(samples, theta_true):
    """``sqrt(T) (theta_hat - theta_true)`` per estimate; all horizons must agree."""
    if len(samples) == 0:
        return np.empty(0)
    horizons = {s.horizon_T for s in samples}
    if len(horizons) != 1:
        raise InvalidInputError(f"estimates have mixed horizons: {sorted(horizons)}")
    T = horizons.pop()
    return math.sqrt(T) * (np.array([s.theta_hat for s in samples]) - theta_true)


def ks_statistic(values, variance):
    """Kolmogorov-Smirnov distance between the sample and ``N(0, variance)``.

    ``D = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n)`` over the order
    statistics ``x_(1) <= ... <= x_(n)``.
    """
    x = np.sort(np.asarray(values, dtype=np.float64))
    n = x.shape[0]
    if n == 0:
        raise InvalidInputError("ks_statistic needs at least one value")
    variance = float(variance)
    if not (math.isfinite(variance) and variance > 0):
        raise InvalidInputError(f"variance must be positive, got {variance!r}")
    cdf = ndtr(x / math.sqrt(variance))
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - cdf)
    d_minus = np.max(cdf - (i - 1) / n)
    return float(max(d_plus, d_minus))


@dataclass(frozen=True)
class Histogram:
    centers: np.ndarray
    density: np.ndarray
    excluded: int
    edges: np.ndarray = field(repr=False)

    def rows(self):
        return list(zip(self.centers.tolist(), self.density.tolist()))


def default_histogram_range(theta):
    half = 4.0 * math.sqrt(2.0 * theta)
    return (-half, half)


def histogram(values, n_bins=30, range=(-1.0, 1.0)):
    """Density histogram over a closed range.

    Densities are normalized by the total number of values, so
    ``sum(density * width)`` is the fraction that fell inside ``range``;
    the number left out is reported as ``excluded``.
    """
    lo, hi = (float(v) for v in range)
    if not lo < hi:
        raise InvalidInputError(f"histogram range must satisfy lo < hi, got {range!r}")
    if isinstance(n_bins, bool) or int(n_bins) != n_bins or n_bins < 1:
        raise InvalidInputError(f"n_bins must be a positive integer, got {n_bins!r}")
    v = np.asarray(values, dtype=np.float64).ravel()
    inside = (v >= lo) & (v <= hi)
    counts, edges = np.histogram(v[inside], bins=int(n_bins), range=(lo, hi))
    width = (hi - lo) / n_bins
    total = v.shape[0]
    density = counts / (total * width) if total else np.zeros(int(n_bins))
    centers = 0.5 * (edges[:-1] + edges[1:])
    return Histogram(centers, density.astype(np.float64), int(total - inside.sum()), edges)
