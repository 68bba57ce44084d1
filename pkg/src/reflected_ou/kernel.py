r"""
Sample-path generation for reflected Ornstein-Uhlenbeck processes
=================================================================

The process solves

.. math::

    dX_t = -\theta X_t\,dt + \sigma\,dW_t + dL_t - dR_t, \qquad X_0 = x_0,

where :math:`L` (and :math:`R` when an upper barrier ``b`` is present) is the
minimal nondecreasing regulator keeping :math:`X` inside :math:`[0, \infty)`
(resp. :math:`[0, b]`).

Two stepping schemes are provided on a uniform grid ``t_k = k h``:

``Scheme.PROJECTION``
    Euler-Maruyama predictor ``y = x - theta x h + sigma dW`` followed by
    projection onto the domain.  The regulator increment is exactly the
    amount pushed back, so the discrete step identity

    ``x_next = x - theta x h + sigma dW + dL - dR``

    holds to rounding.

``Scheme.BRIDGE``
    One-sided only.  The Brownian bridge between ``x`` and ``y`` is sampled
    for its minimum ``m`` with one extra uniform draw, and ``dL = max(0, -m)``
    is added to the predictor.  This is Lepingle's scheme and keeps the usual
    Euler convergence rate near the boundary.

Random numbers come from :class:`RngStream`, a ``(seed, stream_id)`` pair
mapped to an independent PCG64 generator through :class:`numpy.random.SeedSequence`.
Per path, all ``n`` Gaussian increments are drawn first with
``Generator.standard_normal`` (numpy's ziggurat sampler) and scaled by
``sqrt(h)``; the bridge scheme then draws its ``n`` uniforms as
``1 - Generator.random(n)``, which lies in ``(0, 1]``.
"""

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np
from numba import njit

from .exceptions import InvalidInputError, UnsupportedCombinationError

__all__ = [
    "ModelParams",
    "SimGrid",
    "RngStream",
    "SamplePath",
    "Scheme",
    "reflected_euler_step",
    "lepingle_step",
    "simulate_path",
    "skorokhod_map",
]

_UINT64_MAX = 2**64 - 1


class Scheme(str, Enum):
    PROJECTION = "projection"
    BRIDGE = "bridge"


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInputError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ModelParams:
    """Coefficients of the reflected OU equation.

    Parameters
    ----------
    theta : float
        Mean-reversion rate, strictly positive.
    sigma : float
        Diffusion scale.  ``0`` is allowed and yields a deterministic path.
    x0 : float
        Initial state, inside the domain.
    b : float or None
        Upper reflecting barrier.  ``None`` means reflection at 0 only.
    """

    theta: float
    sigma: float
    x0: float = 0.0
    b: float | None = None

    def __post_init__(self):
        theta = _finite("theta", self.theta)
        sigma = _finite("sigma", self.sigma)
        x0 = _finite("x0", self.x0)
        if theta <= 0:
            raise InvalidInputError(f"theta must be > 0, got {theta}")
        if sigma < 0:
            raise InvalidInputError(f"sigma must be >= 0, got {sigma}")
        if x0 < 0:
            raise InvalidInputError(f"x0 must be >= 0, got {x0}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "x0", x0)
        if self.b is not None:
            b = _finite("b", self.b)
            if b <= 0:
                raise InvalidInputError(f"upper barrier b must be > 0, got {b}")
            if x0 > b:
                raise InvalidInputError(f"x0={x0} lies above the upper barrier b={b}")
            object.__setattr__(self, "b", b)

    @property
    def two_sided(self):
        return self.b is not None

    @property
    def upper(self):
        """Upper barrier as a float (``inf`` when one-sided)."""
        return math.inf if self.b is None else self.b


@dataclass(frozen=True)
class SimGrid:
    """Uniform time grid ``t_k = k h``, ``k = 0..n``."""

    h: float
    n: int

    def __post_init__(self):
        h = _finite("h", self.h)
        if h <= 0:
            raise InvalidInputError(f"step size h must be > 0, got {h}")
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise InvalidInputError(f"number of steps n must be an integer >= 1, got {self.n!r}")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "n", int(self.n))

    @property
    def T(self):
        return self.n * self.h


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream identified by ``(seed, stream_id)``.

    Distinct ``stream_id`` values under one seed give statistically
    independent generators (SeedSequence spawn keys).
    """

    seed: int = 0
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or not 0 <= value <= _UINT64_MAX:
                raise InvalidInputError(f"{name} must be an unsigned 64-bit integer, got {value!r}")
            object.__setattr__(self, name, int(value))

    def generator(self):
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(seq))


def _frozen(values, name, length=None):
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional")
    if length is not None and arr.shape[0] != length:
        raise InvalidInputError(f"{name} must have length {length}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite values")
    arr.flags.writeable = False
    return arr


class SamplePath:
    """States on a uniform grid together with per-step regulator increments.

    ``dl_lower[k]`` and ``dl_upper[k]`` are the increments of ``L`` and ``R``
    over ``[t_k, t_{k+1}]``; ``dw[k]`` is the Brownian increment over the same
    interval when the generator kept it.  Arrays are stored read-only.
    """

    def __init__(self, h, states, dl_lower, dl_upper=None, dw=None):
        self.h = _finite("h", h)
        if self.h <= 0:
            raise InvalidInputError(f"step size h must be > 0, got {self.h}")
        self.states = _frozen(states, "states")
        n = self.states.shape[0] - 1
        if n < 1:
            raise InvalidInputError("a path needs at least two states")
        self.dl_lower = _frozen(dl_lower, "dl_lower", n)
        self.dl_upper = _frozen(np.zeros(n) if dl_upper is None else dl_upper, "dl_upper", n)
        self.dw = None if dw is None else _frozen(dw, "dw", n)
        if np.any(self.states < 0):
            raise InvalidInputError("states must be nonnegative")
        if np.any(self.dl_lower < 0) or np.any(self.dl_upper < 0):
            raise InvalidInputError("regulator increments must be nonnegative")

    @property
    def n(self):
        return self.states.shape[0] - 1

    @property
    def T(self):
        return self.n * self.h

    @property
    def times(self):
        return self.h * np.arange(self.n + 1)

    def step_residuals(self, params):
        """Per-step defect of the discrete identity; requires ``dw``."""
        if self.dw is None:
            raise InvalidInputError("path has no Brownian increments")
        x = self.states[:-1]
        rhs = x - params.theta * x * self.h + params.sigma * self.dw + self.dl_lower - self.dl_upper
        return self.states[1:] - rhs

    def __repr__(self):
        return f"SamplePath(h={self.h}, n={self.n}, dw={'yes' if self.dw is not None else 'no'})"


# Scalar cores shared by the public step functions and the path loops, so a
# path is bit-identical to iterating the step function.

@njit(cache=True, nogil=True)
def _projection_core(x, theta, sigma, h, b, dw):
    y = x - theta * x * h + sigma * dw
    lo = 0.0
    if y < 0.0:
        lo = -y
        y = y + lo
    up = 0.0
    if y > b:
        up = y - b
        y = y - up
    return y, lo, up


@njit(cache=True, nogil=True)
def _bridge_core(x, theta, sigma, h, dw, u):
    y = x - theta * x * h + sigma * dw
    m = 0.5 * (x + y - math.sqrt((y - x) * (y - x) - 2.0 * sigma * sigma * h * math.log(u)))
    lo = max(0.0, -m, -y)
    return y + lo, lo


@njit(cache=True, nogil=True)
def _projection_path(x0, theta, sigma, h, b, dw, states, dl_lower, dl_upper):
    x = x0
    states[0] = x
    for k in range(dw.shape[0]):
        x, lo, up = _projection_core(x, theta, sigma, h, b, dw[k])
        states[k + 1] = x
        dl_lower[k] = lo
        dl_upper[k] = up


@njit(cache=True, nogil=True)
def _bridge_path(x0, theta, sigma, h, dw, u, states, dl_lower):
    x = x0
    states[0] = x
    for k in range(dw.shape[0]):
        x, lo = _bridge_core(x, theta, sigma, h, dw[k], u[k])
        states[k + 1] = x
        dl_lower[k] = lo


def _check_state(x, params):
    x = _finite("x", x)
    if x < 0 or x > params.upper:
        raise InvalidInputError(f"state {x} lies outside the domain")
    return x


def reflected_euler_step(x, params, h, dw):
    """Advance one projected Euler step.

    Returns
    -------
    (x_next, dl_lower, dl_upper) : tuple of float
        ``dl_upper`` is always 0 for a one-sided model.
    """
    x = _check_state(x, params)
    h = _finite("h", h)
    dw = _finite("dw", dw)
    if h <= 0:
        raise InvalidInputError(f"h must be > 0, got {h}")
    return _projection_core(x, params.theta, params.sigma, h, params.upper, dw)


def lepingle_step(x, params, h, dw, u):
    """Advance one bridge-corrected step (one-sided barrier only).

    ``u`` is a uniform variate in ``(0, 1]`` used to sample the minimum of
    the Brownian bridge from ``x`` to the Euler predictor.  Returns
    ``(x_next, dl_lower)``.
    """
    if params.two_sided:
        raise UnsupportedCombinationError("the bridge-corrected step supports the one-sided barrier only")
    x = _check_state(x, params)
    h = _finite("h", h)
    dw = _finite("dw", dw)
    u = _finite("u", u)
    if h <= 0:
        raise InvalidInputError(f"h must be > 0, got {h}")
    if not 0.0 < u <= 1.0:
        raise InvalidInputError(f"u must lie in (0, 1], got {u}")
    return _bridge_core(x, params.theta, params.sigma, h, dw, u)


def default_scheme(params):
    return Scheme.PROJECTION if params.two_sided else Scheme.BRIDGE


def simulate_path(params, grid, scheme=None, rng=None):
    """Simulate one path of the reflected OU process on ``grid``.

    Parameters
    ----------
    params : ModelParams
    grid : SimGrid
    scheme : Scheme or str, optional
        Defaults to ``Scheme.BRIDGE`` for one-sided models and
        ``Scheme.PROJECTION`` for two-sided ones.
    rng : RngStream, optional
        Defaults to ``RngStream(0, 0)``.

    Returns
    -------
    SamplePath
        With ``dw`` retained.
    """
    scheme = default_scheme(params) if scheme is None else Scheme(scheme)
    if scheme is Scheme.BRIDGE and params.two_sided:
        raise UnsupportedCombinationError("the bridge-corrected scheme supports the one-sided barrier only")
    rng = RngStream() if rng is None else rng
    gen = rng.generator()
    n, h = grid.n, grid.h

    dw = math.sqrt(h) * gen.standard_normal(n)
    states = np.empty(n + 1)
    dl_lower = np.empty(n)
    dl_upper = np.zeros(n)
    if scheme is Scheme.BRIDGE:
        u = 1.0 - gen.random(n)
        _bridge_path(params.x0, params.theta, params.sigma, h, dw, u, states, dl_lower)
    else:
        _projection_path(params.x0, params.theta, params.sigma, h, params.upper, dw,
                         states, dl_lower, dl_upper)
    return SamplePath(h, states, dl_lower, dl_upper, dw)


def skorokhod_map(x0, increments):
    """Reflect a driver path at 0 with the minimal regulator.

    The unconstrained path is ``y_k = x0 + sum(increments[:k])``.  The
    regulator is the running maximum ``L_k = max(0, max_{j<=k} -y_j)`` and
    the reflected path is ``y + L``.

    Returns
    -------
    states : ndarray, shape (n+1,)
    dl_lower : ndarray, shape (n,)
    """
    x0 = _finite("x0", x0)
    if x0 < 0:
        raise InvalidInputError(f"x0 must be >= 0, got {x0}")
    inc = np.asarray(increments, dtype=np.float64)
    if inc.ndim != 1 or not np.all(np.isfinite(inc)):
        raise InvalidInputError("increments must be a finite one-dimensional array")
    y = np.concatenate(([x0], x0 + np.cumsum(inc)))
    L = np.maximum.accumulate(np.maximum(0.0, -y))
    return y + L, np.diff(L)
