"""Invariant law of the reflected OU process.

One-sided reflection at 0 gives a half-normal law with scale
``sigma / sqrt(2 theta)``; reflection in ``[0, b]`` gives the same Gaussian
kernel truncated to ``[0, b]``.
"""

import math

import numpy as np
from scipy import integrate
from scipy.special import ndtr

from .exceptions import InvalidInputError

__all__ = ["StationaryLaw", "invariant_pdf", "stationary_second_moment"]

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


class StationaryLaw:
    """Stationary distribution attached to a :class:`~reflected_ou.kernel.ModelParams`."""

    def __init__(self, params):
        if params.sigma <= 0:
            raise InvalidInputError("the stationary law needs sigma > 0")
        self.params = params
        # inverse scale of the Gaussian kernel
        self.c = math.sqrt(2.0 * params.theta) / params.sigma

    @property
    def support(self):
        return (0.0, self.params.upper)

    def pdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        c = self.c
        kernel = c * _INV_SQRT_2PI * np.exp(-0.5 * (c * x) ** 2)
        lo, hi = self.support
        inside = (x >= lo) & (x <= hi)
        if self.params.two_sided:
            dens = kernel / (ndtr(c * hi) - 0.5)
        else:
            dens = 2.0 * kernel
        out = np.where(inside, dens, 0.0)
        return out if out.ndim else float(out)

    def tail_cutoff(self):
        """Upper integration limit: the barrier, or ten half-normal scales."""
        if self.params.two_sided:
            return self.params.b
        return 10.0 / self.c

    def expect(self, f, epsabs=1e-10):
        """Integrate ``f(x) p(x)`` over the support by adaptive quadrature."""
        val, _ = integrate.quad(lambda x: f(x) * self.pdf(x), 0.0, self.tail_cutoff(),
                                epsabs=epsabs, epsrel=1e-12, limit=200)
        return val

    def second_moment(self):
        p = self.params
        if not p.two_sided:
            return p.sigma**2 / (2.0 * p.theta)
        return self.expect(lambda x: x * x)


def invariant_pdf(law, x):
    """Stationary density at ``x``; zero outside the support."""
    return law.pdf(x)


def stationary_second_moment(law):
    """``E[X_inf^2]``: ``sigma^2 / (2 theta)`` one-sided, quadrature two-sided."""
    return law.second_moment()
