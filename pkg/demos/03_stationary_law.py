"""
The stationary law
==================

One-sided reflection gives a half-normal stationary law with second moment
sigma^2 / (2 theta).  Time averages along one long path converge to it.
"""
import numpy as np
from scipy import integrate

from reflected_ou import ModelParams, RngStream, SimGrid, StationaryLaw, simulate_path

params = ModelParams(theta=0.5, sigma=0.2)
law = StationaryLaw(params)
print("p(0) =", law.pdf(0.0))
print("mass =", integrate.quad(law.pdf, 0, np.inf)[0])
print("E X^2 =", law.second_moment())

path = simulate_path(ModelParams(0.5, 0.2, 0.2), SimGrid(0.01, 10**6), rng=RngStream(0, 0))
hist, edges = np.histogram(path.states, bins=12, range=(0, 0.6), density=True)
centers = 0.5 * (edges[1:] + edges[:-1])
print("\n   x    empirical   p(x)")
for c, v in zip(centers, hist):
    print(f"{c:5.3f}   {v:8.3f}  {law.pdf(c):6.3f}")

# With a second barrier the law is a truncated Gaussian on [0, b].
boxed = StationaryLaw(ModelParams(0.5, 0.2, b=0.25))
print("\ntwo-sided E X^2 =", boxed.second_moment(), "(quadrature)")
