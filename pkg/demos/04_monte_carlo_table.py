"""
Monte Carlo bias / variance table
=================================

Replicates the 3 x 3 simulation table (theta, sigma) x n with h = 0.01 and
checks the normalized errors sqrt(T)(theta_hat - theta) against N(0, 2 theta).
Pass the replication count as the first argument (default 200; use 1000 for
the full-size table, which takes well under a minute).

The rows (0.5, 0.2) and (0.5, 0.5) agree to all digits: the initial state is
set to the stationary RMS level sigma / sqrt(2 theta), so X / sigma is the same
process in both rows, the estimator is scale-free, and both rows share random
numbers.
"""
import sys

from reflected_ou import histogram, ks_statistic, normalized_errors, run_experiment
from reflected_ou.cli import table1_configs
from reflected_ou.montecarlo import default_histogram_range

N = int(sys.argv[1]) if len(sys.argv) > 1 else 200

print(f"{'theta':>5} {'sigma':>5} {'n':>7} {'bias':>9} {'std':>8} {'asy_var':>8} {'mse':>9} {'KS':>6}")
for config in table1_configs(N, 42):
    summary, samples = run_experiment(config)
    z = normalized_errors(samples, config.params.theta)
    d = ks_statistic(z, 2 * config.params.theta)
    print(f"{config.params.theta:5.1f} {config.params.sigma:5.1f} {config.grid.n:7d} "
          f"{summary.bias:9.4f} {summary.std_dev:8.4f} {summary.asy_var:8.4f} {summary.mse:9.5f} {d:6.3f}")

# Text histogram of the last cell against the limiting normal density.
hist = histogram(z, 16, default_histogram_range(config.params.theta))
print(f"\nhistogram of sqrt(T)(theta_hat - theta), theta = {config.params.theta}, n = {config.grid.n}")
for c, dens in hist.rows():
    print(f"{c:6.2f} {'#' * int(round(dens * 80))}")
