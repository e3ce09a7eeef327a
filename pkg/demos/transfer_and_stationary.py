"""
Averaged transfer operators
===========================

Ulam matrices for the averaged operator, its leading eigenvalue, and the
stationary density of a random walk mixing a linear and a nonlinear map.
"""
import numpy as np

from sgact import (
    CircleLinear,
    CircleNonlinear,
    Potential,
    RandomWalk,
    SemigroupSpec,
    SimConfig,
    build_ulam,
    power_iterate,
    simulate_empirical,
    stationarity_test,
    stationary_density,
)
from sgact.measures import l1_distance

spec = SemigroupSpec.circle(2, 3)

# with phi = 0 every row of the Ulam matrix of z^d sums to d, so the
# averaged operator sends 1 to sum a_i d_i and that is the eigenvalue
for walk in [RandomWalk((0.5, 0.5)), RandomWalk((0.4, 0.6))]:
    r = power_iterate(build_ulam(spec, walk, Potential.zero(), 4096))
    print(walk.weights, "lambda =", r.eigenvalue, "log lambda =", r.pressure)

# now a genuinely nonlinear generator
pair = SemigroupSpec((CircleLinear(2), CircleNonlinear(2, 0.5)))
walk = RandomWalk((0.5, 0.5))
h = stationary_density(pair, walk, 4096)
print("density range", h.values.min(), h.values.max(), "iterations", h.info["iterations"])

rep = stationarity_test(h, pair, walk)
print("stationarity discrepancy over 10 trig functions", rep.max_discrepancy)

# a random orbit sees the same density
mc = simulate_empirical(SimConfig(pair, walk, n_samples=10 ** 6, bins=256, seed=1))
print("Monte-Carlo L1 distance", l1_distance(mc, h.to_measure(256)))

# coarse text plot of the density
coarse = h.bin_masses(32) * 32
for k in range(0, 32, 4):
    print(f"{k / 32:.3f} " + "#" * int(40 * coarse[k] / coarse.max()))
