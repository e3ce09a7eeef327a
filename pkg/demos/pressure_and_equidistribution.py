"""
Entropy along random walks
==========================

Annealed versus quenched entropy for every Bernoulli walk on {z^2, z^3},
the walk that makes them meet h_top(S), and equidistribution of preimages
and periodic points.
"""
import math

import numpy as np

from sgact import (
    Potential,
    RandomWalk,
    SemigroupSpec,
    distinguished_vector_m,
    entropy_map_maximize,
    matching_walk,
    periodic_mass_measure,
    preimage_measure,
    pressure_report,
)
from sgact.measures import l1_distance

spec = SemigroupSpec.circle(2, 3)

for a1 in np.linspace(0, 1, 6):
    r = pressure_report(spec, RandomWalk((a1, 1 - a1)))
    print(f"a = ({a1:.1f}, {1 - a1:.1f})  annealed {r.annealed:.4f}  quenched {r.quenched:.4f}")

m = distinguished_vector_m(spec)
print("m =", m.weights, "skew entropy", pressure_report(spec, m).skew_measure_entropy, math.log(5))

best = entropy_map_maximize(spec, 1000)
print("maximum", best.value, "on face", best.face)

a = matching_walk(spec)
print("fibered entropy equals log(5/2) at", a.weights)

# preimages of two base points and periodic points all spread out evenly
sym = RandomWalk((0.5, 0.5))
u = np.full(64, 1 / 64)
p1 = preimage_measure(spec, sym, Potential.zero(), 0.1, 10, 64)
p2 = preimage_measure(spec, sym, Potential.zero(), 0.7, 10, 64)
per = periodic_mass_measure(spec, 10, 64)
print("L1 to uniform:", l1_distance(p1, u), l1_distance(p2, u), l1_distance(per, u))
