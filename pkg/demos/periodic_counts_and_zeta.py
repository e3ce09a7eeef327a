"""
Periodic points of {z^2, z^3}
=============================

Count fixed points of every word, average over words, and read off the
entropy and the zeta function.
"""
import math

from sgact import SemigroupSpec, Word, fix_locate, periodic_entropy, periodic_series
from sgact.zeta import zeta_eval, zeta_series

spec = SemigroupSpec.circle(2, 3)

# the word (0, 1) is "double, then triple": degree 6, five fixed points m/5
print(fix_locate(spec, Word((0, 1))).points)

# N_n is the mean fixed-point count over the 2^n words of length n
series = periodic_series(spec, 12)
for n, N in enumerate(series.counts, start=1):
    print(f"{n:2d}  N_n = {str(N):>20}  Per_n = {series.skew_counts[n - 1]}")

er = periodic_entropy(series)
print("periodic entropy", er.periodic_entropy, "=", math.log(2.5))
print("slope at n = 12 ", er.per_n_log_slopes[-1])

# zeta: the radius of convergence sits at exp(-entropy) = 2/5
zs = zeta_series(series)
print("rational form", zs.rational_form, " radius estimate", zs.radius_estimate)
for z in (0.1, 0.2, 0.3):
    print(z, zeta_eval(zs, z, "rational").real, zeta_eval(zs, z, "series").real)
# at z = 0.3 twelve terms are not enough; the tail decays like 0.75^n / n
