"""One test per acceptance criterion; each prints a PASS/FAIL line."""
import math
import time
from fractions import Fraction

import numpy as np

from sgact.core import (
    CircleLinear,
    CircleNonlinear,
    Potential,
    RandomWalk,
    SemigroupSpec,
    TorusLinear,
    Word,
    apply_word,
    word_degree,
)
from sgact.measures import l1_distance
from sgact.periodic import fekete_check, periodic_entropy, periodic_series
from sgact.pressure import (
    distinguished_vector_m,
    entropy_map_maximize,
    equal_degree_test,
    matching_walk,
    pressure_report,
)
from sgact.randomwalk import SimConfig, simulate_empirical, stationarity_test
from sgact.transfer import (
    build_ulam,
    fixed_point_residual,
    periodic_mass_measure,
    power_iterate,
    preimage_measure,
    stationary_density,
)
from sgact.zeta import skew_identity_check, truncation_bound, zeta_eval, zeta_series

S23 = SemigroupSpec.circle(2, 3)
PAIR = SemigroupSpec((CircleLinear(2), CircleNonlinear(2, 0.5)))
SYM = RandomWalk((0.5, 0.5))
L2, L3 = math.log(2), math.log(3)


def test_c1_exact_counts(criterion):
    t0 = time.perf_counter()
    s = periodic_series(S23, 12, method="classes")
    dt = time.perf_counter() - t0
    closed = all(s.N(n) == Fraction(5, 2) ** n - 1 for n in range(1, 13))
    skew = all(s.skew_counts[n - 1] == 5 ** n - 2 ** n for n in range(1, 13))
    brute = periodic_series(S23, 12, method="enumerate")
    agree = brute.counts == s.counts and brute.skew_counts == s.skew_counts
    criterion(1, closed and skew and agree and dt < 1.0,
              f"N_n=(5/2)^n-1 {closed}, Per_n=5^n-2^n {skew}, enumeration agrees {agree}, "
              f"class runtime {dt:.4f}s")


def test_c2_entropies(criterion):
    s = periodic_series(S23, 12)
    er = periodic_entropy(s)
    exact = (er.periodic_entropy == math.log(5 / 2) and er.topological_entropy == math.log(5 / 2)
             and abs(er.skew_entropy - math.log(5)) <= 1e-15)
    slope = math.log(s.N(12)) / 12
    err = abs(slope - math.log(2.5))
    criterion(2, exact and err < 5e-3,
              f"closed forms exact {exact}; (1/12) log N_12 = {slope:.8f}, error {err:.2e} < 5e-3")


def test_c3_zeta(criterion):
    zs12 = zeta_series(periodic_series(S23, 12))
    r_err = abs(zs12.radius_estimate - 0.4)
    # choose the truncation from the tail bound so that the series itself is
    # accurate to 5e-4 at every test point, then compare
    zpts = (0.1, 0.2, 0.3)
    n = 12
    while max(truncation_bound(zeta_series(periodic_series(S23, n)), z) for z in zpts) > 5e-5:
        n += 1
    zs = zeta_series(periodic_series(S23, n))
    errs = [abs(zeta_eval(zs, z, "series") - (1 - z) / (1 - 2.5 * z)) for z in zpts]
    err12 = max(abs(zeta_eval(zs12, z, "series") - (1 - z) / (1 - 2.5 * z)) for z in zpts)
    skew = skew_identity_check(periodic_series(S23, 12))
    ok = r_err < 5e-3 and max(errs) < 5e-4 and skew
    criterion(3, ok,
              f"radius {zs12.radius_estimate:.6f} (error {r_err:.1e}); truncation n={n}, "
              f"max |series - rational| {max(errs):.1e} < 5e-4 (n=12 gives {err12:.1e}); skew identity exact {skew}")


def test_c4_spectral_radius(criterion):
    t0 = time.perf_counter()
    lam_sym = power_iterate(build_ulam(S23, SYM, Potential.zero(), 4096)).eigenvalue
    lam_m = power_iterate(build_ulam(S23, RandomWalk((0.4, 0.6)), Potential.zero(), 4096)).eigenvalue
    dt = time.perf_counter() - t0
    ok = abs(lam_sym - 2.5) < 1e-6 and abs(lam_m - 2.6) < 1e-6 and dt < 10
    criterion(4, ok, f"lambda(1/2,1/2) = {lam_sym!r}, lambda(0.4,0.6) = {lam_m!r}, runtime {dt:.2f}s")


def test_c5_pressure_identities(criterion):
    rng = np.random.default_rng(20240601)
    walks = [RandomWalk(tuple(a)) for a in rng.dirichlet((1, 1), size=18)]
    walks += [RandomWalk((1.0, 0.0)), RandomWalk((0.0, 1.0))]
    d = np.array([2.0, 3.0])
    ok = True
    worst_spec = 0.0
    for w in walks:
        r = pressure_report(S23, w)
        a = w.array
        ok &= r.annealed == r.relative_entropy
        ok &= abs(r.annealed - math.log(a @ d)) < 1e-15
        ok &= r.quenched == r.fibered
        ok &= abs(r.fibered - sum(x * math.log(y) for x, y in zip(a, d) if x > 0)) < 1e-15
        # independent route to the annealed pressure: leading Ulam eigenvalue
        lam = power_iterate(build_ulam(S23, w, Potential.zero(), 4096)).eigenvalue
        worst_spec = max(worst_spec, abs(math.log(lam) - r.annealed))
        degenerate = not w.nontrivial
        ok &= (r.annealed - r.quenched == 0) if degenerate else (r.annealed - r.quenched > 1e-6)
    ok &= worst_spec < 1e-6
    fib_p = pressure_report(S23, SYM).fibered
    ok &= abs(fib_p - (L2 + L3) / 2) < 1e-15
    m = distinguished_vector_m(S23)
    rm = pressure_report(S23, m)
    ok &= abs(rm.fibered - (0.4 * L2 + 0.6 * L3)) < 1e-15
    ok &= abs(rm.skew_measure_entropy - math.log(5)) < 1e-14
    mw = matching_walk(S23).weights
    target = math.log(6 / 5) / math.log(3 / 2)
    ok &= abs(mw[0] - target) < 1e-9 and abs(mw[1] - (1 - target)) < 1e-9
    ok &= abs(mw[0] - 0.44966) < 5e-6 and abs(mw[1] - 0.55034) < 5e-6
    criterion(5, ok,
              f"20 walks identities hold, max |log lambda - annealed| {worst_spec:.1e}; "
              f"fibered(eta_p) {fib_p:.6f}, fibered(m) {rm.fibered:.6f}, skew entropy "
              f"{rm.skew_measure_entropy:.6f}; matching walk ({mw[0]:.5f}, {mw[1]:.5f})")


def test_c6_entropy_map(criterion):
    res = entropy_map_maximize(S23, 1000)
    ok = (res.grid_points == 1000 and res.value == math.log(3)
          and abs(res.grid_value - math.log(3)) < 1e-15
          and np.array_equal(res.grid_argmax, [0.0, 1.0]) and res.walk.weights == (0.0, 1.0))
    import itertools
    count = 0
    for p in (1, 2, 3):
        for ds in itertools.combinations_with_replacement(range(2, 7), p):
            _, rep = equal_degree_test(SemigroupSpec.circle(*ds))
            ok &= rep.consistent
            count += 1
    criterion(6, ok, f"grid max {res.grid_value:.12f} at {res.grid_argmax.tolist()} over "
                     f"{res.grid_points} points; equal-degree conditions agree on {count} multisets")


def test_c7_stationary(criterion):
    t0 = time.perf_counter()
    lin_dev = 0.0
    for spec, walk in [(S23, SYM), (SemigroupSpec.circle(2, 5, 3), RandomWalk((0.2, 0.5, 0.3)))]:
        h = stationary_density(spec, walk, 4096)
        op = build_ulam(spec, walk, Potential.minus_log_derivative(), 4096)
        lin_dev = max(lin_dev, np.max(np.abs(h.values - 1)), np.max(np.abs(op @ h.values - 1)))
    h = stationary_density(PAIR, SYM, 4096)
    res = fixed_point_residual(PAIR, SYM, h)
    disc = stationarity_test(h, PAIR, SYM).max_discrepancy
    mc = simulate_empirical(SimConfig(PAIR, SYM, n_samples=10 ** 6, bins=256, seed=42))
    l1 = l1_distance(mc, h.to_measure(256))
    dt = time.perf_counter() - t0
    ok = lin_dev < 1e-8 and res < 1e-10 and disc < 1e-4 and l1 < 0.05 and dt < 60
    criterion(7, ok, f"linear sup deviation {lin_dev:.1e}; nonlinear residual {res:.1e}, "
                     f"stationarity {disc:.1e}, Monte-Carlo L1 {l1:.4f}; runtime {dt:.1f}s")


def test_c8_equidistribution(criterion):
    u = np.full(64, 1 / 64)
    a = preimage_measure(S23, SYM, Potential.zero(), 0.1, 10, 64)
    b = preimage_measure(S23, SYM, Potential.zero(), 0.7, 10, 64)
    c = periodic_mass_measure(S23, 10, 64)
    d_au, d_cu = l1_distance(a, u), l1_distance(c, u)
    d_ac, d_ab = l1_distance(a, c), l1_distance(a, b)
    ok = d_au < 0.02 and d_cu < 0.02 and d_ac < 0.05 and d_ab < 0.02
    criterion(8, ok, f"preimage-uniform {d_au:.2e}, periodic-uniform {d_cu:.2e}, "
                     f"preimage-periodic {d_ac:.2e}, x=0.1 vs x=0.7 {d_ab:.2e}")


def test_c9_property_suites(criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    spec = SemigroupSpec((CircleLinear(2), CircleNonlinear(3, 1.2), CircleNonlinear(2, -0.4)))
    torus = SemigroupSpec((TorusLinear(((3, 1), (1, 2))), TorusLinear(((2, 1), (0, 3)))))
    concat = mult = True
    for _ in range(500):
        w1 = Word(tuple(rng.integers(0, 3, rng.integers(1, 7))))
        w2 = Word(tuple(rng.integers(0, 3, rng.integers(1, 7))))
        x = rng.random()
        concat &= apply_word(spec, w1 + w2, x) == apply_word(spec, w2, apply_word(spec, w1, x))
        mult &= word_degree(spec, w1 + w2) == word_degree(spec, w1) * word_degree(spec, w2)
        v1 = Word(tuple(i % 2 for i in w1.indices))
        v2 = Word(tuple(i % 2 for i in w2.indices))
        mult &= word_degree(torus, v1 + v2) == word_degree(torus, v1) * word_degree(torus, v2)
    fek = True
    for ds in [(2, 3), (2,), (2, 3, 4), (3, 3)]:
        ok_f, rep = fekete_check(periodic_series(SemigroupSpec.circle(*ds), 16))
        fek &= ok_f and rep.exact_equality
    jensen = True
    d = np.array([2.0, 3.0])
    for a1 in np.linspace(0, 1, 100):
        r = pressure_report(S23, RandomWalk((a1, 1 - a1)))
        jensen &= r.jensen_gap > 0 if 0 < a1 < 1 else abs(r.jensen_gap) < 1e-15
    mass = []
    mass.append(preimage_measure(S23, SYM, Potential.zero(), 0.3, 8, 64).total)
    mass.append(preimage_measure(PAIR, SYM, Potential.minus_log_derivative(), 0.3, 8, 64).total)
    mass.append(periodic_mass_measure(PAIR, 6, 64).total)
    cfg = SimConfig(PAIR, SYM, n_samples=50000, n_orbits=16, bins=64, seed=7, n_burnin=100)
    m1, m2 = simulate_empirical(cfg), simulate_empirical(cfg)
    mass.append(m1.total)
    mass_ok = max(abs(t - 1) for t in mass) < 1e-12
    repro = m1.masses.tobytes() == m2.masses.tobytes()
    dt = time.perf_counter() - t0
    ok = concat and mult and fek and jensen and mass_ok and repro and dt < 120
    criterion(9, ok, f"concatenation {concat}, degree multiplicativity {mult}, Fekete exact {fek}, "
                     f"Jensen gap {jensen}, mass conservation {mass_ok}, seed reproducibility "
                     f"{repro}; runtime {dt:.1f}s")
