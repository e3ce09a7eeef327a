"""Random orbits of the semigroup driven by a Bernoulli walk."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RandomWalk, SemigroupSpec, SpecError
from .measures import DensityFunction, EmpiricalMeasure, bin_atoms, l1_distance
from .transfer import mean_test_integral, pushforward_integral

# Binary floats lose one bit per doubling step, so a raw orbit of z^2
# collapses to 0 after ~53 steps.  Adding u * 2^-52 each step keeps the
# low digits random; the perturbation is far below any bin width.
DIGIT_REFRESH = 2.0 ** -52
CHUNK = 4096


@dataclass
class SimConfig:
    spec: SemigroupSpec
    walk: RandomWalk
    n_samples: int = 10 ** 6
    n_orbits: int = 64
    bins: int = 256
    seed: int = 0
    n_burnin: int = 1000

    def check(self) -> None:
        if not self.spec.is_circle:
            raise SpecError("spec: simulation supports circle generators only")
        self.walk.check(self.spec)
        if self.n_samples < 1:
            raise SpecError(f"samples: must be >= 1 (got {self.n_samples})")
        if self.n_orbits < 1:
            raise SpecError(f"orbits: must be >= 1 (got {self.n_orbits})")
        if self.bins < 1 or self.bins & (self.bins - 1):
            raise SpecError(f"bins: must be a power of 2 (got {self.bins})")
        if self.n_burnin < 0:
            raise SpecError(f"burnin: must be >= 0 (got {self.n_burnin})")


def orbit_streams(seed: int, n_orbits: int) -> list[np.random.Generator]:
    """One generator per orbit: SeedSequence(seed).spawn(n_orbits)."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n_orbits)]


def _step(spec, cum, x, u, jitter):
    idx = np.minimum(np.searchsorted(cum, u, side="right"), spec.p - 1)
    out = np.empty_like(x)
    for i, g in enumerate(spec.generators):
        sel = idx == i
        if sel.any():
            out[sel] = g(x[sel])
    out += jitter
    out -= np.floor(out)
    return out


def run_orbits(spec: SemigroupSpec, walk: RandomWalk, x0: np.ndarray, n_steps: int,
               rngs: list, record: bool = False, bins: int = 0) -> tuple[np.ndarray, np.ndarray | None]:
    """Advance each orbit n_steps with its own stream.

    Draws for orbit k come only from ``rngs[k]`` in fixed-size chunks, so
    the result does not depend on how many orbits run side by side.
    """
    cum = np.cumsum(walk.array)
    x = np.array(x0, dtype=float)
    hist = np.zeros(bins) if record else None
    done = 0
    while done < n_steps:
        m = min(CHUNK, n_steps - done)
        draws = np.stack([r.random((2, m)) for r in rngs], axis=1)  # (2, orbits, m)
        for t in range(m):
            x = _step(spec, cum, x, draws[0, :, t], DIGIT_REFRESH * draws[1, :, t])
            if record:
                hist += bin_atoms(x, 1.0, bins)
        done += m
    return x, hist


def simulate_empirical(cfg: SimConfig) -> EmpiricalMeasure:
    """Pooled histogram of n_orbits random orbits after burn-in.

    Orbit k starts uniformly, runs n_burnin steps, then records
    n_samples // n_orbits points (the first n_samples % n_orbits orbits
    record one extra so the total is exactly n_samples).
    """
    cfg.check()
    rngs = orbit_streams(cfg.seed, cfg.n_orbits)
    x0 = np.array([r.random() for r in rngs])
    x, _ = run_orbits(cfg.spec, cfg.walk, x0, cfg.n_burnin, rngs)
    base, extra = divmod(cfg.n_samples, cfg.n_orbits)
    hist = np.zeros(cfg.bins)
    if base:
        x, h = run_orbits(cfg.spec, cfg.walk, x, base, rngs, record=True, bins=cfg.bins)
        hist += h
    if extra:
        sub = [rngs[k] for k in range(extra)]
        _, h = run_orbits(cfg.spec, cfg.walk, x[:extra], 1, sub, record=True, bins=cfg.bins)
        hist += h
    return EmpiricalMeasure(hist / hist.sum(),
                            info={"samples": cfg.n_samples, "orbits": cfg.n_orbits, "seed": cfg.seed})


def trig_test_functions(k_max: int = 5) -> list:
    """sin(2 pi k x) and cos(2 pi k x) for k = 1..k_max."""
    fs = []
    for k in range(1, k_max + 1):
        fs.append(lambda x, k=k: np.sin(2 * np.pi * k * x))
        fs.append(lambda x, k=k: np.cos(2 * np.pi * k * x))
    return fs


@dataclass
class StationarityReport:
    lhs: list
    rhs: list
    discrepancies: list

    @property
    def max_discrepancy(self) -> float:
        return max(self.discrepancies)


def stationarity_test(measure, spec: SemigroupSpec, walk: RandomWalk,
                      test_functions=None, order: int = 8) -> StationarityReport:
    """Compare int psi d nu with sum_i a_i int psi o g_i d nu.

    ``measure`` may be a DensityFunction or an EmpiricalMeasure (read as a
    piecewise-constant density).  Integrals use ``order``-point
    Gauss-Legendre on every bin.
    """
    if isinstance(measure, EmpiricalMeasure):
        measure = measure.as_density()
    if test_functions is None:
        test_functions = trig_test_functions()
    lhs, rhs = [], []
    for psi in test_functions:
        lhs.append(mean_test_integral(measure, psi, order))
        rhs.append(pushforward_integral(spec, walk, measure, psi, order))
    return StationarityReport(lhs, rhs, [abs(a - b) for a, b in zip(lhs, rhs)])


@dataclass
class SkewInvarianceReport:
    initial: EmpiricalMeasure
    final: EmpiricalMeasure
    drift: float


def skew_invariance_check(density: DensityFunction, spec: SemigroupSpec, walk: RandomWalk,
                          n_steps: int = 1, n_samples: int = 10 ** 6, bins: int = 64,
                          seed: int = 0) -> SkewInvarianceReport:
    """Push samples of eta_a x nu through n_steps of the skew product.

    Points x are drawn from ``density`` and each carries its own i.i.d.
    generator sequence.  The drift is the L1 distance between the binned
    x-marginal after n_steps and the binned density.
    """
    if not spec.is_circle:
        raise SpecError("spec: simulation supports circle generators only")
    walk.check(spec)
    rng = np.random.default_rng(seed)
    x = density.sample(n_samples, rng)
    cum = np.cumsum(walk.array)
    for _ in range(n_steps):
        x = _step(spec, cum, x, rng.random(n_samples), DIGIT_REFRESH * rng.random(n_samples))
    final = EmpiricalMeasure(bin_atoms(x, 1.0 / n_samples, bins))
    initial = EmpiricalMeasure(density.bin_masses(bins) / density.bin_masses(bins).sum())
    return SkewInvarianceReport(initial, final, l1_distance(initial, final))
