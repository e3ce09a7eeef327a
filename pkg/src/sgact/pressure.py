"""Entropy and pressure of the action under Bernoulli random walks.

Every quantity here depends on the generators only through their degrees
d_i, and nonlinear circle maps have the degree of their linear part.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import RandomWalk, SemigroupSpec, SpecError


@dataclass
class PressureReport:
    walk: RandomWalk
    relative_entropy: float     # h_top(S, eta_a)
    annealed: float
    quenched: float
    fibered: float
    skew_measure_entropy: float
    shannon: float

    @property
    def jensen_gap(self) -> float:
        return self.annealed - self.quenched


def _xlogx(a):
    a = np.asarray(a, dtype=float)
    out = np.zeros_like(a)
    pos = a > 0
    out[pos] = a[pos] * np.log(a[pos])
    return out


def pressure_report(spec: SemigroupSpec, walk: RandomWalk) -> PressureReport:
    walk.check(spec)
    a = walk.array
    d = np.asarray(spec.degrees, dtype=float)
    annealed = math.log(float(a @ d))
    fibered = float(np.sum(a[a > 0] * np.log(d[a > 0])))
    shannon = float(-_xlogx(a).sum())
    return PressureReport(
        walk=walk,
        relative_entropy=annealed,
        annealed=annealed,
        quenched=fibered,
        fibered=fibered,
        skew_measure_entropy=shannon + fibered,
        shannon=shannon,
    )


def distinguished_vector_m(spec: SemigroupSpec) -> RandomWalk:
    """m_i = d_i / sum_k d_k."""
    total = sum(spec.degrees)
    return RandomWalk(tuple(d / total for d in spec.degrees))


@dataclass
class EqualDegreeReport:
    entropy_equals_fibered: bool
    m_is_symmetric: bool
    degrees_equal: bool
    gap: float

    @property
    def consistent(self) -> bool:
        return self.entropy_equals_fibered == self.m_is_symmetric == self.degrees_equal


def equal_degree_test(spec: SemigroupSpec) -> tuple[bool, EqualDegreeReport]:
    """Evaluate the three equivalent conditions exactly.

    h_top(S) = log(sum d / p) equals the symmetric fibered entropy
    (1/p) sum log d iff (sum d)^p = p^p prod d, an integer identity.
    """
    d = spec.degrees
    p = spec.p
    total = sum(d)
    c1 = total ** p == p ** p * math.prod(d)
    c2 = all(Fraction(x, total) == Fraction(1, p) for x in d)
    c3 = len(set(d)) == 1
    gap = math.log(total / p) - sum(math.log(x) for x in d) / p
    rep = EqualDegreeReport(c1, c2, c3, gap)
    if not rep.consistent:
        raise AssertionError(f"equal-degree conditions disagree for degrees {d}")
    return c3, rep


def simplex_grid(p: int, points_per_edge: int) -> np.ndarray:
    """All a with a_i = k_i / R, sum k_i = R, where R = points_per_edge - 1."""
    R = points_per_edge - 1
    rows = []
    for ks in itertools.product(range(R + 1), repeat=p - 1):
        s = sum(ks)
        if s <= R:
            rows.append(ks + (R - s,))
    return np.asarray(rows, dtype=float) / R


@dataclass
class EntropyMaximum:
    walk: RandomWalk
    value: float
    face: tuple                 # generator indices allowed positive weight
    grid_value: float
    grid_argmax: np.ndarray
    grid_points: int

    def __iter__(self):
        yield self.walk
        yield self.value


def entropy_map_maximize(spec: SemigroupSpec, grid_resolution: int = 1000) -> EntropyMaximum:
    """Maximise a -> log sum a_i d_i over the simplex.

    The answer is log max d, attained on the face of maximal-degree
    generators; the returned walk is uniform on that face.  A grid scan
    with ``grid_resolution`` points per edge is run as a check.
    """
    if grid_resolution < 10:
        raise SpecError(f"grid: must be >= 10 (got {grid_resolution})")
    d = np.asarray(spec.degrees, dtype=float)
    dmax = max(spec.degrees)
    face = tuple(i for i, x in enumerate(spec.degrees) if x == dmax)
    walk = RandomWalk(tuple(1.0 / len(face) if i in face else 0.0 for i in range(spec.p)))
    value = math.log(dmax)
    pts = simplex_grid(spec.p, grid_resolution)
    vals = np.log(pts @ d)
    k = int(np.argmax(vals))
    return EntropyMaximum(walk, value, face, float(vals[k]), pts[k], len(pts))


def matching_equation(spec: SemigroupSpec) -> tuple[np.ndarray, float]:
    """Coefficients c and target t of sum a_i c_i = t, i.e. fibered = h_top(S)."""
    return np.log(np.asarray(spec.degrees, dtype=float)), math.log(sum(spec.degrees) / spec.p)


def matching_walk(spec: SemigroupSpec) -> RandomWalk | None:
    """Walk whose fibered entropy equals h_top(S).

    For p = 2 the solution is unique (unless the degrees agree, where every
    walk works and the symmetric one is returned).  For p >= 3 the solutions
    form a hyperplane section of the simplex (see ``matching_equation``);
    the point on the edge joining a minimal and a maximal degree generator
    is returned.
    """
    d = spec.degrees
    if len(set(d)) == 1:
        return RandomWalk.symmetric(spec.p)
    lo = min(range(spec.p), key=lambda i: d[i])
    hi = max(range(spec.p), key=lambda i: d[i])
    t = math.log(sum(d) / spec.p)
    a_hi = (t - math.log(d[lo])) / (math.log(d[hi]) - math.log(d[lo]))
    if not 0.0 <= a_hi <= 1.0:
        return None
    w = [0.0] * spec.p
    w[lo], w[hi] = 1.0 - a_hi, a_hi
    return RandomWalk(tuple(w))
