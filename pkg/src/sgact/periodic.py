"""Fixed points of words, the averaged periodic counts N_n and periodic entropy.

N_n is the mean number of fixed points over the p**n words of length n,
kept as an exact ``Fraction``.  Per_n = p**n N_n is the number of period-n
points of the skew product.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import (
    CircleMap,
    SemigroupSpec,
    SpecError,
    Word,
    all_words,
    circle_distance,
    class_degree,
    enumerate_word_classes,
    int_det,
    int_identity,
    int_matmul,
    reduce_mod1,
    word_degree,
    word_matrix,
)

ENUMERATION_CAP = 2 ** 14


class CapExceeded(SpecError):
    """Requested enumeration is larger than the configured cap."""


# --------------------------------------------------------------------------
# single words

def _torus_word_minus_identity(spec, w):
    prod = word_matrix(spec, w)
    n = len(prod)
    return tuple(tuple(prod[i][j] - (i == j) for j in range(n)) for i in range(n))


def fix_count(spec: SemigroupSpec, w: Word) -> int:
    """Number of fixed points of the word map.

    An expanding circle map of degree D has D - 1 fixed points; a linear
    torus endomorphism A has |det(A - I)|.
    """
    w.check(spec)
    if spec.is_torus:
        return abs(int_det(_torus_word_minus_identity(spec, w)))
    return word_degree(spec, w) - 1


class WordMap:
    """Composite circle map g_{i_n} o ... o g_{i_1} with its lift."""

    def __init__(self, spec: SemigroupSpec, w: Word):
        w.check(spec)
        if not spec.is_circle:
            raise SpecError("spec: WordMap needs circle generators")
        self.maps: list[CircleMap] = [spec.generators[i] for i in w.indices]
        self.degree = math.prod(g.degree for g in self.maps)

    def lift(self, x):
        for g in self.maps:
            x = g.lift(x)
        return x

    def lift_inverse(self, y):
        for g in reversed(self.maps):
            y = g.lift_inverse(y)
        return y

    def derivative(self, x):
        out = 1.0
        for g in self.maps:
            out = out * g.derivative(x)
            x = g.lift(x)
        return out

    def __call__(self, x):
        return reduce_mod1(self.lift(x))


@dataclass
class PeriodicSet:
    word: Word
    points: np.ndarray

    def __len__(self) -> int:
        return len(self.points)


def _circle_fixed_points(spec, w, tol=1e-12, max_iter=200):
    f = WordMap(spec, w)
    D = f.degree
    if all(g.is_linear for g in f.maps):
        return np.arange(D - 1) / (D - 1)
    # G(x) = F(x) - x increases from G(0) to G(0) + D - 1 on [0, 1]
    g0 = f.lift(0.0)
    m = np.arange(math.ceil(g0), math.ceil(g0) + D - 1, dtype=float)
    lo = np.zeros_like(m)
    hi = np.ones_like(m)
    if np.any(f.lift(lo) - lo > m) or np.any(f.lift(hi) - hi < m):
        raise RuntimeError("fix_locate: root not bracketed; lift normalisation is broken")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        below = f.lift(mid) - mid < m
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.max(hi - lo) < tol:
            break
    x = 0.5 * (lo + hi)
    # the inverse branch is a contraction; a few steps reach float precision
    for _ in range(3):
        x = f.lift_inverse(x + m)
    return np.sort(reduce_mod1(x))


def _torus_fixed_points(spec, w, max_count=10 ** 6):
    A = _torus_word_minus_identity(spec, w)
    det = int_det(A)
    if abs(det) > max_count:
        raise CapExceeded(f"word: |det(M - I)| = {abs(det)} exceeds {max_count}")
    n = len(A)
    # adjugate, so that x = adj(A) v / det(A) stays in exact integers
    if n == 1:
        adj = ((1,),)
    elif n == 2:
        adj = ((A[1][1], -A[0][1]), (-A[1][0], A[0][0]))
    else:
        def minor(i, j):
            return int_det(tuple(tuple(A[r][c] for c in range(3) if c != j) for r in range(3) if r != i))
        adj = tuple(tuple((-1) ** (i + j) * minor(j, i) for j in range(3)) for i in range(3))
    bounds = [sum(abs(a) for a in row) + 1 for row in A]
    grids = np.meshgrid(*[np.arange(-b, b + 1) for b in bounds], indexing="ij")
    V = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
    num = V @ np.array(adj, dtype=np.int64).T
    if det < 0:
        num, det = -num, -det
    inside = np.all((num >= 0) & (num < det), axis=1)
    pts = num[inside] / det
    order = np.lexsort(pts.T[::-1])
    return pts[order]


def fix_locate(spec: SemigroupSpec, w: Word) -> PeriodicSet:
    """Locate every fixed point of the word map."""
    w.check(spec)
    if spec.is_torus:
        return PeriodicSet(w, _torus_fixed_points(spec, w))
    return PeriodicSet(w, _circle_fixed_points(spec, w))


def fixed_point_residual(spec: SemigroupSpec, ps: PeriodicSet) -> float:
    from .core import apply_word

    if len(ps.points) == 0:
        return 0.0
    img = apply_word(spec, ps.word, ps.points)
    return float(np.max(circle_distance(img, ps.points)))


# --------------------------------------------------------------------------
# averaged counts

@dataclass
class PeriodicCountSeries:
    spec: SemigroupSpec
    counts: list          # N_1, ..., N_{n_max} as Fractions
    skew_counts: list     # Per_n = p**n N_n as ints
    method: str = "classes"

    @property
    def n_max(self) -> int:
        return len(self.counts)

    @property
    def p(self) -> int:
        return self.spec.p

    def N(self, n: int) -> Fraction:
        return self.counts[n - 1]

    def slopes(self) -> list[float]:
        """(1/n) log max(N_n, 1)."""
        return [math.log(max(c, 1)) / n for n, c in enumerate(self.counts, start=1)]


def _class_fix_count(spec, counts):
    if spec.is_circle:
        return class_degree(spec, counts) - 1
    prod = int_identity(spec.dim)
    for g, k in zip(spec.generators, counts):
        for _ in range(k):
            prod = int_matmul(g.M, prod)
    n = spec.dim
    return abs(int_det(tuple(tuple(prod[i][j] - (i == j) for j in range(n)) for i in range(n))))


def periodic_series(spec: SemigroupSpec, n_max: int, method: str = "auto",
                    cap: int = ENUMERATION_CAP) -> PeriodicCountSeries:
    """Exact N_1, ..., N_{n_max}.

    ``method="classes"`` groups words by letter counts, which is exact when the
    fixed-point count depends only on the counts: every circle spec (counts
    are degree - 1) and torus specs with commuting matrices.  ``"enumerate"``
    visits all p**n words and refuses when p**n > ``cap``.
    """
    if n_max < 1:
        raise SpecError(f"nmax: must be >= 1 (got {n_max})")
    if method == "auto":
        method = "classes" if (spec.is_circle or spec.commuting) else "enumerate"
    if method == "classes" and not (spec.is_circle or spec.commuting):
        raise SpecError("method: class grouping needs circle maps or commuting torus matrices")
    p = spec.p
    counts, skew = [], []
    for n in range(1, n_max + 1):
        if method == "classes":
            total = sum(c.multiplicity * _class_fix_count(spec, c.counts)
                        for c in enumerate_word_classes(p, n))
        elif method == "enumerate":
            if p ** n > cap:
                raise CapExceeded(f"nmax: {p}**{n} words exceed the enumeration cap {cap}")
            total = sum(fix_count(spec, w) for w in all_words(p, n))
        else:
            raise SpecError(f"method: unknown method {method!r}")
        counts.append(Fraction(total, p ** n))
        skew.append(total)
    return PeriodicCountSeries(spec, counts, skew, method)


# --------------------------------------------------------------------------
# entropy

@dataclass
class EntropyReport:
    periodic_entropy: float
    topological_entropy: float
    skew_entropy: float
    per_n_log_slopes: list
    last_increment: float
    closed_form: bool

    @property
    def extrapolated(self) -> float:
        return self.per_n_log_slopes[-1]


def closed_form_entropy(spec: SemigroupSpec) -> float:
    """h_top(S) = log(sum of degrees / p)."""
    return math.log(sum(spec.degrees) / spec.p)


def periodic_entropy(series: PeriodicCountSeries) -> EntropyReport:
    """Growth rate of N_n, with the closed form where it is exact.

    For circle specs N_n = (sum d_i / p)**n - 1 exactly, so the periodic
    entropy is log(sum d_i / p).  For torus specs the periodic entropy is the
    last increment log(N_n / N_{n-1}); the topological entropy is always the
    degree formula.
    """
    if series.n_max < 4:
        raise SpecError(f"nmax: entropy needs at least 4 terms (got {series.n_max})")
    spec = series.spec
    slopes = series.slopes()
    a, b = max(series.counts[-1], 1), max(series.counts[-2], 1)
    last_inc = math.log(a) - math.log(b)
    h = closed_form_entropy(spec)
    closed = spec.is_circle
    return EntropyReport(
        periodic_entropy=h if closed else last_inc,
        topological_entropy=h,
        skew_entropy=math.log(sum(spec.degrees)),
        per_n_log_slopes=slopes,
        last_increment=last_inc,
        closed_form=closed,
    )


@dataclass
class FeketeReport:
    ok: bool
    exact_equality: bool
    first_violation: tuple | None = None
    checked: int = 0
    gaps: dict = field(default_factory=dict)


def fekete_check(series: PeriodicCountSeries) -> tuple[bool, FeketeReport]:
    """Check (N_{m+n}+1) >= (N_m+1)(N_n+1) for all m + n <= n_max.

    For circle specs the two sides are equal.  For torus specs the check is
    a diagnostic: a violation is reported, not raised.
    """
    if series.n_max < 5:
        raise SpecError(f"nmax: Fekete check needs at least 5 terms (got {series.n_max})")
    shifted = [c + 1 for c in series.counts]
    first = None
    equal = True
    checked = 0
    gaps = {}
    for m, n in itertools.combinations_with_replacement(range(1, series.n_max + 1), 2):
        if m + n > series.n_max:
            continue
        lhs = shifted[m + n - 1]
        rhs = shifted[m - 1] * shifted[n - 1]
        checked += 1
        gaps[(m, n)] = lhs - rhs
        if lhs != rhs:
            equal = False
        if lhs < rhs and first is None:
            first = (m, n)
    ok = first is None
    return ok, FeketeReport(ok, equal, first, checked, gaps)
