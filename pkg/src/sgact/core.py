"""Generators, words, random walks and potentials for finitely generated
semigroups of expanding maps on the circle and on low-dimensional tori.

Points of the circle are floats in [0, 1); points of the n-torus are arrays
of shape (..., n) with coordinates in [0, 1).  Words are stored first-applied
first: ``Word((i1, i2, i3))`` is the map g_{i3} o g_{i2} o g_{i1}.  Generator
indices are 0-based positions in ``SemigroupSpec.generators``.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

TWO_PI = 2.0 * np.pi
SEAM_TOL = 1e-12


class SpecError(ValueError):
    """Invalid semigroup specification, word, walk or potential.

    The message always starts with the offending field.
    """


def reduce_mod1(x):
    """Reduce to [0, 1); values within ``SEAM_TOL`` below 1 go to 0."""
    r = np.mod(x, 1.0)
    if np.ndim(r) == 0:
        r = float(r)
        return 0.0 if r >= 1.0 - SEAM_TOL else r
    r = np.asarray(r, dtype=float)
    r[r >= 1.0 - SEAM_TOL] = 0.0
    return r


def circle_distance(x, y):
    d = np.abs(np.mod(np.asarray(x) - np.asarray(y), 1.0))
    return np.minimum(d, 1.0 - d)


# --------------------------------------------------------------------------
# generator maps

class GeneratorMap:
    """Base class for the supported expanding maps."""

    family: str = ""
    dim: int = 1

    @property
    def degree(self) -> int:
        raise NotImplementedError

    @property
    def is_linear(self) -> bool:
        return True

    def __call__(self, x):
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


class CircleMap(GeneratorMap):
    """Expanding circle map given by an increasing lift F with F(0) = 0."""

    family = "circle"
    dim = 1

    def lift(self, x):
        raise NotImplementedError

    def lift_inverse(self, y):
        raise NotImplementedError

    def derivative(self, x):
        raise NotImplementedError

    def __call__(self, x):
        return reduce_mod1(self.lift(x))

    def preimages(self, x):
        """All preimages of ``x``, shape ``(degree,) + shape(x)``, in [0, 1)."""
        x = np.asarray(x, dtype=float)
        branches = np.arange(self.degree).reshape((-1,) + (1,) * x.ndim)
        return reduce_mod1(self.lift_inverse(x + branches))


@dataclass(frozen=True)
class CircleLinear(CircleMap):
    """x -> d x mod 1."""

    d: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise SpecError(f"d: degree must be an integer >= 2 (got {self.d})")

    @property
    def degree(self) -> int:
        return int(self.d)

    def lift(self, x):
        return self.d * np.asarray(x, dtype=float) if np.ndim(x) else self.d * float(x)

    def lift_inverse(self, y):
        return np.asarray(y, dtype=float) / self.d if np.ndim(y) else float(y) / self.d

    def derivative(self, x):
        return np.full(np.shape(x), float(self.d)) if np.ndim(x) else float(self.d)

    def to_dict(self) -> dict:
        return {"kind": "circle_linear", "d": int(self.d)}


@dataclass(frozen=True)
class CircleNonlinear(CircleMap):
    """x -> d x + (eps / 2 pi) sin(2 pi x) mod 1, with |eps| < d - 1."""

    d: int
    eps: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise SpecError(f"d: degree must be an integer >= 2 (got {self.d})")
        if not abs(self.eps) < self.d - 1:
            raise SpecError(
                f"eps: need |eps| < d - 1 = {self.d - 1} for expansion (got {self.eps})")

    @property
    def degree(self) -> int:
        return int(self.d)

    @property
    def is_linear(self) -> bool:
        return self.eps == 0

    def lift(self, x):
        x = np.asarray(x, dtype=float)
        out = self.d * x + (self.eps / TWO_PI) * np.sin(TWO_PI * x)
        return out if out.ndim else float(out)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        out = self.d + self.eps * np.cos(TWO_PI * x)
        return out if out.ndim else float(out)

    def lift_inverse(self, y):
        # |F(x) - d x| <= c, so the root lies in [(y - c)/d, (y + c)/d]
        y = np.asarray(y, dtype=float)
        c = abs(self.eps) / TWO_PI
        lo = (y - c) / self.d
        hi = (y + c) / self.d
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            below = self.lift(mid) < y
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        out = 0.5 * (lo + hi)
        # one Newton step polishes the last bits
        out = out - (self.lift(out) - y) / self.derivative(out)
        return out if np.ndim(out) else float(out)

    def to_dict(self) -> dict:
        return {"kind": "circle_nonlinear", "d": int(self.d), "eps": float(self.eps)}


def _int_matrix(rows) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in r) for r in rows)


def int_matmul(a, b):
    n, m, q = len(a), len(b), len(b[0])
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(m)) for j in range(q)) for i in range(n))


def int_det(a) -> int:
    """Exact determinant of a small integer matrix (Laplace expansion)."""
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    return sum((-1) ** j * a[0][j] * int_det(tuple(r[:j] + r[j + 1:] for r in a[1:]))
               for j in range(n))


def int_identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class TorusLinear(GeneratorMap):
    """x -> M x mod 1 on the n-torus, n in {1, 2, 3}."""

    M: tuple

    family = "torus"

    def __post_init__(self):
        try:
            mat = _int_matrix(self.M)
        except (TypeError, ValueError) as exc:
            raise SpecError(f"matrix: entries must be integers ({exc})") from None
        n = len(mat)
        if n not in (1, 2, 3) or any(len(r) != n for r in mat):
            raise SpecError(f"matrix: must be square of size 1, 2 or 3 (got {n} rows)")
        if any(float(v) != float(w) for r, s in zip(mat, self.M) for v, w in zip(r, s)):
            raise SpecError("matrix: entries must be integers")
        object.__setattr__(self, "M", mat)
        eig = np.linalg.eigvals(np.array(mat, dtype=float))
        if np.min(np.abs(eig)) <= 1.0 + 1e-12:
            raise SpecError(
                f"matrix: every eigenvalue must have modulus > 1 (min |eig| = {np.min(np.abs(eig)):.6g})")
        if abs(int_det(mat)) < 2:
            raise SpecError("matrix: |det M| must be >= 2")

    @property
    def dim(self) -> int:  # type: ignore[override]
        return len(self.M)

    @property
    def degree(self) -> int:
        return abs(int_det(self.M))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return reduce_mod1(x @ np.array(self.M, dtype=float).T)

    def to_dict(self) -> dict:
        return {"kind": "torus_linear", "matrix": [list(r) for r in self.M]}


def generator_from_dict(d: dict, where: str = "generator") -> GeneratorMap:
    if not isinstance(d, dict) or "kind" not in d:
        raise SpecError(f"{where}.kind: missing generator kind")
    kind = d["kind"]
    try:
        if kind == "circle_linear":
            return CircleLinear(int(d["d"]))
        if kind == "circle_nonlinear":
            return CircleNonlinear(int(d["d"]), float(d.get("eps", 0.0)))
        if kind == "torus_linear":
            return TorusLinear(d["matrix"])
    except KeyError as exc:
        raise SpecError(f"{where}.{exc.args[0]}: required field missing") from None
    except SpecError as exc:
        raise SpecError(f"{where}.{exc}") from None
    raise SpecError(f"{where}.kind: unknown kind {kind!r}")


# --------------------------------------------------------------------------
# semigroup, words, walks

@dataclass(frozen=True)
class SemigroupSpec:
    generators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if len(gens) < 1:
            raise SpecError("generators: need at least one generator")
        fam = {(g.family, g.dim) for g in gens}
        if len(fam) != 1:
            raise SpecError(
                "generators: all generators must act on the same phase space "
                f"(got {sorted(fam)})")

    @property
    def p(self) -> int:
        return len(self.generators)

    @property
    def degrees(self) -> list[int]:
        return [g.degree for g in self.generators]

    @property
    def is_circle(self) -> bool:
        return self.generators[0].family == "circle"

    @property
    def is_torus(self) -> bool:
        return self.generators[0].family == "torus"

    @property
    def dim(self) -> int:
        return self.generators[0].dim

    @property
    def all_linear(self) -> bool:
        return all(g.is_linear for g in self.generators)

    @property
    def commuting(self) -> bool:
        """True when every composition depends only on letter counts."""
        if self.is_circle:
            return self.all_linear
        ms = [g.M for g in self.generators]
        return all(int_matmul(a, b) == int_matmul(b, a) for a, b in itertools.combinations(ms, 2))

    def to_dict(self) -> dict:
        return {"generators": [g.to_dict() for g in self.generators]}

    @classmethod
    def from_dict(cls, d: dict) -> "SemigroupSpec":
        if not isinstance(d, dict) or "generators" not in d:
            raise SpecError("generators: missing list of generators")
        gens = d["generators"]
        if not isinstance(gens, list):
            raise SpecError("generators: must be a list")
        return cls(tuple(generator_from_dict(g, f"generators[{i}]") for i, g in enumerate(gens)))

    @classmethod
    def circle(cls, *degrees: int) -> "SemigroupSpec":
        """Shortcut: ``SemigroupSpec.circle(2, 3)`` is {z^2, z^3}."""
        return cls(tuple(CircleLinear(d) for d in degrees))


def load_spec(path) -> SemigroupSpec:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec: malformed JSON in {path} ({exc})") from None
    return SemigroupSpec.from_dict(data)


@dataclass(frozen=True)
class Word:
    """Generator indices, first-applied first."""

    indices: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if len(idx) < 1:
            raise SpecError("word: length must be >= 1")

    def __len__(self) -> int:
        return len(self.indices)

    def __add__(self, other: "Word") -> "Word":
        # self acts first
        return Word(self.indices + other.indices)

    def counts(self, p: int) -> tuple[int, ...]:
        c = [0] * p
        for i in self.indices:
            c[i] += 1
        return tuple(c)

    def check(self, spec: SemigroupSpec) -> None:
        bad = [i for i in self.indices if not 0 <= i < spec.p]
        if bad:
            raise SpecError(f"word: index {bad[0]} out of range for p = {spec.p}")


def all_words(p: int, n: int) -> Iterator[Word]:
    for idx in itertools.product(range(p), repeat=n):
        yield Word(idx)


@dataclass(frozen=True)
class RandomWalk:
    """Bernoulli weights a = (a_1, ..., a_p) on the generators."""

    weights: tuple

    def __post_init__(self):
        w = tuple(float(a) for a in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) < 1:
            raise SpecError("walk: empty weight vector")
        if any(not math.isfinite(a) or a < 0 for a in w):
            raise SpecError(f"walk: weights must be finite and >= 0 (got {w})")
        if abs(sum(w) - 1.0) > 1e-9:
            raise SpecError(f"walk: weights must sum to 1 (sum = {sum(w)!r})")

    @property
    def p(self) -> int:
        return len(self.weights)

    @property
    def nontrivial(self) -> bool:
        return all(a > 0 for a in self.weights)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.weights)

    @classmethod
    def symmetric(cls, p: int) -> "RandomWalk":
        return cls((1.0 / p,) * p)

    def check(self, spec: SemigroupSpec) -> None:
        if self.p != spec.p:
            raise SpecError(f"walk: {self.p} weights given for p = {spec.p} generators")


@dataclass(frozen=True)
class Potential:
    """Per-generator potential phi_i.

    kind is ``"zero"``, ``"mlogd"`` (phi_i = -log|g_i'|, or -log|det| on
    tori) or ``"tabulated"`` (``values[i]`` holds phi_i on a uniform grid of
    [0, 1), piecewise constant).
    """

    kind: str = "zero"
    values: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("zero", "mlogd", "tabulated"):
            raise SpecError(f"phi: unknown potential kind {self.kind!r}")
        if self.kind == "tabulated":
            if self.values is None:
                raise SpecError("phi: tabulated potential needs values")
            vals = tuple(np.asarray(v, dtype=float) for v in self.values)
            if any(v.ndim != 1 or v.size == 0 or not np.all(np.isfinite(v)) for v in vals):
                raise SpecError("phi: tabulated values must be finite 1-d arrays")
            object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls) -> "Potential":
        return cls("zero")

    @classmethod
    def minus_log_derivative(cls) -> "Potential":
        return cls("mlogd")

    @classmethod
    def tabulated(cls, values) -> "Potential":
        return cls("tabulated", tuple(values))

    def __call__(self, i: int, g: GeneratorMap, y):
        """phi_i evaluated at y."""
        y = np.asarray(y, dtype=float)
        if self.kind == "zero":
            return np.zeros(y.shape)
        if self.kind == "mlogd":
            if isinstance(g, CircleMap):
                return -np.log(np.abs(g.derivative(y)) * np.ones(y.shape))
            return np.full(y.shape[:-1] if y.ndim else (), -math.log(g.degree))
        tab = self.values[i]
        k = np.minimum((reduce_mod1(y) * tab.size).astype(int), tab.size - 1)
        return tab[k]


# --------------------------------------------------------------------------
# operations

def apply(g: GeneratorMap, x):
    return g(x)


def apply_word(spec: SemigroupSpec, w: Word, x):
    """g_{i_n}(...g_{i_1}(x)...)."""
    w.check(spec)
    for i in w.indices:
        x = spec.generators[i](x)
    return x


def word_matrix(spec: SemigroupSpec, w: Word):
    """Integer matrix M_{i_n} ... M_{i_1} for a torus word."""
    prod = int_identity(spec.dim)
    for i in w.indices:
        prod = int_matmul(spec.generators[i].M, prod)
    return prod


def word_degree(spec: SemigroupSpec, w: Word) -> int:
    """Exact degree (Python integers never overflow)."""
    w.check(spec)
    if spec.is_torus:
        return abs(int_det(word_matrix(spec, w)))
    return math.prod(spec.generators[i].degree for i in w.indices)


def word_log_degree(spec: SemigroupSpec, w: Word) -> float:
    """log of the word degree, without forming the integer."""
    w.check(spec)
    # |det| is multiplicative too, so both families reduce to a sum of logs
    return sum(math.log(spec.generators[i].degree) for i in w.indices)


@dataclass(frozen=True)
class WordClass:
    counts: tuple
    multiplicity: int

    @property
    def n(self) -> int:
        return sum(self.counts)

    def representative(self) -> Word:
        return Word(tuple(i for i, k in enumerate(self.counts) for _ in range(k)))

    def log_probability(self, walk: RandomWalk) -> float:
        """log of prod a_i^{k_i} (the probability of any single word in the class)."""
        s = 0.0
        for a, k in zip(walk.weights, self.counts):
            if k:
                if a == 0:
                    return -math.inf
                s += k * math.log(a)
        return s


def compositions(n: int, p: int) -> Iterator[tuple[int, ...]]:
    """All (k_1, ..., k_p) of nonnegative integers summing to n."""
    if p == 1:
        yield (n,)
        return
    for k in range(n, -1, -1):
        for rest in compositions(n - k, p - 1):
            yield (k,) + rest


def multinomial(counts: Sequence[int]) -> int:
    out, total = 1, 0
    for k in counts:
        total += k
        out *= math.comb(total, k)
    return out


def enumerate_word_classes(spec_or_p, n: int) -> list[WordClass]:
    p = spec_or_p.p if isinstance(spec_or_p, SemigroupSpec) else int(spec_or_p)
    if n < 1:
        raise SpecError(f"n: must be >= 1 (got {n})")
    return [WordClass(k, multinomial(k)) for k in compositions(n, p)]


def class_degree(spec: SemigroupSpec, counts: Sequence[int]) -> int:
    return math.prod(d ** k for d, k in zip(spec.degrees, counts))


def sample_word(walk: RandomWalk, n: int, rng_seed: int) -> Word:
    if n < 1:
        raise SpecError(f"n: must be >= 1 (got {n})")
    rng = np.random.default_rng(rng_seed)
    return Word(tuple(rng.choice(walk.p, size=n, p=walk.array)))


def parse_walk(text: str | None, p: int) -> RandomWalk:
    """``"0.4,0.6"`` -> RandomWalk; ``None`` -> symmetric walk."""
    if text is None:
        return RandomWalk.symmetric(p)
    try:
        vals = [float(Fraction(s.strip())) for s in text.split(",")]
    except ValueError:
        raise SpecError(f"walk: cannot parse {text!r}") from None
    w = RandomWalk(vals)
    if w.p != p:
        raise SpecError(f"walk: {w.p} weights given for p = {p} generators")
    return w
