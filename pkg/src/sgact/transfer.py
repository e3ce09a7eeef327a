"""Ulam discretisation of averaged Ruelle-Perron-Frobenius operators.

The averaged operator acts on functions of the circle by

    (L psi)(x) = sum_i a_i sum_{g_i(y) = x} exp(phi_i(y)) psi(y).

Projected onto functions constant on N equal bins it becomes the N x N
matrix

    A[j, k] = N * integral over (bin k  intersected with  g^{-1} bin j)
              of exp(phi(y)) |g'(y)| dy.

The bin edges and the preimages of the bin edges cut [0, 1) into pieces on
which g is a diffeomorphism onto part of a single target bin, so the
integral of |g'| over a piece is just the lift increment F(v) - F(u); for
phi = -log|g'| the integrand is 1.  No quadrature is needed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .core import (
    CircleLinear,
    Potential,
    RandomWalk,
    SemigroupSpec,
    SpecError,
    Word,
    all_words,
    class_degree,
    enumerate_word_classes,
)
from .measures import DensityFunction, EmpiricalMeasure, bin_atoms
from .periodic import CapExceeded, WordMap, fix_locate

ATOM_CAP = 2 ** 24


class ConvergenceError(RuntimeError):
    """An iteration stopped at ``max_iter`` without meeting its tolerance."""

    def __init__(self, msg, residual=None, iterations=None):
        super().__init__(msg)
        self.residual = residual
        self.iterations = iterations


def _check_grid(N: int) -> None:
    if N < 4 or N > 2 ** 20 or N & (N - 1):
        raise SpecError(f"grid: must be a power of 2 between 4 and 2**20 (got {N})")


def _require_circle(spec: SemigroupSpec, what: str) -> None:
    if not spec.is_circle:
        raise SpecError(f"spec: {what} supports circle generators only")


def ulam_matrix(f, N: int, weight: str = "zero", phi=None) -> sp.csr_matrix:
    """Ulam matrix of one circle map.

    ``f`` needs ``degree``, ``lift`` and ``lift_inverse`` (a generator or a
    ``WordMap``).  ``weight`` is ``"zero"``, ``"mlogd"`` or ``"tabulated"``;
    in the last case ``phi(y)`` gives the potential and is evaluated at the
    midpoint of each piece.
    """
    d = f.degree
    c = f.lift(0.0)
    m = np.arange(math.ceil(c * N), math.floor((c + d) * N) + 1)
    t = np.clip(f.lift_inverse(m / N), 0.0, 1.0)
    br = np.union1d(t, np.arange(N + 1) / N)
    u, v = br[:-1], br[1:]
    mid = 0.5 * (u + v)
    k = np.minimum((mid * N).astype(np.int64), N - 1)
    j = np.floor(f.lift(mid) * N).astype(np.int64) % N
    if weight == "mlogd":
        w = v - u
    else:
        w = f.lift(v) - f.lift(u)
        if weight == "tabulated":
            w = w * np.exp(phi(mid))
        elif weight != "zero":
            raise SpecError(f"phi: unknown weight {weight!r}")
    A = sp.coo_matrix((N * w, (j, k)), shape=(N, N))
    return A.tocsr()


@dataclass
class UlamOperator:
    grid_size: int
    matrix: sp.csr_matrix
    walk: RandomWalk
    potential: Potential
    per_generator: list

    def __matmul__(self, v):
        return self.matrix @ v


def build_ulam(spec: SemigroupSpec, walk: RandomWalk, phi: Potential, N: int) -> UlamOperator:
    """Matrix of the a-weighted average of the generator transfer operators."""
    _require_circle(spec, "build_ulam")
    _check_grid(N)
    walk.check(spec)
    mats = []
    for i, g in enumerate(spec.generators):
        fn = (lambda y, i=i, g=g: phi(i, g, y)) if phi.kind == "tabulated" else None
        mats.append(ulam_matrix(g, N, phi.kind, fn))
    A = sum(a * M for a, M in zip(walk.weights, mats))
    return UlamOperator(N, sp.csr_matrix(A), walk, phi, mats)


def sequence_ulam(spec: SemigroupSpec, n: int, phi: Potential, N: int) -> sp.csr_matrix:
    """Ulam matrix of (1/p^n) sum over |w| = n of the word transfer operators.

    Assembled word by word from the composite maps; for ``phi = mlogd`` the
    Birkhoff sum along a word is -log|g_w'| by the chain rule.
    """
    _require_circle(spec, "sequence_ulam")
    if phi.kind == "tabulated":
        raise SpecError("phi: word-by-word assembly supports zero and mlogd only")
    total = None
    for w in all_words(spec.p, n):
        M = ulam_matrix(WordMap(spec, w), N, phi.kind)
        total = M if total is None else total + M
    return total / spec.p ** n


# --------------------------------------------------------------------------
# spectrum

@dataclass
class SpectralResult:
    eigenvalue: float
    eigenfunction: np.ndarray
    conformal: np.ndarray
    residual: float
    iterations: int
    left_residual: float = 0.0

    @property
    def pressure(self) -> float:
        """log of the leading eigenvalue (annealed pressure)."""
        return math.log(self.eigenvalue)


def _power(A, tol, max_iter, what):
    N = A.shape[0]
    v = np.ones(N)
    for it in range(1, max_iter + 1):
        w = A @ v
        lam = w.sum() / v.sum()
        res = np.abs(w - lam * v).sum() / v.sum()
        if res < tol:
            return lam, v, res, it
        if not lam > 0:
            raise ConvergenceError(f"{what}: operator annihilated the iterate", res, it)
        v = w / w.mean()
    raise ConvergenceError(
        f"{what}: no convergence after {max_iter} iterations (residual {res:.3g})", res, max_iter)


def power_iterate(op: UlamOperator, tol: float = 1e-10, max_iter: int = 10000) -> SpectralResult:
    """Leading eigenvalue with right and left eigenvectors.

    Iterates from the constant vector with L1 normalisation; stops when
    ||A v - lam v||_1 / ||v||_1 < tol.
    """
    if tol < 1e-14:
        raise SpecError(f"tol: must be >= 1e-14 (got {tol})")
    A = op.matrix if isinstance(op, UlamOperator) else sp.csr_matrix(op)
    lam, v, res, it = _power(A, tol, max_iter, "power_iterate")
    _, u, lres, lit = _power(A.T.tocsr(), tol, max_iter, "power_iterate (left)")
    return SpectralResult(
        eigenvalue=float(lam),
        eigenfunction=v / v.mean(),
        conformal=u / u.sum(),
        residual=float(res),
        iterations=max(it, lit),
        left_residual=float(lres),
    )


def stationary_density(spec: SemigroupSpec, walk: RandomWalk, N: int,
                       tol: float = 1e-10, max_iter: int = 10000) -> DensityFunction:
    """Density of the absolutely continuous stationary measure.

    Iterates the averaged Lebesgue transfer operator on the constant
    function until successive iterates are within ``tol`` in L1.
    """
    walk.check(spec)
    if not walk.nontrivial:
        raise SpecError("walk: stationary density needs every weight > 0")
    op = build_ulam(spec, walk, Potential.minus_log_derivative(), N)
    P = op.matrix
    h = np.ones(N)
    for it in range(1, max_iter + 1):
        h_new = P @ h
        diff = np.abs(h_new - h).sum() / N
        h = h_new
        if diff < tol:
            break
    else:
        raise ConvergenceError(
            f"stationary_density: no convergence after {max_iter} iterations (last increment {diff:.3g})",
            diff, max_iter)
    h = h / h.mean()
    residual = np.abs(P @ h - h).sum() / N
    return DensityFunction(h, info={"iterations": it, "increment": float(diff),
                                    "residual": float(residual)})


def fixed_point_residual(spec: SemigroupSpec, walk: RandomWalk, density: DensityFunction) -> float:
    """L1 distance between the density and one more application of the operator."""
    op = build_ulam(spec, walk, Potential.minus_log_derivative(), density.grid_size)
    h = density.values
    return float(np.abs(op.matrix @ h - h).sum() / h.size)


# --------------------------------------------------------------------------
# equidistribution

def _leading_eigenvalue(spec, walk, phi):
    if phi.kind == "zero":
        return float(np.dot(walk.weights, spec.degrees))
    if phi.kind == "mlogd":
        return 1.0
    return power_iterate(build_ulam(spec, walk, phi, 1024)).eigenvalue


def preimage_measure(spec: SemigroupSpec, walk: RandomWalk, phi: Potential, x: float, n: int,
                     B: int, lam: float | None = None, cap: int = ATOM_CAP) -> EmpiricalMeasure:
    """Preimages of x over all words of length n, weighted by the walk.

    Each preimage y of x under the word w carries
    lam^{-n} * prod(a_{i_k}) * exp(Birkhoff sum of phi along w at y).  The
    returned masses are normalised to 1; ``info["raw_mass"]`` keeps the
    total before normalisation (exactly 1 for phi = 0).
    """
    _require_circle(spec, "preimage_measure")
    walk.check(spec)
    if n < 1:
        raise SpecError(f"n: must be >= 1 (got {n})")
    if lam is None:
        lam = _leading_eigenvalue(spec, walk, phi)
    log_lam = math.log(lam)
    masses = np.zeros(B)
    linear = all(isinstance(g, CircleLinear) for g in spec.generators)
    if linear and phi.kind in ("zero", "mlogd"):
        classes = [c for c in enumerate_word_classes(spec.p, n)
                   if c.log_probability(walk) > -math.inf]
        if sum(class_degree(spec, c.counts) for c in classes) > cap:
            raise CapExceeded(f"n: preimage count exceeds the cap {cap}")
        for c in classes:
            D = class_degree(spec, c.counts)
            logw = math.log(c.multiplicity) + c.log_probability(walk) - n * log_lam
            if phi.kind == "mlogd":
                logw -= math.log(D)
            pts = (x + np.arange(D)) / D
            masses += bin_atoms(pts, math.exp(logw), B)
    else:
        pts = np.array([float(x)])
        logw = np.zeros(1)
        growth = sum(d for d, a in zip(spec.degrees, walk.weights) if a > 0)
        if growth ** n > cap:
            raise CapExceeded(f"n: {growth}**{n} preimages exceed the cap {cap}")
        for _ in range(n):
            new_pts, new_w = [], []
            for i, (g, a) in enumerate(zip(spec.generators, walk.weights)):
                if a == 0:
                    continue
                ys = g.preimages(pts)
                new_pts.append(ys.ravel())
                new_w.append((logw + math.log(a) + phi(i, g, ys) - log_lam).ravel())
            pts = np.concatenate(new_pts)
            logw = np.concatenate(new_w)
        masses = bin_atoms(pts, np.exp(logw), B)
    raw = float(masses.sum())
    return EmpiricalMeasure(masses / raw, info={"raw_mass": raw, "lambda": lam, "x": x, "n": n})


def periodic_mass_measure(spec: SemigroupSpec, n: int, B: int, cap: int = ATOM_CAP,
                          word_cap: int = 2 ** 14) -> EmpiricalMeasure:
    """Fixed points of all p^n words of length n, normalised by their number.

    The normaliser is Per_n of the skew product, so the result is a
    probability measure for every n.
    """
    _require_circle(spec, "periodic_mass_measure")
    if n < 1:
        raise SpecError(f"n: must be >= 1 (got {n})")
    masses = np.zeros(B)
    total = 0
    linear = all(isinstance(g, CircleLinear) for g in spec.generators)
    if linear:
        classes = enumerate_word_classes(spec.p, n)
        if sum(c.multiplicity * 0 + class_degree(spec, c.counts) for c in classes) > cap:
            raise CapExceeded(f"n: periodic point count exceeds the cap {cap}")
        for c in classes:
            D = class_degree(spec, c.counts)
            pts = np.arange(D - 1) / (D - 1)
            masses += bin_atoms(pts, float(c.multiplicity), B)
            total += c.multiplicity * (D - 1)
    else:
        if spec.p ** n > word_cap:
            raise CapExceeded(f"n: {spec.p}**{n} words exceed the cap {word_cap}")
        if sum(spec.degrees) ** n > cap:
            raise CapExceeded(f"n: periodic point count exceeds the cap {cap}")
        for w in all_words(spec.p, n):
            pts = fix_locate(spec, w).points
            masses += bin_atoms(pts, 1.0, B)
            total += len(pts)
    return EmpiricalMeasure(masses / total, info={"count": total, "n": n})


def mean_test_integral(density: DensityFunction, psi, order: int = 8) -> float:
    """Integral of psi against the density, Gauss-Legendre per bin."""
    N = density.grid_size
    nodes, weights = np.polynomial.legendre.leggauss(order)
    y = (np.arange(N)[:, None] + 0.5 * (nodes[None, :] + 1.0)) / N
    vals = psi(y)
    return float(np.sum(density.values[:, None] * vals * weights[None, :]) / (2 * N))


def pushforward_integral(spec: SemigroupSpec, walk: RandomWalk, density: DensityFunction,
                         psi, order: int = 8) -> float:
    """sum_i a_i * integral of psi(g_i(y)) against the density."""
    return sum(a * mean_test_integral(density, lambda y, g=g: psi(g(y)), order)
               for a, g in zip(walk.weights, spec.generators) if a > 0)
