"""Binned measures and grid densities on [0, 1)."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import reduce_mod1


@dataclass
class EmpiricalMeasure:
    """Probability masses on B half-open bins [k/B, (k+1)/B)."""

    masses: np.ndarray
    space: str = "circle"
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        self.masses = np.asarray(self.masses, dtype=float)

    @property
    def bins(self) -> int:
        return self.masses.size

    @property
    def bin_left(self) -> np.ndarray:
        return np.arange(self.bins) / self.bins

    @property
    def total(self) -> float:
        return float(self.masses.sum())

    def as_density(self) -> "DensityFunction":
        return DensityFunction(self.masses * self.bins)

    @classmethod
    def from_atoms(cls, points, weights, bins: int, **info) -> "EmpiricalMeasure":
        """Bin weighted atoms; an atom on a bin edge goes to the bin it opens."""
        return cls(bin_atoms(points, weights, bins), info=info)

    @classmethod
    def uniform(cls, bins: int) -> "EmpiricalMeasure":
        return cls(np.full(bins, 1.0 / bins))


@dataclass
class DensityFunction:
    """Piecewise constant density on N equal bins of [0, 1)."""

    values: np.ndarray
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)

    @property
    def grid_size(self) -> int:
        return self.values.size

    @property
    def bin_left(self) -> np.ndarray:
        return np.arange(self.grid_size) / self.grid_size

    @property
    def integral(self) -> float:
        return float(self.values.sum() / self.grid_size)

    def bin_masses(self, bins: int | None = None) -> np.ndarray:
        """Mass of each of ``bins`` equal bins (bins must divide the grid size)."""
        m = self.values / self.grid_size
        if bins is None or bins == self.grid_size:
            return m
        if self.grid_size % bins:
            raise ValueError(f"bins: {bins} does not divide grid size {self.grid_size}")
        return m.reshape(bins, -1).sum(axis=1)

    def to_measure(self, bins: int | None = None) -> EmpiricalMeasure:
        return EmpiricalMeasure(self.bin_masses(bins))

    def __call__(self, x):
        k = np.minimum((np.asarray(reduce_mod1(x)) * self.grid_size).astype(int), self.grid_size - 1)
        return self.values[k]

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        """Draw points from the density by picking a bin then a uniform offset."""
        p = self.bin_masses()
        k = rng.choice(self.grid_size, size=size, p=p / p.sum())
        return (k + rng.random(size)) / self.grid_size


def bin_atoms(points, weights, bins: int) -> np.ndarray:
    points = reduce_mod1(np.asarray(points, dtype=float).ravel())
    weights = np.broadcast_to(np.asarray(weights, dtype=float), points.shape).ravel()
    k = np.minimum(np.floor(points * bins).astype(np.int64), bins - 1)
    return np.bincount(k, weights=weights, minlength=bins)


def l1_distance(a, b) -> float:
    """L1 distance of two binned measures (or densities turned into masses).

    Inputs of different bin counts are coarsened to the smaller one.
    """
    a = a.masses if isinstance(a, EmpiricalMeasure) else (
        a.bin_masses() if isinstance(a, DensityFunction) else np.asarray(a, float))
    b = b.masses if isinstance(b, EmpiricalMeasure) else (
        b.bin_masses() if isinstance(b, DensityFunction) else np.asarray(b, float))
    if a.size != b.size:
        n = min(a.size, b.size)
        a = a.reshape(n, -1).sum(axis=1)
        b = b.reshape(n, -1).sum(axis=1)
    return float(np.abs(a - b).sum())
