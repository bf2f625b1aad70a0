"""Flux datasets: container, normalization, synthetic generation, CSV I/O.

The synthetic generator stands in for unavailable field measurements. Its
ground-truth response peaks shortly after fertilization under moist, warm
conditions and decays to a small positive background:

    g = 1.2 + 180 * (pp2/(pp2+15)) * (pp7/(pp7+40))
              * exp(-daysAF/18) * exp(-((airT-24)/12)^2)

Observed fluxes are g times multiplicative log-normal noise, so log-flux
regression is exactly the probabilistic model's assumed family.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import ConfigurationError, ParseError
from ..rng import as_generator

FEATURE_NAMES = ("pp2", "pp7", "airT", "daysAF")


def surrogate_flux(pp2, pp7, air_t, days_af):
    """Closed-form daily flux response (g/ha/d); accepts scalars or arrays."""
    pp2 = np.asarray(pp2, dtype=np.float64)
    pp7 = np.asarray(pp7, dtype=np.float64)
    air_t = np.asarray(air_t, dtype=np.float64)
    days_af = np.asarray(days_af, dtype=np.float64)
    moisture = (pp2 / (pp2 + 15.0)) * (pp7 / (pp7 + 40.0))
    fert_pulse = np.exp(-days_af / 18.0)
    temp = np.exp(-(((air_t - 24.0) / 12.0) ** 2))
    out = 1.2 + 180.0 * moisture * fert_pulse * temp
    return float(out) if out.ndim == 0 else out


@dataclass
class Normalization:
    mean: np.ndarray
    sd: np.ndarray

    @classmethod
    def fit(cls, x: np.ndarray) -> "Normalization":
        mean = x.mean(axis=0)
        sd = x.std(axis=0)
        sd = np.where(sd < 1e-12, 1.0, sd)
        return cls(mean=mean, sd=sd)

    def apply(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=np.float64) - self.mean) / self.sd

    def invert(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z, dtype=np.float64) * self.sd + self.mean


@dataclass
class EmissionDataset:
    """Feature matrix (n, 4) in FEATURE_NAMES order plus flux targets (n,)."""

    features: np.ndarray
    flux: np.ndarray

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.flux = np.asarray(self.flux, dtype=np.float64).reshape(-1)
        if self.features.ndim != 2 or self.features.shape[1] != len(FEATURE_NAMES):
            raise ConfigurationError(
                f"features must be (n, {len(FEATURE_NAMES)}), got {self.features.shape}")
        if self.features.shape[0] != self.flux.size:
            raise ConfigurationError("features/flux length mismatch")

    def __len__(self) -> int:
        return self.flux.size

    def subset(self, idx) -> "EmissionDataset":
        return EmissionDataset(self.features[idx], self.flux[idx])


def make_synthetic_dataset(n: int, noise: float, rng) -> EmissionDataset:
    """Sample n records from documented plausible feature ranges; flux is
    the surrogate response times exp(noise * standard normal)."""
    if n < 1:
        raise ConfigurationError("need at least one sample")
    gen = as_generator(rng)
    pp2 = gen.uniform(0.0, 80.0, size=n)
    pp7 = gen.uniform(pp2, 160.0)
    air_t = gen.uniform(-5.0, 35.0, size=n)
    days_af = gen.uniform(0.0, 365.0, size=n)
    g = surrogate_flux(pp2, pp7, air_t, days_af)
    flux = g * np.exp(noise * gen.standard_normal(n))
    return EmissionDataset(np.column_stack([pp2, pp7, air_t, days_af]), flux)


def write_dataset(dataset: EmissionDataset, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([*FEATURE_NAMES, "flux"])
        for row, y in zip(dataset.features, dataset.flux):
            writer.writerow([repr(float(v)) for v in (*row, y)])


def read_dataset(path) -> EmissionDataset:
    path = Path(path)
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty dataset file", path=str(path)) from None
        if [h.strip() for h in header] != [*FEATURE_NAMES, "flux"]:
            raise ParseError(
                f"expected header {','.join([*FEATURE_NAMES, 'flux'])}",
                path=str(path), line=1)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise ParseError(str(exc), path=str(path), line=lineno) from exc
    if not rows:
        raise ParseError("dataset has no rows", path=str(path))
    arr = np.asarray(rows)
    return EmissionDataset(arr[:, :4], arr[:, 4])
