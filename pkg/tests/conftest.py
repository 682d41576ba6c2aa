import csv

import numpy as np
import pytest

from ramanqc.spectra import (
    Dataset,
    RamanProfile,
    SampleGroup,
    ShiftGrid,
)


def gaussian_peak(shifts, center, width, height):
    shifts = np.asarray(shifts, dtype=float)
    return height * np.exp(-0.5 * ((shifts - center) / width) ** 2)


def make_grid(n=64, start=100.0, stop=1700.0):
    return ShiftGrid(np.linspace(start, stop, n))


def make_group(grid, sample_index, intensity_rows):
    profiles = tuple(
        RamanProfile(grid, row, sample_index, j + 1)
        for j, row in enumerate(intensity_rows)
    )
    return SampleGroup(sample_index, profiles)


def make_dataset(n_samples=5, n_obs=4, n=64, seed=0, shifted_samples=()):
    """Synthetic dataset: G-band-like peak plus noise; some samples mean-shifted."""
    rng = np.random.default_rng(seed)
    grid = make_grid(n)
    base = gaussian_peak(grid.values, 1580.0, 60.0, 1000.0) + 50.0
    ideal = RamanProfile(grid, base, 0, 1)
    groups = []
    for i in range(1, n_samples + 1):
        shift = 300.0 if i in shifted_samples else 0.0
        rows = []
        for _ in range(n_obs):
            wobble = gaussian_peak(grid.values, 1580.0, 60.0, rng.normal(0, 20.0))
            noise = rng.normal(0, 5.0, n)
            rows.append(np.clip(base + shift + wobble + noise, 0.0, None))
        groups.append(make_group(grid, i, rows))
    return Dataset(tuple(groups), ideal)


def write_spectra_csv(dataset, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample", "observation", "shift", "intensity"])

        def emit(p):
            for s, y in zip(p.grid.values, p.intensities):
                writer.writerow([p.sample_index, p.observation_index,
                                 repr(float(s)), repr(float(y))])

        if dataset.ideal is not None:
            emit(dataset.ideal)
        for group in dataset.samples:
            for p in group.profiles:
                emit(p)


@pytest.fixture
def small_dataset():
    return make_dataset()
