"""Data model and CSV ingestion for multichannel Raman spectra.

File layout (long format, one header row, UTF-8):

    sample,observation,shift,intensity

Sample 0, when present, is the ideal profile the consistency analysis
compares against. An optional positions file carries the measurement
coordinates: ``sample,observation,u,v`` with u, v in [0, 1].
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import GridMismatchError, IngestionError


@dataclass(frozen=True)
class ShiftGrid:
    """Strictly increasing Raman shifts (cm^-1) shared by a set of profiles."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    def __len__(self) -> int:
        return len(self.values)

    def matches(self, other: "ShiftGrid") -> bool:
        return len(self.values) == len(other.values) and bool(
            np.array_equal(self.values, other.values)
        )


@dataclass(frozen=True)
class RamanProfile:
    """One measurement: intensity counts on a shared shift grid."""

    grid: ShiftGrid
    intensities: np.ndarray
    sample_index: int
    observation_index: int

    def __post_init__(self):
        object.__setattr__(self, "intensities", np.asarray(self.intensities, dtype=float))


@dataclass(frozen=True)
class SampleGroup:
    """All profiles measured within one sample zone."""

    sample_index: int
    profiles: tuple[RamanProfile, ...]
    positions: tuple[tuple[float, float], ...] | None = None

    @property
    def grid(self) -> ShiftGrid:
        return self.profiles[0].grid

    def intensity_matrix(self) -> np.ndarray:
        """Observations stacked as rows, shape (n_obs, n_shifts)."""
        return np.vstack([p.intensities for p in self.profiles])


@dataclass(frozen=True)
class Dataset:
    """Samples 1..N plus an optional ideal profile (sample 0)."""

    samples: tuple[SampleGroup, ...]
    ideal: RamanProfile | None = None

    @property
    def grid(self) -> ShiftGrid:
        return self.samples[0].grid

    def sample(self, index: int) -> SampleGroup:
        for group in self.samples:
            if group.sample_index == index:
                return group
        raise KeyError(f"no sample with index {index}")


@dataclass(frozen=True)
class Violation:
    """One invariant violation, located by sample/observation coordinates."""

    sample: int | None
    observation: int | None
    message: str

    def __str__(self) -> str:
        where = []
        if self.sample is not None:
            where.append(f"sample {self.sample}")
        if self.observation is not None:
            where.append(f"observation {self.observation}")
        prefix = ", ".join(where)
        return f"{prefix}: {self.message}" if prefix else self.message


def _parse_float(text: str, path: Path, line_no: int, column: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise IngestionError(
            f"{path}:{line_no}: column '{column}' is not a number: {text!r}"
        ) from None


def _parse_int(text: str, path: Path, line_no: int, column: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise IngestionError(
            f"{path}:{line_no}: column '{column}' is not an integer: {text!r}"
        ) from None


def _read_rows(path: Path, required: list[str]) -> tuple[list[str], list[tuple[int, dict]]]:
    if not path.exists():
        raise IngestionError(f"file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestionError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        missing = [c for c in required if c not in header]
        if missing:
            raise IngestionError(f"{path}: missing column(s) {', '.join(missing)}")
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise IngestionError(
                    f"{path}:{line_no}: expected {len(header)} fields, got {len(row)}"
                )
            rows.append((line_no, dict(zip(header, (cell.strip() for cell in row)))))
    return header, rows


def load_dataset(path: str | Path, positions_path: str | Path | None = None) -> Dataset:
    """Load and validate a long-format spectra CSV.

    Profiles are grouped by (sample, observation) in file order; every
    profile must carry the exact shift grid of the first one. Raises
    IngestionError (or GridMismatchError) on any malformed or invalid input.
    """
    path = Path(path)
    _, rows = _read_rows(path, ["sample", "observation", "shift", "intensity"])
    if not rows:
        raise IngestionError(f"{path}: no data rows")

    # (sample, observation) -> parallel shift/intensity lists, in file order
    profiles: dict[tuple[int, int], tuple[list[float], list[float]]] = {}
    for line_no, row in rows:
        i = _parse_int(row["sample"], path, line_no, "sample")
        j = _parse_int(row["observation"], path, line_no, "observation")
        if i < 0:
            raise IngestionError(f"{path}:{line_no}: sample index must be >= 0, got {i}")
        if j < 1:
            raise IngestionError(f"{path}:{line_no}: observation index must be >= 1, got {j}")
        shift = _parse_float(row["shift"], path, line_no, "shift")
        intensity = _parse_float(row["intensity"], path, line_no, "intensity")
        shifts, intensities = profiles.setdefault((i, j), ([], []))
        shifts.append(shift)
        intensities.append(intensity)

    first_key = next(iter(profiles))
    grid = ShiftGrid(np.array(profiles[first_key][0]))
    by_sample: dict[int, list[RamanProfile]] = {}
    for (i, j), (shifts, intensities) in profiles.items():
        profile_grid = ShiftGrid(np.array(shifts))
        if not grid.matches(profile_grid):
            raise GridMismatchError(
                f"{path}: sample {i} observation {j} has {len(shifts)} shifts; "
                f"grid of sample {first_key[0]} observation {first_key[1]} has "
                f"{len(grid)} and must match exactly"
            )
        by_sample.setdefault(i, []).append(
            RamanProfile(grid, np.array(intensities), sample_index=i, observation_index=j)
        )

    positions = _load_positions(Path(positions_path)) if positions_path else {}

    ideal = None
    groups = []
    for i in sorted(by_sample):
        members = sorted(by_sample[i], key=lambda p: p.observation_index)
        if i == 0:
            if len(members) != 1:
                raise IngestionError(
                    f"{path}: ideal profile (sample 0) must have exactly one "
                    f"observation, got {len(members)}"
                )
            ideal = members[0]
            continue
        pos = positions.get(i)
        if pos is not None and len(pos) != len(members):
            raise IngestionError(
                f"positions for sample {i}: {len(pos)} entries for {len(members)} observations"
            )
        groups.append(SampleGroup(i, tuple(members), pos))

    if not groups:
        raise IngestionError(f"{path}: no sample groups (only an ideal profile?)")
    dataset = Dataset(tuple(groups), ideal)
    violations = validate(dataset)
    if violations:
        detail = "; ".join(str(v) for v in violations[:5])
        raise IngestionError(f"{path}: invalid dataset: {detail}")
    return dataset


def load_ideal_profile(path: str | Path) -> RamanProfile:
    """Read a single reference profile from a spectra CSV.

    The file must contain exactly one (sample, observation) pair; the
    sample index may be 0 or any other value.
    """
    path = Path(path)
    _, rows = _read_rows(path, ["sample", "observation", "shift", "intensity"])
    if not rows:
        raise IngestionError(f"{path}: no data rows")
    keys = set()
    shifts: list[float] = []
    intensities: list[float] = []
    for line_no, row in rows:
        i = _parse_int(row["sample"], path, line_no, "sample")
        j = _parse_int(row["observation"], path, line_no, "observation")
        keys.add((i, j))
        if len(keys) > 1:
            raise IngestionError(
                f"{path}: a reference-profile file must hold exactly one "
                "spectrum, found several (sample, observation) pairs"
            )
        shifts.append(_parse_float(row["shift"], path, line_no, "shift"))
        intensities.append(_parse_float(row["intensity"], path, line_no, "intensity"))
    (i, j), = keys
    return RamanProfile(ShiftGrid(np.array(shifts)), np.array(intensities), i, j)


def _load_positions(path: Path) -> dict[int, tuple[tuple[float, float], ...]]:
    _, rows = _read_rows(path, ["sample", "observation", "u", "v"])
    staged: dict[int, list[tuple[int, float, float]]] = {}
    for line_no, row in rows:
        i = _parse_int(row["sample"], path, line_no, "sample")
        j = _parse_int(row["observation"], path, line_no, "observation")
        u = _parse_float(row["u"], path, line_no, "u")
        v = _parse_float(row["v"], path, line_no, "v")
        if not (0.0 <= u <= 1.0 and 0.0 <= v <= 1.0):
            raise IngestionError(f"{path}:{line_no}: position ({u}, {v}) outside [0,1]^2")
        staged.setdefault(i, []).append((j, u, v))
    return {
        i: tuple((u, v) for _, u, v in sorted(entries))
        for i, entries in staged.items()
    }


def validate(dataset: Dataset) -> list[Violation]:
    """Enumerate every invariant violation; empty list iff the dataset is valid."""
    out: list[Violation] = []
    grid = dataset.grid
    values = grid.values
    if len(values) < 2:
        out.append(Violation(None, None, f"shift grid has {len(values)} points, need >= 2"))
    if np.any(~np.isfinite(values)):
        out.append(Violation(None, None, "shift grid contains non-finite values"))
    elif np.any(np.diff(values) <= 0):
        out.append(Violation(None, None, "shift grid is not strictly increasing"))

    def check_profile(p: RamanProfile) -> None:
        if not grid.matches(p.grid):
            out.append(Violation(p.sample_index, p.observation_index,
                                 "shift grid differs from the dataset grid"))
            return
        if len(p.intensities) != len(p.grid):
            out.append(Violation(p.sample_index, p.observation_index,
                                 f"{len(p.intensities)} intensities for a "
                                 f"{len(p.grid)}-point grid"))
            return
        for x, value in enumerate(p.intensities):
            if not math.isfinite(value):
                out.append(Violation(p.sample_index, p.observation_index,
                                     f"non-finite intensity at shift index {x} "
                                     f"({p.grid.values[x]:g} cm^-1)"))
            elif value < 0:
                out.append(Violation(p.sample_index, p.observation_index,
                                     f"negative intensity {value:g} at shift index {x} "
                                     f"({p.grid.values[x]:g} cm^-1)"))

    if dataset.ideal is not None:
        check_profile(dataset.ideal)
    for group in dataset.samples:
        for p in group.profiles:
            check_profile(p)
        if group.positions is not None and len(group.positions) != len(group.profiles):
            out.append(Violation(group.sample_index, None,
                                 f"{len(group.positions)} positions for "
                                 f"{len(group.profiles)} profiles"))
    return out


def write_dataset(dataset: Dataset, path: str | Path) -> None:
    """Write a dataset back to the long CSV layout (round-trips bit-exactly)."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample", "observation", "shift", "intensity"])

        def emit(p: RamanProfile) -> None:
            for shift, intensity in zip(p.grid.values, p.intensities):
                writer.writerow([p.sample_index, p.observation_index,
                                 repr(float(shift)), repr(float(intensity))])

        if dataset.ideal is not None:
            emit(dataset.ideal)
        for group in dataset.samples:
            for p in group.profiles:
                emit(p)
