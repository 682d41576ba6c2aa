"""Mixed-effects view of a sample group: fixed + normal + defective + noise.

The full penalized decomposition that produced the reference results is an
upstream tool; this module provides (a) a self-contained baseline
decomposer so the pipeline runs end to end on raw spectra, and (b) a
loader for externally produced effects, which is the fidelity path.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import IngestionError, InsufficientDataError, RamanQCError
from .spectra import SampleGroup, _parse_float, _parse_int, _read_rows
from .wavelet import default_levels, haar_decompose, haar_reconstruct, pad_to_pow2

# Raman band windows (cm^-1) used to label defect locations.
RBM_MAX = 300.0
D_BAND = (1250.0, 1400.0)
G_BAND = (1550.0, 1600.0)


@dataclass(frozen=True)
class DecompositionConfig:
    levels: int | None = None          # None -> down to ~8-point approximation
    sparsity_budget: float = 0.10      # max fraction of above-threshold details


@dataclass(frozen=True)
class DecomposedEffects:
    """Per-sample decomposition: y_j = fixed + normal_j + defective_j + noise_j."""

    sample_index: int
    shifts: np.ndarray                 # shared shift grid values
    fixed: np.ndarray                  # (n,)
    normal: np.ndarray                 # (n_obs, n)
    defective: np.ndarray              # (n_obs, n)
    noise: np.ndarray                  # (n_obs, n)
    observation_indices: tuple[int, ...]

    @property
    def n_observations(self) -> int:
        return self.normal.shape[0]

    def reconstruct(self) -> np.ndarray:
        return self.fixed[None, :] + self.normal + self.defective + self.noise


def decompose_baseline(group: SampleGroup,
                       cfg: DecompositionConfig = DecompositionConfig()) -> DecomposedEffects:
    """Split a sample group into fixed/normal/defective/noise profiles.

    The fixed effect is the pointwise median of the group (robust to a
    defective observation contaminating the mean). Each residual is run
    through an orthonormal Haar transform; detail coefficients above the
    universal threshold sigma_hat * sqrt(2 ln n) are routed to the
    defective profile, the coarse approximation to the normal profile,
    and sub-threshold details to noise. sigma_hat comes from the median
    absolute deviation of the raw profiles' finest-scale differences,
    pooled over the group. The four components sum back to the input
    exactly (up to float rounding).
    """
    if len(group.profiles) < 2:
        raise InsufficientDataError(
            f"sample {group.sample_index}: decomposition needs >= 2 profiles, "
            f"got {len(group.profiles)}"
        )
    y = group.intensity_matrix()
    n_obs, n = y.shape
    fixed = np.median(y, axis=0)
    threshold_scale = np.sqrt(2.0 * np.log(n))

    normal = np.empty_like(y)
    defective = np.empty_like(y)
    noise = np.empty_like(y)
    transforms = []
    for j in range(n_obs):
        residual = y[j] - fixed
        padded, _ = pad_to_pow2(residual)
        levels = cfg.levels if cfg.levels is not None else default_levels(len(padded))
        transforms.append(haar_decompose(padded, levels))

    # noise scale from the finest-scale differences of the raw profiles,
    # pooled over the group; residual-based estimates are biased low
    # because subtracting the pointwise median shrinks the middle rows
    half = (n // 2) * 2
    finest = ((y[:, 0:half:2] - y[:, 1:half:2]) / np.sqrt(2.0)).ravel()
    sigma = np.median(np.abs(finest)) / 0.6745 if len(finest) else 0.0
    thr = sigma * threshold_scale

    spike_count = 0
    detail_count = 0
    for j, (details, approx) in enumerate(transforms):
        spike_details = [np.where(np.abs(d) > thr, d, 0.0) for d in details]
        noise_details = [np.where(np.abs(d) > thr, 0.0, d) for d in details]
        spike_count += sum(np.count_nonzero(d) for d in spike_details)
        detail_count += sum(len(d) for d in details)

        zeros = [np.zeros_like(d) for d in details]
        normal[j] = haar_reconstruct(zeros, approx)[:n]
        defective[j] = haar_reconstruct(spike_details, np.zeros_like(approx))[:n]
        noise[j] = haar_reconstruct(noise_details, np.zeros_like(approx))[:n]

    frac = spike_count / detail_count if detail_count else 0.0
    if frac > cfg.sparsity_budget:
        raise RamanQCError(
            f"sample {group.sample_index}: defective component is not sparse "
            f"({frac:.1%} above-threshold details exceeds the "
            f"{cfg.sparsity_budget:.0%} budget); the residuals are too "
            "contaminated for the baseline decomposer"
        )
    return DecomposedEffects(
        sample_index=group.sample_index,
        shifts=group.grid.values,
        fixed=fixed,
        normal=normal,
        defective=defective,
        noise=noise,
        observation_indices=tuple(p.observation_index for p in group.profiles),
    )


def load_effects(path: str | Path) -> list[DecomposedEffects]:
    """Read externally produced effects from CSV.

    Layout: sample,observation,shift,fixed,normal[,defective][,noise] with
    the fixed column repeated across observations of a sample. Missing
    defective/noise columns default to zero. The reconstruction identity is
    not enforced here (the original spectra may be absent).
    """
    path = Path(path)
    header, rows = _read_rows(path, ["sample", "observation", "shift", "fixed", "normal"])
    has_defective = "defective" in header
    has_noise = "noise" in header

    staged: dict[tuple[int, int], dict[str, list[float]]] = {}
    for line_no, row in rows:
        i = _parse_int(row["sample"], path, line_no, "sample")
        j = _parse_int(row["observation"], path, line_no, "observation")
        entry = staged.setdefault((i, j), {
            "shift": [], "fixed": [], "normal": [], "defective": [], "noise": []})
        entry["shift"].append(_parse_float(row["shift"], path, line_no, "shift"))
        entry["fixed"].append(_parse_float(row["fixed"], path, line_no, "fixed"))
        entry["normal"].append(_parse_float(row["normal"], path, line_no, "normal"))
        for name, present in (("defective", has_defective), ("noise", has_noise)):
            if present and row[name] != "":
                entry[name].append(_parse_float(row[name], path, line_no, name))
            else:
                entry[name].append(0.0)

    by_sample: dict[int, list[tuple[int, dict]]] = {}
    for (i, j), entry in staged.items():
        by_sample.setdefault(i, []).append((j, entry))

    out = []
    for i in sorted(by_sample):
        observations = sorted(by_sample[i])
        shifts = np.array(observations[0][1]["shift"])
        fixed = np.array(observations[0][1]["fixed"])
        for j, entry in observations:
            if len(entry["shift"]) != len(shifts) or not np.array_equal(
                    np.array(entry["shift"]), shifts):
                raise IngestionError(
                    f"{path}: sample {i} observation {j}: shift grid differs "
                    "from the sample's first observation"
                )
            if not np.allclose(np.array(entry["fixed"]), fixed, atol=1e-9, rtol=0):
                raise IngestionError(
                    f"{path}: sample {i} observation {j}: fixed column differs "
                    "across observations of one sample"
                )
        out.append(DecomposedEffects(
            sample_index=i,
            shifts=shifts,
            fixed=fixed,
            normal=np.vstack([np.array(e["normal"]) for _, e in observations]),
            defective=np.vstack([np.array(e["defective"]) for _, e in observations]),
            noise=np.vstack([np.array(e["noise"]) for _, e in observations]),
            observation_indices=tuple(j for j, _ in observations),
        ))
    return out


def write_effects(effects: list[DecomposedEffects], path: str | Path) -> None:
    """Write effects in the CSV layout understood by load_effects."""
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample", "observation", "shift", "fixed",
                        "normal", "defective", "noise"])
        for eff in effects:
            for row_idx, j in enumerate(eff.observation_indices):
                for x in range(len(eff.shifts)):
                    writer.writerow([
                        eff.sample_index, j, repr(float(eff.shifts[x])),
                        repr(float(eff.fixed[x])), repr(float(eff.normal[row_idx, x])),
                        repr(float(eff.defective[row_idx, x])),
                        repr(float(eff.noise[row_idx, x])),
                    ])


def band_label(shift: float) -> str:
    """Map a Raman shift to the conventional band name."""
    if shift < RBM_MAX:
        return "RBM"
    if D_BAND[0] <= shift <= D_BAND[1]:
        return "D-band"
    if G_BAND[0] <= shift <= G_BAND[1]:
        return "G-band"
    if D_BAND[1] < shift < G_BAND[0]:
        return "between D and G"
    return "other"


def defect_summary(effects: DecomposedEffects,
                   threshold: float = 0.0) -> list[tuple[int, str, float]]:
    """Observations whose defective profile exceeds threshold anywhere.

    Returns (observation index, band label of the peak, peak magnitude),
    one entry per affected observation.
    """
    out = []
    for row_idx, j in enumerate(effects.observation_indices):
        magnitudes = np.abs(effects.defective[row_idx])
        peak = int(np.argmax(magnitudes))
        if magnitudes[peak] > threshold:
            out.append((j, band_label(float(effects.shifts[peak])),
                        float(magnitudes[peak])))
    return out
