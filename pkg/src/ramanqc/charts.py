"""CUSUM and EWMA control charts over per-sample scalar statistics.

Baselines for the mean-shift comparison. In-control parameters are either
supplied explicitly or estimated with the standard individuals-chart
recipe: mu0 = mean of the designated baseline window, sigma0 = mean moving
range / 1.128.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

D2_N2 = 1.128  # expected relative range of two normal observations


@dataclass(frozen=True)
class ChartSeries:
    statistic: str
    observations: np.ndarray
    mu0: float
    sigma0: float
    columns: dict[str, np.ndarray]   # chart outputs, one array per column
    signals: tuple[int, ...]         # 1-based indices beyond the limits


def estimate_in_control(x: np.ndarray, baseline: int | None = None) -> tuple[float, float]:
    """(mu0, sigma0) from the first `baseline` points (all points if None)."""
    x = np.asarray(x, dtype=float)
    window = x if baseline is None else x[:baseline]
    if len(window) < 2:
        raise ValueError("need >= 2 in-control observations to estimate sigma")
    sigma = float(np.abs(np.diff(window)).mean() / D2_N2)
    return float(window.mean()), sigma


def cusum(x: np.ndarray, mu0: float, sigma0: float,
          k: float = 0.5, h: float = 5.0, statistic: str = "x") -> ChartSeries:
    """Tabular CUSUM on standardized observations.

    C+_i = max(0, C+_{i-1} + u_i - k) and C-_i = min(0, C-_{i-1} + u_i + k)
    with u_i = (x_i - mu0) / sigma0; a point signals when C+ > h or C- < -h.
    The lower sum is kept as a signed negative value.
    """
    if sigma0 <= 0.0:
        raise ValueError(f"sigma0 must be positive, got {sigma0}")
    x = np.asarray(x, dtype=float)
    u = (x - mu0) / sigma0
    c_pos = np.zeros(len(x))
    c_neg = np.zeros(len(x))
    signals = []
    hi, lo = 0.0, 0.0
    for i, ui in enumerate(u):
        hi = max(0.0, hi + ui - k)
        lo = min(0.0, lo + ui + k)
        c_pos[i], c_neg[i] = hi, lo
        if hi > h or lo < -h:
            signals.append(i + 1)
    return ChartSeries(statistic, x, mu0, sigma0,
                       {"cusum_pos": c_pos, "cusum_neg": c_neg},
                       tuple(signals))


def ewma(x: np.ndarray, mu0: float, sigma0: float,
         weight: float = 0.2, width: float = 3.0, z0: float | None = None,
         statistic: str = "x") -> ChartSeries:
    """EWMA chart with time-varying limits.

    z_i = weight * x_i + (1 - weight) * z_{i-1}, z_0 = mu0 unless given;
    limits are mu0 +/- width * sigma0 * sqrt(weight/(2-weight) *
    (1 - (1-weight)^(2i))), widening monotonically to their asymptote.
    """
    if sigma0 <= 0.0:
        raise ValueError(f"sigma0 must be positive, got {sigma0}")
    if not 0.0 < weight <= 1.0:
        raise ValueError(f"EWMA weight must lie in (0, 1], got {weight}")
    x = np.asarray(x, dtype=float)
    z = np.zeros(len(x))
    lcl = np.zeros(len(x))
    ucl = np.zeros(len(x))
    signals = []
    current = mu0 if z0 is None else z0
    for i, xi in enumerate(x):
        current = weight * xi + (1.0 - weight) * current
        half = width * sigma0 * np.sqrt(
            weight / (2.0 - weight) * (1.0 - (1.0 - weight) ** (2 * (i + 1)))
        )
        z[i], lcl[i], ucl[i] = current, mu0 - half, mu0 + half
        if current < lcl[i] or current > ucl[i]:
            signals.append(i + 1)
    return ChartSeries(statistic, x, mu0, sigma0,
                       {"ewma": z, "lcl": lcl, "ucl": ucl},
                       tuple(signals))


def write_chart_csv(series_list: list[ChartSeries], path: str | Path) -> None:
    """One row per sample; chart columns prefixed with the statistic name."""
    n = len(series_list[0].observations)
    header = ["sample"]
    columns = []
    for s in series_list:
        header.append(s.statistic)
        columns.append(s.observations)
        for name, values in s.columns.items():
            header.append(f"{s.statistic}_{name}")
            columns.append(values)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(n):
            writer.writerow([i + 1] + [repr(float(col[i])) for col in columns])
