"""Field sweep, hysteresis curve container, and loop-metric extraction.

One run sweeps the external field from hmax down to hmin and back, relaxing
the lattice at every sample, then reads two observables off the loop: the
zero crossings of both branches give the loop shift (their midpoint) and the
coercivity (their distance).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lattice import SpinLattice, generate_disorder, magnetization
from .params import SimulationParams
from .relax import relax


class NoCrossingError(ValueError):
    """A branch never changed sign, so no crossing field exists."""

    def __init__(self, branch: str):
        super().__init__(f"magnetization never crosses zero on the {branch} branch")
        self.branch = branch


@dataclass
class HysteresisCurve:
    """Ordered (h, m) samples; indices below `branch_split` form the
    descending branch, the rest the ascending one."""

    h: np.ndarray
    m: np.ndarray
    branch_split: int

    def __len__(self) -> int:
        return len(self.h)

    @property
    def descending(self):
        return self.h[: self.branch_split], self.m[: self.branch_split]

    @property
    def ascending(self):
        return self.h[self.branch_split :], self.m[self.branch_split :]

    def samples(self):
        return list(zip(self.h.tolist(), self.m.tolist()))


@dataclass(frozen=True)
class LoopMetrics:
    """Zero-crossing fields of both branches plus the derived observables."""

    h_cross_desc: float
    h_cross_asc: float
    exchange_bias: float
    coercivity: float

    @classmethod
    def from_crossings(cls, h_cross_desc: float, h_cross_asc: float) -> "LoopMetrics":
        return cls(
            h_cross_desc=h_cross_desc,
            h_cross_asc=h_cross_asc,
            exchange_bias=(h_cross_desc + h_cross_asc) / 2.0,
            coercivity=h_cross_asc - h_cross_desc,
        )

    def as_vector(self) -> list:
        """Wire/report order: [exchange_bias, coercivity, desc, asc]."""
        return [self.exchange_bias, self.coercivity, self.h_cross_desc, self.h_cross_asc]


def field_schedule(params: SimulationParams):
    """External-field samples: hmax -> hmin, then the mirror back up.

    Each branch holds steps/2 uniformly spaced values with both endpoints
    included, the ascending branch being the exact reverse of the descending
    one so the two grids are symmetric.
    """
    half = params.steps // 2
    descending = np.linspace(params.hmax, params.hmin, half)
    return np.concatenate([descending, descending[::-1]]), half


def run_sweep(params: SimulationParams) -> HysteresisCurve:
    """Run one full hysteresis loop and return the sampled curve.

    Starts from saturation (all spins up), draws the disorder once, then
    relaxes at every field sample.  Deterministic given params.seed.
    """
    disorder = generate_disorder(params)
    lattice = SpinLattice.saturated(params.size, boundary=params.boundary)
    h, split = field_schedule(params)
    m = np.empty_like(h)
    for k, h_ext in enumerate(h):
        relax(lattice, disorder, h_ext)
        m[k] = magnetization(lattice)
    return HysteresisCurve(h=h, m=m, branch_split=split)


def run_hysteresis(params: SimulationParams):
    """One full run: sweep the loop, then extract its metrics."""
    curve = run_sweep(params)
    return curve, extract_metrics(curve)


def extract_metrics(curve: HysteresisCurve) -> LoopMetrics:
    """Locate the zero crossing of each branch and derive the loop metrics.

    Per branch the first sign change wins; a sample sitting exactly at zero
    counts as the crossing, otherwise the crossing field is linearly
    interpolated between the bracketing samples.
    """
    hd, md = curve.descending
    ha, ma = curve.ascending
    return LoopMetrics.from_crossings(
        h_cross_desc=_branch_crossing(hd, md, "descending"),
        h_cross_asc=_branch_crossing(ha, ma, "ascending"),
    )


def _branch_crossing(h: np.ndarray, m: np.ndarray, branch: str) -> float:
    for k in range(len(m)):
        if m[k] == 0.0:
            return float(h[k])
        if k + 1 < len(m) and m[k] * m[k + 1] < 0.0:
            return float(h[k] + (0.0 - m[k]) * (h[k + 1] - h[k]) / (m[k + 1] - m[k]))
    raise NoCrossingError(branch)


def write_curve_csv(curve: HysteresisCurve, path) -> None:
    """Dump the curve as two full-precision CSV columns (h, m)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["h", "m"])
        for h_val, m_val in zip(curve.h, curve.m):
            writer.writerow([repr(float(h_val)), repr(float(m_val))])


def read_curve_csv(path) -> HysteresisCurve:
    """Inverse of write_curve_csv; the branch split is the sample midpoint."""
    rows = Path(path).read_text().splitlines()
    data = [row.split(",") for row in rows[1:] if row]
    h = np.array([float(a) for a, _ in data])
    m = np.array([float(b) for _, b in data])
    return HysteresisCurve(h=h, m=m, branch_split=len(h) // 2)
