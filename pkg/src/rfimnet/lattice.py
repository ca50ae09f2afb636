"""Spin lattice state, quenched disorder, and the local-field rule.

A site (i, j) on the n x n grid carries a spin of +1 or -1.  The field it
feels is the sum of its nearest neighbours' spins weighted by *their*
exchange constants, plus the site's frozen random field and the external
field:

    field(i, j) = sum_nbr J(nbr) * S(nbr) + grf(i, j) + h_ext

With free boundaries, neighbours outside the grid contribute nothing; with
periodic boundaries they wrap around.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import BOUNDARY_FREE, BOUNDARY_PERIODIC, SimulationParams


@dataclass
class SpinLattice:
    """An n x n grid of +-1 spins; `boundary` selects free or periodic edges."""

    n: int
    spins: np.ndarray
    boundary: str = BOUNDARY_FREE

    @classmethod
    def saturated(cls, n: int, boundary: str = BOUNDARY_FREE) -> "SpinLattice":
        """Lattice with every spin up (magnetization exactly 1)."""
        return cls(n=n, spins=np.ones((n, n), dtype=np.int8), boundary=boundary)

    def copy(self) -> "SpinLattice":
        return SpinLattice(n=self.n, spins=self.spins.copy(), boundary=self.boundary)


@dataclass
class DisorderRealization:
    """Quenched per-run randomness: the Gaussian field and the exchange map.

    Both arrays are drawn once per run and never touched during the sweep.
    `jmap` holds 1 everywhere except the pinned sites, which carry the
    enhanced constant.
    """

    grf: np.ndarray
    jmap: np.ndarray
    pinned_count: int


def generate_disorder(params: SimulationParams) -> DisorderRealization:
    """Draw the random field and pick the pinned sites, both from params.seed.

    Exactly round(dlevel * n^2) distinct sites, chosen uniformly without
    replacement, get jmap = econst.  The draw order (fields first, then
    pinned sites) is part of the deterministic seed -> disorder mapping.
    """
    n = params.size
    rng = np.random.default_rng(params.seed)
    grf = rng.normal(0.0, params.sd, size=(n, n))
    jmap = np.ones((n, n), dtype=np.float64)
    pinned_count = int(round(params.dlevel * n * n))
    if pinned_count:
        pinned = rng.choice(n * n, size=pinned_count, replace=False)
        jmap.flat[pinned] = params.econst
    return DisorderRealization(grf=grf, jmap=jmap, pinned_count=pinned_count)


def magnetization(lattice: SpinLattice) -> float:
    """Mean spin, (sum of spins) / n^2, always in [-1, 1]."""
    n = lattice.n
    return int(lattice.spins.sum(dtype=np.int64)) / (n * n)


def local_field(
    lattice: SpinLattice,
    disorder: DisorderRealization,
    h_ext: float,
    i: int,
    j: int,
) -> float:
    """Total field acting on site (i, j) at external field h_ext.

    Callers must pass in-range indices; this is the scalar reference form of
    the rule (the relaxation engine uses a vectorised equivalent).
    """
    n = lattice.n
    spins = lattice.spins
    jmap = disorder.jmap
    total = 0.0
    if lattice.boundary == BOUNDARY_PERIODIC:
        for ni, nj in (((i - 1) % n, j), ((i + 1) % n, j), (i, (j - 1) % n), (i, (j + 1) % n)):
            total += jmap[ni, nj] * spins[ni, nj]
    else:
        for ni, nj in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)):
            if 0 <= ni < n and 0 <= nj < n:
                total += jmap[ni, nj] * spins[ni, nj]
    return float(total + disorder.grf[i, j] + h_ext)


def neighbour_sums(spins: np.ndarray, jmap: np.ndarray, boundary: str) -> np.ndarray:
    """Vectorised sum of J(nbr) * S(nbr) over the four neighbours of every site."""
    w = jmap * spins
    out = np.zeros_like(w)
    if boundary == BOUNDARY_PERIODIC:
        out += np.roll(w, 1, axis=0)
        out += np.roll(w, -1, axis=0)
        out += np.roll(w, 1, axis=1)
        out += np.roll(w, -1, axis=1)
    else:
        out[1:, :] += w[:-1, :]
        out[:-1, :] += w[1:, :]
        out[:, 1:] += w[:, :-1]
        out[:, :-1] += w[:, 1:]
    return out
