"""Zero-temperature relaxation: flip misaligned spins until the state is stable.

A spin is misaligned when its sign differs from the sign of its local field;
a site whose field is exactly zero never flips.  For ferromagnetic couplings
the final state does not depend on the order in which misaligned spins are
processed (no-passing), which is what lets the sequential worklist here, a
randomised flip order, and a synchronous full-lattice oracle all agree.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .lattice import BOUNDARY_PERIODIC, DisorderRealization, SpinLattice, neighbour_sums

# Safety cap so an implementation bug cannot spin forever; unreachable for
# positive couplings, where each site flips at most a bounded number of times.
MAX_FLIPS_PER_SITE = 10_000


class RelaxationError(RuntimeError):
    """Raised when relaxation exceeds its flip budget (an implementation bug)."""


def relax(
    lattice: SpinLattice,
    disorder: DisorderRealization,
    h_ext: float,
    order: str = "raster",
    rng: np.random.Generator | None = None,
    max_flips: int | None = None,
) -> int:
    """Relax the lattice in place at fixed h_ext; return the number of flips.

    `order` picks the worklist discipline: "raster" seeds and serves sites in
    row-major order, "random" pops them in an order drawn from `rng`.  Either
    way every flip is a single-spin event applied sequentially.
    """
    n = lattice.n
    spins2d = lattice.spins
    if not spins2d.flags.c_contiguous:
        spins2d = np.ascontiguousarray(spins2d)
    field2d = neighbour_sums(spins2d, disorder.jmap, lattice.boundary)
    field2d += disorder.grf
    field2d += h_ext

    spins = spins2d.reshape(-1)
    field = field2d.reshape(-1)
    jflat = disorder.jmap.reshape(-1)
    periodic = lattice.boundary == BOUNDARY_PERIODIC

    # sign(S) != sign(field) and field != 0  <=>  S * field < 0
    seeds = np.flatnonzero(spins * field < 0.0).tolist()
    cap = max_flips if max_flips is not None else n * n * MAX_FLIPS_PER_SITE

    if order == "raster":
        pop = _raster_pop(seeds)
    elif order == "random":
        if rng is None:
            rng = np.random.default_rng()
        pop = _random_pop(seeds, rng)
    else:
        raise ValueError(f"unknown relax order {order!r}")

    queued = np.zeros(n * n, dtype=bool)
    queued[seeds] = True
    push = pop.push
    flips = 0
    total = n * n

    while True:
        idx = pop()
        if idx < 0:
            break
        queued[idx] = False
        s = spins[idx]
        if s * field[idx] >= 0.0:
            continue  # stabilised by an earlier flip while waiting in the queue
        spins[idx] = -s
        flips += 1
        if flips > cap:
            raise RelaxationError(
                f"relaxation exceeded {cap} flips at h_ext={h_ext}; dynamics did not settle"
            )
        delta = -2.0 * s * jflat[idx]
        i, j = divmod(idx, n)
        if periodic:
            nbrs = (
                ((i - 1) % n) * n + j,
                ((i + 1) % n) * n + j,
                i * n + (j - 1) % n,
                i * n + (j + 1) % n,
            )
        else:
            nbrs = (
                idx - n if i > 0 else -1,
                idx + n if i < n - 1 else -1,
                idx - 1 if j > 0 else -1,
                idx + 1 if j < n - 1 else -1,
            )
        for t in nbrs:
            if t < 0:
                continue
            field[t] += delta
            if not queued[t] and spins[t] * field[t] < 0.0:
                queued[t] = True
                push(t)
    if spins2d is not lattice.spins:
        lattice.spins[...] = spins2d
    return flips


class _raster_pop:
    """FIFO worklist: seeds served in row-major order, new sites appended."""

    def __init__(self, seeds):
        self._dq = deque(seeds)
        self.push = self._dq.append

    def __call__(self):
        return self._dq.popleft() if self._dq else -1


class _random_pop:
    """Worklist served in uniformly random order (swap-with-last pops)."""

    def __init__(self, seeds, rng):
        self._items = list(seeds)
        self._rng = rng
        self.push = self._items.append

    def __call__(self):
        items = self._items
        if not items:
            return -1
        k = int(self._rng.integers(len(items)))
        items[k], items[-1] = items[-1], items[k]
        return items.pop()
