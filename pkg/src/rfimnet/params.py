"""Run parameters and deterministic per-run seed derivation."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

BOUNDARY_FREE = "free"
BOUNDARY_PERIODIC = "periodic"

_UINT64_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SimulationParams:
    """Everything one hysteresis run needs, fixed before the sweep starts.

    Defaults reproduce the canonical 70x70 setup: a full field loop of 300
    samples between +8 and -5, 10% of sites with a tenfold exchange
    constant, and Gaussian random fields of standard deviation 1.5.
    """

    size: int = 70
    steps: int = 300
    hmax: float = 8.0
    hmin: float = -5.0
    dlevel: float = 0.10
    econst: float = 10.0
    sd: float = 1.5
    seed: int = 0
    run_id: int = 0
    boundary: str = BOUNDARY_FREE

    def __post_init__(self):
        if self.size < 2:
            raise ValueError(f"size must be >= 2, got {self.size}")
        if self.steps < 4 or self.steps % 2:
            raise ValueError(f"steps must be >= 4 and even, got {self.steps}")
        if not self.hmax > self.hmin:
            raise ValueError(f"hmax must exceed hmin, got {self.hmax} <= {self.hmin}")
        if not 0.0 <= self.dlevel <= 1.0:
            raise ValueError(f"dlevel must lie in [0, 1], got {self.dlevel}")
        if self.econst < 1:
            raise ValueError(f"econst must be >= 1, got {self.econst}")
        if self.sd < 0:
            raise ValueError(f"sd must be >= 0, got {self.sd}")
        if self.run_id < 0:
            raise ValueError(f"run_id must be >= 0, got {self.run_id}")
        if self.boundary not in (BOUNDARY_FREE, BOUNDARY_PERIODIC):
            raise ValueError(f"boundary must be 'free' or 'periodic', got {self.boundary!r}")

    def with_run(self, master_seed: int, run_id: int) -> "SimulationParams":
        """Copy of these params re-seeded for ensemble member `run_id`."""
        return replace(self, seed=derive_run_seed(master_seed, run_id), run_id=run_id)


def derive_run_seed(master_seed: int, run_id: int) -> int:
    """Hash a master seed and a run id into an independent 64-bit run seed.

    Runs of one ensemble must be statistically independent yet reproducible
    from (master_seed, run_id) alone, so the mixing has to be stable across
    sessions and platforms.
    """
    ss = np.random.SeedSequence([master_seed & _UINT64_MASK, int(run_id)])
    return int(ss.generate_state(1, np.uint64)[0])
