"""Lattice state, disorder generation and the local-field rule."""

import numpy as np
import pytest

from rfimnet import (
    DisorderRealization,
    SimulationParams,
    SpinLattice,
    generate_disorder,
    local_field,
    magnetization,
)
from rfimnet.lattice import neighbour_sums

from oracles import oracle_local_field


def uniform_disorder(n, j=1.0):
    return DisorderRealization(
        grf=np.zeros((n, n)), jmap=np.full((n, n), j), pinned_count=0
    )


class TestSpinLattice:
    def test_saturated_is_all_up(self):
        lat = SpinLattice.saturated(5)
        assert set(np.unique(lat.spins)) == {1}
        assert magnetization(lat) == 1.0

    def test_copy_is_independent(self):
        lat = SpinLattice.saturated(4)
        dup = lat.copy()
        dup.spins[0, 0] = -1
        assert lat.spins[0, 0] == 1


class TestGenerateDisorder:
    def test_degenerate_distribution(self):
        d = generate_disorder(SimulationParams(size=8, sd=0.0, dlevel=0.0, seed=1))
        assert not d.grf.any()
        assert (d.jmap == 1.0).all()
        assert d.pinned_count == 0

    def test_pinned_count_exact(self):
        d = generate_disorder(SimulationParams(size=70, dlevel=0.10, seed=2))
        assert d.pinned_count == 490
        assert (d.jmap == 10.0).sum() == 490
        assert set(np.unique(d.jmap)) == {1.0, 10.0}

    def test_pinned_count_rounds(self):
        d = generate_disorder(SimulationParams(size=7, dlevel=0.10, seed=2))
        assert d.pinned_count == round(0.10 * 49) == 5

    def test_quenched_and_seeded(self):
        p = SimulationParams(size=12, seed=99)
        d1, d2 = generate_disorder(p), generate_disorder(p)
        assert (d1.grf == d2.grf).all() and (d1.jmap == d2.jmap).all()
        d3 = generate_disorder(SimulationParams(size=12, seed=100))
        assert (d1.grf != d3.grf).any()

    def test_field_moments(self):
        d = generate_disorder(SimulationParams(size=200, sd=1.5, dlevel=0.0, seed=7))
        assert abs(d.grf.mean()) < 0.05
        assert abs(d.grf.std() - 1.5) < 0.05

    def test_per_site_pinning_frequency(self):
        # 10^4 fixed seeds on a 10x10 lattice: every site pinned with
        # empirical frequency 0.10 +- 0.01
        counts = np.zeros((10, 10))
        for seed in range(10_000):
            d = generate_disorder(SimulationParams(size=10, dlevel=0.10, seed=seed))
            counts += d.jmap == 10.0
        freq = counts / 10_000
        assert freq.mean() == pytest.approx(0.10, abs=1e-12)
        assert np.abs(freq - 0.10).max() <= 0.01


class TestMagnetization:
    def test_half_and_half(self):
        lat = SpinLattice.saturated(4)
        lat.spins[:2, :] = -1
        assert magnetization(lat) == 0.0

    def test_direct_sum(self):
        lat = SpinLattice.saturated(70)
        lat.spins.flat[:2500] = -1
        assert magnetization(lat) == pytest.approx(-100 / 4900, abs=1e-15)


class TestLocalField:
    def test_interior_all_up(self):
        lat = SpinLattice.saturated(5)
        assert local_field(lat, uniform_disorder(5), 0.0, 2, 2) == 4.0

    def test_corner_with_external(self):
        lat = SpinLattice.saturated(5)
        assert local_field(lat, uniform_disorder(5), -1.0, 0, 0) == 1.0

    def test_mixed_neighbours_and_couplings(self):
        # up neighbour carries J=10; with grf 0.5 and h=-1 the field is
        # 10 + 1 - 1 - 1 + 0.5 - 1 = 8.5
        lat = SpinLattice.saturated(3)
        lat.spins[1, 0] = -1
        lat.spins[1, 2] = -1
        d = uniform_disorder(3)
        d.jmap[0, 1] = 10.0
        d.grf[1, 1] = 0.5
        assert local_field(lat, d, -1.0, 1, 1) == 8.5

    def test_periodic_corner_wraps(self):
        lat = SpinLattice.saturated(3, boundary="periodic")
        assert local_field(lat, uniform_disorder(3), 0.0, 0, 0) == 4.0

    def test_field_linearity(self):
        rng = np.random.default_rng(3)
        lat = SpinLattice.saturated(6)
        lat.spins[:] = rng.choice([-1, 1], size=(6, 6))
        d = DisorderRealization(
            grf=rng.normal(0, 1.5, (6, 6)), jmap=np.ones((6, 6)), pinned_count=0
        )
        for _ in range(20):
            h1, h2 = rng.uniform(-5, 5, 2)
            i, j = rng.integers(0, 6, 2)
            delta = local_field(lat, d, h1, i, j) - local_field(lat, d, h2, i, j)
            assert delta == pytest.approx(h1 - h2, abs=1e-12)

    @pytest.mark.parametrize("boundary", ["free", "periodic"])
    def test_matches_scalar_oracle_everywhere(self, boundary):
        rng = np.random.default_rng(11)
        n = 7
        spins = rng.choice([-1, 1], size=(n, n)).astype(np.int8)
        lat = SpinLattice(n=n, spins=spins, boundary=boundary)
        d = DisorderRealization(
            grf=rng.normal(0, 2, (n, n)),
            jmap=rng.choice([1.0, 10.0], size=(n, n)),
            pinned_count=0,
        )
        sums = neighbour_sums(lat.spins, d.jmap, boundary)
        for i in range(n):
            for j in range(n):
                expected = oracle_local_field(spins, d.jmap, d.grf, 0.25, i, j, boundary)
                assert local_field(lat, d, 0.25, i, j) == pytest.approx(expected, abs=1e-12)
                assert sums[i, j] + d.grf[i, j] + 0.25 == pytest.approx(expected, abs=1e-12)
