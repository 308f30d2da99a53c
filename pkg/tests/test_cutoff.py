"""Decomposition and certified-window tests.

The certification suites check the load-bearing guarantee: the global
ground state's restriction to any community always lands inside that
community's window, for both the two-body and the general cut-off.
"""

import numpy as np
import pytest

from dcreduce.clustering import Partition, hypergraph_to_graph, louvain
from dcreduce.cutoff import decompose, delta_pubo, delta_two_body, window
from dcreduce.errors import DimensionError, DomainError
from dcreduce.hamiltonian import PolyHamiltonian
from helpers import brute_argmin, random_pubo, random_quadratic, spin_energies


class TestDecompose:
    def test_single_community(self):
        h = PolyHamiltonian(3, {(): 1.0, (0, 1): 0.5, (1, 2): -0.25})
        d = decompose(h, Partition.from_labels([0, 0, 0]))
        assert d.local_terms[0] == {(0, 1): 0.5, (1, 2): -0.25}
        assert d.straddling_terms == {}
        assert d.constant == 1.0

    def test_path_graph_bridge(self):
        h = PolyHamiltonian(3, {(0, 1): 1.0, (1, 2): 1.0})
        d = decompose(h, Partition.from_labels([0, 0, 1]))
        assert d.local_terms[0] == {(0, 1): 1.0}
        assert d.local_terms[1] == {}
        assert d.straddle_by_comm[0] == ((1, 2),)
        assert d.straddle_by_comm[1] == ((1, 2),)

    def test_hyperedge_touches_three_communities(self):
        h = PolyHamiltonian(3, {(0, 1, 2): 0.7})
        d = decompose(h, Partition.from_labels([0, 1, 2]))
        for i in range(3):
            assert d.straddle_by_comm[i] == ((0, 1, 2),)
        assert d.footprint((0, 1, 2)) == (0, 1, 2)

    def test_partition_mismatch(self):
        h = PolyHamiltonian(3, {(0, 1): 1.0})
        with pytest.raises(DimensionError):
            decompose(h, Partition.from_labels([0, 0]))

    def test_term_accounting(self):
        for seed in range(10):
            h = random_pubo(10, 16, seed)
            p = louvain(hypergraph_to_graph(h), seed=seed)
            d = decompose(h, p)
            n_constant = 1 if () in h.terms else 0
            counted = sum(len(t) for t in d.local_terms) + len(d.straddling_terms)
            assert counted + n_constant == len(h.terms)

    def test_energy_conservation(self):
        for seed in range(10):
            h = random_pubo(9, 14, seed)
            rng = np.random.default_rng(seed)
            p = Partition.from_labels(rng.integers(0, 3, size=9).tolist())
            d = decompose(h, p)
            x = tuple(int(b) for b in rng.integers(0, 2, size=9))
            total = d.constant
            for terms in list(d.local_terms) + [d.straddling_terms]:
                for subset, coeff in terms.items():
                    sign = 1
                    for j in subset:
                        if x[j]:
                            sign = -sign
                    total += coeff * sign
            assert total == pytest.approx(h.evaluate(x), abs=1e-9)

    def test_local_poly_reindexing(self):
        h = PolyHamiltonian(4, {(1, 3): 0.5, (0, 2): -1.0})
        d = decompose(h, Partition.from_labels([0, 1, 0, 1]))
        assert d.local_poly(0).terms == {(0, 1): -1.0}
        assert d.local_poly(1).terms == {(0, 1): 0.5}


class TestDeltaTwoBody:
    def test_sum_of_absolutes(self):
        h = PolyHamiltonian(4, {(0, 2): 0.5, (0, 3): -0.25, (1, 2): 0.25})
        d = decompose(h, Partition.from_labels([0, 0, 1, 1]))
        assert delta_two_body(d, 0) == pytest.approx(1.0, abs=1e-12)

    def test_no_interactions(self):
        h = PolyHamiltonian(4, {(0, 1): 1.0, (2, 3): 1.0})
        d = decompose(h, Partition.from_labels([0, 0, 1, 1]))
        assert delta_two_body(d, 0) == 0.0

    def test_single_edge(self):
        h = PolyHamiltonian(2, {(0, 1): -2.0})
        d = decompose(h, Partition.from_labels([0, 1]))
        assert delta_two_body(d, 0) == pytest.approx(2.0)

    def test_rejects_non_quadratic(self):
        h = PolyHamiltonian(3, {(0,): 1.0, (0, 1, 2): 1.0})
        d = decompose(h, Partition.from_labels([0, 0, 1]))
        with pytest.raises(DomainError):
            delta_two_body(d, 0)


class TestDeltaPubo:
    def test_bound_is_twice_two_body(self):
        for seed in range(8):
            h = random_quadratic(8, 12, seed)
            p = Partition.from_labels([0, 0, 0, 0, 1, 1, 1, 1])
            d = decompose(h, p)
            for i in range(2):
                assert delta_pubo(d, i, exact_threshold=0) == pytest.approx(
                    2.0 * delta_two_body(d, i), abs=1e-12
                )

    def test_single_hyperedge_exact_range(self):
        h = PolyHamiltonian(4, {(0, 1, 2): 0.5, (0, 1): 0.1})
        d = decompose(h, Partition.from_labels([0, 0, 1, 1]))
        # only (0,1,2) straddles; its exact range is 1.0
        assert delta_pubo(d, 0) == pytest.approx(1.0, abs=1e-12)

    def test_disjoint_hyperedges_exact_range(self):
        h = PolyHamiltonian(6, {(0, 3, 4): 0.3, (1, 5): -0.4, (0, 1): 0.2})
        d = decompose(h, Partition.from_labels([0, 0, 0, 1, 1, 1]))
        assert delta_pubo(d, 0) == pytest.approx(1.4, abs=1e-12)

    def test_exact_never_exceeds_bound(self):
        for seed in range(12):
            h = random_pubo(10, 15, seed)
            rng = np.random.default_rng(seed)
            p = Partition.from_labels(rng.integers(0, 3, size=10).tolist())
            d = decompose(h, p)
            for i in range(p.n_communities):
                exact = delta_pubo(d, i, exact_threshold=20)
                bound = delta_pubo(d, i, exact_threshold=0)
                assert exact <= bound + 1e-12

    def test_no_interactions(self):
        h = PolyHamiltonian(2, {(0, 1): 1.0})
        d = decompose(h, Partition.from_labels([0, 0]))
        assert delta_pubo(d, 0) == 0.0


class TestWindow:
    def test_full_window(self):
        w = window(-3.0, 2.0, 1.0)
        assert (w.lo, w.hi) == (-3.0, -1.0)

    def test_degenerate_window(self):
        w = window(-3.0, 2.0, 0.0)
        assert w.lo == w.hi == -3.0
        assert w.contains(-3.0)
        assert not w.contains(-2.99)

    def test_half_window(self):
        w = window(-3.0, 2.0, 0.5)
        assert (w.lo, w.hi) == (-3.0, -2.0)

    def test_eta_out_of_range(self):
        with pytest.raises(DomainError):
            window(0.0, 1.0, 1.5)
        with pytest.raises(DomainError):
            window(0.0, 1.0, -0.1)

    def test_negative_delta(self):
        with pytest.raises(DomainError):
            window(0.0, -1.0, 0.5)

    def test_tolerance_scales(self):
        w = window(-100.0, 50.0, 1.0)
        assert w.contains(-50.0 + 1e-8)  # tol = 1e-9 * 150


def _local_energy(h, community_vars, local_terms, config):
    total = 0.0
    for subset, coeff in local_terms.items():
        sign = 1
        for j in subset:
            if config[j]:
                sign = -sign
        total += coeff * sign
    return total


class TestCertification:
    """Global ground state's local energies always fall inside the windows."""

    @pytest.mark.parametrize("seed", range(12))
    def test_two_body_windows_contain_ground_state(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(8, 17))
        h = random_quadratic(n, 2 * n, seed)
        ground, _ = brute_argmin(h)
        p = Partition.from_labels(rng.integers(0, max(2, n // 4), size=n).tolist())
        d = decompose(h, p)
        for i in range(p.n_communities):
            delta = delta_two_body(d, i)
            local = d.local_poly(i)
            spectrum_min = float(spin_energies(local).min())
            restricted = tuple(ground[v] for v in d.community_vars[i])
            local_energy = local.evaluate(restricted)
            w = window(spectrum_min, delta, 1.0)
            assert w.contains(local_energy)

    @pytest.mark.parametrize("seed", range(10))
    def test_pubo_windows_contain_ground_state(self, seed):
        rng = np.random.default_rng(seed + 500)
        n = int(rng.integers(8, 15))
        h = random_pubo(n, 2 * n, seed)
        ground, _ = brute_argmin(h)
        p = Partition.from_labels(rng.integers(0, max(2, n // 4), size=n).tolist())
        d = decompose(h, p)
        for i in range(p.n_communities):
            for threshold in (0, 20):
                delta = delta_pubo(d, i, exact_threshold=threshold)
                local = d.local_poly(i)
                spectrum_min = float(spin_energies(local).min())
                restricted = tuple(ground[v] for v in d.community_vars[i])
                w = window(spectrum_min, delta, 1.0)
                assert w.contains(local.evaluate(restricted))
