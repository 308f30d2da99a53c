"""Exhaustive and sampled enumerator tests."""

import numpy as np
import pytest

from dcreduce.cutoff import Window, window
from dcreduce.errors import InternalError, ResourceError
from dcreduce.hamiltonian import PolyHamiltonian, bits_to_int
from dcreduce.optimizer import (
    LocalSpectrum,
    OptimizerBudget,
    build_spectrum,
    as_objective,
    enumerate_low_exhaustive,
    enumerate_low_sampled,
    enumerate_window_exhaustive,
    enumerate_window_sampled,
    solve_ground,
)
from helpers import random_quadratic, spin_energies


class TestExhaustive:
    def test_degenerate_pair(self):
        h = PolyHamiltonian(2, {(0, 1): 1.0})
        spectrum = enumerate_window_exhaustive(h, Window(-1.0, -1.0, 1e-9))
        assert spectrum.configs() == ((0, 1), (1, 0))
        assert spectrum.energies() == (-1.0, -1.0)
        assert spectrum.complete

    def test_full_window(self):
        h = PolyHamiltonian(2, {(0, 1): 1.0})
        spectrum = enumerate_window_exhaustive(h, Window(-1.0, 1.0, 1e-9))
        assert spectrum.d == 4

    def test_matches_full_spectrum_filter(self):
        for seed in range(10):
            h = random_quadratic(10 + (seed % 5), 18, seed)
            energies = spin_energies(h)
            e0 = float(energies.min())
            delta = 0.4 * float(energies.max() - e0)
            spectrum = enumerate_low_exhaustive(h, delta, 1.0)
            w = spectrum.window
            expected = {
                int(s) for s in np.nonzero(
                    (energies >= w.lo - w.tol) & (energies <= w.hi + w.tol)
                )[0]
            }
            assert {bits_to_int(c) for c in spectrum.configs()} == expected
            assert spectrum.complete

    def test_sorted_by_energy_then_bits(self):
        h = random_quadratic(8, 12, 3)
        spectrum = enumerate_low_exhaustive(h, 3.0, 1.0)
        entries = list(spectrum.states)
        assert entries == sorted(entries, key=lambda se: (se[1], se[0]))

    def test_ceiling(self):
        h = PolyHamiltonian(8, {(0, 1): 1.0})
        with pytest.raises(ResourceError):
            enumerate_window_exhaustive(h, Window(-1.0, 1.0, 1e-9), ceiling=6)


class TestSpectrumValidation:
    def test_tampered_energy_rejected(self):
        h = PolyHamiltonian(2, {(0, 1): 1.0})
        with pytest.raises(InternalError):
            build_spectrum(as_objective(h), {1: -0.5}, Window(-1.0, 1.0, 1e-9), True)

    def test_out_of_window_rejected(self):
        h = PolyHamiltonian(2, {(0, 1): 1.0})
        with pytest.raises(InternalError):
            build_spectrum(as_objective(h), {0: 1.0}, Window(-1.0, -1.0, 1e-9), True)

    def test_empty_rejected(self):
        h = PolyHamiltonian(2, {(0, 1): 1.0})
        with pytest.raises(InternalError):
            build_spectrum(as_objective(h), {}, Window(-1.0, 1.0, 1e-9), True)


class TestSampled:
    def test_agrees_with_exhaustive(self):
        hits = 0
        for seed in range(20):
            h = random_quadratic(10, 20, seed)
            exhaustive = enumerate_low_exhaustive(h, 2.0, 1.0)
            sampled = enumerate_low_sampled(h, 2.0, 1.0, OptimizerBudget(seed=seed))
            assert not sampled.complete
            hits += set(sampled.configs()) == set(exhaustive.configs())
        assert hits >= 18

    def test_degenerate_window_single_ground_state(self):
        h = PolyHamiltonian(3, {(0, 1): 1.0, (1, 2): 1.0, (0,): -0.6})
        energies = spin_energies(h)
        unique_min = np.sum(np.isclose(energies, energies.min())) == 1
        assert unique_min
        spectrum = enumerate_low_sampled(h, 1.0, 0.0, OptimizerBudget(seed=4))
        assert spectrum.d == 1
        assert spectrum.e0 == pytest.approx(float(energies.min()), abs=1e-12)

    def test_no_duplicates_and_in_window(self):
        for seed in range(10):
            h = random_quadratic(11, 20, seed + 50)
            spectrum = enumerate_low_sampled(h, 1.5, 1.0, OptimizerBudget(seed=seed))
            configs = spectrum.configs()
            assert len(set(configs)) == len(configs)
            for _, energy in spectrum.states:
                assert spectrum.window.contains(energy)

    def test_penalized_energy_clears_window(self):
        # p = width + c1 |E| + c2 implies E + p > E0 + width for every found state
        budget = OptimizerBudget(seed=9)
        h = random_quadratic(10, 18, 77)
        spectrum = enumerate_low_sampled(h, 2.0, 1.0, budget)
        width = spectrum.window.width
        for _, energy in spectrum.states:
            penalty = width + budget.c1 * abs(energy) + budget.c2
            assert energy + penalty > spectrum.e0 + width

    def test_recovers_states_vetoed_in_round_one(self):
        h = random_quadratic(10, 18, 21)
        exhaustive = enumerate_low_exhaustive(h, 2.0, 1.0)
        ground_bits = bits_to_int(exhaustive.configs()[0])

        def veto(round_index, bits):
            return round_index == 0 and bits == ground_bits

        sampled = enumerate_low_sampled(h, 2.0, 1.0, OptimizerBudget(seed=5), veto=veto)
        assert exhaustive.configs()[0] in sampled.configs()

    def test_explicit_window_signature(self):
        h = PolyHamiltonian(2, {(0, 1): 1.0})
        spectrum = enumerate_window_sampled(h, window(-1.0, 2.0, 1.0), OptimizerBudget(seed=0))
        assert set(spectrum.configs()) == {(0, 0), (0, 1), (1, 0), (1, 1)}

    def test_determinism(self):
        h = random_quadratic(10, 18, 8)
        a = enumerate_low_sampled(h, 1.0, 1.0, OptimizerBudget(seed=3))
        b = enumerate_low_sampled(h, 1.0, 1.0, OptimizerBudget(seed=3))
        assert a.states == b.states


class TestSolveGround:
    def test_chain_of_two_couplings(self):
        h = PolyHamiltonian(3, {(0, 1): 1.0, (1, 2): 1.0})
        config, energy = solve_ground(h)
        assert energy == pytest.approx(-2.0)
        assert h.evaluate(config) == pytest.approx(-2.0)

    def test_constant_only(self):
        h = PolyHamiltonian(2, {(): 3.5})
        _, energy = solve_ground(h)
        assert energy == pytest.approx(3.5)

    def test_frustrated_triangle(self):
        h = PolyHamiltonian(3, {(0, 1): 1.0, (0, 2): 1.0, (1, 2): 1.0})
        config, energy = solve_ground(h)
        assert energy == pytest.approx(-1.0)
        degenerate = np.isclose(spin_energies(h), -1.0).sum()
        assert degenerate == 6

    def test_annealing_path_matches_scan(self):
        h = random_quadratic(12, 24, 13)
        _, exact = solve_ground(h)
        _, sampled = solve_ground(h, OptimizerBudget(seed=2), ceiling=0)
        assert sampled == pytest.approx(exact, abs=1e-9)

    def test_budget_validation(self):
        with pytest.raises(Exception):
            OptimizerBudget(max_sweeps=0)
        with pytest.raises(Exception):
            OptimizerBudget(c1=1.5)
