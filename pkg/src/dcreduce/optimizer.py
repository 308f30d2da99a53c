"""Optimizer backends: exhaustive scans and penalty-iteration sampling.

Two kinds of diagonal objective are supported behind one duck-typed
interface: compiled polynomial Hamiltonians and the table-backed reduced
objectives produced by the reduction stage. An objective exposes

  - ``n_vars``: number of binary variables,
  - ``energies_of(states)``: vectorized energies for packed state integers,
  - ``walker(bits)``: an incremental single-bit-flip evaluator with
    ``energy``, ``bits``, ``delta(j)`` and ``apply(j, delta)``.

The sampled enumerator stands in for a quantum optimizer: simulated
annealing chains harvest low configurations, already-found states get
additive energy penalties, and rounds continue until no new in-window
state appears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cutoff import Window, window as make_window
from .errors import DomainError, InternalError, ResourceError
from .hamiltonian import PolyHamiltonian, SpinConfig, bits_to_int, int_to_bits

# Hard cap for exhaustive scans (2^n energy evaluations, chunked).
SCAN_CEILING = 30

_CHUNK = 1 << 20

# Geometric cooling schedule shared by all annealing chains.
_T_START = 2.0
_T_END = 0.01
_STEPS_PER_VAR = 50


@dataclass(frozen=True)
class OptimizerBudget:
    """Knobs for the sampled enumerator and annealing ground-state search."""

    max_sweeps: int = 64
    samples_per_round: int = 16
    c1: float = 0.01
    c2: float = 0.01
    stall_rounds: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.max_sweeps < 1 or self.samples_per_round < 1 or self.stall_rounds < 1:
            raise DomainError("budget counts must be positive")
        if not (0.0 < self.c1 < 1.0 and 0.0 < self.c2 < 1.0):
            raise DomainError("penalty constants c1, c2 must lie in (0, 1)")


@dataclass(frozen=True)
class LocalSpectrum:
    """States of a community inside an energy window.

    ``states`` is sorted ascending by energy, ties broken lexicographically
    by bit string. ``complete`` is True only when the enumeration was
    exhaustive within the window.
    """

    states: tuple[tuple[SpinConfig, float], ...]
    window: Window
    complete: bool
    n_vars: int

    @property
    def d(self) -> int:
        return len(self.states)

    @property
    def e0(self) -> float:
        return self.states[0][1]

    def configs(self) -> tuple[SpinConfig, ...]:
        return tuple(s for s, _ in self.states)

    def energies(self) -> tuple[float, ...]:
        return tuple(e for _, e in self.states)


def build_spectrum(objective, found: dict[int, float], win: Window, complete: bool) -> LocalSpectrum:
    """Validate, sort, and freeze an enumerated state set.

    Every energy is re-checked against the objective and against the window
    on construction; disagreement is a bug, not bad input.
    """
    if not found:
        raise InternalError("empty spectrum: the window always contains the running minimum")
    n = objective.n_vars
    if n > 62:
        raise ResourceError("spectra pack states into 64-bit integers; 62-variable limit")
    states_arr = np.fromiter(found.keys(), dtype=np.int64, count=len(found))
    recomputed = objective.energies_of(states_arr)
    entries: list[tuple[SpinConfig, float]] = []
    for bits_int, claimed, actual in zip(found.keys(), found.values(), recomputed):
        if abs(claimed - float(actual)) > 1e-9 * max(1.0, abs(claimed)):
            raise InternalError(f"stored energy {claimed} disagrees with evaluation {actual}")
        if not win.contains(claimed):
            raise InternalError(f"state energy {claimed} lies outside the window {win}")
        entries.append((int_to_bits(bits_int, n), claimed))
    entries.sort(key=lambda item: (item[1], item[0]))
    return LocalSpectrum(tuple(entries), win, complete, n)


# -- objectives ------------------------------------------------------------


class PolyObjective:
    """Compiled view of a PolyHamiltonian for scanning and annealing."""

    def __init__(self, h: PolyHamiltonian):
        if h.n_vars > 62:
            raise ResourceError(
                f"optimizer backends pack states into 64-bit integers; "
                f"{h.n_vars} variables exceed the 62-variable limit"
            )
        self.h = h
        self.n_vars = h.n_vars
        subsets = sorted(h.terms)
        self.coeffs = np.array([h.terms[s] for s in subsets], dtype=np.float64)
        self.masks = np.array([sum(1 << j for j in s) for s in subsets], dtype=np.int64)
        incidence: list[list[int]] = [[] for _ in range(h.n_vars)]
        for t, subset in enumerate(subsets):
            for j in subset:
                incidence[j].append(t)
        self.incidence = [np.array(ids, dtype=np.intp) for ids in incidence]

    def energies_of(self, states: np.ndarray) -> np.ndarray:
        return self.h.energies(states)

    def energy_of(self, bits_int: int) -> float:
        return float(self.h.energies(np.array([bits_int], dtype=np.int64))[0])

    def walker(self, bits_int: int) -> "_PolyWalker":
        return _PolyWalker(self, bits_int)


class _PolyWalker:
    __slots__ = ("obj", "bits", "parities", "energy")

    def __init__(self, obj: PolyObjective, bits_int: int):
        self.obj = obj
        self.bits = bits_int
        counts = np.bitwise_count(np.int64(bits_int) & obj.masks) & 1
        self.parities = 1.0 - 2.0 * counts.astype(np.float64)
        self.energy = float(np.dot(obj.coeffs, self.parities))

    def delta(self, j: int) -> float:
        ids = self.obj.incidence[j]
        if ids.size == 0:
            return 0.0
        return float(-2.0 * np.dot(self.obj.coeffs[ids], self.parities[ids]))

    def apply(self, j: int, delta: float) -> None:
        ids = self.obj.incidence[j]
        self.parities[ids] = -self.parities[ids]
        self.energy += delta
        self.bits ^= 1 << j


def as_objective(h):
    """Wrap a PolyHamiltonian; pass anything already objective-shaped through."""
    if isinstance(h, PolyHamiltonian):
        return PolyObjective(h)
    return h


# -- exhaustive enumeration --------------------------------------------------


def _check_scan(objective, ceiling: int) -> None:
    if objective.n_vars > min(ceiling, SCAN_CEILING):
        raise ResourceError(
            f"exhaustive scan over {objective.n_vars} variables exceeds the "
            f"{min(ceiling, SCAN_CEILING)}-variable ceiling; lower eta or cap the community size"
        )


def _scan_chunks(objective):
    total = 1 << objective.n_vars
    for start in range(0, total, _CHUNK):
        states = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        yield states, objective.energies_of(states)


def scan_minimum(objective) -> tuple[int, float]:
    """Lowest-energy state by full enumeration (lowest index wins ties)."""
    best_bits, best_e = 0, math.inf
    for states, energies in _scan_chunks(objective):
        pos = int(np.argmin(energies))
        if energies[pos] < best_e:
            best_e = float(energies[pos])
            best_bits = int(states[pos])
    return best_bits, best_e


def enumerate_window_exhaustive(h, win: Window, ceiling: int = SCAN_CEILING) -> LocalSpectrum:
    """Every configuration whose energy lies in the given window."""
    objective = as_objective(h)
    _check_scan(objective, ceiling)
    found: dict[int, float] = {}
    for states, energies in _scan_chunks(objective):
        inside = (energies >= win.lo - win.tol) & (energies <= win.hi + win.tol)
        for bits_int, energy in zip(states[inside], energies[inside]):
            found[int(bits_int)] = float(energy)
    return build_spectrum(objective, found, win, complete=True)


def enumerate_low_exhaustive(h, delta: float, eta: float, ceiling: int = SCAN_CEILING) -> LocalSpectrum:
    """Exhaustive [E0, E0 + eta * delta] enumeration; E0 found by the scan."""
    objective = as_objective(h)
    _check_scan(objective, ceiling)
    _, e0 = scan_minimum(objective)
    return enumerate_window_exhaustive(objective, make_window(e0, delta, eta), ceiling)


# -- sampled enumeration ------------------------------------------------------


def _sa_chain(objective, start_bits: int, steps: int, rng, penalties: dict[int, float]):
    """One annealing chain; returns the visited (bits, base energy) list.

    Acceptance uses the penalized energy so already-found states repel the
    walk, but recorded energies are the bare objective values.
    """
    walker = objective.walker(start_bits)
    visited = [(walker.bits, walker.energy)]
    if steps > 1:
        cool = (_T_END / _T_START) ** (1.0 / (steps - 1))
    else:
        cool = 1.0
    temperature = _T_START
    flips = rng.integers(0, objective.n_vars, size=steps)
    draws = rng.random(size=steps)
    for step in range(steps):
        j = int(flips[step])
        delta = walker.delta(j)
        neighbor = walker.bits ^ (1 << j)
        delta_pen = delta + penalties.get(neighbor, 0.0) - penalties.get(walker.bits, 0.0)
        if delta_pen <= 0.0 or draws[step] < math.exp(-delta_pen / temperature):
            walker.apply(j, delta)
            visited.append((walker.bits, walker.energy))
        temperature *= cool
    return visited


def enumerate_window_sampled(h, win, budget: OptimizerBudget, veto=None) -> LocalSpectrum:
    """Penalty-iteration enumeration of a window of the given width.

    ``win`` may be a Window (its width is used) or a bare width. The window
    floor tracks the lowest energy measured so far; each state found inside
    the moving window receives an additive penalty
    ``p = width + c1 * |E| + c2`` so later chains are pushed toward states
    not seen yet. Rounds stop after ``stall_rounds`` rounds without a new
    in-window state. The result is best-effort (``complete=False``).

    ``veto(round_index, bits) -> bool`` optionally discards measured states,
    which exists to exercise the recover-in-a-later-round behaviour.
    """
    objective = as_objective(h)
    if isinstance(win, Window):
        width = win.width
        tol = win.tol
    else:
        width = float(win)
        tol = 1e-9 * max(1.0, width)
    if width < 0.0:
        raise DomainError("window width must be non-negative")
    rng = np.random.default_rng(budget.seed)
    n = objective.n_vars
    steps = _STEPS_PER_VAR * n
    pool: dict[int, float] = {}
    penalties: dict[int, float] = {}
    floor = math.inf
    rounds = 0
    stall = 0
    while rounds < budget.max_sweeps and stall < budget.stall_rounds:
        new_states = 0
        for _ in range(budget.samples_per_round):
            start = int(rng.integers(0, 1 << n)) if n < 63 else _random_bits(rng, n)
            measured = _sa_chain(objective, start, steps, rng, penalties)
            for _, energy in measured:
                if energy < floor:
                    floor = energy
            for bits_int, energy in measured:
                if bits_int in pool or energy > floor + width + tol:
                    continue
                if veto is not None and veto(rounds, bits_int):
                    continue
                pool[bits_int] = energy
                penalty = width + budget.c1 * abs(energy) + budget.c2
                if not energy + penalty > floor + width:
                    raise InternalError("penalty does not clear the window upper edge")
                penalties[bits_int] = penalty
                new_states += 1
        rounds += 1
        stall = stall + 1 if new_states == 0 else 0
    if not pool:
        raise InternalError("sampling harvested no in-window state")
    e0 = min(pool.values())
    final = Window(e0, e0 + width, max(tol, 1e-9 * max(1.0, abs(e0) + width)))
    kept = {b: e for b, e in pool.items() if final.contains(e)}
    return build_spectrum(objective, kept, final, complete=False)


def enumerate_low_sampled(
    h, delta: float, eta: float, budget: OptimizerBudget, veto=None
) -> LocalSpectrum:
    """Sampled [E0, E0 + eta * delta] enumeration with a floating floor."""
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"eta must lie in [0, 1], got {eta}")
    if delta < 0.0:
        raise DomainError("delta must be non-negative")
    objective = as_objective(h)
    spectrum = enumerate_window_sampled(objective, eta * delta, budget, veto)
    final = make_window(spectrum.e0, delta, eta)
    found = {bits_to_int(s): e for s, e in spectrum.states}
    return build_spectrum(objective, found, final, complete=False)


# -- ground-state search -------------------------------------------------------


def solve_ground_objective(
    objective, budget: OptimizerBudget | None = None, ceiling: int = SCAN_CEILING
) -> tuple[int, float]:
    """Lowest found state of any diagonal objective (exhaustive when it fits)."""
    if objective.n_vars <= min(ceiling, SCAN_CEILING):
        return scan_minimum(objective)
    budget = budget or OptimizerBudget()
    rng = np.random.default_rng(budget.seed)
    n = objective.n_vars
    steps = _STEPS_PER_VAR * n
    best_bits, best_e = 0, math.inf
    rounds = 0
    stall = 0
    no_penalties: dict[int, float] = {}
    while rounds < budget.max_sweeps and stall < budget.stall_rounds:
        improved = False
        for _ in range(budget.samples_per_round):
            start = int(rng.integers(0, 1 << n)) if n < 63 else _random_bits(rng, n)
            for bits_int, energy in _sa_chain(objective, start, steps, rng, no_penalties):
                if energy < best_e - 1e-15:
                    best_bits, best_e = bits_int, energy
                    improved = True
        rounds += 1
        stall = 0 if improved else stall + 1
    return best_bits, best_e


def _random_bits(rng, n: int) -> int:
    out = 0
    for j in range(n):
        if rng.integers(0, 2):
            out |= 1 << j
    return out


def solve_ground(
    h: PolyHamiltonian, budget: OptimizerBudget | None = None, ceiling: int = SCAN_CEILING
) -> tuple[SpinConfig, float]:
    """Best configuration and energy of a Hamiltonian."""
    bits_int, energy = solve_ground_objective(as_objective(h), budget, ceiling)
    return int_to_bits(bits_int, h.n_vars), energy
