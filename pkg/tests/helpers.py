"""Independent oracles and instance generators shared by the test modules.

Everything here is deliberately naive: loop-based parity products, spin
matrices, and a double-sum modularity. These never share code paths with
the package internals they check.
"""

import numpy as np

from dcreduce.clustering import WeightedGraph
from dcreduce.hamiltonian import PolyHamiltonian


def naive_evaluate(h: PolyHamiltonian, bits) -> float:
    """Loop-based parity oracle."""
    total = 0.0
    for subset, coeff in h.terms.items():
        product = 1.0
        for j in subset:
            product *= 1.0 - 2.0 * bits[j]
        total += coeff * product
    return total


def spin_energies(h: PolyHamiltonian) -> np.ndarray:
    """Full spectrum via an explicit spin matrix (independent of popcount)."""
    n = h.n_vars
    states = np.arange(1 << n)
    spins = 1 - 2 * ((states[:, None] >> np.arange(n)) & 1)
    energies = np.zeros(1 << n)
    for subset, coeff in h.terms.items():
        if subset:
            energies += coeff * np.prod(spins[:, list(subset)], axis=1)
        else:
            energies += coeff
    return energies


def brute_min(h: PolyHamiltonian) -> float:
    return float(spin_energies(h).min())


def brute_argmin(h: PolyHamiltonian):
    energies = spin_energies(h)
    state = int(np.argmin(energies))
    return tuple((state >> j) & 1 for j in range(h.n_vars)), float(energies[state])


def random_quadratic(n: int, n_edges: int, seed: int) -> PolyHamiltonian:
    rng = np.random.default_rng(seed)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    n_edges = min(n_edges, len(pairs))
    chosen = rng.choice(len(pairs), size=n_edges, replace=False)
    terms = {}
    for idx in chosen:
        w = float(rng.uniform(-1.0, 1.0))
        terms[pairs[int(idx)]] = w if w != 0.0 else 0.31
    return PolyHamiltonian(n, terms)


def random_pubo(n: int, n_terms: int, seed: int, max_arity: int = 4) -> PolyHamiltonian:
    rng = np.random.default_rng(seed)
    terms = {}
    guard = 0
    while len(terms) < n_terms and guard < 50 * n_terms:
        guard += 1
        arity = int(rng.integers(1, max_arity + 1))
        subset = tuple(sorted(rng.choice(n, size=arity, replace=False).tolist()))
        if subset in terms:
            continue
        w = float(rng.uniform(-1.0, 1.0))
        terms[subset] = w if w != 0.0 else 0.27
    return PolyHamiltonian(n, terms)


def random_graph(n: int, n_edges: int, seed: int, non_negative: bool = True) -> WeightedGraph:
    rng = np.random.default_rng(seed)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    n_edges = min(n_edges, len(pairs))
    chosen = rng.choice(len(pairs), size=n_edges, replace=False)
    edges = {}
    for idx in chosen:
        w = float(rng.uniform(0.05, 1.0)) if non_negative else float(rng.uniform(-1.0, 1.0))
        edges[pairs[int(idx)]] = w
    return WeightedGraph(n, edges)


def naive_modularity(g: WeightedGraph, labels) -> float:
    """Literal double sum over ordered vertex pairs."""
    n = g.n_vertices
    adjacency = np.zeros((n, n))
    for (u, v), w in g.edges.items():
        adjacency[u, v] += w
        adjacency[v, u] += w
    for v, w in g.loops.items():
        adjacency[v, v] += w
    m = adjacency.sum() / 2.0
    k = adjacency.sum(axis=1)
    q = 0.0
    for i in range(n):
        for j in range(n):
            if labels[i] == labels[j]:
                q += adjacency[i, j] - k[i] * k[j] / (2.0 * m)
    return q / (2.0 * m)


def all_partitions(n: int):
    """All set partitions of range(n) as label lists (restricted growth)."""
    labels = [0] * n

    def grow(i, max_label):
        if i == n:
            yield list(labels)
            return
        for lab in range(max_label + 2):
            labels[i] = lab
            yield from grow(i + 1, max(max_label, lab))

    yield from grow(1, 0)
