"""Weighted graphs, modularity, and Louvain community detection.

Louvain here is the two-phase scheme: sweeps of single-node moves that
maximize the modularity gain, followed by contraction of communities into
vertices. Contraction doubles intra-community weight into self-loops so the
contracted graph keeps the same modularity value. Node visit order is
reshuffled once per sweep by a seeded PRNG and ties between equal gains go
to the lowest community id, which makes the output reproducible per seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from .errors import DomainError, FormatError, InternalError
from .hamiltonian import PolyHamiltonian


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected weighted graph with optional self-loops and vertex sizes.

    ``edges`` maps (u, v) with u < v to a finite weight. ``self_loops``
    stores per-vertex loop weights in the doubled convention produced by
    contraction. ``vertex_sizes`` carries aggregate sizes for community
    caps; None means unit sizes.
    """

    n_vertices: int
    edges: dict[tuple[int, int], float]
    self_loops: dict[int, float] | None = None
    vertex_sizes: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n_vertices < 1:
            raise DomainError("graph needs at least one vertex")
        for (u, v), w in self.edges.items():
            if not (0 <= u < v < self.n_vertices):
                raise FormatError(f"edge ({u}, {v}) out of range or not ordered")
            if not math.isfinite(w):
                raise FormatError(f"edge ({u}, {v}) has non-finite weight")
        for v, w in (self.self_loops or {}).items():
            if not (0 <= v < self.n_vertices):
                raise FormatError(f"self-loop vertex {v} out of range")
            if not math.isfinite(w):
                raise FormatError(f"self-loop at {v} has non-finite weight")
        if self.vertex_sizes is not None and len(self.vertex_sizes) != self.n_vertices:
            raise FormatError("vertex_sizes length must match n_vertices")

    @property
    def loops(self) -> dict[int, float]:
        return self.self_loops or {}

    def degree_weights(self) -> np.ndarray:
        """k_i = sum of incident edge weights plus the stored loop weight."""
        k = np.zeros(self.n_vertices)
        for (u, v), w in self.edges.items():
            k[u] += w
            k[v] += w
        for v, w in self.loops.items():
            k[v] += w
        return k

    def total_weight(self) -> float:
        """m = half the sum over ordered vertex pairs of the adjacency."""
        return sum(self.edges.values()) + 0.5 * sum(self.loops.values())

    def adjacency(self) -> list[dict[int, float]]:
        adj: list[dict[int, float]] = [dict() for _ in range(self.n_vertices)]
        for (u, v), w in self.edges.items():
            adj[u][v] = adj[u].get(v, 0.0) + w
            adj[v][u] = adj[v].get(u, 0.0) + w
        return adj


@dataclass(frozen=True)
class Partition:
    """Disjoint cover of vertices by communities with contiguous ids."""

    community_of: tuple[int, ...]
    n_communities: int

    def __post_init__(self):
        if not self.community_of:
            raise DomainError("partition must cover at least one vertex")
        seen = set(self.community_of)
        if seen != set(range(self.n_communities)):
            raise FormatError("community ids must be contiguous 0..n_communities-1 and nonempty")

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Normalize arbitrary labels to first-appearance contiguous ids."""
        remap: dict[int, int] = {}
        out = []
        for lab in labels:
            if lab not in remap:
                remap[lab] = len(remap)
            out.append(remap[lab])
        return cls(tuple(out), len(remap))

    @cached_property
    def communities(self) -> tuple[tuple[int, ...], ...]:
        groups: list[list[int]] = [[] for _ in range(self.n_communities)]
        for vertex, comm in enumerate(self.community_of):
            groups[comm].append(vertex)
        return tuple(tuple(g) for g in groups)

    @property
    def n_vertices(self) -> int:
        return len(self.community_of)

    def to_json_list(self) -> list[int]:
        return list(self.community_of)


@dataclass(frozen=True)
class LouvainConfig:
    resolution: float = 1.0
    tol: float = 1e-9
    max_community_size: int | None = None
    # Moves below this gain are treated as floating-point churn.
    min_gain: float = 1e-12


def modularity(g: WeightedGraph, p: Partition) -> float:
    """Weighted modularity Q of a partition.

    Self-loops contribute once at their stored (doubled) value both to the
    intra-community sum and to the vertex strength k_i.
    """
    _require_nonnegative(g)
    if len(p.community_of) != g.n_vertices:
        raise DomainError("partition does not cover the graph's vertices")
    m = g.total_weight()
    if m <= 0.0:
        raise DomainError("modularity is undefined for graphs with zero total weight")
    k = g.degree_weights()
    sigma_in = np.zeros(p.n_communities)
    sigma_tot = np.zeros(p.n_communities)
    for (u, v), w in g.edges.items():
        if p.community_of[u] == p.community_of[v]:
            sigma_in[p.community_of[u]] += 2.0 * w
    for v, w in g.loops.items():
        sigma_in[p.community_of[v]] += w
    for vertex, comm in enumerate(p.community_of):
        sigma_tot[comm] += k[vertex]
    two_m = 2.0 * m
    return float(np.sum(sigma_in / two_m) - np.sum((sigma_tot / two_m) ** 2))


def abs_weights(g: WeightedGraph) -> WeightedGraph:
    """Same topology with absolute-valued weights."""
    return WeightedGraph(
        g.n_vertices,
        {e: abs(w) for e, w in g.edges.items()},
        {v: abs(w) for v, w in g.loops.items()} or None,
        g.vertex_sizes,
    )


def hypergraph_to_graph(h: PolyHamiltonian) -> WeightedGraph:
    """Clique expansion of a Hamiltonian's term structure.

    Every subset S with |S| >= 2 adds |J(S)| / C(|S|, 2) to each pair in S,
    so pure-quadratic terms contribute exactly |J|. Constant and single-
    variable terms carry no pairwise affinity and are skipped.
    """
    edges: dict[tuple[int, int], float] = {}
    for subset, coeff in h.terms.items():
        if len(subset) < 2:
            continue
        share = abs(coeff) / math.comb(len(subset), 2)
        for u, v in combinations(subset, 2):
            edges[(u, v)] = edges.get((u, v), 0.0) + share
    return WeightedGraph(h.n_vars, edges)


def louvain(g: WeightedGraph, seed: int = 0, config: LouvainConfig | None = None) -> Partition:
    """Louvain community detection; deterministic for a fixed (graph, seed)."""
    part, _ = louvain_with_history(g, seed, config)
    return part


def louvain_with_history(
    g: WeightedGraph, seed: int = 0, config: LouvainConfig | None = None
) -> tuple[Partition, list[float]]:
    """Louvain returning the partition and the modularity after each cycle."""
    cfg = config or LouvainConfig()
    _require_nonnegative(g)
    m = g.total_weight()
    if m <= 0.0:
        return Partition.from_labels(range(g.n_vertices)), []

    rng = np.random.default_rng(seed)
    adj = g.adjacency()
    loops = [g.loops.get(v, 0.0) for v in range(g.n_vertices)]
    sizes = list(g.vertex_sizes) if g.vertex_sizes is not None else [1] * g.n_vertices
    members: list[list[int]] = [[v] for v in range(g.n_vertices)]

    history: list[float] = []
    prev_q: float | None = None
    while True:
        n = len(adj)
        k = [sum(adj[v].values()) + loops[v] for v in range(n)]
        labels = list(range(n))
        tot = k[:]
        comm_size = sizes[:]
        moved_any = _phase_one(adj, k, m, labels, tot, comm_size, sizes, cfg, rng)
        q = _aggregate_modularity(adj, loops, k, labels, m, cfg.resolution)
        if prev_q is not None and q < prev_q - 1e-9:
            raise InternalError(f"modularity decreased across a cycle: {prev_q} -> {q}")
        history.append(q)
        if not moved_any or (prev_q is not None and q - prev_q <= cfg.tol):
            break
        prev_q = q
        adj, loops, sizes, members = _contract(adj, loops, sizes, members, labels)
        if len(adj) == 1:
            labels = [0]
            break

    final_labels = [0] * g.n_vertices
    for node, label in enumerate(labels):
        for original in members[node]:
            final_labels[original] = label
    return Partition.from_labels(final_labels), history


def _require_nonnegative(g: WeightedGraph) -> None:
    if any(w < 0.0 for w in g.edges.values()) or any(w < 0.0 for w in g.loops.values()):
        raise DomainError("weights must be non-negative; apply abs_weights first")


def _phase_one(adj, k, m, labels, tot, comm_size, sizes, cfg, rng) -> bool:
    """Sequential single-node moves until no move improves modularity."""
    n = len(adj)
    gamma = cfg.resolution
    cap = cfg.max_community_size
    moved_any = False
    while True:
        moves = 0
        for v in rng.permutation(n):
            v = int(v)
            home = labels[v]
            links: dict[int, float] = {}
            for u, w in adj[v].items():
                c = labels[u]
                links[c] = links.get(c, 0.0) + w
            k_home = links.get(home, 0.0)
            tot_home = tot[home] - k[v]
            best_gain = cfg.min_gain
            best_comm = home
            for c in sorted(links):
                if c == home:
                    continue
                if cap is not None and comm_size[c] + sizes[v] > cap:
                    continue
                gain = (links[c] - k_home) / m - gamma * k[v] * (tot[c] - tot_home) / (2.0 * m * m)
                if gain > best_gain:
                    best_gain = gain
                    best_comm = c
            if best_comm != home:
                labels[v] = best_comm
                tot[home] -= k[v]
                tot[best_comm] += k[v]
                comm_size[home] -= sizes[v]
                comm_size[best_comm] += sizes[v]
                moves += 1
        if moves == 0:
            return moved_any
        moved_any = True


def _aggregate_modularity(adj, loops, k, labels, m, gamma) -> float:
    groups: dict[int, list[int]] = {}
    for v, lab in enumerate(labels):
        groups.setdefault(lab, []).append(v)
    two_m = 2.0 * m
    q = 0.0
    for nodes in groups.values():
        node_set = set(nodes)
        sigma_in = sum(loops[v] for v in nodes)
        sigma_tot = sum(k[v] for v in nodes)
        for v in nodes:
            for u, w in adj[v].items():
                if u in node_set:
                    sigma_in += w
        q += sigma_in / two_m - gamma * (sigma_tot / two_m) ** 2
    return q


def _contract(adj, loops, sizes, members, labels):
    """Contract communities to vertices; intra weight is doubled into loops."""
    ids = sorted(set(labels))
    remap = {lab: i for i, lab in enumerate(ids)}
    n_new = len(ids)
    new_adj: list[dict[int, float]] = [dict() for _ in range(n_new)]
    new_loops = [0.0] * n_new
    new_sizes = [0] * n_new
    new_members: list[list[int]] = [[] for _ in range(n_new)]
    for v, lab in enumerate(labels):
        c = remap[lab]
        new_loops[c] += loops[v]
        new_sizes[c] += sizes[v]
        new_members[c].extend(members[v])
    for v in range(len(adj)):
        cv = remap[labels[v]]
        for u, w in adj[v].items():
            if u <= v:
                continue
            cu = remap[labels[u]]
            if cu == cv:
                new_loops[cv] += 2.0 * w
            else:
                new_adj[cv][cu] = new_adj[cv].get(cu, 0.0) + w
                new_adj[cu][cv] = new_adj[cu].get(cv, 0.0) + w
    for comm in new_members:
        comm.sort()
    return new_adj, new_loops, new_sizes, new_members
