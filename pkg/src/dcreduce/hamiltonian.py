"""Diagonal cost Hamiltonians over binary variables and encoding conversions.

The package-wide sign convention ties bit values to Z eigenvalues as
``bit b -> spin 1 - 2*b``, i.e. bit 0 is spin +1 and bit 1 is spin -1.
A Hamiltonian is a map from sorted variable-index subsets to real
coefficients; the empty subset holds the constant offset.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionError, DomainError, FormatError, ResourceError

Subset = tuple[int, ...]
SpinConfig = tuple[int, ...]

# Fourier coefficients at or below this magnitude are dropped.
COEFF_PRUNE = 1e-12

# Truth-table conversions allocate 2^n floats; desk-scale cap.
MAX_TABLE_VARS = 24

# Bit-mask vectorization uses int64 state integers.
_MASK_VARS = 62


def spin(bit: int) -> int:
    """Z eigenvalue of a bit value."""
    return 1 - 2 * bit


def flip_all(x: SpinConfig) -> SpinConfig:
    """Flip every bit of a configuration."""
    return tuple(1 - b for b in x)


def bits_to_int(x: SpinConfig) -> int:
    """Pack a bit sequence into an integer (variable j is bit j)."""
    out = 0
    for j, b in enumerate(x):
        if b:
            out |= 1 << j
    return out


def int_to_bits(state: int, n_vars: int) -> SpinConfig:
    """Unpack a state integer into a bit tuple of length n_vars."""
    return tuple((state >> j) & 1 for j in range(n_vars))


@dataclass(frozen=True)
class PolyHamiltonian:
    """Diagonal operator  sum_S J(S) * prod_{j in S} Z_j  on n binary variables.

    ``terms`` maps strictly ascending index tuples to finite nonzero
    coefficients. Instances are immutable after construction and safe to
    share across threads; :meth:`evaluate` is pure.
    """

    n_vars: int
    terms: dict[Subset, float]

    def __post_init__(self):
        if self.n_vars < 1:
            raise DomainError("n_vars must be a positive integer")
        for subset, coeff in self.terms.items():
            if not isinstance(subset, tuple):
                raise FormatError(f"subset {subset!r} must be a tuple")
            if any(subset[i] >= subset[i + 1] for i in range(len(subset) - 1)):
                raise FormatError(f"subset {subset} must be strictly ascending")
            if subset and (subset[0] < 0 or subset[-1] >= self.n_vars):
                raise FormatError(f"subset {subset} out of range for n_vars={self.n_vars}")
            if not math.isfinite(coeff):
                raise FormatError(f"coefficient for {subset} is not finite")
            if coeff == 0.0:
                raise FormatError(f"coefficient for {subset} must be nonzero")

    @classmethod
    def from_terms(cls, n_vars: int, items) -> "PolyHamiltonian":
        """Build from (subset, coeff) pairs, merging duplicate subsets."""
        merged: dict[Subset, float] = {}
        for subset, coeff in items:
            key = tuple(sorted(set(subset)))
            if len(key) != len(tuple(subset)):
                raise FormatError(f"subset {subset} contains repeated indices")
            merged[key] = merged.get(key, 0.0) + float(coeff)
        return cls(n_vars, {s: c for s, c in merged.items() if c != 0.0})

    # -- basic queries ----------------------------------------------------

    def max_degree(self) -> int:
        return max((len(s) for s in self.terms), default=0)

    @property
    def constant(self) -> float:
        return self.terms.get((), 0.0)

    def is_pure_even(self) -> bool:
        """True iff every subset has even cardinality >= 2."""
        return all(len(s) >= 2 and len(s) % 2 == 0 for s in self.terms)

    def is_pure_quadratic(self) -> bool:
        """True iff every non-constant term acts on exactly two variables."""
        return all(len(s) == 2 for s in self.terms if s)

    # -- evaluation -------------------------------------------------------

    def evaluate(self, x: SpinConfig) -> float:
        """Energy of a configuration, summed in canonical sorted-subset order."""
        if len(x) != self.n_vars:
            raise DimensionError(
                f"configuration has {len(x)} bits, Hamiltonian has {self.n_vars} variables"
            )
        total = 0.0
        for subset in sorted(self.terms):
            sign = 1
            for j in subset:
                if x[j]:
                    sign = -sign
            total += self.terms[subset] * sign
        return total

    @cached_property
    def _term_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        subsets = sorted(self.terms)
        masks = np.array(
            [sum(1 << j for j in s) for s in subsets], dtype=np.int64
        )
        coeffs = np.array([self.terms[s] for s in subsets], dtype=np.float64)
        return masks, coeffs

    def energies(self, states: np.ndarray) -> np.ndarray:
        """Vectorized energies for an array of packed state integers."""
        if self.n_vars > _MASK_VARS:
            return np.array([self.evaluate(int_to_bits(int(s), self.n_vars)) for s in states])
        states = np.asarray(states, dtype=np.int64)
        out = np.zeros(states.shape, dtype=np.float64)
        masks, coeffs = self._term_arrays
        for mask, coeff in zip(masks, coeffs):
            parity = np.bitwise_count(states & mask) & 1
            out += coeff * (1.0 - 2.0 * parity)
        return out

    # -- conversions ------------------------------------------------------

    @classmethod
    def from_boolean_table(cls, values, prune: float = COEFF_PRUNE) -> "PolyHamiltonian":
        """Parity-basis expansion of a real-valued truth table.

        ``values[x]`` is the function value on the configuration whose bit j
        is bit j of the row index x. The returned Hamiltonian reproduces the
        table exactly up to pruned coefficients.
        """
        vals = np.asarray(values, dtype=np.float64)
        size = vals.size
        if size < 2 or size & (size - 1):
            raise FormatError("truth table size must be a power of two (>= 2)")
        n = size.bit_length() - 1
        if n > MAX_TABLE_VARS:
            raise ResourceError(f"truth table over {n} variables exceeds the {MAX_TABLE_VARS}-variable cap")
        spectrum = vals.copy()
        step = 1
        while step < size:
            spectrum = spectrum.reshape(-1, 2 * step)
            left = spectrum[:, :step].copy()
            right = spectrum[:, step:].copy()
            spectrum[:, :step] = left + right
            spectrum[:, step:] = left - right
            spectrum = spectrum.reshape(-1)
            step *= 2
        spectrum /= size
        terms: dict[Subset, float] = {}
        for mask in range(size):
            coeff = float(spectrum[mask])
            if abs(coeff) > prune:
                terms[tuple(j for j in range(n) if (mask >> j) & 1)] = coeff
        return cls(n, terms)

    @classmethod
    def from_qubo(cls, q, constant: float = 0.0) -> "PolyHamiltonian":
        """Spin form of  x^T Q x + c  over binary x (x_i = (1 - z_i) / 2)."""
        q = np.asarray(q, dtype=np.float64)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise FormatError("Q must be a square matrix")
        if not np.all(np.isfinite(q)):
            raise FormatError("Q entries must be finite")
        n = q.shape[0]
        if n < 1:
            raise FormatError("Q must have at least one row")
        const = float(constant)
        linear = np.zeros(n)
        terms: dict[Subset, float] = {}
        for i in range(n):
            const += q[i, i] / 2.0
            linear[i] -= q[i, i] / 2.0
            for j in range(i + 1, n):
                pair = q[i, j] + q[j, i]
                if pair == 0.0:
                    continue
                const += pair / 4.0
                linear[i] -= pair / 4.0
                linear[j] -= pair / 4.0
                terms[(i, j)] = pair / 4.0
        for i in range(n):
            if linear[i] != 0.0:
                terms[(i,)] = linear[i]
        if const != 0.0:
            terms[()] = const
        return cls(n, terms)

    def quadratize_fields(self) -> "PolyHamiltonian":
        """Absorb degree-1 terms into couplings with one appended ancilla.

        Each field h_i Z_i becomes h_i Z_i Z_a on an (n+1)-th variable. The
        spectrum restricted to ancilla bit 0 equals the original spectrum;
        the other sector is its global-flip image. Pure-quadratic inputs are
        returned unchanged.
        """
        if self.max_degree() > 2:
            raise DomainError("quadratization of fields requires degree <= 2")
        if not any(len(s) == 1 for s in self.terms):
            return self
        ancilla = self.n_vars
        terms: dict[Subset, float] = {}
        for subset, coeff in self.terms.items():
            if len(subset) == 1:
                terms[(subset[0], ancilla)] = coeff
            else:
                terms[subset] = coeff
        return PolyHamiltonian(self.n_vars + 1, terms)

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "n": self.n_vars,
            "terms": [
                {"vars": list(s), "coeff": self.terms[s]} for s in sorted(self.terms)
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PolyHamiltonian":
        try:
            n = int(data["n"])
            raw = data["terms"]
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"problem JSON must carry 'n' and 'terms': {exc}") from exc
        terms: dict[Subset, float] = {}
        for entry in raw:
            try:
                subset = tuple(int(v) for v in entry["vars"])
                coeff = float(entry["coeff"])
            except (KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"bad term entry {entry!r}: {exc}") from exc
            if list(subset) != sorted(set(subset)):
                raise FormatError(f"term vars {list(subset)} must be ascending and distinct")
            if subset in terms:
                raise FormatError(f"duplicate subset {list(subset)}")
            terms[subset] = coeff
        return cls(n, {s: c for s, c in terms.items() if c != 0.0})


def parse_edge_list(text: str, n_vars: int | None = None) -> PolyHamiltonian:
    """Parse the pure-quadratic text format: one ``u v w`` triple per line.

    Blank lines and lines starting with ``#`` are skipped. Duplicate pairs
    are rejected.
    """
    terms: dict[Subset, float] = {}
    max_index = -1
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 3:
            raise FormatError(f"line {lineno}: expected 'u v w', got {stripped!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
        if u == v:
            raise FormatError(f"line {lineno}: self-coupling {u} {v} is not allowed")
        key = (min(u, v), max(u, v))
        if key in terms:
            raise FormatError(f"line {lineno}: duplicate edge {key}")
        if w != 0.0:
            terms[key] = w
        max_index = max(max_index, u, v)
    if max_index < 0 and n_vars is None:
        raise FormatError("edge list holds no edges and no variable count was given")
    n = n_vars if n_vars is not None else max_index + 1
    return PolyHamiltonian(n, terms)


def format_edge_list(h: PolyHamiltonian) -> str:
    """Render a pure-quadratic Hamiltonian in the ``u v w`` text format."""
    if not h.is_pure_quadratic() or () in h.terms:
        raise DomainError("edge-list format requires a pure-quadratic Hamiltonian without constant")
    lines = [f"# n={h.n_vars}"]
    for (u, v) in sorted(h.terms):
        lines.append(f"{u} {v} {h.terms[(u, v)]!r}")
    return "\n".join(lines) + "\n"


def load_problem(path: str) -> PolyHamiltonian:
    """Load a problem from a ``.json`` file or an edge-list text file."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
        return PolyHamiltonian.from_json_dict(data)
    return parse_edge_list(text)
