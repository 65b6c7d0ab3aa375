"""Locally constant potentials, edge form, Birkhoff sums and the lattice test.

A potential of memory ``m`` is a table over admissible ``m``-words.  For
transfer matrices and distributions every potential is pushed to *edge form*:
states are admissible ``(L-1)``-words, edges are admissible ``L``-words with
``L = max(2, max memory)``, and a memory-``m`` value is read off the first
``m`` symbols of the edge word.
"""

from __future__ import annotations

import math
from functools import cached_property
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import DegenerateError, DomainError, ModelError
from .sft import MarkovModel, Word, admissible_words, periodic_orbits, require_primitive

PLAIN_METRIC = "d(x,y) = 2^-(common prefix length)"


@dataclass(eq=False)
class Potential:
    """Value table of a memory-``m`` potential on ``model``.

    Parameters
    ----------
    model : MarkovModel
    memory : int
        Number of leading symbols the value depends on.
    values : mapping
        Admissible ``memory``-word -> value.  ``Fraction`` values are kept
        exactly (see :attr:`exact`); everything else is stored as float.
    name : str
    positive : bool
        Require every value to be strictly positive (roof functions).
    """

    model: MarkovModel
    memory: int
    values: Mapping[Word, object]
    name: str = ""
    positive: bool = False
    exact: dict[Word, Fraction] | None = field(default=None, init=False)

    def __post_init__(self):
        if self.memory < 1:
            raise ModelError(f"potential {self.name!r}: memory must be >= 1")
        words = admissible_words(self.model, self.memory)
        allowed = set(words)
        given = {tuple(w): v for w, v in self.values.items()}
        for w in given:
            if w not in allowed:
                raise ModelError(
                    f"potential {self.name!r}: inadmissible word {self.model.format_word(w)!r}"
                )
        missing = [w for w in words if w not in given]
        if missing:
            raise ModelError(
                f"potential {self.name!r}: missing value for word {self.model.format_word(missing[0])!r}"
            )
        if all(isinstance(v, (int, Fraction)) for v in given.values()):
            self.exact = {w: Fraction(given[w]) for w in words}
        self.values = {w: float(given[w]) for w in words}
        if any(not math.isfinite(v) for v in self.values.values()):
            raise ModelError(f"potential {self.name!r}: non-finite value")
        if self.positive and min(self.values.values()) <= 0:
            raise ModelError(f"potential {self.name!r} is flagged positive but has value <= 0")

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, model: MarkovModel, c, name: str = "const") -> "Potential":
        return cls(model, 1, {(i,): c for i in range(model.alphabet_size)}, name)

    @classmethod
    def from_function(cls, model: MarkovModel, memory: int, fn: Callable[[Word], object],
                      name: str = "") -> "Potential":
        return cls(model, memory, {w: fn(w) for w in admissible_words(model, memory)}, name)

    @classmethod
    def indicator(cls, model: MarkovModel, symbol: int, name: str = "") -> "Potential":
        return cls.from_function(model, 1, lambda w: int(w[0] == symbol), name or f"1[{symbol}]")

    # -- structure --------------------------------------------------------
    def value(self, word: Sequence[int]) -> float:
        return self.values[tuple(word[: self.memory])]

    def table(self) -> dict[Word, object]:
        """Values with exact entries where available."""
        return dict(self.exact) if self.exact is not None else dict(self.values)

    @property
    def min_value(self) -> float:
        return min(self.values.values())

    @property
    def max_value(self) -> float:
        return max(self.values.values())

    def lift(self, memory: int) -> "Potential":
        """Same function viewed as a memory-``memory`` table (``memory >= self.memory``)."""
        if memory < self.memory:
            raise ValueError("cannot lower the memory of a potential")
        src = self.table()
        return Potential(self.model, memory,
                         {w: src[w[: self.memory]] for w in admissible_words(self.model, memory)},
                         self.name, self.positive)

    def _combine(self, other: "Potential", op, name: str) -> "Potential":
        if other.model != self.model:
            raise ModelError("potentials live on different models")
        m = max(self.memory, other.memory)
        a, b = self.lift(m).table(), other.lift(m).table()
        return Potential(self.model, m, {w: op(a[w], b[w]) for w in a}, name)

    def __add__(self, other: "Potential") -> "Potential":
        return self._combine(other, lambda x, y: x + y, f"{self.name}+{other.name}")

    def __sub__(self, other: "Potential") -> "Potential":
        return self._combine(other, lambda x, y: x - y, f"{self.name}-{other.name}")

    def scale(self, c) -> "Potential":
        src = self.table()
        if isinstance(c, float):
            src = self.values
        return Potential(self.model, self.memory, {w: c * v for w, v in src.items()}, self.name)

    def shift(self, c) -> "Potential":
        src = self.table()
        if isinstance(c, float):
            src = self.values
        return Potential(self.model, self.memory, {w: v + c for w, v in src.items()}, self.name)

    def orbit_sum(self, word: Sequence[int]) -> float:
        """Sum of the potential around the periodic point ``word^inf``."""
        word = tuple(word)
        n = len(word)
        reps = -(-(n + self.memory - 1) // n)
        ext = word * (reps + 1)
        return math.fsum(self.value(ext[j : j + self.memory]) for j in range(n))

    def is_constant(self) -> bool:
        vals = list(self.values.values())
        return max(vals) - min(vals) == 0.0


def birkhoff_sum(potential: Potential, word: Sequence[int], n: int) -> float:
    """Birkhoff sum of the first ``n`` terms along ``word``.

    Terms are added left to right with Neumaier compensation.

    Raises
    ------
    DomainError
        If ``word`` is shorter than ``n + memory - 1``.
    """
    word = tuple(word)
    need = n + potential.memory - 1
    if n < 0 or len(word) < need:
        raise DomainError(f"word of length {len(word)} is too short for n={n} (need {need})")
    total, comp = 0.0, 0.0
    for j in range(n):
        v = potential.value(word[j : j + potential.memory])
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


@dataclass(frozen=True)
class EdgeSystem:
    """Potentials pushed to a common edge form.

    Attributes
    ----------
    states : list of words of length ``L-1``
    adjacency : (S, S) 0/1 array over states
    weights : tuple of (S, S) arrays, one per potential, zero off edges
    weights_exact : tuple of Fraction tables (dict (i, j) -> Fraction) or None per potential
    """

    model: MarkovModel
    edge_length: int
    states: tuple[Word, ...]
    adjacency: np.ndarray
    weights: tuple[np.ndarray, ...]
    weights_exact: tuple[dict | None, ...]

    @property
    def size(self) -> int:
        return len(self.states)

    def edges(self) -> list[tuple[int, int]]:
        rows, cols = np.nonzero(self.adjacency)
        return list(zip(rows.tolist(), cols.tolist()))

    def edge_word(self, i: int, j: int) -> Word:
        return self.states[i] + self.states[j][-1:]

    def state_of(self, word: Sequence[int]) -> int:
        return self._index[tuple(word[: self.edge_length - 1])]

    @cached_property
    def _index(self) -> dict:
        return {w: i for i, w in enumerate(self.states)}


def edge_form(model: MarkovModel, *potentials: Potential, edge_length: int | None = None) -> EdgeSystem:
    """Express ``potentials`` as functions of edges of a common recoded graph."""
    mem = max([p.memory for p in potentials] + [1])
    L = max(2, mem) if edge_length is None else edge_length
    if L < max(2, mem):
        raise ModelError(f"edge length {L} too small for memory {mem}")
    states = admissible_words(model, L - 1)
    index = {w: i for i, w in enumerate(states)}
    S = len(states)
    adj = np.zeros((S, S))
    edges = []
    for w in admissible_words(model, L):
        i, j = index[w[:-1]], index[w[1:]]
        adj[i, j] = 1.0
        edges.append((i, j, w))
    weights, exact = [], []
    for pot in potentials:
        if pot.model != model:
            raise ModelError(f"potential {pot.name!r} is defined on a different model")
        W = np.zeros((S, S))
        ex = {} if pot.exact is not None else None
        for i, j, w in edges:
            W[i, j] = pot.value(w)
            if ex is not None:
                ex[(i, j)] = pot.exact[w[: pot.memory]]
        weights.append(W)
        exact.append(ex)
    return EdgeSystem(model, L, tuple(states), adj, tuple(weights), tuple(exact))


def normalize_pair(phi: Potential, psi: Potential, tol: float = 1e-14):
    """Shift ``phi`` to zero pressure and ``psi`` to zero mean under ``m_phi``.

    Returns
    -------
    (phi_n, psi_n, (c_phi, c_psi))
        with ``phi_n = phi - c_phi`` and ``psi_n = psi - c_psi``.  A pair
        that is already normalized (within ``tol``) comes back unchanged
        with shifts ``(0, 0)``.
    """
    from .thermo import pressure_derivatives

    require_primitive(phi.model)
    pr, mean, _ = pressure_derivatives(phi.model, phi, psi, 0.0)
    c_phi = 0.0 if abs(pr) <= tol else pr
    c_psi = 0.0 if abs(mean) <= tol else mean
    phi_n = phi if c_phi == 0.0 else phi.shift(-c_phi)
    psi_n = psi if c_psi == 0.0 else psi.shift(-c_psi)
    return phi_n, psi_n, (c_phi, c_psi)


# -- lattice test ---------------------------------------------------------

@dataclass(frozen=True)
class LatticeVerdict:
    kind: str  # "lattice" or "no-lattice-found"
    a: float | None
    c: float | None
    witness_count: int
    resolution: float

    @property
    def is_lattice(self) -> bool:
        return self.kind == "lattice"


def _real_gcd(x: float, y: float, tol: float) -> float:
    x, y = abs(x), abs(y)
    while y > tol:
        x, y = y, math.fmod(x, y)
    return x


def _bezout(ns: Sequence[int]) -> list[int]:
    """Integer coefficients beta with sum(beta_i * n_i) == gcd(ns)."""
    coeffs = [0] * len(ns)
    g, coeffs[0] = ns[0], 1
    for k in range(1, len(ns)):
        # extended Euclid on (g, ns[k])
        old_r, r, old_s, s, old_t, t = g, ns[k], 1, 0, 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        coeffs = [c * old_s for c in coeffs[:k]] + [old_t] + coeffs[k + 1 :]
        g = old_r
    return coeffs


def lattice_check(psi: Potential, model: MarkovModel | None = None, max_period: int = 8,
                  tol: float = 1e-9, resolution: float = 1e-6) -> LatticeVerdict:
    """Search for ``(a, c)`` such that every orbit sum satisfies ``S - a n in c Z``.

    The span is the tolerant real gcd of the commutators ``S_i n_j - S_j n_i``;
    the drift is ``a = sum beta_i S_i`` with ``sum beta_i n_i = 1``, reduced
    modulo ``c``.  ``no-lattice-found`` is finite evidence only.

    Raises
    ------
    DegenerateError
        If fewer than two periodic orbits exist up to ``max_period``.
    """
    model = psi.model if model is None else model
    require_primitive(model)
    if max_period < 2:
        raise DomainError("max_period must be >= 2")
    orbits = periodic_orbits(model, max_period)
    if len(orbits) < 2:
        raise DegenerateError(f"only {len(orbits)} periodic orbit(s) up to period {max_period}")
    ns = [len(w) for w in orbits]
    ss = [psi.orbit_sum(w) for w in orbits]
    scale = max(1.0, max(abs(s) for s in ss)) * max_period
    tol_abs = tol * scale
    comms = [ss[i] * ns[j] - ss[j] * ns[i] for i in range(len(ns)) for j in range(i + 1, len(ns))]
    count = len(orbits)
    if max(abs(x) for x in comms) <= tol_abs:
        return LatticeVerdict("lattice", ss[0] / ns[0], math.inf, count, resolution)
    c = 0.0
    for x in comms:
        if abs(x) > tol_abs:
            c = _real_gcd(c, x, tol_abs) if c else abs(x)
    if c < resolution:
        return LatticeVerdict("no-lattice-found", None, None, count, resolution)
    beta = _bezout(ns)
    if sum(b * n for b, n in zip(beta, ns)) != 1:
        return LatticeVerdict("no-lattice-found", None, None, count, resolution)
    a = math.fmod(math.fsum(b * s for b, s in zip(beta, ss)), c)
    if a < 0:
        a += c
    for n, s in zip(ns, ss):
        r = (s - a * n) / c
        if abs(r - round(r)) * c > tol_abs * 10:
            return LatticeVerdict("no-lattice-found", None, None, count, resolution)
    return LatticeVerdict("lattice", a, c, count, resolution)


# -- Lipschitz ratio ------------------------------------------------------

@dataclass(frozen=True)
class RatioReport:
    lip_e: float
    min_value: float
    ratio: float | None
    metric: str = PLAIN_METRIC
    mu0: float | None = None
    mu0_met: bool | None = None

    @property
    def defined(self) -> bool:
        return self.ratio is not None


def make_ratio_report(lip_e: float, min_value: float, metric: str, mu0: float | None) -> RatioReport:
    ratio = lip_e / min_value if min_value > 0 else None
    met = None if (mu0 is None or ratio is None) else ratio <= mu0
    return RatioReport(lip_e, min_value, ratio, metric, mu0, met)


def lip_ratio(target, mu0: float | None = None, block: int = 0) -> RatioReport:
    """Lipschitz constant over minimum value, for a potential or sampled observable.

    Parameters
    ----------
    target : Potential or SampledObservable
        Potentials use the symbolic metric ``2^-(common prefix)`` over pairs of
        admissible words of length ``memory``; ``block > 0`` restricts to pairs
        sharing a prefix of that length (the essential constant).  Sampled
        observables (see :mod:`sharpldp.suspension`) supply their own
        within-block difference quotients.
    mu0 : float, optional
        Budget reported against, never enforced.

    Notes
    -----
    A non-positive minimum leaves ``ratio`` as ``None``.
    """
    if not isinstance(target, Potential):
        lip, lo, metric = target.lipschitz_data()
        return make_ratio_report(lip, lo, metric, mu0)
    words = list(target.values)
    lip = 0.0
    for x in range(len(words)):
        for y in range(x + 1, len(words)):
            u, v = words[x], words[y]
            k = 0
            while k < len(u) and u[k] == v[k]:
                k += 1
            if k < block:
                continue
            diff = abs(target.values[u] - target.values[v])
            lip = max(lip, diff / 2.0 ** (-k))
    metric = PLAIN_METRIC if block == 0 else f"{PLAIN_METRIC}, pairs within {block}-cylinders"
    return make_ratio_report(lip, target.min_value, metric, mu0)


def orbit_sum_table(psi: Potential, words: Iterable[Word]) -> list[tuple[int, float]]:
    return [(len(w), psi.orbit_sum(w)) for w in words]
