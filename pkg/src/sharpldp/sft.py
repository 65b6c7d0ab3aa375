"""Subshifts of finite type: models, words, periodic orbits, recoding, cycle means.

Symbols are the integers ``0..k-1``; words are tuples of symbols.  A
``MarkovModel`` is immutable and hashable so it can key caches.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import networkx as nx
import numpy as np

from .errors import ModelError, ResourceError

Word = tuple[int, ...]

# Enumeration budget for necklace generation (number of candidate words).
DEFAULT_ORBIT_BUDGET = 2_000_000


@dataclass(frozen=True)
class MarkovModel:
    """Alphabet plus 0/1 transition table ``a_ij``.

    Every row and column must contain a 1; a stranded symbol raises
    :class:`ModelError` naming it.
    """

    transitions: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.transitions)
        object.__setattr__(self, "transitions", rows)
        k = len(rows)
        if k == 0:
            raise ModelError("alphabet must contain at least one symbol")
        for i, row in enumerate(rows):
            if len(row) != k:
                raise ModelError(f"transition row {i} has length {len(row)}, expected {k}")
            if any(x not in (0, 1) for x in row):
                raise ModelError(f"transition row {i} is not 0/1")
        if self.labels is None:
            labels = tuple(chr(ord("a") + i) if k <= 26 else str(i) for i in range(k))
            object.__setattr__(self, "labels", labels)
        else:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != k or len(set(labels)) != k:
                raise ModelError("labels must be distinct and one per symbol")
            object.__setattr__(self, "labels", labels)
        for i in range(k):
            if not any(rows[i]):
                raise ModelError(f"dead symbol {self.labels[i]!r}: all-zero row")
            if not any(rows[j][i] for j in range(k)):
                raise ModelError(f"dead symbol {self.labels[i]!r}: all-zero column")

    @classmethod
    def from_matrix(cls, matrix, labels=None) -> "MarkovModel":
        return cls(tuple(tuple(int(x) for x in row) for row in np.asarray(matrix)), labels)

    @classmethod
    def full_shift(cls, k: int, labels=None) -> "MarkovModel":
        return cls(tuple((1,) * k for _ in range(k)), labels)

    @classmethod
    def golden_mean(cls) -> "MarkovModel":
        return cls(((1, 1), (1, 0)), ("0", "1"))

    @property
    def alphabet_size(self) -> int:
        return len(self.transitions)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.transitions, dtype=float)

    def allowed(self, i: int, j: int) -> bool:
        return self.transitions[i][j] == 1

    def is_admissible(self, word: Sequence[int]) -> bool:
        k = self.alphabet_size
        if any(not 0 <= a < k for a in word):
            return False
        return all(self.transitions[a][b] for a, b in zip(word, word[1:]))

    def is_cyclically_admissible(self, word: Sequence[int]) -> bool:
        return self.is_admissible(word) and self.transitions[word[-1]][word[0]] == 1

    def format_word(self, word: Sequence[int]) -> str:
        sep = "" if all(len(x) == 1 for x in self.labels) else "."
        return sep.join(self.labels[s] for s in word)

    def parse_word(self, text: str) -> Word:
        index = {lab: i for i, lab in enumerate(self.labels)}
        parts = text.split(".") if "." in text else list(text)
        try:
            return tuple(index[p] for p in parts)
        except KeyError as exc:
            raise ModelError(f"unknown symbol {exc.args[0]!r} in word {text!r}") from None

    def content_hash(self) -> str:
        payload = repr((self.transitions, self.labels)).encode()
        return hashlib.sha256(payload).hexdigest()[:16]


@dataclass(frozen=True)
class ValidationReport:
    irreducible: bool
    primitive: bool
    period: int

    def summary(self) -> str:
        if not self.irreducible:
            return "reducible"
        kind = "primitive" if self.primitive else "irreducible, not primitive"
        return f"{kind}, period {self.period}"


@dataclass(frozen=True)
class CycleSet:
    cycles: tuple[Word, ...]
    max_length: int


def _reachable(adj: list[list[int]], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def validate_model(model: MarkovModel) -> ValidationReport:
    """Irreducibility by reachability closure, period by BFS level differences."""
    k = model.alphabet_size
    adj = [[j for j in range(k) if model.transitions[i][j]] for i in range(k)]
    radj = [[i for i in range(k) if model.transitions[i][j]] for j in range(k)]
    irreducible = len(_reachable(adj, 0)) == k and len(_reachable(radj, 0)) == k
    if not irreducible:
        return ValidationReport(False, False, 0)
    level = {0: 0}
    queue = [0]
    for v in queue:
        for w in adj[v]:
            if w not in level:
                level[w] = level[v] + 1
                queue.append(w)
    period = 0
    for v in range(k):
        for w in adj[v]:
            period = math.gcd(period, level[v] + 1 - level[w])
    return ValidationReport(True, period == 1, period)


def require_primitive(model: MarkovModel) -> None:
    report = validate_model(model)
    if not report.primitive:
        raise ModelError(f"model must be primitive (got: {report.summary()})")


def count_words(model: MarkovModel, n: int, limit: int | None = None) -> int:
    """Number of admissible words of length ``n`` (exact Python integers).

    ``limit`` turns an oversized count into a :class:`ResourceError` instead
    of letting callers allocate for it.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    k = model.alphabet_size
    vec = [1] * k
    rows = model.transitions
    for _ in range(n - 1):
        vec = [sum(vec[j] for j in range(k) if rows[i][j]) for i in range(k)]
    total = sum(vec)
    if limit is not None and total > limit:
        raise ResourceError(
            f"{total} admissible words of length {n} exceed the limit {limit}",
            suggestion=f"reduce n below {n}",
        )
    return total


def admissible_words(model: MarkovModel, n: int) -> list[Word]:
    """All admissible words of length ``n`` in lexicographic order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = model.alphabet_size
    words: list[Word] = [(i,) for i in range(k)]
    for _ in range(n - 1):
        words = [w + (j,) for w in words for j in range(k) if model.transitions[w[-1]][j]]
    return words


def lyndon_words(k: int, max_length: int) -> Iterator[Word]:
    """Duval's generation of Lyndon words over ``k`` letters, length <= max_length."""
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_length:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()


def canonical_rotation(word: Sequence[int]) -> Word:
    """Lexicographically least rotation (necklace representative)."""
    word = tuple(word)
    return min(word[i:] + word[:i] for i in range(len(word)))


@dataclass(frozen=True)
class OrbitSum:
    period: int
    total: float
    word: Word


def periodic_orbits(model: MarkovModel, max_period: int, budget: int = DEFAULT_ORBIT_BUDGET) -> list[Word]:
    """Primitive necklaces that are cyclically admissible, sorted by (length, word)."""
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    k = model.alphabet_size
    candidates = sum(k**n for n in range(1, max_period + 1))
    if candidates > budget:
        raise ResourceError(
            f"necklace enumeration up to period {max_period} needs ~{candidates} candidates "
            f"(budget {budget})",
            suggestion="lower max_period",
        )
    orbits = [w for w in lyndon_words(k, max_period) if model.is_cyclically_admissible(w)]
    orbits.sort(key=lambda w: (len(w), w))
    return orbits


def periodic_orbit_sums(model: MarkovModel, potential, max_period: int,
                        budget: int = DEFAULT_ORBIT_BUDGET) -> list[OrbitSum]:
    """Birkhoff sum of ``potential`` around every periodic orbit up to ``max_period``."""
    require_primitive(model)
    out = []
    for word in periodic_orbits(model, max_period, budget):
        out.append(OrbitSum(len(word), potential.orbit_sum(word), word))
    return out


def higher_block_recode(model: MarkovModel, m: int) -> tuple[MarkovModel, list[Word]]:
    """Sliding-block recoding onto admissible ``m``-words.

    Edge ``w -> w'`` is allowed iff ``w[1:] == w'[:-1]``.
    """
    if m < 1:
        raise ValueError("memory m must be >= 1")
    if m == 1:
        return model, [(i,) for i in range(model.alphabet_size)]
    words = admissible_words(model, m)
    if not words:
        raise ModelError(f"no admissible words of length {m}")
    index = {w: i for i, w in enumerate(words)}
    size = len(words)
    rows = [[0] * size for _ in range(size)]
    for w in words:
        for j in range(model.alphabet_size):
            if model.transitions[w[-1]][j]:
                rows[index[w]][index[w[1:] + (j,)]] = 1
    labels = tuple(model.format_word(w) for w in words)
    return MarkovModel(tuple(map(tuple, rows)), labels), words


def simple_cycles(model: MarkovModel, max_length: int) -> CycleSet:
    """Elementary cycles with at most ``max_length`` vertices, canonically rotated and sorted."""
    graph = nx.DiGraph()
    k = model.alphabet_size
    graph.add_nodes_from(range(k))
    graph.add_edges_from((i, j) for i in range(k) for j in range(k) if model.transitions[i][j])
    cycles = {canonical_rotation(c) for c in nx.simple_cycles(graph, length_bound=max_length)}
    return CycleSet(tuple(sorted(cycles, key=lambda c: (len(c), c))), max_length)


def _karp_min_mean(k: int, edges: list[tuple[int, int, object]]):
    # D[t][v]: minimum weight of a walk with exactly t edges from vertex 0 to v.
    inf = None
    dist = [[inf] * k for _ in range(k + 1)]
    dist[0][0] = 0 if not isinstance(edges[0][2], float) else 0.0
    for t in range(1, k + 1):
        prev, cur = dist[t - 1], dist[t]
        for u, v, w in edges:
            if prev[u] is not None:
                cand = prev[u] + w
                if cur[v] is None or cand < cur[v]:
                    cur[v] = cand
    best = None
    for v in range(k):
        if dist[k][v] is None:
            continue
        worst = None
        for t in range(k):
            if dist[t][v] is None:
                continue
            val = (dist[k][v] - dist[t][v]) / (k - t)
            if worst is None or val > worst:
                worst = val
        if worst is not None and (best is None or worst < best):
            best = worst
    return best


def cycle_mean_extremes(model: MarkovModel, edge_weights) -> tuple:
    """(min, max) over directed cycles of mean edge weight, by Karp's recursion.

    ``edge_weights`` maps ``(i, j)`` to a weight for every allowed edge, or is
    a k x k array.  ``Fraction`` weights give exact ``Fraction`` results.
    """
    if not validate_model(model).irreducible:
        raise ModelError("cycle_mean_extremes requires an irreducible model")
    k = model.alphabet_size
    edges = []
    for i in range(k):
        for j in range(k):
            if model.transitions[i][j]:
                w = edge_weights[i][j] if not isinstance(edge_weights, dict) else edge_weights[(i, j)]
                if isinstance(w, (np.floating, np.integer)):
                    w = w.item()
                if isinstance(w, int):
                    w = Fraction(w)
                edges.append((i, j, w))
    if any(isinstance(w, float) for _, _, w in edges):
        edges = [(i, j, float(w)) for i, j, w in edges]
    lo = _karp_min_mean(k, edges)
    hi = -_karp_min_mean(k, [(i, j, -w) for i, j, w in edges])
    return lo, hi

