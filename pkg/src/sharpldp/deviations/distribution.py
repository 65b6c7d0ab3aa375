"""Distributions of Birkhoff sums under an equilibrium measure.

Two engines produce a :class:`SumDistribution`:

* :func:`exact_distribution` enumerates every admissible path (the oracle);
* :func:`dp_distribution` runs a dynamic program over ``(state, lattice
  cell)`` with certified mass and value enclosures.

A distribution is a list of *entries* per terminal state.  Each entry is a
closed value interval ``[lower, lower + width]`` that carries all of its
probability mass, and the mass itself is enclosed in ``[mass_lo, mass_hi]``.
``stray_hi`` is extra mass (from floating-point underflow) whose location is
unknown; it only ever enters upper bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from pathlib import Path
from typing import Sequence

import mpmath
import numpy as np
from scipy.linalg import blas

from ..errors import DomainError, ModelError, ResourceError
from ..potentials import EdgeSystem, Potential, edge_form
from ..sft import MarkovModel, count_words, require_primitive
from ..thermo import EquilibriumMeasure, _measure_from_edges

U = np.finfo(float).eps / 2
TINY = 2.0**-1074
DEFAULT_ENUM_BUDGET = 2_000_000
DEFAULT_BUDGET_BINS = 60_000_000
PSLQ_TOL = 1e-12
PSLQ_MAXCOEFF = 1000
SNAPSHOT_MAGIC = b"LDPD"
SNAPSHOT_VERSION = 1
_MODE_CODES = {"exact-atoms": 0, "bracketed-bins": 1}
_EMBED_CODES = {"enumeration": 0, "rational": 1, "pslq": 2, "grid": 3}


@dataclass
class StateEntries:
    lower: np.ndarray
    width: np.ndarray
    mass_lo: np.ndarray
    mass_hi: np.ndarray

    def __len__(self) -> int:
        return len(self.lower)

    @classmethod
    def empty(cls) -> "StateEntries":
        z = np.zeros(0)
        return cls(z, z.copy(), z.copy(), z.copy())


@dataclass
class SumDistribution:
    """Enclosure of the law of ``Psi^n`` split by terminal state.

    Attributes
    ----------
    n : int
    mode : {"exact-atoms", "bracketed-bins"}
    h : float
        Maximum entry width (0 for exact atoms).
    states : tuple of words
        Terminal states of the edge graph the distribution was built on.
    entries : list of StateEntries
    stray_hi : float
    rel_err : float
        Relative mass error folded into ``mass_lo``/``mass_hi``.
    embedding : str
        ``enumeration``, ``rational``, ``pslq`` or ``grid``.
    exact_values : list of lists of Fraction, optional
        Exact atom values when every input was rational.
    """

    n: int
    mode: str
    h: float
    states: tuple
    entries: list
    stray_hi: float = 0.0
    rel_err: float = 0.0
    embedding: str = "enumeration"
    exact_values: list | None = None
    stats: dict = field(default_factory=dict)

    @property
    def total_lo(self) -> float:
        return math.fsum(float(e.mass_lo.sum()) for e in self.entries)

    @property
    def total_hi(self) -> float:
        return math.fsum(float(e.mass_hi.sum()) for e in self.entries) + self.stray_hi

    @property
    def size(self) -> int:
        return sum(len(e) for e in self.entries)

    def merged(self) -> StateEntries:
        parts = [e for e in self.entries if len(e)]
        if not parts:
            return StateEntries.empty()
        return StateEntries(*(np.concatenate([getattr(e, f) for e in parts])
                              for f in ("lower", "width", "mass_lo", "mass_hi")))

    def value_range(self) -> tuple[float, float]:
        m = self.merged()
        if not len(m):
            return (math.nan, math.nan)
        return float(m.lower.min()), float((m.lower + m.width).max())


@dataclass(frozen=True)
class WindowMeasure:
    lo: float
    hi: float
    outside: bool = False

    def __iter__(self):
        return iter((self.lo, self.hi))


def _system_and_measure(model: MarkovModel, measure, psi: Potential) -> tuple[EdgeSystem, EquilibriumMeasure]:
    require_primitive(model)
    if isinstance(measure, Potential):
        both = edge_form(model, measure, psi)
        meas = _measure_from_edges(both, both.weights[0], measure.name)
        return edge_form(model, psi, edge_length=both.edge_length), meas
    if not isinstance(measure, EquilibriumMeasure):
        raise ModelError("measure must be an EquilibriumMeasure or the potential that defines it")
    L = max(measure.system.edge_length, max(2, psi.memory))
    measure = lift_measure(measure, L)
    system = edge_form(model, psi, edge_length=L)
    return system, measure


def lift_measure(measure: EquilibriumMeasure, edge_length: int) -> EquilibriumMeasure:
    """The same Markov measure expressed on a longer edge graph."""
    L0 = measure.system.edge_length
    if edge_length == L0:
        return measure
    if edge_length < L0:
        raise ModelError("cannot shorten the edge length of a measure")
    model = measure.system.model
    system = edge_form(model, edge_length=edge_length)
    k0 = L0 - 1
    idx0 = {w: i for i, w in enumerate(measure.system.states)}
    pi = np.array([measure.cylinder_measure(w) for w in system.states])
    pi = pi / pi.sum()
    P = np.zeros((system.size, system.size))
    for i, j in system.edges():
        P[i, j] = measure.kernel[idx0[system.states[i][-k0:]], idx0[system.states[j][-k0:]]]
    return EquilibriumMeasure(system, pi, P, measure.log_lambda, measure.source)


def _kernel_error(measure: EquilibriumMeasure) -> tuple[float, float]:
    rows = np.abs(measure.kernel.sum(axis=1) - 1.0).max() + 2 * U
    pis = abs(measure.stationary.sum() - 1.0) + len(measure.stationary) * U
    return float(rows), float(pis)


# -- exact enumeration ----------------------------------------------------

def _uniform_degree(measure, system: EdgeSystem) -> int | None:
    """``k`` when the measure is provably uniform: constant phi on a ``k``-regular edge graph.

    Then ``lambda = k e^c`` with constant eigenvectors, so the kernel is
    exactly ``A / k`` and the stationary vector is uniform.
    """
    if not isinstance(measure, Potential) or len(set(measure.values.values())) != 1:
        return None
    A = system.adjacency
    out, into = A.sum(axis=1), A.sum(axis=0)
    k = int(out[0])
    if (out == k).all() and (into == k).all():
        return k
    return None


def _round_enclose(x: Fraction) -> tuple[float, float]:
    f = float(x)
    if Fraction(f) == x:
        return f, f
    return (f, math.nextafter(f, math.inf)) if Fraction(f) < x else (math.nextafter(f, -math.inf), f)


def exact_distribution(model: MarkovModel, measure, psi: Potential, n: int,
                       budget: int = DEFAULT_ENUM_BUDGET) -> SumDistribution:
    """Brute-force law of ``Psi^n`` by enumerating every admissible path.

    Atoms are merged by exact value for rational ``psi`` and within a
    relative ``1e-12`` otherwise.

    Raises
    ------
    ResourceError
        If the number of admissible words exceeds ``budget``; use
        :func:`dp_distribution` instead.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    system, meas = _system_and_measure(model, measure, psi)
    L = system.edge_length
    total = count_words(model, n + L - 1)
    if total > budget:
        raise ResourceError(
            f"exact enumeration needs {total} paths (budget {budget})",
            suggestion="use dp_distribution for this n",
        )
    S = system.size
    psi_w = system.weights[0]
    exact = system.weights_exact[0]
    k_uniform = _uniform_degree(measure, system)
    isum = None
    if exact is not None:
        den = reduce(math.lcm, (v.denominator for v in exact.values()), 1)
        iw = np.zeros((S, S), dtype=object)
        for (i, j), v in exact.items():
            iw[i, j] = int(v * den)
        big = max(abs(int(x)) for x in iw.ravel()) * n >= 2**62
        iw = iw if big else iw.astype(np.int64)
        isum = np.zeros(S, dtype=iw.dtype)
    succ = [np.nonzero(system.adjacency[i])[0] for i in range(S)]
    deg = np.array([len(s) for s in succ])
    indptr = np.concatenate([[0], np.cumsum(deg)])
    flat = np.concatenate(succ)

    state = np.arange(S)
    mass = meas.stationary.copy()
    ssum = np.zeros(S)
    comp = np.zeros(S)
    for _ in range(n):
        counts = deg[state]
        parent = np.repeat(np.arange(len(state)), counts)
        offs = np.arange(len(parent)) - np.repeat(np.cumsum(counts) - counts, counts)
        nxt = flat[indptr[state[parent]] + offs]
        prev = state[parent]
        mass = mass[parent] * meas.kernel[prev, nxt]
        v = psi_w[prev, nxt]
        # Kahan-compensated left-to-right accumulation
        y = v - comp[parent]
        t = ssum[parent] + y
        comp = (t - ssum[parent]) - y
        ssum = t
        if isum is not None:
            isum = isum[parent] + iw[prev, nxt]
        state = nxt

    entries, exact_vals = [], ([] if exact is not None else None)
    gmax = 1
    for j in range(S):
        sel = state == j
        if not sel.any():
            entries.append(StateEntries.empty())
            if exact_vals is not None:
                exact_vals.append([])
            continue
        m = mass[sel]
        if isum is not None:
            keys = isum[sel]
            uniq, inv = np.unique(keys, return_inverse=True)
            vals = np.array([int(k) / den for k in uniq], float)
            exact_vals.append([Fraction(int(k), den) for k in uniq])
        else:
            s = ssum[sel]
            order = np.argsort(s, kind="stable")
            s, m = s[order], m[order]
            brk = np.concatenate([[True], np.diff(s) > 1e-12 * np.maximum(1.0, np.abs(s[1:]))])
            inv = np.cumsum(brk) - 1
            vals = s[brk]
        z = np.zeros(len(vals))
        if k_uniform:
            # every path has mass 1 / (S k^n): count paths exactly
            den_paths = S * k_uniform**n
            lo, hi = zip(*(_round_enclose(Fraction(int(c), den_paths)) for c in np.bincount(inv)))
            entries.append(StateEntries(vals, z, np.array(lo), np.array(hi)))
            continue
        masses = np.bincount(inv, weights=m)
        gmax = max(gmax, int(np.bincount(inv).max()))
        entries.append(StateEntries(vals, z, masses, masses.copy()))
    if k_uniform:
        rel = 0.0
    else:
        ker, pis = _kernel_error(meas)
        rel = (n + 2 + gmax) * U * 1.01 + n * ker + pis
        for e in entries:
            e.mass_lo = e.mass_lo * (1 - rel)
            e.mass_hi = e.mass_hi * (1 + rel)
    return SumDistribution(n, "exact-atoms", 0.0, system.states, entries, 0.0, rel,
                           "enumeration", exact_vals, {"paths": total})


# -- lattice embeddings ---------------------------------------------------

@dataclass(frozen=True)
class Embedding:
    """Edge values written as ``sum_d coords[e][d] * basis[d] + residual[e]``."""

    kind: str
    basis: tuple[float, ...]
    coords: dict
    residual: dict
    den: int = 1

    @property
    def dims(self) -> int:
        return len(self.basis)


def _rational_embedding(system: EdgeSystem) -> Embedding | None:
    exact = system.weights_exact[0]
    if exact is None:
        return None
    den = reduce(math.lcm, (v.denominator for v in exact.values()), 1)
    coords = {e: (int(v * den),) for e, v in exact.items()}
    return Embedding("rational", (1.0 / den,), coords, {e: 0.0 for e in exact}, den)


def _commensurate(v: float, base: float) -> Fraction | None:
    r = Fraction(v / base).limit_denominator(PSLQ_MAXCOEFF)
    if abs(v - float(r) * base) <= PSLQ_TOL * max(1.0, abs(v)):
        return r
    return None


def _pslq_embedding(system: EdgeSystem) -> Embedding | None:
    edges = system.edges()
    W = system.weights[0]
    vals = sorted({float(W[e]) for e in edges})
    # values below the tolerance sit at coordinate 0 and stay in the residual
    tiny = PSLQ_TOL * max(1.0, max(abs(v) for v in vals))
    nonzero = [v for v in vals if abs(v) > tiny]
    if not nonzero:
        return Embedding("pslq", (1.0,), {e: (0,) for e in edges}, {e: 0.0 for e in edges})
    b0 = nonzero[0]
    rel1 = {v: _commensurate(v, b0) for v in vals}
    if all(r is not None for r in rel1.values()):
        den = reduce(math.lcm, (r.denominator for r in rel1.values()), 1)
        basis = (b0 / den,)
        table = {v: (int(rel1[v] * den),) for v in vals}
    else:
        b1 = next(v for v in nonzero if rel1[v] is None)
        table_q = {}
        with mpmath.workdps(30):
            for v in vals:
                if abs(v) <= tiny:
                    table_q[v] = (Fraction(0), Fraction(0))
                    continue
                try:
                    rel = mpmath.pslq([mpmath.mpf(v), mpmath.mpf(b0), mpmath.mpf(b1)],
                                      tol=PSLQ_TOL, maxcoeff=PSLQ_MAXCOEFF, maxsteps=10_000)
                except ValueError:
                    return None
                if rel is None or rel[0] == 0:
                    return None
                a, b, c = (int(x) for x in rel)
                table_q[v] = (Fraction(-b, a), Fraction(-c, a))
        d0 = reduce(math.lcm, (q[0].denominator for q in table_q.values()), 1)
        d1 = reduce(math.lcm, (q[1].denominator for q in table_q.values()), 1)
        basis = (b0 / d0, b1 / d1)
        table = {v: (int(q[0] * d0), int(q[1] * d1)) for v, q in table_q.items()}
    coords, resid = {}, {}
    for e in edges:
        v = float(W[e])
        c = table[v]
        approx = math.fsum(ci * bi for ci, bi in zip(c, basis))
        r = v - approx
        if abs(r) > PSLQ_TOL * max(1.0, abs(v)):
            return None
        coords[e], resid[e] = c, r
    return Embedding("pslq", basis, coords, resid)


def _grid_embedding(system: EdgeSystem, spacing: float) -> Embedding:
    coords, resid = {}, {}
    W = system.weights[0]
    for e in system.edges():
        v = float(W[e])
        k = int(round(v / spacing))
        coords[e] = (k,)
        resid[e] = v - k * spacing
    return Embedding("grid", (spacing,), coords, resid)


def _cells(emb: Embedding, n: int) -> tuple[list[int], list[int], int]:
    lo = [min(c[d] for c in emb.coords.values()) for d in range(emb.dims)]
    rng = [max(c[d] for c in emb.coords.values()) - lo[d] for d in range(emb.dims)]
    if emb.dims == 1:
        size = n * rng[0] + 1
    else:
        size = (n * rng[0]) * (n * rng[1] + 1) + n * rng[1] + 1
    return lo, rng, size


def choose_embedding(system: EdgeSystem, n: int, h: float, budget_bins: int,
                     method: str = "auto") -> Embedding:
    """Pick the cheapest exact embedding that fits the budget, else a grid."""
    S = system.size
    tried = []
    if method in ("auto", "rational"):
        emb = _rational_embedding(system)
        if emb is not None:
            tried.append(emb)
    if method in ("auto", "pslq"):
        emb = _pslq_embedding(system)
        if emb is not None:
            tried.append(emb)
    for emb in tried:
        if S * _cells(emb, n)[2] <= budget_bins:
            return emb
    if method in ("rational", "pslq") and not tried:
        raise DomainError(f"no {method} embedding exists for these edge values")
    if not h > 0:
        raise DomainError("bin width h must be positive")
    emb = _grid_embedding(system, h / n)
    need = S * _cells(emb, n)[2]
    if need > budget_bins:
        W = system.weights[0]
        span = max(float(W[e]) for e in system.edges()) - min(float(W[e]) for e in system.edges())
        h_ok = S * span * n * n / budget_bins * 1.05
        raise ResourceError(
            f"grid of {need} cells exceeds the bin budget {budget_bins}",
            suggestion=f"use h >= {h_ok:.3g} or raise --budget-bins",
        )
    return emb


# -- dynamic program --------------------------------------------------------

def dp_distribution(model: MarkovModel, measure, psi: Potential, n: int, h: float,
                    budget_bins: int = DEFAULT_BUDGET_BINS, method: str = "auto") -> SumDistribution:
    """Bracketed law of ``Psi^n`` by dynamic programming over lattice cells.

    Edge values are embedded in an integer lattice (exact rational, a PSLQ
    basis of rank <= 2, or a grid of spacing ``h/n`` with bounded residuals),
    so each cell is an atom or an interval of width at most ``h``.  Masses
    are propagated with in-place BLAS updates on a growing active prefix.

    Raises
    ------
    ResourceError
        If the lattice exceeds ``budget_bins`` cells.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    system, meas = _system_and_measure(model, measure, psi)
    emb = choose_embedding(system, n, h, budget_bins, method)
    lo_c, rng, size = _cells(emb, n)
    S = system.size
    radix = n * rng[1] + 1 if emb.dims == 2 else 1
    flat_off = {}
    for e, c in emb.coords.items():
        o = [c[d] - lo_c[d] for d in range(emb.dims)]
        flat_off[e] = o[0] * radix + (o[1] if emb.dims == 2 else 0)
    max_off = max(flat_off.values())
    preds = [[(i, flat_off[(i, j)], float(meas.kernel[i, j]))
              for i in range(S) if system.adjacency[i, j]] for j in range(S)]
    indeg = max(len(p) for p in preds)

    cur = np.zeros((S, size))
    new = np.zeros((S, size))
    cur[:, 0] = meas.stationary
    active = 1
    ops = 0
    for _ in range(n):
        nact = min(size, active + max_off)
        new[:, :nact] = 0.0
        for j in range(S):
            row = new[j]
            for i, off, pij in preds[j]:
                # rows are contiguous, so daxpy updates them in place
                blas.daxpy(cur[i], row, n=active, a=pij, offx=0, offy=off)
                ops += active
        cur, new = new, cur
        active = nact

    ker, pis = _kernel_error(meas)
    rel = n * ((indeg + 1) * U + ker) + pis
    stray = 2 * ops * TINY
    rmin = min(emb.residual.values())
    rmax = max(emb.residual.values())
    rmin, rmax = min(rmin, 0.0), max(rmax, 0.0)
    exact_atoms = emb.kind == "rational"
    pow2 = emb.den & (emb.den - 1) == 0
    entries, exact_vals = [], ([] if exact_atoms else None)
    for j in range(S):
        idx = np.flatnonzero(cur[j, :active])
        m = cur[j, idx]
        if emb.dims == 1:
            k = idx + n * lo_c[0]
            center = k * emb.basis[0]
            mag = np.abs(center)
        else:
            k1 = idx // radix + n * lo_c[0]
            k2 = idx % radix + n * lo_c[1]
            a1, a2 = k1 * emb.basis[0], k2 * emb.basis[1]
            center = a1 + a2
            mag = np.abs(a1) + np.abs(a2)
        if exact_atoms and pow2:
            pad = np.zeros_like(center)
        else:
            pad = 4 * U * mag + n * 4 * U * max(abs(rmin), abs(rmax)) + TINY
        lower = center + n * rmin - pad
        width = (n * rmax - n * rmin) + 2 * pad
        entries.append(StateEntries(lower, width, m * (1 - rel), m * (1 + rel)))
        if exact_atoms:
            exact_vals.append([Fraction(int(v), emb.den) for v in k])
    stats = {"cells": int(S * size), "ops": int(ops), "basis": [float(b) for b in emb.basis],
             "residual_range": [float(rmin), float(rmax)]}
    return SumDistribution(n, "bracketed-bins", float(h), system.states, entries, stray, rel,
                           emb.kind, exact_vals, stats)


# -- windows --------------------------------------------------------------

def window_measure(dist: SumDistribution, p: float, delta: float) -> WindowMeasure:
    """Enclosure of the mass of ``Psi^n / n`` in the open window ``(p - delta, p + delta)``."""
    a, b = dist.n * (p - delta), dist.n * (p + delta)
    return window_measure_sum(dist, a, b)


def window_measure_sum(dist: SumDistribution, a: float, b: float) -> WindowMeasure:
    """Enclosure of the mass of ``Psi^n`` in the open interval ``(a, b)``."""
    m = dist.merged()
    if not len(m):
        return WindowMeasure(0.0, dist.stray_hi, True)
    upper = m.lower + m.width
    vlo, vhi = float(m.lower.min()), float(upper.max())
    if b <= vlo or a >= vhi:
        return WindowMeasure(0.0, 0.0, True)
    inside = (m.lower > a) & (upper < b)
    touch = (upper > a) & (m.lower < b)
    lo = math.fsum(m.mass_lo[inside].tolist())
    hi = math.fsum(m.mass_hi[touch].tolist()) + dist.stray_hi
    return WindowMeasure(lo, hi, False)


def check_against_exact(dp: SumDistribution, exact: SumDistribution, tol: float = 0.0) -> list[str]:
    """CDF sandwich per terminal state; returns a list of violations (empty when consistent).

    For every threshold ``t``: mass of entries ending below ``t`` (lower
    bound) cannot exceed the exact mass below ``t`` (upper bound), and the
    exact mass at or below ``t`` (lower bound) cannot exceed the mass of
    entries starting at or below ``t`` (upper bound, plus stray mass).
    """
    if dp.states != exact.states:
        raise ModelError("distributions are on different edge graphs")
    bad = []
    for j, (d, x) in enumerate(zip(dp.entries, exact.entries)):
        if not len(d) and not len(x):
            continue
        upper = d.lower + d.width
        thr = np.unique(np.concatenate([x.lower, d.lower, upper]))
        order_u = np.argsort(upper)
        cum_lo_u = np.concatenate([[0.0], np.cumsum(d.mass_lo[order_u])])
        order_l = np.argsort(d.lower)
        cum_hi_l = np.concatenate([[0.0], np.cumsum(d.mass_hi[order_l])])
        xs = np.argsort(x.lower)
        xv = x.lower[xs]
        cum_xlo = np.concatenate([[0.0], np.cumsum(x.mass_lo[xs])])
        cum_xhi = np.concatenate([[0.0], np.cumsum(x.mass_hi[xs])])
        su = upper[order_u]
        sl = d.lower[order_l]
        for t in thr:
            dp_below = cum_lo_u[np.searchsorted(su, t, side="left")]
            ex_below = cum_xhi[np.searchsorted(xv, t, side="left")]
            if dp_below > ex_below * (1 + 1e-12) + tol:
                bad.append(f"state {j}: lower CDF bound {dp_below!r} > exact {ex_below!r} below {t!r}")
            dp_upto = cum_hi_l[np.searchsorted(sl, t, side="right")] + dp.stray_hi
            ex_upto = cum_xlo[np.searchsorted(xv, t, side="right")]
            if ex_upto > dp_upto * (1 + 1e-12) + tol:
                bad.append(f"state {j}: exact {ex_upto!r} > upper CDF bound {dp_upto!r} at {t!r}")
    return bad


# -- snapshots ----------------------------------------------------------------

def snapshot_bytes(dist: SumDistribution) -> bytes:
    """Serialize to the ``LDPD`` layout (see README)."""
    head = [float(dist.n), float(dist.h), float(len(dist.states)), float(dist.stray_hi),
            float(dist.rel_err), float(_MODE_CODES[dist.mode]), float(_EMBED_CODES[dist.embedding])]
    parts = [SNAPSHOT_MAGIC, bytes([SNAPSHOT_VERSION]), np.asarray(head, "<f8").tobytes()]
    for e in dist.entries:
        parts.append(np.asarray([float(len(e))], "<f8").tobytes())
        for arr in (e.lower, e.width, e.mass_lo, e.mass_hi):
            parts.append(np.asarray(arr, "<f8").tobytes())
    return b"".join(parts)


def snapshot_from_bytes(data: bytes, states: Sequence | None = None) -> SumDistribution:
    if data[:4] != SNAPSHOT_MAGIC:
        raise ModelError("not an LDPD snapshot (bad magic)")
    if data[4] != SNAPSHOT_VERSION:
        raise ModelError(f"unsupported LDPD version {data[4]}")
    arr = np.frombuffer(data[5:], "<f8")
    n, h, S, stray, rel, mode, embc = arr[:7]
    pos = 7
    entries = []
    for _ in range(int(S)):
        c = int(arr[pos])
        pos += 1
        cols = [arr[pos + k * c : pos + (k + 1) * c].copy() for k in range(4)]
        pos += 4 * c
        entries.append(StateEntries(*cols))
    if pos != len(arr):
        raise ModelError("LDPD snapshot has trailing or missing data")
    modes = {v: k for k, v in _MODE_CODES.items()}
    embs = {v: k for k, v in _EMBED_CODES.items()}
    states = tuple(states) if states is not None else tuple((i,) for i in range(int(S)))
    return SumDistribution(int(n), modes[int(mode)], float(h), states, entries, float(stray), float(rel),
                           embs[int(embc)])


def save_snapshot(dist: SumDistribution, path) -> None:
    Path(path).write_bytes(snapshot_bytes(dist))


def load_snapshot(path, states: Sequence | None = None) -> SumDistribution:
    return snapshot_from_bytes(Path(path).read_bytes(), states)
