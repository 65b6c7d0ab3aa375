"""Suspension-flow observables over a symbolic base.

A roof function ``tau`` (positive potential) turns the shift into a flow
time.  An orbit profile ``G(w, t)``, ``0 <= t <= tau(w)``, is an observable
along the flow line over the cylinder ``w``; integrating it over one return
gives a base potential ``Psi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DomainError, ModelError
from .potentials import Potential, birkhoff_sum
from .sft import Word, admissible_words


@dataclass(frozen=True)
class Ramp:
    """Smooth ramp ``lam`` with ``lam(0) = 0``, ``lam(1) = 1`` and flat ends."""

    name: str
    lam: Callable[[float], float]
    dlam: Callable[[float], float]
    d2lam_max: float
    dlam_max: float


SMOOTHSTEP = Ramp(
    "smoothstep",
    lambda s: 3 * s * s - 2 * s**3,
    lambda s: 6 * s - 6 * s * s,
    6.0,
    1.5,
)

QUINTIC = Ramp(
    "quintic",
    lambda s: s**3 * (10 - 15 * s + 6 * s * s),
    lambda s: 30 * s * s * (1 - s) ** 2,
    30.0 / (3 * math.sqrt(3)),  # max |60s - 180s^2 + 120s^3| at s = (3 -+ sqrt3)/6
    1.875,
)

RAMPS = {r.name: r for r in (SMOOTHSTEP, QUINTIC)}


class RoofFunction:
    """Positive potential used as first-return time."""

    def __init__(self, potential: Potential):
        if potential.min_value <= 0:
            raise DomainError(f"roof function {potential.name!r} must be positive")
        self.potential = potential
        self.tau_min = potential.min_value
        self.tau_max = potential.max_value

    @property
    def memory(self) -> int:
        return self.potential.memory

    def __call__(self, word: Sequence[int]) -> float:
        return self.potential.value(word)


@dataclass
class OrbitProfile:
    """Observable along flow lines, one block per cylinder of ``memory`` symbols.

    kind ``constant``: ``G = A``.  ``bump``: ``G = A + (Psi(w)/tau(w) - A) lam'(t/tau(w))``.
    ``g0``: ``G = lam'(t/tau(w)) / tau(w)``.  ``sampled``: piecewise-linear
    knots ``[(t, value), ...]`` per block, covering ``[0, tau(w)]``.
    """

    kind: str
    memory: int
    A: float = 0.0
    target: Potential | None = None
    ramp: Ramp = SMOOTHSTEP
    knots: Mapping[Word, Sequence[tuple[float, float]]] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("constant", "bump", "g0", "sampled"):
            raise ModelError(f"unknown profile kind {self.kind!r}")

    def _coef(self, word: Word, tau: RoofFunction) -> float:
        return self.target.value(word) / tau(word) - self.A

    def value(self, word: Sequence[int], t: float, tau: RoofFunction) -> float:
        """``G`` at flow time ``t`` above the base point starting with ``word``."""
        word = tuple(word[: self.memory])
        T = tau(word)
        if self.kind == "constant":
            return self.A
        if self.kind == "bump":
            return self.A + self._coef(word, tau) * self.ramp.dlam(t / T)
        if self.kind == "g0":
            return self.ramp.dlam(t / T) / T
        ts, vs = self._knots(word)
        return float(np.interp(t, ts, vs))

    def _knots(self, word: Word):
        if word not in self.knots:
            raise DomainError(f"sampled profile undefined on block {word!r}")
        ts, vs = zip(*self.knots[word])
        return np.asarray(ts, float), np.asarray(vs, float)

    def block_integral(self, word: Sequence[int], tau: RoofFunction, upto: float | None = None,
                       order: int = 16) -> float:
        """Integral of ``G`` over ``[0, upto]`` on one block (closed form where available)."""
        word = tuple(word[: self.memory])
        T = tau(word)
        t = T if upto is None else upto
        if self.kind == "constant":
            return self.A * t
        if self.kind == "bump":
            return self.A * t + self._coef(word, tau) * T * (self.ramp.lam(t / T) - self.ramp.lam(0.0))
        if self.kind == "g0":
            return self.ramp.lam(t / T) - self.ramp.lam(0.0)
        return _piecewise_quad(lambda s: self.value(word, s, tau), self._knots(word)[0], 0.0, t, order)


def _gauss(order: int):
    return np.polynomial.legendre.leggauss(order)


def _quad(fn, a: float, b: float, order: int) -> float:
    if b <= a:
        return 0.0
    x, w = _gauss(order)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * math.fsum(wi * fn(mid + half * xi) for xi, wi in zip(x, w))


def _piecewise_quad(fn, breaks, a: float, b: float, order: int) -> float:
    pts = sorted({a, b, *[float(t) for t in breaks if a < t < b]})
    return math.fsum(_quad(fn, lo, hi, order) for lo, hi in zip(pts, pts[1:]))


def _common_memory(profile: OrbitProfile, tau: RoofFunction) -> int:
    m = max(profile.memory, tau.memory)
    if profile.target is not None:
        m = max(m, profile.target.memory)
    return m


def psi_from_profile(profile: OrbitProfile, tau: RoofFunction, order: int = 8) -> Potential:
    """Return-time integral ``Psi(w) = int_0^tau(w) G dt`` as a potential.

    Constant, bump and g0 kinds use closed forms; sampled profiles use
    Gauss-Legendre of the given order on each linear piece.
    """
    if tau.tau_min <= 0:
        raise DomainError("roof function must be positive")
    model = tau.potential.model
    m = _common_memory(profile, tau)
    values = {w: profile.block_integral(w, tau, order=order) for w in admissible_words(model, m)}
    return Potential(model, m, values, f"int[{profile.kind}]")


def build_bump_observable(target: Potential, tau: RoofFunction, A: float, ramp: Ramp = SMOOTHSTEP) -> OrbitProfile:
    """Profile equal to ``A`` at both block ends whose return integral is ``target``."""
    m = max(target.memory, tau.memory)
    return OrbitProfile("bump", m, A=float(A), target=target, ramp=ramp)


def profile_range(profile: OrbitProfile, tau: RoofFunction, samples: int = 257) -> tuple[float, float]:
    """Min and max of ``G`` over all blocks."""
    model = tau.potential.model
    m = _common_memory(profile, tau)
    lo, hi = math.inf, -math.inf
    for w in admissible_words(model, m):
        if profile.kind == "bump":
            c = profile._coef(w, tau)
            ext = (profile.A, profile.A + c * profile.ramp.dlam_max)
        elif profile.kind == "constant":
            ext = (profile.A, profile.A)
        else:
            ts = np.linspace(0.0, tau(w), samples)
            if profile.kind == "sampled":
                ts = np.union1d(ts, profile._knots(w[: profile.memory])[0])
            vals = [profile.value(w, t, tau) for t in ts]
            ext = (min(vals), max(vals))
        lo, hi = min(lo, *ext), max(hi, *ext)
    return lo, hi


@dataclass(frozen=True)
class SampledObservable:
    """``G`` sampled on a grid of each block, for difference-quotient diagnostics."""

    blocks: Mapping[Word, tuple[np.ndarray, np.ndarray]]

    def lipschitz_data(self) -> tuple[float, float, str]:
        lip, lo = 0.0, math.inf
        for ts, vs in self.blocks.values():
            dt = np.diff(ts)
            keep = dt > 0
            if keep.any():
                lip = max(lip, float(np.max(np.abs(np.diff(vs)[keep]) / dt[keep])))
            lo = min(lo, float(vs.min()))
        return lip, lo, "flow-time distance within a block"


def discretize(profile: OrbitProfile, tau: RoofFunction, samples: int = 513) -> SampledObservable:
    model = tau.potential.model
    m = _common_memory(profile, tau)
    blocks = {}
    for w in admissible_words(model, m):
        ts = np.linspace(0.0, tau(w), samples)
        blocks[w] = (ts, np.array([profile.value(w, t, tau) for t in ts]))
    return SampledObservable(blocks)


def orbit_integral(profile: OrbitProfile, tau: RoofFunction, word: Sequence[int], T: float,
                   order: int = 8) -> float:
    """Integral of ``G`` along the flow line over ``word`` for flow time ``T``.

    Evaluated pointwise with Gauss-Legendre on each block (and on each linear
    piece of a sampled profile), independently of the closed forms.

    Raises
    ------
    DomainError
        If ``word`` is too short to cover flow time ``T``.
    """
    word = tuple(word)
    m = _common_memory(profile, tau)
    total, start, j = [], 0.0, 0
    while T - start > 1e-13 * max(T, 1.0):
        if j + m > len(word):
            raise DomainError(f"word of length {len(word)} too short for flow time {T}")
        block = word[j : j + m]
        length = tau(block)
        span = min(length, T - start)
        breaks = profile._knots(block[: profile.memory])[0] if profile.kind == "sampled" else ()
        total.append(_piecewise_quad(lambda s: profile.value(block, s, tau), breaks, 0.0, span, order))
        start += length
        j += 1
    return math.fsum(total)


def verify_return_identity(profile: OrbitProfile, tau: RoofFunction, n: int,
                           words: Sequence[Sequence[int]], order: int = 8) -> float:
    """Max over ``words`` of ``|int_0^{tau^n} G - Psi^n|``."""
    psi = psi_from_profile(profile, tau, order=order)
    m = _common_memory(profile, tau)
    worst = 0.0
    for w in words:
        if len(w) < n + m - 1:
            raise DomainError(f"word of length {len(w)} too short for n={n}")
        T = birkhoff_sum(tau.potential, w, n)
        left = orbit_integral(profile, tau, w[: n + m - 1], T, order)
        right = birkhoff_sum(psi, w, n)
        worst = max(worst, abs(left - right))
    return worst
