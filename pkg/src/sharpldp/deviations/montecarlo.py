"""Seeded Monte Carlo estimates of window probabilities (exploration only)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import binomtest

from ..errors import DomainError
from ..potentials import Potential
from ..sft import MarkovModel
from .distribution import _system_and_measure


@dataclass(frozen=True)
class MonteCarloEstimate:
    hits: int
    samples: int
    estimate: float
    ci_lo: float
    ci_hi: float
    confidence: float
    seed: int


def sample_sums(model: MarkovModel, measure, psi: Potential, n: int, samples: int,
                seed: int = 0) -> np.ndarray:
    """``samples`` draws of ``Psi^n`` under the equilibrium measure."""
    if n < 1 or samples < 1:
        raise DomainError("n and samples must be >= 1")
    system, meas = _system_and_measure(model, measure, psi)
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(meas.kernel, axis=1)
    cdf[:, -1] = 1.0
    psi_e = system.weights[0]
    state = np.searchsorted(np.cumsum(meas.stationary), rng.random(samples) * meas.stationary.sum())
    state = np.minimum(state, system.size - 1)
    total = np.zeros(samples)
    for _ in range(n):
        nxt = (rng.random(samples)[:, None] > cdf[state]).sum(axis=1)
        total += psi_e[state, nxt]
        state = nxt
    return total


def window_probability(model: MarkovModel, measure, psi: Potential, n: int, p: float, delta: float,
                       samples: int = 100_000, seed: int = 0,
                       confidence: float = 0.95) -> MonteCarloEstimate:
    """Fraction of ``Psi^n / n`` in ``(p - delta, p + delta)`` with a Wilson interval."""
    sums = sample_sums(model, measure, psi, n, samples, seed) / n
    hits = int(np.count_nonzero((sums > p - delta) & (sums < p + delta)))
    ci = binomtest(hits, samples).proportion_ci(confidence, method="wilson")
    return MonteCarloEstimate(hits, samples, hits / samples, float(ci.low), float(ci.high), confidence, seed)
