"""Pressure, equilibrium measures, entropy and the derivatives of the pressure curve."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, ConvergenceError
from .potentials import EdgeSystem, Potential, edge_form
from .sft import MarkovModel, require_primitive
from .transfer import operator_from_edges, perron


@dataclass(frozen=True)
class EquilibriumMeasure:
    """Markov realization ``(pi, P)`` of the equilibrium state on the edge graph.

    States are the ``(L-1)``-words of ``system``; ``pi`` is stationary for
    the kernel ``P``.
    """

    system: EdgeSystem
    stationary: np.ndarray
    kernel: np.ndarray
    log_lambda: float
    source: str = ""

    def cylinder_measure(self, word: Sequence[int]) -> float:
        """Measure of the cylinder of sequences starting with ``word``."""
        word = tuple(word)
        k = self.system.edge_length - 1
        model = self.system.model
        if not model.is_admissible(word):
            return 0.0
        index = {w: i for i, w in enumerate(self.system.states)}
        if len(word) < k:
            return float(sum(self.stationary[i] for i, w in enumerate(self.system.states)
                             if w[: len(word)] == word))
        state = index[word[:k]]
        mass = self.stationary[state]
        for t in range(k, len(word)):
            nxt = index[word[t - k + 1 : t + 1]]
            mass *= self.kernel[state, nxt]
            state = nxt
        return float(mass)

    def integrate(self, weights: np.ndarray) -> float:
        """Expectation of an edge function (array indexed [from, to])."""
        return float(np.einsum("i,ij,ij->", self.stationary, self.kernel, weights))


@dataclass(frozen=True)
class PressureCurve:
    q_grid: np.ndarray
    values: np.ndarray
    d1: np.ndarray
    d2: np.ndarray

    def is_convex(self, tol: float = 1e-9) -> bool:
        return bool((np.diff(self.values, 2) >= -tol).all())


def _measure_from_edges(system: EdgeSystem, g: np.ndarray, source: str = "") -> EquilibriumMeasure:
    op = operator_from_edges(system, g)
    data = perron(op)
    B = op.entries.T
    l, r = data.left, data.right
    P = B * l[None, :] / (data.lam * l[:, None])
    P = P / P.sum(axis=1, keepdims=True)
    pi = r * l
    pi = pi / pi.sum()
    return EquilibriumMeasure(system, pi, P, math.log(data.lam), source)


def pressure(model: MarkovModel, g: Potential) -> float:
    """Topological pressure ``log lambda(L_g)``."""
    require_primitive(model)
    system = edge_form(model, g)
    return math.log(perron(operator_from_edges(system, system.weights[0])).lam)


def pressure_of_edges(system: EdgeSystem, g: np.ndarray) -> float:
    return math.log(perron(operator_from_edges(system, g)).lam)


def equilibrium_measure(model: MarkovModel, g: Potential, edge_length: int | None = None) -> EquilibriumMeasure:
    """Equilibrium (Gibbs-Markov) measure of ``g``.

    ``P[i, j] = B[i, j] l_j / (lambda l_i)`` and ``pi_i = r_i l_i`` where
    ``B = M^T`` and ``l``, ``r`` are the Perron vectors of ``M``.
    """
    require_primitive(model)
    system = edge_form(model, g, edge_length=edge_length)
    return _measure_from_edges(system, system.weights[0], g.name)


def entropy(measure: EquilibriumMeasure) -> float:
    """Kolmogorov-Sinai entropy ``-sum pi_i P_ij log P_ij``."""
    P = measure.kernel
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(P > 0, P * np.log(np.where(P > 0, P, 1.0)), 0.0)
    return float(-(measure.stationary[:, None] * terms).sum())


def _fundamental(measure: EquilibriumMeasure) -> np.ndarray:
    P, pi = measure.kernel, measure.stationary
    n = P.shape[0]
    Z = np.eye(n) - P + np.outer(np.ones(n), pi)
    try:
        return np.linalg.inv(Z)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError("fundamental matrix is singular") from exc


def asymptotic_variance(measure: EquilibriumMeasure, psi: np.ndarray, mean: float | None = None) -> float:
    """Central-limit variance of the edge function ``psi`` under ``measure``.

    Solves the Poisson equation ``(I - P) h = fbar`` through the fundamental
    matrix and returns ``E[(psibar_ij + h_j - h_i)^2]``, a sum of
    nonnegative terms.
    """
    P, pi = measure.kernel, measure.stationary
    if mean is None:
        mean = measure.integrate(psi)
    pbar = np.where(P > 0, psi - mean, 0.0)
    fbar = (P * pbar).sum(axis=1)
    h = _fundamental(measure) @ fbar
    resid = pbar + h[None, :] - h[:, None]
    return float(np.einsum("i,ij,ij->", pi, P, resid * resid))


def derivatives_of_edges(system: EdgeSystem, phi: np.ndarray, psi: np.ndarray, q: float):
    measure = _measure_from_edges(system, phi + q * psi)
    d1 = measure.integrate(psi)
    d2 = asymptotic_variance(measure, psi, d1)
    return measure.log_lambda, d1, d2, measure


def pressure_derivatives(model: MarkovModel, phi: Potential, psi: Potential, q: float):
    """``(Pr(phi + q psi), d/dq, d^2/dq^2)``.

    The first derivative is the equilibrium mean of ``psi`` and the second is
    its central-limit variance, both under ``m_{phi + q psi}``.
    """
    require_primitive(model)
    system = edge_form(model, phi, psi)
    pr, d1, d2, _ = derivatives_of_edges(system, system.weights[0], system.weights[1], q)
    return pr, d1, d2


def pressure_curve(model: MarkovModel, phi: Potential, psi: Potential, q_grid) -> PressureCurve:
    system = edge_form(model, phi, psi)
    rows = [derivatives_of_edges(system, system.weights[0], system.weights[1], float(q))[:3]
            for q in q_grid]
    arr = np.array(rows)
    return PressureCurve(np.asarray(q_grid, float), arr[:, 0], arr[:, 1], arr[:, 2])


def pressure_fd(model: MarkovModel, phi: Potential, psi: Potential, q: float, h: float = 1e-3):
    """Richardson-extrapolated central differences of ``q -> Pr(phi + q psi)``.

    Independent of the closed-form derivative path; used as a cross-check.
    """
    system = edge_form(model, phi, psi)
    f = lambda t: pressure_of_edges(system, system.weights[0] + t * system.weights[1])
    f0 = f(q)

    def d1(s):
        return (f(q + s) - f(q - s)) / (2 * s)

    def d2(s):
        return (f(q + s) - 2 * f0 + f(q - s)) / (s * s)

    return f0, (4 * d1(h / 2) - d1(h)) / 3, (4 * d2(h / 2) - d2(h)) / 3


def variational_gap(model: MarkovModel, g: Potential) -> float:
    """``h(m_g) + int g dm_g - Pr(g)``; zero up to rounding."""
    m = equilibrium_measure(model, g)
    return entropy(m) + m.integrate(m.system.weights[0]) - m.log_lambda


def check_variational(model: MarkovModel, g: Potential, tol: float = 1e-9) -> None:
    gap = variational_gap(model, g)
    if abs(gap) > tol:
        raise ConsistencyError(f"variational identity off by {gap:.3e}")
