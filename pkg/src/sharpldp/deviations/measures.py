"""Smoothed window functionals and their Fourier-side evaluation.

``rho(n) = int chi((Psi^n - n p) / eps) dmu`` is computed two ways: directly
from a :class:`SumDistribution` with certified enclosures, and through the
inverse Fourier transform of ``chi`` against the moment generating function
of ``Psi^n - n p`` along the line ``xi + i u``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..potentials import EdgeSystem, Potential
from ..sft import MarkovModel
from ..thermo import EquilibriumMeasure
from .cutoff import CutoffFunction
from .distribution import SumDistribution, _system_and_measure

_GL16_X, _GL16_W = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class FourierRho:
    value: float
    error: float
    quad_error: float
    tail_bound: float
    U: float
    panels: int
    xi: float
    widened: bool = False


def rho_from_distribution(dist: SumDistribution, chi: CutoffFunction, center: float,
                          eps: float) -> tuple[float, float]:
    """Enclosure of ``sum mass * chi((x - center) / eps)``.

    ``chi`` is even and nonincreasing in ``|x|``, so its range over an entry's
    interval is bracketed by its values at the nearest and farthest points.
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    m = dist.merged()
    t0 = (m.lower - center) / eps
    t1 = (m.lower + m.width - center) / eps
    near = np.where((t0 <= 0) & (t1 >= 0), 0.0, np.minimum(np.abs(t0), np.abs(t1)))
    far = np.maximum(np.abs(t0), np.abs(t1))
    lo = math.fsum((m.mass_lo * chi(far)).tolist())
    hi = math.fsum((m.mass_hi * chi(near)).tolist()) + dist.stray_hi * chi.amp
    return lo, hi


def _kernel_batch(measure: EquilibriumMeasure, psi: np.ndarray, z: np.ndarray) -> np.ndarray:
    mask = measure.kernel > 0
    ex = np.exp(z[:, None, None] * np.where(mask, psi, 0.0)[None])
    return np.where(mask[None], measure.kernel[None] * ex, 0.0)


def log_mgf(measure: EquilibriumMeasure, psi: np.ndarray, z, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(log scale, mantissa)`` with ``E[exp(z Psi^n)] = exp(scale) * mantissa``.

    ``psi`` is an edge table on ``measure.system``; ``z`` may be an array.
    """
    z = np.atleast_1d(np.asarray(z, complex))
    K = _kernel_batch(measure, psi, z)
    # K^n 1 by scaled binary powering
    v = np.ones((len(z), K.shape[1], 1), complex)
    scale = np.zeros(len(z))
    Kscale = np.zeros(len(z))
    m = n
    while m:
        if m & 1:
            v = K @ v
            s = _rescale(v)
            scale += np.log(s) + Kscale
        m >>= 1
        if m:
            K = K @ K
            s = _rescale(K)
            Kscale = 2 * Kscale + np.log(s)
    return scale, v[:, :, 0] @ measure.stationary


def _rescale(a: np.ndarray) -> np.ndarray:
    s = np.abs(a).reshape(len(a), -1).max(axis=1)
    s = np.where(s > 0, s, 1.0)
    a /= s[:, None, None]
    return s


def mgf_edges(measure: EquilibriumMeasure, psi: np.ndarray, z, n: int) -> np.ndarray:
    scale, mant = log_mgf(measure, psi, z, n)
    return np.exp(scale) * mant


def mgf(model: MarkovModel, phi, psi: Potential, z, n: int, p: float = 0.0) -> np.ndarray:
    """``int exp(z (Psi^n - n p)) dmu_phi`` for complex ``z``.

    ``phi`` is the potential defining the measure or an
    :class:`EquilibriumMeasure`.
    """
    system, meas = _system_and_measure(model, phi, psi)
    return mgf_edges(meas, _centered(system, p), z, n)


def _centered(system: EdgeSystem, p: float) -> np.ndarray:
    return np.where(system.adjacency > 0, system.weights[0] - p, 0.0)


def fourier_rho(model: MarkovModel, phi, psi: Potential, p: float, chi: CutoffFunction, n: int,
                eps: float, xi: float = 0.0, tail_tol: float = 1e-11, quad_tol: float = 1e-11,
                u_max: float = 2e4, max_nodes: int = 4_000_000) -> FourierRho:
    """``rho(n)`` from the inverse transform along ``Im`` shift ``xi``.

    ``rho = G (eps / pi) int_0^inf Re[(M(xi + i u) / G) chi_hat(eps (u - i xi))] du``
    with ``M`` the moment generating function of ``Psi^n - n p`` and
    ``G = M(xi)``.  The integral is truncated at ``U`` from the decay bound of
    ``chi_hat`` (using ``|M(xi + i u)| <= G``), and composite Gauss-Legendre
    panels are halved until successive estimates agree.  Tolerances are
    relative to ``G * eps``.
    """
    system, meas = _system_and_measure(model, phi, psi)
    psi_p = _centered(system, p)
    return fourier_rho_edges(meas, psi_p, chi, n, eps, xi, tail_tol, quad_tol, u_max, max_nodes)


def fourier_rho_edges(meas: EquilibriumMeasure, psi_p: np.ndarray, chi: CutoffFunction, n: int,
                      eps: float, xi: float = 0.0, tail_tol: float = 1e-11, quad_tol: float = 1e-11,
                      u_max: float = 2e4, max_nodes: int = 4_000_000) -> FourierRho:
    if not eps > 0:
        raise DomainError("eps must be positive")
    logG, mG = log_mgf(meas, psi_p, np.array([xi]), n)
    G_scale, G_mant = float(logG[0]), float(mG[0].real)
    j = chi.k + 1
    amp = math.exp(eps * abs(xi) * chi.support) * chi.derivative_l1(j)
    # tail ≤ (1/pi) amp eps^(1-j) U^(1-j) / (j-1), relative to G*eps
    tail_of = lambda U: amp * eps ** (-j) * U ** (1 - j) / ((j - 1) * math.pi)
    U = (amp * eps ** (-j) / ((j - 1) * math.pi * tail_tol)) ** (1.0 / (j - 1))
    widened = False
    if U > u_max:
        U, widened = u_max, True
    tail = tail_of(U)
    spread = float(np.abs(psi_p[meas.kernel > 0]).max()) if (meas.kernel > 0).any() else 0.0
    width = 4.0 / max(1.0, math.sqrt(n) * spread, eps * chi.support)
    panels = max(4, int(math.ceil(U / width)))

    def integrate(npan: int) -> float:
        edges = np.linspace(0.0, U, npan + 1)
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        nodes = (mid[:, None] + half[:, None] * _GL16_X[None]).ravel()
        weights = (half[:, None] * _GL16_W[None]).ravel()
        total = 0.0
        for start in range(0, len(nodes), 20000):
            u = nodes[start : start + 20000]
            sc, mt = log_mgf(meas, psi_p, xi + 1j * u, n)
            ratio = np.exp(sc - G_scale) * mt / G_mant
            vals = (ratio * chi.fourier(eps * (u - 1j * xi))).real
            total += math.fsum((vals * weights[start : start + 20000]).tolist())
        return total

    q1 = integrate(panels)
    while True:
        q2 = integrate(2 * panels)
        err = abs(q2 - q1)
        if err <= quad_tol or 32 * panels > max_nodes:
            break
        panels *= 2
        q1 = q2
    if err > quad_tol:
        widened = True
    factor = math.exp(G_scale) * G_mant * eps / math.pi
    value = factor * q2
    err_q, err_t = factor * err, factor * tail
    return FourierRho(value, err_q + err_t, err_q, err_t, U, 2 * panels, xi, widened)
