"""Admissible mean interval, the dual parameter xi_p, and the rate function J."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import brent

from .errors import ConsistencyError, DegenerateError, DomainError
from .potentials import Potential, edge_form
from .sft import MarkovModel, cycle_mean_extremes, higher_block_recode, require_primitive
from .thermo import derivatives_of_edges, pressure_of_edges

GUARD = 1e-9
XI_TOL = 1e-11
J_AGREE = 1e-9


@dataclass(frozen=True)
class MeanInterval:
    """Closed range ``[lo, hi]`` of ergodic averages and its guarded interior."""

    lo: float
    hi: float
    interior_lo: float
    interior_hi: float
    degenerate: bool
    lo_exact: Fraction | None = None
    hi_exact: Fraction | None = None

    def contains(self, p: float) -> bool:
        return self.interior_lo < p < self.interior_hi


@dataclass(frozen=True)
class RateSample:
    p: float
    xi_p: float
    J: float
    sigma2_at_xi: float
    pressure_at_xi: float
    J_inf: float


def mean_interval(model: MarkovModel, psi: Potential) -> MeanInterval:
    """Extreme cycle means of ``psi`` on its recoded edge graph."""
    L = max(2, psi.memory)
    system = edge_form(model, psi, edge_length=L)
    recoded, _ = higher_block_recode(model, L - 1)
    if psi.exact is not None:
        weights = system.weights_exact[0]
    else:
        weights = {e: float(system.weights[0][e]) for e in system.edges()}
    lo, hi = cycle_mean_extremes(recoded, weights)
    lo_f, hi_f = float(lo), float(hi)
    margin = GUARD * (hi_f - lo_f)
    ex = isinstance(lo, Fraction)
    return MeanInterval(lo_f, hi_f, lo_f + margin, hi_f - margin, hi_f - lo_f <= 1e-14 * max(1.0, abs(hi_f)),
                        lo if ex else None, hi if ex else None)


class _Context:
    """Edge-form data shared by the root solve and the rate evaluation."""

    def __init__(self, model: MarkovModel, phi: Potential, psi: Potential):
        require_primitive(model)
        self.system = edge_form(model, phi, psi)
        self.phi = self.system.weights[0]
        self.psi = self.system.weights[1]
        self.interval = mean_interval(model, psi)

    def deriv(self, q: float):
        pr, d1, d2, _ = derivatives_of_edges(self.system, self.phi, self.psi, q)
        return pr, d1, d2

    def pressure(self, q: float) -> float:
        return pressure_of_edges(self.system, self.phi + q * self.psi)


def _check_domain(ctx: _Context, p: float) -> None:
    iv = ctx.interval
    if iv.degenerate:
        raise DegenerateError(
            f"observable is cohomologous to the constant {iv.lo:.17g}; J is undefined off that point"
        )
    if not iv.contains(p):
        raise DomainError(
            f"p={p!r} is outside the interior ({iv.interior_lo:.17g}, {iv.interior_hi:.17g}) "
            f"of the mean interval [{iv.lo:.17g}, {iv.hi:.17g}]"
        )


def _solve(ctx: _Context, p: float, max_iter: int = 200) -> float:
    # bracket the root of d1(q) - p by doubling, then safeguarded Newton
    q = 0.0
    _, d1, d2 = ctx.deriv(q)
    if abs(d1 - p) <= XI_TOL:
        return q
    lo, hi = (q, None) if d1 < p else (None, q)
    step = 1.0
    while lo is None or hi is None:
        t = (hi - step) if lo is None else (lo + step)
        _, dt, _ = ctx.deriv(t)
        if dt < p:
            lo = t
        else:
            hi = t
        step *= 2.0
        if step > 1e6:
            raise DomainError(f"no root of the mean equation found for p={p!r}")
    q = 0.5 * (lo + hi)
    for _ in range(max_iter):
        _, d1, d2 = ctx.deriv(q)
        err = d1 - p
        if abs(err) <= XI_TOL:
            return q
        if err < 0:
            lo = q
        else:
            hi = q
        if d2 <= 1e-300:
            raise DegenerateError("variance vanished while solving for xi_p")
        nq = q - err / d2
        if not (lo < nq < hi):
            nq = 0.5 * (lo + hi)
        if nq == q:
            break
        q = nq
    _, d1, _ = ctx.deriv(q)
    if abs(d1 - p) > XI_TOL:
        raise DomainError(f"xi_p solve stalled at |d1 - p| = {abs(d1 - p):.3e}")
    return q


def solve_xi(model: MarkovModel, phi: Potential, psi: Potential, p: float) -> float:
    """Unique ``xi`` with ``d/dq Pr(phi + q psi) = p`` at ``q = xi``.

    Raises
    ------
    DomainError
        If ``p`` lies outside the guarded interior of the mean interval.
    DegenerateError
        If ``psi`` is cohomologous to a constant.
    """
    ctx = _Context(model, phi, psi)
    _check_domain(ctx, p)
    return _solve(ctx, p)


def _dense_pressure(ctx: _Context, qs) -> np.ndarray:
    # independent of the Perron path: batched dense eigensolve
    qs = np.atleast_1d(np.asarray(qs, float))
    mask = ctx.system.adjacency > 0
    B = np.where(mask[None], np.exp(ctx.phi[None] + qs[:, None, None] * ctx.psi[None]), 0.0)
    return np.log(np.abs(np.linalg.eigvals(B)).max(axis=1))


def _inf_form(ctx: _Context, p: float, xi: float, pr0: float, points: int = 201) -> float:
    # J(p) = sup_q [q p - Pr(q) + Pr(0)]: coarse grid, then Brent on the best cell
    width = max(1.0, abs(xi))
    grid = np.linspace(xi - width, xi + width, points)
    vals = _dense_pressure(ctx, grid) - pr0 - grid * p
    k = int(np.argmin(vals))
    best = float(vals[k])
    if 0 < k < points - 1:
        f = lambda q: float(_dense_pressure(ctx, q)[0]) - pr0 - q * p
        _, fmin, _, _ = brent(f, brack=(grid[k - 1], grid[k], grid[k + 1]), tol=1e-12, full_output=True)
        best = min(best, float(fmin))
    return -best


def rate(model: MarkovModel, phi: Potential, psi: Potential, p: float, check: bool = True) -> RateSample:
    """Rate function sample at ``p``.

    ``J = -(Pr(phi + xi psi) - Pr(phi) - xi p)``.  With ``check`` the
    infimum (Legendre) form is evaluated independently and must agree
    within ``1e-9``.

    Raises
    ------
    ConsistencyError
        If the two forms of ``J`` disagree.
    """
    ctx = _Context(model, phi, psi)
    _check_domain(ctx, p)
    xi = _solve(ctx, p)
    pr0 = ctx.pressure(0.0)
    pr_xi, _, d2 = ctx.deriv(xi)
    J = -(pr_xi - pr0 - xi * p)
    J = max(J, 0.0) if J > -1e-15 else J
    J_inf = _inf_form(ctx, p, xi, pr0) if check else J
    if check and abs(J - J_inf) > J_AGREE:
        raise ConsistencyError(f"rate forms disagree at p={p!r}: {J!r} vs {J_inf!r}")
    return RateSample(float(p), float(xi), float(J), float(d2), float(pr_xi), float(J_inf))


def rate_curve(model: MarkovModel, phi: Potential, psi: Potential, p_grid, check: bool = True):
    return [rate(model, phi, psi, float(p), check) for p in p_grid]
