"""Schedule runs, sharp-prefactor tables and Chernoff bounds."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from ..errors import DegenerateError, DomainError, ResourceError
from ..potentials import Potential, edge_form, lattice_check
from ..ratefn import RateSample, rate
from ..sft import MarkovModel, count_words
from ..thermo import pressure_derivatives
from ..transfer import spectral_sweep
from .cutoff import CutoffFunction
from .distribution import (DEFAULT_BUDGET_BINS, DEFAULT_ENUM_BUDGET, SumDistribution,
                           dp_distribution, exact_distribution, window_measure)
from .measures import fourier_rho, mgf, rho_from_distribution
from .schedules import WindowSchedule

SWEEP_RANGE = (0.5, 50.0)
SIGMA2_MIN = 1e-12


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def _distance(target: float, lo: float, hi: float) -> float:
    if lo <= target <= hi:
        return 0.0
    return min(abs(target - lo), abs(target - hi))


def distribution_for(model: MarkovModel, phi, psi: Potential, n: int, h: float,
                     budget_states: float = DEFAULT_ENUM_BUDGET,
                     budget_bins: float = DEFAULT_BUDGET_BINS) -> SumDistribution:
    """Exact enumeration when the path count fits ``budget_states``, else the DP with width ``h``."""
    L = edge_form(model, phi, psi).edge_length
    if count_words(model, n + L - 1) <= budget_states:
        return exact_distribution(model, phi, psi, n, budget=int(budget_states))
    return dp_distribution(model, phi, psi, n, h, budget_bins=int(budget_bins))


@dataclass
class DeviationRow:
    n: int
    delta: float
    eps: float
    h: float
    mode: str
    measure_lo: float
    measure_hi: float
    slope_lo: float
    slope_hi: float
    target: float
    feasible_n: bool
    window_rate: float = math.nan
    error: str = ""


@dataclass
class DeviationReport:
    """Per-``n`` window measures with slope brackets against ``-J(p) - alpha0``.

    ``feasible`` compares ``alpha0`` with ``-log(rho_hat) / 2``, where
    ``rho_hat`` is the empirical spectral-radius ratio of the twisted
    operators at ``xi_p`` over ``u`` in ``SWEEP_RANGE``.
    """

    schedule: str
    p: float
    J: float
    xi: float
    alpha0: float
    lattice: str
    rho_hat: float
    feasible: bool
    tol: float
    rows: list = field(default_factory=list)

    @property
    def target(self) -> float:
        return -self.J - self.alpha0

    @property
    def last(self) -> DeviationRow:
        done = [r for r in self.rows if not r.error]
        if not done:
            raise ResourceError("no n completed")
        return done[-1]

    @property
    def distance(self) -> float:
        r = self.last
        return _distance(r.target, r.slope_lo, r.slope_hi)

    @property
    def half_width(self) -> float:
        r = self.last
        return 0.5 * (r.slope_hi - r.slope_lo)

    @property
    def passed(self) -> bool:
        return self.distance <= self.tol and self.half_width <= self.tol

    def to_dict(self) -> dict:
        out = asdict(self)
        out.update(target=self.target, distance=self.distance, half_width=self.half_width,
                   passed=self.passed)
        return out


def run_schedule(model: MarkovModel, phi: Potential, psi: Potential, p: float,
                 schedule: WindowSchedule, n_list, tol: float = 0.010,
                 budget_states: float = DEFAULT_ENUM_BUDGET,
                 budget_bins: float = DEFAULT_BUDGET_BINS, sweep_steps: int = 200,
                 h_divisor: float = 16.0, dist_fn=None) -> DeviationReport:
    """Window measures along ``schedule`` for each ``n`` in ``n_list``.

    Each ``n`` uses exact enumeration when within ``budget_states`` and the
    bracketed DP with entry width ``eps_n / h_divisor`` otherwise.  Resource
    errors are recorded on the row and the run continues.  ``dist_fn``
    replaces :func:`distribution_for` (same signature), e.g. to add caching.

    Raises
    ------
    DomainError
        For an exponential schedule on a lattice ``psi``, or ``p`` outside
        the interior of the mean interval.
    """
    rs: RateSample = rate(model, phi, psi, p)
    verdict = lattice_check(psi, model)
    alpha0 = schedule.alpha0
    if alpha0 > 0 and verdict.kind == "lattice":
        raise DomainError(f"exponential schedule refused: psi is lattice (a={verdict.a!r}, c={verdict.c!r})")
    sweep = spectral_sweep(phi, psi, rs.xi_p, *SWEEP_RANGE, sweep_steps)
    rho_hat = sweep.rho_hat
    feasible = alpha0 <= -math.log(rho_hat) / 2 if rho_hat < 1 else alpha0 == 0
    report = DeviationReport(schedule.to_text(), float(p), rs.J, rs.xi_p, alpha0, verdict.kind,
                             rho_hat, bool(feasible), tol)
    target = -rs.J - alpha0
    mean = pressure_derivatives(model, phi, psi, 0.0)[1]
    for n in n_list:
        n = int(n)
        delta = schedule.delta(n)
        eps = n * delta
        h = eps / h_divisor
        # log n / n + 2 log delta / n >= log rho
        feas_n = rho_hat < 1 and (math.log(n) + 2 * math.log(delta)) / n >= math.log(rho_hat)
        try:
            dist = (dist_fn or distribution_for)(model, phi, psi, n, h, budget_states, budget_bins)
        except ResourceError as exc:
            msg = str(exc) + (f"; suggestion: {exc.suggestion}" if exc.suggestion else "")
            report.rows.append(DeviationRow(n, delta, eps, h, "", math.nan, math.nan, math.nan,
                                            math.nan, target, bool(feas_n), error=msg))
            continue
        w = window_measure(dist, p, delta)
        report.rows.append(DeviationRow(n, delta, eps, dist.h, dist.embedding, w.lo, w.hi,
                                        _log(w.lo) / n, _log(w.hi) / n, target, bool(feas_n),
                                        _window_rate(model, phi, psi, p, delta, mean)))
    return report


def _window_rate(model, phi, psi, p: float, delta: float, mean: float) -> float:
    """``-inf J`` over the closed window: the fixed-window (classical) slope limit."""
    lo, hi = p - delta, p + delta
    if lo <= mean <= hi:
        return 0.0
    try:
        return -rate(model, phi, psi, lo if lo > mean else hi, check=False).J
    except DomainError:
        return math.nan


# -- sharp prefactor --------------------------------------------------------

@dataclass
class PrefactorRow:
    n: int
    eps: float
    rho_lo: float
    rho_hi: float
    ratio_lo: float
    ratio_hi: float

    @property
    def ratio(self) -> float:
        return 0.5 * (self.ratio_lo + self.ratio_hi)

    @property
    def deviation(self) -> float:
        """Largest ``|ratio - 1|`` over the bracket."""
        return max(abs(self.ratio_lo - 1), abs(self.ratio_hi - 1))


@dataclass
class PrefactorReport:
    """``ratio(n) = rho(n) sigma sqrt(2 pi n) exp(n J) / (chi_hat(0) eps_n)`` per ``n``.

    ``C`` is the smallest constant with ``|ratio - 1| <= C / sqrt(n)`` on every row.
    """

    p: float
    J: float
    xi: float
    sigma: float
    chi: str
    schedule: str
    method: str
    rows: list = field(default_factory=list)

    @property
    def C(self) -> float:
        return max(r.deviation * math.sqrt(r.n) for r in self.rows)

    def row(self, n: int) -> PrefactorRow:
        for r in self.rows:
            if r.n == n:
                return r
        raise KeyError(n)


def sharp_prefactor_check(model: MarkovModel, phi: Potential, psi: Potential, p: float,
                          chi: CutoffFunction, schedule: WindowSchedule, n_list,
                          method: str = "distribution", h_rel: float = 1e-3,
                          budget_states: float = DEFAULT_ENUM_BUDGET,
                          budget_bins: float = DEFAULT_BUDGET_BINS, dist_fn=None) -> PrefactorReport:
    """Smoothed window functional against the Gaussian prefactor prediction.

    ``method`` is ``distribution`` (enclosure from the law of ``Psi^n``,
    entry width ``h_rel * eps_n``) or ``fourier`` (inverse transform with its
    error bound).

    Raises
    ------
    DomainError
        If ``psi`` is lattice.
    DegenerateError
        If the asymptotic variance at ``xi_p`` is at most ``1e-12``.
    """
    verdict = lattice_check(psi, model)
    if verdict.kind == "lattice":
        raise DomainError(f"sharp prefactor needs non-lattice psi (lattice span c={verdict.c!r})")
    rs = rate(model, phi, psi, p)
    if not rs.sigma2_at_xi > SIGMA2_MIN:
        raise DegenerateError("asymptotic variance vanishes: psi is cohomologous to a constant")
    sigma = math.sqrt(rs.sigma2_at_xi)
    out = PrefactorReport(float(p), rs.J, rs.xi_p, sigma, chi.describe(), schedule.to_text(), method)
    for n in n_list:
        n = int(n)
        eps = schedule.epsilon(n)
        if method == "fourier":
            fr = fourier_rho(model, phi, psi, p, chi, n, eps, xi=rs.xi_p)
            lo, hi = fr.value - fr.error, fr.value + fr.error
        elif method == "distribution":
            dist = (dist_fn or distribution_for)(model, phi, psi, n, h_rel * eps, budget_states, budget_bins)
            lo, hi = rho_from_distribution(dist, chi, n * p, eps)
        else:
            raise DomainError(f"unknown method {method!r}")
        # n J can be large: combine in log space
        scale = math.log(sigma) + 0.5 * math.log(2 * math.pi * n) + n * rs.J - math.log(chi.fourier_at_0 * eps)
        out.rows.append(PrefactorRow(n, eps, lo, hi, _ratio(lo, scale), _ratio(hi, scale)))
    return out


def _ratio(r: float, log_scale: float) -> float:
    return math.exp(math.log(r) + log_scale) if r > 0 else 0.0


# -- Chernoff -------------------------------------------------------------

def chernoff_log_bound(model: MarkovModel, phi, psi: Potential, a: float, n: int, xi: float) -> float:
    """``log`` of ``int exp(xi (Psi^n - n a)) dmu``.

    For ``xi >= 0`` this bounds ``log mu(Psi^n >= n a)``; for ``xi <= 0`` it
    bounds ``log mu(Psi^n <= n a)``.
    """
    val = mgf(model, phi, psi, xi, n, p=a)[0].real
    return _log(val)


def chernoff_window_bound(model: MarkovModel, phi, psi: Potential, p: float, delta: float, n: int,
                          mean: float) -> float:
    """Upper bound on the measure of ``Psi^n / n`` in ``(p - delta, p + delta)``.

    Uses the half-line through the window edge nearest ``mean`` at the
    optimal ``xi`` for that edge; a window containing ``mean`` gets 1.
    """
    lo, hi = p - delta, p + delta
    if lo <= mean <= hi:
        return 1.0
    edge = lo if lo > mean else hi
    try:
        xi = rate(model, phi, psi, edge, check=False).xi_p
    except DomainError:
        return 1.0
    return min(1.0, math.exp(chernoff_log_bound(model, phi, psi, edge, n, xi)))
