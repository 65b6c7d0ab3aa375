"""Oracle suite behind ``ldp selftest``: closed forms and enumeration-vs-DP checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .errors import ResourceError
from .modelfile import corpus_paths, load
from .potentials import Potential, lattice_check
from .ratefn import rate
from .sft import MarkovModel, count_words, cycle_mean_extremes, higher_block_recode, validate_model
from .thermo import pressure, pressure_derivatives
from .deviations.distribution import (check_against_exact, dp_distribution, exact_distribution,
                                      window_measure)
from .deviations.measures import mgf
from .deviations.report import run_schedule
from .deviations.schedules import WindowSchedule

ORACLE_N = tuple(range(1, 13))
ORACLE_H = (1e-6, 1e-5, 1e-4)


@dataclass(frozen=True)
class CaseResult:
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}: {self.detail}"


def _close(name: str, got: float, want: float, tol: float) -> CaseResult:
    err = abs(got - want)
    return CaseResult(name, err <= tol, f"got {got:.17g} want {want:.17g} tol {tol:.3g}")


def oracle_dp(model, phi, psi, n: int, hs=ORACLE_H, dp_fn: Callable = dp_distribution):
    """DP at the finest width in ``hs`` that fits the default cell budget."""
    for h in hs:
        try:
            return dp_fn(model, phi, psi, n, h)
        except ResourceError:
            continue
    raise ResourceError(f"no oracle width in {hs} fits the cell budget at n={n}")


def _closed_forms() -> Iterator[CaseResult]:
    f2 = MarkovModel.full_shift(2)
    gm = MarkovModel.golden_mean()
    zero2, zerog = Potential.constant(f2, 0), Potential.constant(gm, 0)
    ind = Potential.indicator(f2, 0)
    yield _close("closed/pressure-full2", pressure(f2, zero2), math.log(2), 1e-12)
    yield _close("closed/pressure-golden", pressure(gm, zerog), math.log((1 + math.sqrt(5)) / 2), 1e-12)
    rs = rate(f2, zero2, ind, 0.7)
    yield _close("closed/bernoulli-J(0.7)", rs.J, math.log(2) + 0.7 * math.log(0.7) + 0.3 * math.log(0.3), 1e-10)
    yield _close("closed/bernoulli-xi(0.7)", rs.xi_p, math.log(7 / 3), 1e-10)
    yield _close("closed/bernoulli-sigma2(0.7)", rs.sigma2_at_xi, 0.21, 1e-10)
    yield _close("closed/bernoulli-sigma2(0)", pressure_derivatives(f2, zero2, ind, 0.0)[2], 0.25, 1e-12)
    yield _close("closed/count-full2-10", count_words(f2, 10), 1024, 0)
    yield _close("closed/count-golden-5", count_words(gm, 5), 13, 0)
    rep = validate_model(MarkovModel(((0, 1), (1, 0))))
    yield CaseResult("closed/period-2cycle", rep.period == 2 and not rep.primitive, rep.summary())
    recoded, _ = higher_block_recode(f2, 3)
    edges = int(np.asarray(recoded.transitions).sum())
    yield CaseResult("closed/recode-full2-m3", (recoded.alphabet_size, edges) == (8, 16),
                     f"{recoded.alphabet_size} words, {edges} edges")
    lo, hi = cycle_mean_extremes(higher_block_recode(gm, 1)[0], {(0, 0): 1, (0, 1): 0, (1, 0): 0})
    yield CaseResult("closed/cycle-means-golden", (lo, hi) == (0, 1), f"({lo}, {hi})")
    ex = exact_distribution(f2, zero2, ind, 10)
    w = window_measure(ex, 0.7, 0.05)
    ok = abs(w.lo - 0.1171875) <= 1e-15 and abs(w.hi - 0.1171875) <= 1e-15
    yield CaseResult("closed/bernoulli-window-n10", ok, f"[{w.lo:.17g}, {w.hi:.17g}]")
    q = 0.37
    got = mgf(f2, zero2, ind, q, 30, 0.7)[0].real
    yield _close("closed/bernoulli-mgf", got, ((1 + math.exp(q)) / 2) ** 30 * math.exp(-0.7 * q * 30), 1e-15)
    v = lattice_check(ind, f2)
    yield CaseResult("closed/lattice-integer", v.kind == "lattice" and v.c is not None and abs(1 / v.c - round(1 / v.c)) < 1e-9,
                     f"{v.kind} a={v.a} c={v.c}")
    r = run_schedule(f2, zero2, ind, 0.7, WindowSchedule.parse("poly:c=1,beta=2"), [2000], sweep_steps=50)
    yield CaseResult("closed/bernoulli-slope-n2000", r.passed,
                     f"slope [{r.last.slope_lo:.17g}, {r.last.slope_hi:.17g}] target {r.target:.17g}")


def _corpus(filter_text: str | None, dist_source) -> Iterator[CaseResult]:
    for path in corpus_paths(filter_text):
        mf = load(path)
        phi, psi = mf.potential("phi", default_zero=True), mf.potential("psi")
        tag = f"corpus/{path.stem}"
        yield CaseResult(f"{tag}/validate", validate_model(mf.model).primitive, validate_model(mf.model).summary())
        violations, worst_mass = [], 0.0
        for n in ORACLE_N:
            ex = exact_distribution(mf.model, phi, psi, n)
            dp = dist_source(mf, phi, psi, n)
            violations += [f"n={n}: {v}" for v in check_against_exact(dp, ex)]
            worst_mass = max(worst_mass, abs(ex.total_lo - 1), abs(ex.total_hi - 1))
        detail = f"n<=12, {len(violations)} violations" + (f"; first: {violations[0]}" if violations else "")
        yield CaseResult(f"{tag}/dp-vs-exact", not violations, detail)
        yield CaseResult(f"{tag}/mass-bracket", worst_mass <= 1e-9, f"max |mass - 1| = {worst_mass:.3g}")
        ex = exact_distribution(mf.model, phi, psi, 10)
        m = ex.merged()
        xi = 0.3
        want = math.fsum((0.5 * (m.mass_lo + m.mass_hi) * np.exp(xi * m.lower)).tolist())
        got = float(mgf(mf.model, phi, psi, xi, 10)[0].real)
        yield _close(f"{tag}/mgf-vs-atoms", got, want, 1e-10 * max(1.0, abs(want)))


def run_selftest(filter_text: str | None = None, dist_source=None) -> list[CaseResult]:
    """Run the suite; ``filter_text`` selects corpus models by substring (``closed`` selects the closed forms)."""
    if dist_source is None:
        def dist_source(mf, phi, psi, n):
            return oracle_dp(mf.model, phi, psi, n)
    out = []
    if not filter_text or filter_text in "closed":
        out.extend(_closed_forms())
    out.extend(_corpus(filter_text, dist_source))
    return out
