"""Shrinking-window slopes for Bernoulli(1/2) with an indicator observable."""

import argparse
from dataclasses import dataclass, field

from sharpldp.deviations.report import run_schedule
from sharpldp.deviations.schedules import WindowSchedule
from sharpldp.potentials import Potential
from sharpldp.sft import MarkovModel


@dataclass
class Config:
    p: float = 0.7
    schedule: str = "poly:c=1,beta=2"
    n: list = field(default_factory=lambda: [100, 250, 500, 1000, 2000])
    tol: float = 0.010


def run(cfg: Config):
    f2 = MarkovModel.full_shift(2)
    rep = run_schedule(f2, Potential.constant(f2, 0), Potential.indicator(f2, 0), cfg.p,
                       WindowSchedule.parse(cfg.schedule), cfg.n, tol=cfg.tol)
    print(f"target -J(p) = {rep.target:.10f}  schedule {rep.schedule}")
    print(f"{'n':>6} {'slope_lo':>14} {'slope_hi':>14} {'window_rate':>12}")
    for r in rep.rows:
        print(f"{r.n:>6} {r.slope_lo:>14.10f} {r.slope_hi:>14.10f} {r.window_rate:>12.6f}")
    print(f"distance {rep.distance:.5f} half-width {rep.half_width:.2e} -> {'PASS' if rep.passed else 'FAIL'}")
    return rep


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=Config.p)
    ap.add_argument("--schedule", default=Config.schedule)
    ap.add_argument("--n", default="100,250,500,1000,2000")
    a = ap.parse_args()
    run(Config(a.p, a.schedule, [int(x) for x in a.n.split(",")]))
