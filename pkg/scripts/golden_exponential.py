"""Exponential-schedule slopes on the non-lattice golden-mean corpus model."""

import argparse
from dataclasses import dataclass, field

from sharpldp.deviations.report import run_schedule
from sharpldp.deviations.schedules import WindowSchedule
from sharpldp.modelfile import load, resolve


@dataclass
class Config:
    model: str = "golden-nonlattice"
    p: float = 1.13
    alpha0: float = 0.01
    n: list = field(default_factory=lambda: [18, 100, 300, 600])
    tol: float = 0.015


def run(cfg: Config):
    mf = load(resolve(cfg.model))
    phi, psi = mf.potential("phi", default_zero=True), mf.potential("psi")
    rep = run_schedule(mf.model, phi, psi, cfg.p, WindowSchedule("exp", {"c": 1.0, "alpha0": cfg.alpha0}),
                       cfg.n, tol=cfg.tol)
    print(f"lattice: {rep.lattice}; rho_hat {rep.rho_hat:.5f}; feasible {rep.feasible}")
    print(f"target -J(p) - alpha0 = {rep.target:.8f}")
    for r in rep.rows:
        tail = r.error or f"[{r.slope_lo:.6f}, {r.slope_hi:.6f}] ({r.mode})"
        print(f"n={r.n:>5}: {tail}")
    print(f"distance {rep.distance:.5f} half-width {rep.half_width:.2e} -> {'PASS' if rep.passed else 'FAIL'}")
    return rep


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha0", type=float, default=Config.alpha0)
    ap.add_argument("--n", default="18,100,300,600")
    a = ap.parse_args()
    run(Config(alpha0=a.alpha0, n=[int(x) for x in a.n.split(",")]))
