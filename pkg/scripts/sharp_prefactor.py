"""Ratio of the smoothed window functional to its Gaussian prefactor prediction."""

import argparse
from dataclasses import dataclass, field

from sharpldp.deviations.cutoff import CutoffFunction
from sharpldp.deviations.report import sharp_prefactor_check
from sharpldp.deviations.schedules import WindowSchedule
from sharpldp.modelfile import load, resolve


@dataclass
class Config:
    model: str = "trinary-nonlattice"
    p: float = 0.81
    schedule: str = "poly:c=1,beta=1.25"
    chi: str = "smoothstep:k=4,a=1,w=1"
    n: list = field(default_factory=lambda: [50, 100, 200, 400])
    method: str = "distribution"


def run(cfg: Config):
    mf = load(resolve(cfg.model))
    phi, psi = mf.potential("phi", default_zero=True), mf.potential("psi")
    rep = sharp_prefactor_check(mf.model, phi, psi, cfg.p, CutoffFunction.parse(cfg.chi),
                                WindowSchedule.parse(cfg.schedule), cfg.n, method=cfg.method)
    print(f"J {rep.J:.8f} xi {rep.xi:.6f} sigma {rep.sigma:.6f} chi {rep.chi}")
    for r in rep.rows:
        print(f"n={r.n:>5} eps={r.eps:.4g} ratio in [{r.ratio_lo:.6f}, {r.ratio_hi:.6f}]")
    print(f"|ratio - 1| <= C/sqrt(n) with C = {rep.C:.4f}")
    return rep


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--method", choices=["distribution", "fourier"], default="distribution")
    ap.add_argument("--n", default="50,100,200,400")
    a = ap.parse_args()
    run(Config(n=[int(x) for x in a.n.split(",")], method=a.method))
