"""Command-line interface ``ldp``.

Exit codes: 0 success, 1 invalid input or failed check, 2 completed but
flagged infeasible, 3 resource limits (the suggested adjustment is printed).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from . import __version__
from .cache import RunCache, cache_key
from .errors import ConsistencyError, DomainError, ModelError, ResourceError, SharpLDPError
from .modelfile import ModelFile, load, resolve
from .potentials import birkhoff_sum, lattice_check, lip_ratio
from .ratefn import mean_interval, rate
from .sft import admissible_words, validate_model
from .suspension import discretize, orbit_integral, psi_from_profile
from .thermo import pressure_derivatives
from .transfer import spectral_sweep
from .deviations.cutoff import CutoffFunction
from .deviations.distribution import (DEFAULT_BUDGET_BINS, DEFAULT_ENUM_BUDGET, snapshot_bytes,
                                      snapshot_from_bytes)
from .deviations.measures import fourier_rho, rho_from_distribution
from .deviations.report import distribution_for, run_schedule
from .deviations.schedules import WindowSchedule

EXIT_OK, EXIT_FAIL, EXIT_INFEASIBLE, EXIT_RESOURCE = 0, 1, 2, 3

# options that change results; these are echoed into every output header
_RESULT_FLAGS = {
    "phi": "--phi", "psi": "--psi", "seed": "--seed", "budget_states": "--budget-states",
    "budget_bins": "--budget-bins", "q_grid": "--q-grid", "p": "--p", "p_grid": "--p-grid",
    "max_period": "--max-period", "tol": "--tol", "resolution": "--resolution", "xi": "--xi",
    "u": "--u", "refine": "--refine", "schedule": "--schedule", "n": "--n", "chi": "--chi",
    "method": "--method", "h_rel": "--h-rel", "profile": "--profile", "words": "--words",
    "samples": "--samples", "experiment": "--experiment",
}


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return "" if x is None else str(x)


def parse_grid(text: str) -> np.ndarray:
    """``a:b:k`` -> ``k`` evenly spaced points (``a`` alone -> one point)."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        a, b, k = float(parts[0]), float(parts[1]), int(parts[2])
    except (ValueError, IndexError):
        raise DomainError(f"grid {text!r} is not of the form a:b:k") from None
    if k < 1:
        raise DomainError("grid needs at least one point")
    return np.linspace(a, b, k)


def parse_n_list(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise DomainError(f"--n expects comma-separated integers, got {text!r}") from None


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


class Session:
    """Per-invocation state: model file, output directory, cache, echo."""

    def __init__(self, args):
        self.args = args
        self.out = Path(args.out)
        self.cache = RunCache(args.cache, verify=args.verify_cache) if args.cache else None
        self.mf: ModelFile | None = None
        if getattr(args, "model", None):
            self.mf = load(resolve(args.model))

    # -- parameters ---------------------------------------------------------
    def params(self) -> dict:
        out = {}
        for dest in _RESULT_FLAGS:
            if hasattr(self.args, dest):
                val = getattr(self.args, dest)
                if val is not None and val is not False:
                    out[dest] = val
        return out

    def replay_argv(self) -> list[str]:
        argv = [self.args.command]
        if getattr(self.args, "model", None):
            argv.append(self.args.model)
        for dest, val in sorted(self.params().items()):
            flag = _RESULT_FLAGS[dest]
            if val is True:
                argv.append(flag)
            else:
                text = fmt(val) if not isinstance(val, list) else ",".join(map(str, val))
                # --flag=value keeps negative grids like -1:1:5 unambiguous
                argv.append(f"{flag}={text}")
        return argv

    def experiment(self, default: str) -> dict:
        if self.mf is None:
            return {}
        name = getattr(self.args, "experiment", None) or default
        exps = self.mf.experiments
        if getattr(self.args, "experiment", None) and name not in exps:
            raise ModelError(f"no experiment {name!r} in {self.mf.path}; have {sorted(exps)}")
        return exps.get(name, {})

    def option(self, dest: str, exp: dict, key: str | None = None, default=None):
        val = getattr(self.args, dest, None)
        if val is not None:
            return val
        return exp.get(key or dest, default)

    def potentials(self):
        phi = self.mf.potential(self.args.phi, default_zero=True)
        psi = self.mf.potential(self.args.psi)
        return phi, psi

    # -- output -------------------------------------------------------------
    def header(self) -> str:
        lines = [f"# ldp {__version__}"]
        if self.mf is not None:
            lines.append(f"# model: {self.mf.name} sha256:{self.mf.content_hash}")
        lines.append("# params: " + json.dumps(_jsonable(self.params()), sort_keys=True, separators=(",", ":")))
        lines.append("# argv: " + json.dumps(self.replay_argv(), separators=(",", ":")))
        return "\n".join(lines) + "\n"

    def stem(self) -> str:
        return (self.mf.name if self.mf else "ldp") + "." + self.args.command

    def write_csv(self, columns, rows, suffix: str = "") -> Path:
        buf = io.StringIO()
        buf.write(self.header())
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(x) for x in r])
        self.out.mkdir(parents=True, exist_ok=True)
        path = self.out / f"{self.stem()}{suffix}.csv"
        path.write_text(buf.getvalue())
        return path

    def write_json(self, obj, suffix: str = "") -> Path:
        payload = {"tool": f"ldp {__version__}", "params": _jsonable(self.params()),
                   "argv": self.replay_argv(), "result": _jsonable(obj)}
        if self.mf is not None:
            payload["model"] = {"name": self.mf.name, "sha256": self.mf.content_hash}
        self.out.mkdir(parents=True, exist_ok=True)
        path = self.out / f"{self.stem()}{suffix}.json"
        path.write_text(json.dumps(payload, sort_keys=True, indent=1, allow_nan=False) + "\n")
        return path

    # -- cached distributions -------------------------------------------------
    def dist_fn(self):
        if self.cache is None:
            return None
        from .potentials import edge_form
        mf = self.mf

        def fn(model, phi, psi, n, h, budget_states, budget_bins):
            payload = {"model": mf.content_hash, "phi": phi.name, "psi": psi.name, "n": n,
                       "h": fmt(h), "budget_states": fmt(budget_states), "budget_bins": fmt(budget_bins)}
            key = cache_key("distribution", payload)
            data = self.cache.fetch(key, "distribution", lambda: snapshot_bytes(
                distribution_for(model, phi, psi, n, h, budget_states, budget_bins)), payload)
            return snapshot_from_bytes(data, edge_form(model, phi, psi).states)
        return fn


# -- commands -----------------------------------------------------------------

def cmd_validate(s: Session) -> int:
    mf = s.mf
    rep = validate_model(mf.model)
    print(f"{mf.path}: {rep.summary()}")
    for name, pot in sorted(mf.potentials.items()):
        print(f"  potential {name}: memory {pot.memory}, {'exact' if pot.exact else 'float'} values"
              f", range [{fmt(pot.min_value)}, {fmt(pot.max_value)}]")
    for name in sorted(mf.profiles):
        print(f"  profile {name}: {mf.profiles[name][0].kind}")
    if rep.primitive and s.args.psi in set(mf.potentials) | set(mf.profiles):
        v = lattice_check(mf.potential(s.args.psi), mf.model)
        extra = f" (a={fmt(v.a)}, c={fmt(v.c)})" if v.kind == "lattice" else ""
        print(f"  lattice check on {s.args.psi}: {v.kind}{extra}")
    return EXIT_OK if rep.primitive else EXIT_FAIL


def cmd_pressure(s: Session) -> int:
    phi, psi = s.potentials()
    qs = parse_grid(s.option("q_grid", s.experiment("pressure"), "q_grid", "0"))
    rows = [(q, *pressure_derivatives(s.mf.model, phi, psi, float(q))) for q in qs]
    path = s.write_csv(["q", "pressure", "d1", "d2"], rows)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_rate(s: Session) -> int:
    phi, psi = s.potentials()
    exp = s.experiment("rate")
    if s.args.p is not None:
        ps = [s.args.p]
    else:
        ps = parse_grid(s.option("p_grid", exp, "p_grid", None) or str(exp.get("p", "")) or "0.5")
    rows = []
    for p in ps:
        r = rate(s.mf.model, phi, psi, float(p))
        rows.append((r.p, r.xi_p, r.J, r.J_inf, r.sigma2_at_xi, r.pressure_at_xi))
    path = s.write_csv(["p", "xi_p", "J", "J_inf", "sigma2_at_xi", "pressure_at_xi"], rows)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_interval(s: Session) -> int:
    _, psi = s.potentials()
    iv = mean_interval(s.mf.model, psi)
    row = (iv.lo, iv.hi, iv.interior_lo, iv.interior_hi, str(iv.lo_exact) if iv.lo_exact is not None else "",
           str(iv.hi_exact) if iv.hi_exact is not None else "", iv.degenerate)
    path = s.write_csv(["lo", "hi", "interior_lo", "interior_hi", "lo_exact", "hi_exact", "degenerate"], [row])
    print(f"mean interval [{fmt(iv.lo)}, {fmt(iv.hi)}]; wrote {path}")
    return EXIT_OK


def cmd_lattice(s: Session) -> int:
    _, psi = s.potentials()
    a = s.args
    v = lattice_check(psi, s.mf.model, max_period=a.max_period or 8, tol=a.tol or 1e-9,
                      resolution=a.resolution or 1e-6)
    path = s.write_csv(["kind", "a", "c", "witness_count", "resolution"],
                       [(v.kind, v.a, v.c, v.witness_count, v.resolution)])
    print(f"{v.kind}" + (f" a={fmt(v.a)} c={fmt(v.c)}" if v.kind == "lattice" else "") + f"; wrote {path}")
    return EXIT_OK


def cmd_sweep(s: Session) -> int:
    phi, psi = s.potentials()
    exp = s.experiment("sweep")
    xi = float(s.option("xi", exp, default=0.0))
    grid = parse_grid(str(s.option("u", exp, default="0.5:50:200")))
    if len(grid) < 2:
        raise DomainError("--u needs at least two points")
    sw = spectral_sweep(phi, psi, xi, float(grid[0]), float(grid[-1]), len(grid), refine=bool(s.args.refine))
    rows = [(u, r, lo, hi, hi / sw.lambda_ref) for u, r, lo, hi in zip(sw.u_grid, sw.radii, sw.radii_lo, sw.radii_hi)]
    path = s.write_csv(["u", "radius", "radius_lo", "radius_hi", "ratio"], rows)
    print(f"lambda={fmt(sw.lambda_ref)} rho_hat={fmt(sw.rho_hat)} at u={fmt(sw.u_at_max)}; wrote {path}")
    return EXIT_OK


def cmd_run(s: Session) -> int:
    phi, psi = s.potentials()
    exp = s.experiment("ldp")
    p = s.option("p", exp)
    sched = s.option("schedule", exp)
    n_list = s.option("n", exp)
    if p is None or sched is None or n_list is None:
        raise DomainError("run needs --p, --schedule and --n (or an experiment in the model file)")
    tol = float(s.option("tol", exp, default=0.010))
    rep = run_schedule(s.mf.model, phi, psi, float(p), WindowSchedule.parse(sched), parse_n_list(n_list),
                       tol=tol, budget_states=s.args.budget_states, budget_bins=s.args.budget_bins,
                       dist_fn=s.dist_fn())
    cols = ["n", "delta", "eps", "h", "mode", "measure_lo", "measure_hi", "slope_lo", "slope_hi",
            "target", "window_rate", "feasible_n", "error"]
    rows = [[getattr(r, c) for c in cols] for r in rep.rows]
    path = s.write_csv(cols, rows)
    s.write_json(rep.to_dict() if any(not r.error for r in rep.rows) else {"rows": [asdict(r) for r in rep.rows]})
    errors = [r for r in rep.rows if r.error]
    for r in rep.rows:
        if r.error:
            print(f"n={r.n}: resource error: {r.error}", file=sys.stderr)
        else:
            print(f"n={r.n}: slope [{fmt(r.slope_lo)}, {fmt(r.slope_hi)}] target {fmt(r.target)}")
    if len(errors) < len(rep.rows):
        print(f"distance {fmt(rep.distance)} half-width {fmt(rep.half_width)} tol {fmt(tol)} "
              f"{'PASS' if rep.passed else 'FAIL'}; rho_hat {fmt(rep.rho_hat)} "
              f"{'feasible' if rep.feasible else 'INFEASIBLE'}; wrote {path}")
    if errors:
        return EXIT_RESOURCE
    return EXIT_OK if rep.feasible else EXIT_INFEASIBLE


def cmd_rho(s: Session) -> int:
    phi, psi = s.potentials()
    exp = s.experiment("prefactor")
    p = float(s.option("p", exp))
    sched = WindowSchedule.parse(s.option("schedule", exp))
    chi = CutoffFunction.parse(s.option("chi", exp, default="smoothstep"))
    method = s.option("method", exp, default="both")
    h_rel = float(s.option("h_rel", exp, default=1e-3))
    model = s.mf.model
    rs = rate(model, phi, psi, p)
    sigma = math.sqrt(rs.sigma2_at_xi)
    dist_fn = s.dist_fn() or distribution_for
    rows = []
    for n in parse_n_list(s.option("n", exp)):
        eps = sched.epsilon(n)
        lo = hi = fv = fe = math.nan
        if method in ("distribution", "both"):
            dist = dist_fn(model, phi, psi, n, h_rel * eps, s.args.budget_states, s.args.budget_bins)
            lo, hi = rho_from_distribution(dist, chi, n * p, eps)
        if method in ("fourier", "both"):
            fr = fourier_rho(model, phi, psi, p, chi, n, eps, xi=rs.xi_p)
            fv, fe = fr.value, fr.error
        scale = sigma * math.sqrt(2 * math.pi * n) / (chi.fourier_at_0 * eps)
        log_e = n * rs.J
        ratio = lambda r: math.exp(math.log(r) + log_e) * scale if r > 0 else math.nan
        rows.append((n, eps, lo, hi, fv, fe, ratio(lo), ratio(hi), ratio(fv) if fv == fv else math.nan))
    path = s.write_csv(["n", "eps", "rho_lo", "rho_hi", "fourier", "fourier_err", "ratio_lo", "ratio_hi",
                        "ratio_fourier"], rows)
    for r in rows:
        print(f"n={r[0]}: rho [{fmt(r[2])}, {fmt(r[3])}] fourier {fmt(r[4])} +- {fmt(r[5])}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_suspend(s: Session) -> int:
    mf = s.mf
    exp = s.experiment("suspend")
    name = s.args.profile or exp.get("profile") or next(iter(sorted(mf.profiles)), None)
    if name not in mf.profiles:
        raise ModelError(f"no profile {name!r} in {mf.path}")
    profile, roof = mf.profiles[name]
    n = parse_n_list(s.args.n)[0] if s.args.n else int(exp.get("n", 8))
    words_k = int(s.option("words", exp, default=16))
    samples = int(s.option("samples", exp, default=513))
    psi = psi_from_profile(profile, roof)
    m = max(profile.memory, roof.memory, psi.memory)
    rng = np.random.default_rng(s.args.seed)
    pool = admissible_words(mf.model, n + m - 1)
    picks = sorted(set(int(i) for i in rng.choice(len(pool), size=min(words_k, len(pool)), replace=False)))
    rows, worst = [], 0.0
    for i in picks:
        w = pool[i]
        T = birkhoff_sum(roof.potential, w, n)
        left = orbit_integral(profile, roof, w, T)
        right = birkhoff_sum(psi, w, n)
        worst = max(worst, abs(left - right))
        rows.append((mf.model.format_word(w), T, left, right, left - right))
    path = s.write_csv(["word", "flow_time", "flow_integral", "birkhoff_sum", "difference"], rows)
    rep = lip_ratio(discretize(profile, roof, samples))
    print(f"max |flow integral - Birkhoff sum| = {fmt(worst)} over {len(rows)} words; "
          f"Lip_e/min = {fmt(rep.ratio)} ({rep.metric}); wrote {path}")
    return EXIT_OK


def cmd_selftest(s: Session) -> int:
    from .selftest import oracle_dp, run_selftest
    if s.cache is not None and s.args.verify_cache:
        bad = s.cache.verify_all()
        if bad:
            print(f"FAIL cache: corrupted entry {bad[0]}" + (f" (+{len(bad) - 1} more)" if len(bad) > 1 else ""))
            return EXIT_FAIL
    source = None
    if s.cache is not None:
        def cached_source(mf, phi, psi, n):
            s.mf = mf
            fn = s.dist_fn()
            # budget_states=0 forces the DP path, which is what the oracle compares
            return oracle_dp(mf.model, phi, psi, n,
                             dp_fn=lambda model, phi, psi, n, h: fn(model, phi, psi, n, h, 0, DEFAULT_BUDGET_BINS))
        source = cached_source
    results = run_selftest(s.args.filter, source)
    lines = [c.line() for c in results]
    failed = [c for c in results if not c.ok]
    lines.append(f"{len(results) - len(failed)}/{len(results)} passed")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if s.args.out_given:
        s.out.mkdir(parents=True, exist_ok=True)
        (s.out / "selftest.txt").write_text(text)
    if failed:
        print(f"first failure: {failed[0].name}: {failed[0].detail}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {
    "validate": cmd_validate, "pressure": cmd_pressure, "rate": cmd_rate, "interval": cmd_interval,
    "lattice": cmd_lattice, "sweep": cmd_sweep, "run": cmd_run, "ldp": cmd_run, "rho": cmd_rho,
    "suspend": cmd_suspend, "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("common options")
    g.add_argument("--out", default=None, help="output directory (default: ./ldp-out)")
    g.add_argument("--threads", type=int, default=None, help="cap BLAS/OpenMP threads")
    g.add_argument("--seed", type=int, default=0, help="seed for sampled words and Monte Carlo")
    g.add_argument("--budget-states", type=float, default=float(DEFAULT_ENUM_BUDGET),
                   help="max paths for exact enumeration")
    g.add_argument("--budget-bins", type=float, default=float(DEFAULT_BUDGET_BINS), help="max DP cells")
    g.add_argument("--cache", default=None, help="result cache directory")
    g.add_argument("--verify-cache", action="store_true", help="recompute and compare every cache hit")
    g.add_argument("--phi", default="phi", help="potential defining the measure (default: phi, else 0)")
    g.add_argument("--psi", default="psi", help="observable potential or profile (default: psi)")
    g.add_argument("--experiment", default=None, help="experiment block in the model file supplying defaults")

    parser = argparse.ArgumentParser(prog="ldp", description="Shrinking-window large deviations on symbolic models.")
    parser.add_argument("--version", action="version", version=f"ldp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, model=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if model:
            sp.add_argument("model", help="model file, or the name of a bundled corpus model")
        return sp

    add("validate", "check a model file")
    add("pressure", "pressure and derivatives along phi + q psi").add_argument("--q-grid", default=None)
    sp = add("rate", "rate function J(p)")
    sp.add_argument("--p", type=float, default=None)
    sp.add_argument("--p-grid", default=None, help="a:b:k")
    add("interval", "admissible mean interval of psi")
    sp = add("lattice", "periodic-orbit lattice test")
    sp.add_argument("--max-period", type=int, default=None)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--resolution", type=float, default=None)
    sp = add("sweep", "twisted spectral radii along u")
    sp.add_argument("--xi", type=float, default=None)
    sp.add_argument("--u", default=None, help="a:b:k")
    sp.add_argument("--refine", action="store_true")
    for name in ("run", "ldp"):
        sp = add(name, "shrinking-window slope report")
        sp.add_argument("--p", type=float, default=None)
        sp.add_argument("--schedule", default=None, help="e.g. poly:c=1,beta=2")
        sp.add_argument("--n", default=None, help="comma-separated n values")
        sp.add_argument("--tol", type=float, default=None)
    sp = add("rho", "smoothed window functional and sharp prefactor ratio")
    sp.add_argument("--p", type=float, default=None)
    sp.add_argument("--schedule", default=None)
    sp.add_argument("--n", default=None)
    sp.add_argument("--chi", default=None, help="e.g. smoothstep:k=4,a=1,w=1")
    sp.add_argument("--method", choices=["distribution", "fourier", "both"], default=None)
    sp.add_argument("--h-rel", type=float, default=None)
    sp = add("suspend", "return-time identity for a suspension profile")
    sp.add_argument("--profile", default=None)
    sp.add_argument("--n", default=None)
    sp.add_argument("--words", type=int, default=None)
    sp.add_argument("--samples", type=int, default=None)
    sp = add("selftest", "run the oracle suite", model=False)
    sp.add_argument("--filter", default=None, help="only corpus models whose name contains this")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    args.out_given = args.out is not None
    if args.out is None:
        args.out = "ldp-out"
    try:
        with threadpool_limits(limits=args.threads):
            session = Session(args)
            return COMMANDS[args.command](session)
    except ResourceError as exc:
        print(f"ldp: resource limit: {exc}", file=sys.stderr)
        if exc.suggestion:
            print(f"ldp: suggestion: {exc.suggestion}", file=sys.stderr)
        return EXIT_RESOURCE
    except ConsistencyError as exc:
        print(f"ldp: consistency failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ModelError, DomainError, SharpLDPError) as exc:
        print(f"ldp: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
