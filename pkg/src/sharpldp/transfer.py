"""Ruelle transfer matrices, Perron data and twisted spectral radii.

For an edge potential ``g`` on the recoded graph the transfer matrix acts on
functions of the current state: ``M[u, v] = exp(g(v -> u))`` whenever
``v -> u`` is an edge.  Column ``v`` therefore collects the weight of the
preimage ``v`` of ``u``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, ModelError
from .potentials import EdgeSystem, Potential, edge_form
from .sft import require_primitive

POWER_STEPS = 5000
BALANCE_SPREAD = 1e8
DENSE_MAX = 64


@dataclass(frozen=True)
class TransferMatrix:
    """Dense transfer matrix plus a provenance tag ``(model hash, potential names, (xi, u))``."""

    entries: np.ndarray
    source: tuple = ()

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.entries)


@dataclass(frozen=True)
class PerronData:
    """Leading eigen-triple, normalized by ``max(right) = 1`` and ``left . right = 1``.

    ``residual`` is the componentwise relative residual of ``right``.
    """

    lam: float
    right: np.ndarray
    left: np.ndarray
    residual: float
    iterations: int


@dataclass(frozen=True)
class RadiusEstimate:
    value: float
    lo: float
    hi: float
    method: str

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi


@dataclass(frozen=True)
class SpectralSweep:
    xi: float
    u_grid: np.ndarray
    radii: np.ndarray
    radii_lo: np.ndarray
    radii_hi: np.ndarray
    lambda_ref: float
    rho_hat: float
    u_at_max: float
    refinements: int = 0


@dataclass(frozen=True)
class NormGrowth:
    n: np.ndarray
    log_norms: np.ndarray
    rate: float
    log_lambda: float

    @property
    def margin(self) -> float:
        return self.log_lambda - self.rate


def operator_from_edges(system: EdgeSystem, g: np.ndarray, source: tuple = ()) -> TransferMatrix:
    """Transfer matrix of edge weights ``g`` (real or complex, shape (S, S), indexed [from, to])."""
    mask = system.adjacency > 0
    B = np.zeros_like(g, dtype=np.result_type(g, float))
    B[mask] = np.exp(g[mask])
    return TransferMatrix(np.ascontiguousarray(B.T), source)


def build_operator(model, g) -> TransferMatrix:
    """Transfer matrix of a potential ``g``.

    ``g`` is either a :class:`Potential` (any memory; recoded to edge form)
    or a pair ``(EdgeSystem, weights)`` with weights already on edges.

    Raises
    ------
    ModelError
        If an explicit weight table does not match the edge system.
    """
    require_primitive(model)
    if isinstance(g, Potential):
        system = edge_form(model, g)
        return operator_from_edges(system, system.weights[0], (model.content_hash(), g.name, (0.0, 0.0)))
    system, weights = g
    weights = np.asarray(weights)
    if weights.shape != system.adjacency.shape:
        raise ModelError("edge weights do not match the recoded graph; recode first")
    return operator_from_edges(system, weights, (model.content_hash(), "edge-weights", (0.0, 0.0)))


def twisted_operator(system: EdgeSystem, xi: float, u: float, phi_index: int = 0,
                     psi_index: int = 1) -> TransferMatrix:
    """Operator of ``Phi + (xi + i u) Psi`` for two potentials stored in ``system``."""
    phi = system.weights[phi_index]
    psi = system.weights[psi_index]
    if u == 0.0:
        g = phi + xi * psi
    else:
        g = phi + (xi + 1j * u) * psi
    return operator_from_edges(system, g, (system.model.content_hash(), "phi+z*psi", (xi, u)))


def _power(M: np.ndarray, tol: float, max_iter: int) -> tuple[np.ndarray, float, int]:
    x = np.ones(M.shape[0])
    for it in range(1, max_iter + 1):
        y = M @ x
        lam = y.max()
        y = y / lam
        # stop on the vector: the max entry can settle before the direction does
        if np.abs(y - x).max() <= tol:
            return y, lam, it
        x = y
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")


def _dense(M: np.ndarray) -> tuple[np.ndarray, float] | None:
    vals, vecs = np.linalg.eig(M)
    k = int(np.argmax(vals.real))
    x = np.abs(vecs[:, k].real)
    if not (x > 0).all():
        return None
    return x / x.max(), float(vals[k].real)


def _dominant(M: np.ndarray, tol: float, max_iter: int) -> tuple[np.ndarray, float, int]:
    # small matrices: a dense seed is cheaper than iterating, and the polish
    # restores full accuracy; small spectral gaps also stall power iteration
    if M.shape[0] <= DENSE_MAX:
        seed = _dense(M)
        if seed is not None:
            return (*seed, 0)
    try:
        return _power(M, tol, min(max_iter, POWER_STEPS))
    except ConvergenceError:
        seed = _dense(M)
        if seed is None:
            raise
        return (*seed, POWER_STEPS)


def _polish(M: np.ndarray, x: np.ndarray, lam: float, steps: int = 2) -> tuple[np.ndarray, float]:
    n = M.shape[0]
    for _ in range(steps):
        shift = lam * (1 + 1e-10)
        try:
            # near-singular by design: inverse iteration at the eigenvalue
            y = np.linalg.solve(M - shift * np.eye(n), x)
        except np.linalg.LinAlgError:
            break
        y = np.abs(y)
        x = y / y.max()
        lam = float((x @ (M @ x)) / (x @ x))
    return x, lam


def perron(M: TransferMatrix | np.ndarray, tol: float = 1e-13, max_iter: int = 100_000) -> PerronData:
    """Perron eigenvalue and positive eigenvectors of a nonnegative primitive matrix.

    Power iteration on a diagonally balanced copy, followed by
    inverse-iteration polishing; the left vector comes from the transpose.

    Raises
    ------
    ModelError
        For negative/complex entries or a non-primitive pattern.
    ConvergenceError
        If the iteration stalls or the componentwise relative residual
        ``max |(A r - lam r)_i| / (lam r_i)`` exceeds ``1e-12``.
    """
    A = M.entries if isinstance(M, TransferMatrix) else np.asarray(M)
    if np.iscomplexobj(A) or (A < 0).any():
        raise ModelError("Perron data needs a real nonnegative matrix")
    n = A.shape[0]
    pattern = (A > 0).astype(float)
    # primitive iff pattern^(n^2 - 2n + 2) > 0 (Wielandt); check by squaring
    P = pattern.copy()
    k = 1
    while k < n * n - 2 * n + 2:
        P = ((P @ P) > 0).astype(float)
        k *= 2
    if not (P > 0).all():
        raise ModelError("transfer matrix pattern is not primitive")
    # at large twists the entries span many decades: iterate on a balanced,
    # rescaled copy (powers of two, so the similarity is exact)
    pos = A[A > 0]
    if pos.max() > BALANCE_SPREAD * pos.min():
        B, T = scipy.linalg.matrix_balance(A, permute=False)
        d = np.diag(T)
        B = B / 2.0 ** np.round(np.log2(B.max()))
    else:
        B, d = A, np.ones(n)
    r, lam, it_r = _dominant(B, tol, max_iter)
    r, lam = _polish(B, r, lam)
    l, lam_l, it_l = _dominant(B.T.copy(), tol, max_iter)
    l, _ = _polish(B.T.copy(), l, lam_l)
    r, l = r * d, l / d
    r = r / r.max()
    l = l / (l @ r)
    lam = float(l @ (A @ r))
    # componentwise: A and r are nonnegative, so A @ r has no cancellation
    residual = float((np.abs(A @ r - lam * r) / (lam * r)).max())
    if not residual <= 1e-12 or (r <= 0).any() or (l <= 0).any():
        raise ConvergenceError(f"Perron relative residual {residual:.3e} exceeds 1e-12")
    return PerronData(lam, r, l, residual, it_r + it_l)


def _norm_root(A: np.ndarray, powers=(32, 64)) -> dict[int, float]:
    """``||A^n||_inf^(1/n)`` by scaled repeated squaring."""
    out = {}
    X = A.astype(complex) if np.iscomplexobj(A) else A.astype(float)
    logscale = 0.0
    n = 1
    target = max(powers)
    while n < target:
        X = X @ X
        logscale *= 2
        s = np.abs(X).sum(axis=1).max()
        if s == 0.0:
            return {p: 0.0 for p in powers}
        X = X / s
        logscale += np.log(s)
        n *= 2
        if n in powers:
            out[n] = float(np.exp((logscale + np.log(np.abs(X).sum(axis=1).max())) / n))
    return out


def spectral_radius(M: TransferMatrix | np.ndarray, max_iter: int = 400, tol: float = 1e-13) -> RadiusEstimate:
    """Modulus of the dominant eigenvalue of a (complex) matrix.

    Power iteration first; when it fails to settle (several eigenvalues of
    nearly equal modulus) fall back to the dense QR eigensolver.  Both are
    checked against ``||M^n||^(1/n)`` for ``n`` in {32, 64}; an estimate above
    that bound is reported as an interval.
    """
    A = M.entries if isinstance(M, TransferMatrix) else np.asarray(M)
    dense = float(np.abs(np.linalg.eigvals(A)).max())
    x = np.ones(A.shape[0], dtype=A.dtype)
    est, prev, method = None, None, "dense"
    for _ in range(max_iter):
        y = A @ x
        s = np.abs(y).max()
        if s == 0.0:
            est, method = 0.0, "power"
            break
        ratio = s / np.abs(x).max()
        x = y / s
        if prev is not None and abs(ratio - prev) <= tol * ratio:
            est, method = float(ratio), "power"
            break
        prev = ratio
    value = dense if est is None or abs(est - dense) > 1e-9 * max(dense, 1e-300) else est
    if est is not None and abs(est - dense) > 1e-9 * max(dense, 1e-300):
        method = "dense"
    roots = _norm_root(A)
    bound = min(roots.values())
    if value > bound * (1 + 1e-10):
        return RadiusEstimate(value, min(value, dense, bound), max(value, dense), method + "+interval")
    return RadiusEstimate(value, value, value, method)


def spectral_sweep(phi: Potential, psi: Potential, xi: float, u_min: float, u_max: float,
                   steps: int, refine: bool = False, max_steps: int = 1 << 16) -> SpectralSweep:
    """Spectral radius of the twisted operators along ``u`` in ``[u_min, u_max]``.

    ``rho_hat`` is the maximum of ``radius / lambda_xi`` over the grid (the
    upper end of interval estimates is used).  With ``refine`` the grid is
    doubled until ``rho_hat`` moves by less than ``1e-4``.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    model = phi.model
    require_primitive(model)
    system = edge_form(model, phi, psi)
    lam_ref = perron(twisted_operator(system, xi, 0.0)).lam
    rounds, prev = 0, None
    while True:
        grid = np.linspace(u_min, u_max, steps)
        est = [spectral_radius(twisted_operator(system, xi, float(u))) for u in grid]
        radii = np.array([e.value for e in est])
        lo = np.array([e.lo for e in est])
        hi = np.array([e.hi for e in est])
        ratios = hi / lam_ref
        k = int(np.argmax(ratios))
        sweep = SpectralSweep(xi, grid, radii, lo, hi, lam_ref, float(ratios[k]), float(grid[k]), rounds)
        if not refine:
            return sweep
        if prev is not None and abs(sweep.rho_hat - prev.rho_hat) < 1e-4:
            return sweep
        if 2 * steps - 1 > max_steps:
            return sweep
        prev = sweep
        steps = 2 * steps - 1
        rounds += 1


def iterate_norm_growth(phi: Potential, psi: Potential, xi: float, u: float, n_max: int) -> NormGrowth:
    """Sup norms of ``L^n 1`` for ``n = 1..n_max`` with a least-squares growth rate.

    The slope is fitted over the second half ``n in [n_max/2, n_max]`` so the
    transient of the leading term does not bias it.
    """
    if n_max < 8:
        raise ValueError("n_max must be >= 8")
    system = edge_form(phi.model, phi, psi)
    A = twisted_operator(system, xi, u).entries
    lam = perron(twisted_operator(system, xi, 0.0)).lam
    x = np.ones(A.shape[0], dtype=A.dtype)
    logs = np.empty(n_max)
    acc = 0.0
    for k in range(n_max):
        x = A @ x
        s = np.abs(x).max()
        acc += np.log(s)
        x = x / s
        logs[k] = acc
    ns = np.arange(1, n_max + 1)
    sel = ns >= n_max // 2
    slope = float(np.polyfit(ns[sel], logs[sel], 1)[0])
    return NormGrowth(ns, logs, slope, float(np.log(lam)))
