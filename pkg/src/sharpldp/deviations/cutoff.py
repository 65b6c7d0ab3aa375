"""Compactly supported, even cutoff functions and their Fourier transforms.

Every cutoff has the shape ``chi(x) = amp`` on ``|x| <= a``, a taper
``amp * T((|x| - a) / w)`` on ``a < |x| < a + w``, and zero beyond.  The
Fourier transform convention is ``chi_hat(z) = int chi(x) exp(-i z x) dx``,
defined for complex ``z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import Polynomial

from ..errors import DomainError

_GL_X, _GL_W = np.polynomial.legendre.leggauss(64)
_GL_T = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


def smoothstep_poly(k: int) -> Polynomial:
    """Degree ``2k+1`` ramp with ``k`` vanishing derivatives at 0 and 1."""
    coeffs = np.zeros(2 * k + 2)
    for j in range(k + 1):
        coeffs[k + 1 + j] = math.comb(k + j, j) * math.comb(2 * k + 1, k - j) * (-1) ** j
    return Polynomial(coeffs)


@dataclass(frozen=True)
class CutoffFunction:
    """Even plateau-and-taper cutoff.

    Parameters
    ----------
    kind : {"smoothstep", "cosine"}
        ``smoothstep`` tapers with ``1 - S_k`` (so ``chi`` is ``C^k``);
        ``cosine`` tapers with ``(1 + cos(pi t)) / 2`` (``C^1``).
    a : float
        Plateau half-width.
    w : float
        Taper width; the support is ``[-(a + w), a + w]``.
    k : int
        Smoothness order of the smoothstep taper (ignored for cosine).
    amp : float
        Plateau height.
    """

    kind: str = "smoothstep"
    a: float = 1.0
    w: float = 1.0
    k: int = 4
    amp: float = 1.0

    def __post_init__(self):
        if self.kind not in ("smoothstep", "cosine"):
            raise DomainError(f"unknown cutoff kind {self.kind!r}")
        if self.a < 0 or self.w <= 0 or self.amp <= 0:
            raise DomainError("cutoff needs a >= 0, w > 0, amp > 0")
        if self.kind == "smoothstep" and self.k < 0:
            raise DomainError("smoothness order must be >= 0")
        if self.kind == "cosine":
            object.__setattr__(self, "k", 1)

    # -- sandwich pair ----------------------------------------------------
    @classmethod
    def upper(cls, eta: float, kind: str = "smoothstep", k: int = 4) -> "CutoffFunction":
        """``chi_+ >= 1_[-1,1]`` with integral ``2 + eta``."""
        return cls(kind, 1.0, eta, k)

    @classmethod
    def lower(cls, eta: float, kind: str = "smoothstep", k: int = 4) -> "CutoffFunction":
        """``chi_- <= 1_[-1,1]`` with integral ``2 - eta``."""
        if not 0 < eta <= 1:
            raise DomainError("eta must lie in (0, 1]")
        return cls(kind, 1.0 - eta, eta, k)

    def scaled(self, factor: float) -> "CutoffFunction":
        return CutoffFunction(self.kind, self.a, self.w, self.k, self.amp * factor)

    @property
    def support(self) -> float:
        return self.a + self.w

    @property
    def fourier_at_0(self) -> float:
        return self.amp * (2 * self.a + self.w)

    # -- taper ------------------------------------------------------------
    @cached_property
    def _taper(self) -> Polynomial | None:
        return None if self.kind == "cosine" else 1 - smoothstep_poly(self.k)

    def taper(self, t):
        t = np.asarray(t, float)
        if self.kind == "cosine":
            return 0.5 * (1 + np.cos(np.pi * t))
        return self._taper(t)

    def __call__(self, x):
        x = np.abs(np.asarray(x, float))
        t = np.clip((x - self.a) / self.w, 0.0, 1.0)
        out = np.where(x <= self.a, 1.0, self.taper(t))
        return self.amp * np.where(x >= self.support, 0.0, out)

    @cached_property
    def lipschitz(self) -> float:
        """``max |chi'|``."""
        if self.kind == "cosine":
            return self.amp * math.pi / (2 * self.w)
        d1 = self._taper.deriv()
        pts = [0.0, 1.0] + [r.real for r in d1.deriv().roots() if abs(r.imag) < 1e-12 and 0 <= r.real <= 1]
        return self.amp * max(abs(d1(t)) for t in pts) / self.w

    def derivative_l1(self, j: int) -> float:
        """``||chi^(j)||_1`` for ``0 <= j <= k + 1``."""
        if j < 0 or j > self.k + 1:
            raise DomainError(f"derivative order {j} exceeds k+1 = {self.k + 1}")
        if j == 0:
            return self.fourier_at_0
        if self.kind == "cosine":
            # |d^j/dt^j (1+cos pi t)/2| integrates to pi^(j-1) over [0, 1]
            return self.amp * 2 * math.pi ** (j - 1) * self.w ** (1 - j)
        dj = self._taper.deriv(j)
        roots = sorted(r.real for r in dj.roots() if abs(r.imag) < 1e-12 and 0 < r.real < 1)
        anti = dj.integ()
        pts = [0.0, *roots, 1.0]
        total = sum(abs(anti(b) - anti(a)) for a, b in zip(pts, pts[1:]))
        return self.amp * 2 * total * self.w ** (1 - j)

    # -- Fourier transform --------------------------------------------------
    def _F(self, c: np.ndarray) -> np.ndarray:
        """``int_0^1 T(t) exp(c t) dt`` for complex ``c``."""
        c = np.asarray(c, complex)
        out = np.empty_like(c)
        small = np.abs(c) < 8.0
        if small.any():
            cs = c[small]
            out[small] = (np.exp(np.outer(cs, _GL_T)) * (self.taper(_GL_T) * _GL_W)).sum(axis=1)
        big = ~small
        if big.any():
            cb = c[big]
            if self.kind == "cosine":
                # exact antiderivative of 0.5 (1 + cos pi t) e^{ct}
                ec = np.exp(cb)
                base = 0.5 * (ec - 1) / cb
                osc = 0.5 * (cb * (-ec - 1)) / (cb * cb + math.pi**2)
                out[big] = base + osc
            else:
                # integration by parts terminates for a polynomial taper
                T = self._taper
                ec = np.exp(cb)
                acc = np.zeros_like(cb)
                sign = 1.0
                deriv = T
                cpow = cb.copy()
                for _ in range(T.degree() + 1):
                    acc += sign * (deriv(1.0) * ec - deriv(0.0)) / cpow
                    deriv = deriv.deriv()
                    cpow = cpow * cb
                    sign = -sign
                out[big] = acc
        return out

    def fourier(self, z) -> np.ndarray:
        """``chi_hat(z)`` for real or complex ``z`` (array-valued)."""
        z = np.atleast_1d(np.asarray(z, complex))
        out = np.empty_like(z)
        zero = np.abs(z) < 1e-12
        out[zero] = self.fourier_at_0
        nz = ~zero
        zz = z[nz]
        if self.kind == "cosine":
            kap = math.pi / self.w
            den = zz * (kap * kap - zz * zz)
            safe = np.abs(den) > 1e-6 * max(1.0, kap**3)
            val = np.empty_like(zz)
            b = self.support
            val[safe] = (np.sin(zz[safe] * self.a) + np.sin(zz[safe] * b)) * kap * kap / den[safe]
            rest = ~safe
            if rest.any():
                val[rest] = self._generic(zz[rest])
            out[nz] = self.amp * val
        else:
            out[nz] = self.amp * self._generic(zz)
        return out

    def _generic(self, z: np.ndarray) -> np.ndarray:
        a, w = self.a, self.w
        plateau = 2 * np.sin(z * a) / z
        ramp = w * np.exp(-1j * z * a) * self._F(-1j * z * w) + w * np.exp(1j * z * a) * self._F(1j * z * w)
        return plateau + ramp

    def fourier_tail_bound(self, z, j: int | None = None) -> np.ndarray:
        """Upper bound ``exp(|Im z| b) ||chi^(j)||_1 / |z|^j`` (default ``j = k+1``)."""
        j = self.k + 1 if j is None else j
        z = np.asarray(z, complex)
        return np.exp(np.abs(z.imag) * self.support) * self.derivative_l1(j) / np.abs(z) ** j

    def describe(self) -> str:
        if self.kind == "cosine":
            return f"cosine(a={self.a:.17g},w={self.w:.17g},amp={self.amp:.17g})"
        return f"smoothstep(k={self.k},a={self.a:.17g},w={self.w:.17g},amp={self.amp:.17g})"

    @classmethod
    def parse(cls, text: str) -> "CutoffFunction":
        """``smoothstep:k=4,a=1,w=1`` or ``cosine:a=1,w=0.5``; unset keys use defaults."""
        kind, _, rest = text.partition(":")
        kw = {}
        for part in filter(None, rest.split(",")):
            key, _, val = part.partition("=")
            key = key.strip()
            if key not in ("a", "w", "k", "amp"):
                raise DomainError(f"unknown cutoff parameter {key!r}")
            kw[key] = int(val) if key == "k" else float(val)
        return cls(kind.strip() or "smoothstep", **kw)
