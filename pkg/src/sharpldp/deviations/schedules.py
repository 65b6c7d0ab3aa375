"""Window schedules ``delta_n``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import DomainError

_KINDS = {
    "const": ("delta",),
    "poly": ("c", "beta"),
    "subexp": ("c", "gamma"),
    "exp": ("c", "alpha0"),
}


@dataclass(frozen=True)
class WindowSchedule:
    """Half-width schedule of the averaging window.

    ``const``: ``delta``; ``poly``: ``c n^-beta``; ``subexp``: ``c exp(-gamma sqrt n)``;
    ``exp``: ``c exp(-alpha0 n)``.
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown schedule kind {self.kind!r}; expected one of {sorted(_KINDS)}")
        need = _KINDS[self.kind]
        got = set(self.params)
        if got != set(need):
            raise DomainError(f"schedule {self.kind!r} takes parameters {need}, got {sorted(got)}")
        vals = {k: float(v) for k, v in self.params.items()}
        object.__setattr__(self, "params", vals)
        lead = vals.get("delta", vals.get("c"))
        if not lead > 0:
            raise DomainError("schedule scale must be positive")
        for k in ("beta", "gamma", "alpha0"):
            if k in vals and vals[k] < 0:
                raise DomainError(f"schedule parameter {k} must be >= 0")

    @classmethod
    def parse(cls, text: str) -> "WindowSchedule":
        """Parse ``kind:key=value,...`` (e.g. ``poly:c=1,beta=2``)."""
        kind, _, rest = text.partition(":")
        params = {}
        for part in filter(None, rest.split(",")):
            key, eq, val = part.partition("=")
            if not eq:
                raise DomainError(f"malformed schedule parameter {part!r}")
            try:
                params[key.strip()] = float(val)
            except ValueError:
                raise DomainError(f"schedule parameter {key!r} is not a number") from None
        return cls(kind.strip(), params)

    def to_text(self) -> str:
        return self.kind + ":" + ",".join(f"{k}={self.params[k]:.17g}" for k in _KINDS[self.kind])

    @property
    def alpha0(self) -> float:
        """``lim -log(delta_n)/n``."""
        return self.params["alpha0"] if self.kind == "exp" else 0.0

    def delta(self, n: int) -> float:
        if n < 1:
            raise DomainError("n must be >= 1")
        p = self.params
        if self.kind == "const":
            return p["delta"]
        if self.kind == "poly":
            return p["c"] * n ** (-p["beta"])
        if self.kind == "subexp":
            return p["c"] * math.exp(-p["gamma"] * math.sqrt(n))
        return p["c"] * math.exp(-p["alpha0"] * n)

    def epsilon(self, n: int) -> float:
        """Window half-width in sum space, ``n delta_n``."""
        return n * self.delta(n)
