"""Upper bounds on the number of connected components of a real Fano threefold.

For a smooth real Fano threefold ``X`` the real Betti numbers collapse to
two inputs: the geometric Picard rank ``rho_c`` and ``h12 = h^{1,2}``.
Smith–Thom gives ``s <= 1 + h12 + rho_c``; the Borel–Swan refinement
subtracts ``2*lambda``, where ``lambda`` is the rank of ``(1+σ)Pic(X_C)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

log = logging.getLogger(__name__)


class MissingLambda(ValueError):
    pass


@dataclass(frozen=True)
class HodgeData:
    rho_c: int
    h12: int
    rho_r: int | None = None
    lam: int | None = None

    def __post_init__(self):
        if self.rho_c < 1:
            raise ValueError("rho_c must be a positive integer")
        if self.h12 < 0:
            raise ValueError("h12 must be nonnegative")
        if self.rho_r is not None and not 1 <= self.rho_r <= self.rho_c:
            raise ValueError("need 1 <= rho_r <= rho_c")
        if self.lam is not None:
            if self.lam < 0:
                raise ValueError("lambda must be nonnegative")
            if self.lam > (self.rho_r if self.rho_r is not None else self.rho_c):
                raise ValueError("need lambda <= rho_r <= rho_c")


@dataclass(frozen=True)
class BoundReport:
    bound1: int
    bound2: int | None
    best: int
    clamped: bool = False

    def to_json(self) -> dict:
        return {"bound1": self.bound1, "bound2": self.bound2, "best": self.best, "clamped": self.clamped}


def smith_thom_bound(d: HodgeData) -> int:
    return 1 + d.h12 + d.rho_c


def borel_swan_bound(d: HodgeData) -> int:
    if d.lam is None:
        raise MissingLambda("the Borel-Swan bound needs lambda")
    return 1 + d.h12 + d.rho_c - 2 * d.lam


def bound_report(d: HodgeData) -> BoundReport:
    b1 = smith_thom_bound(d)
    if d.lam is None:
        return BoundReport(b1, None, b1)
    b2 = borel_swan_bound(d)
    clamped = b2 < 0
    if clamped:
        # only reachable when lambda exceeds what rho allows
        log.warning("Borel-Swan bound %d is negative; clamping to 0", b2)
        b2 = 0
    return BoundReport(b1, b2, min(b1, b2), clamped)
