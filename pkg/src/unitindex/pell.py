"""Fundamental units of Q(sqrt d), d = 2, 3 mod 4, via the continued fraction of sqrt d.

The expansion depends only on ``d`` and is cached; reducing the unit
modulo a prime replays the convergent recurrence with residues only, so
the sweep never touches big integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .arith import classify_d

PERIOD_CAP = 10**7


class PellConsistencyError(ArithmeticError):
    """x1^2 - d*y1^2 did not come out as +-1; indicates a bug, not bad input."""


@dataclass(frozen=True)
class FieldParams:
    d: int
    floor_sqrt_d: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if self.d < 2 or classify_d(self.d) is None:
            raise ValueError(f"d={self.d} is not squarefree with d = 2, 3 mod 4")
        object.__setattr__(self, "floor_sqrt_d", math.isqrt(self.d))


@dataclass(frozen=True)
class CFExpansion:
    """``partial_quotients`` is ``(a0, a1, ..., a_l)``; the last entry equals ``2*a0``."""

    partial_quotients: tuple[int, ...]

    @property
    def period(self) -> int:
        return len(self.partial_quotients) - 1

    @property
    def norm_sign(self) -> int:
        return -1 if self.period % 2 else 1


@dataclass(frozen=True)
class UnitExact:
    x1: int
    y1: int
    norm_sign: int


@dataclass(frozen=True)
class UnitResidue:
    x: int
    y: int
    p: int
    d_mod_p: int
    norm_sign: int


@lru_cache(maxsize=4096)
def cf_expand(params: FieldParams) -> CFExpansion:
    d = params.d
    a0 = params.floor_sqrt_d
    bound = 2 * a0 + 1
    quotients = [a0]
    P, Q = 0, 1
    a = a0
    first: tuple[int, int] | None = None
    for k in range(PERIOD_CAP + 1):
        P = a * Q - P
        Q = (d - P * P) // Q
        if not (0 <= P <= bound and 0 < Q <= bound):
            raise PellConsistencyError(f"CF state out of bounds for d={d}: P={P}, Q={Q}")
        if first is None:
            first = (P, Q)
        elif (P, Q) == first:
            return CFExpansion(tuple(quotients))
        a = (P + a0) // Q
        quotients.append(a)
    raise PellConsistencyError(f"CF period of sqrt({d}) exceeds {PERIOD_CAP}")


def fundamental_unit_exact(params: FieldParams) -> UnitExact:
    cf = cf_expand(params)
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    for a in cf.partial_quotients[:-1]:
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
    sign = cf.norm_sign
    if h * h - params.d * k * k != sign:
        raise PellConsistencyError(
            f"d={params.d}: {h}^2 - d*{k}^2 != {sign}"
        )
    return UnitExact(x1=h, y1=k, norm_sign=sign)


def fundamental_unit_mod_p(params: FieldParams, p: int) -> UnitResidue:
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p={p} must be an odd prime")
    if params.d % p == 0:
        raise ValueError(f"p={p} divides d={params.d}")
    cf = cf_expand(params)
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    for a in cf.partial_quotients[:-1]:
        a %= p
        h_prev, h = h, (a * h + h_prev) % p
        k_prev, k = k, (a * k + k_prev) % p
    return UnitResidue(x=h, y=k, p=p, d_mod_p=params.d % p, norm_sign=cf.norm_sign)
