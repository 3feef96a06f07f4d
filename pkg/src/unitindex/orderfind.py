"""Order of the fundamental unit modulo the conductor-p order.

``n(p)`` is the least ``nu`` with the sqrt(d)-coefficient of ``eps**nu``
divisible by ``p``. It divides a known multiple ``q0``, so instead of
searching we factor ``q0`` and strip prime powers while the coefficient
stays zero; what was stripped is the quotient ``q = q0 / n(p)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ringmod
from .arith import PrimeTables, factorize, legendre
from .pell import UnitResidue


class OrderAssertionError(ArithmeticError):
    """eps**q0 failed to land in the order; the divisibility law was violated."""


class OracleFailure(ArithmeticError):
    pass


_CASES = {(1, 1): 1, (1, -1): 2, (-1, 1): 3, (-1, -1): 4}


def case_key(norm_sign: int, ls: int) -> int:
    """Histogram index j in 1..4 for (norm of eps, (d/p))."""
    try:
        return _CASES[(norm_sign, ls)]
    except KeyError:
        raise ValueError(f"norm_sign and ls must be +-1, got {norm_sign}, {ls}") from None


def base_exponent(norm_sign: int, p: int, ls: int) -> int:
    return (p - ls) // 2 if norm_sign == 1 else p - ls


@dataclass(frozen=True)
class OrderResult:
    d: int
    p: int
    case: int
    ls: int
    q0: int
    n: int
    q: int


def order_and_quotient(unit: UnitResidue, p: int, d: int, tables: PrimeTables) -> OrderResult:
    if unit.p != p or unit.d_mod_p != d % p:
        raise ValueError("unit residue does not belong to this (d, p)")
    ls = legendre(d, p)
    q0 = base_exponent(unit.norm_sign, p, ls)
    ctx = ringmod.Context(p, unit.d_mod_p)
    eps = (unit.x, unit.y)

    if ringmod.pow(eps, q0, ctx)[1] != 0:
        raise OrderAssertionError(
            f"d={d} p={p}: y-coordinate of eps^{q0} is not 0 mod p"
        )

    nu = 1
    for prime, r in factorize(q0, tables):
        e = q0
        for _ in range(r):
            e //= prime
            if ringmod.pow(eps, e, ctx)[1] != 0:
                break
            nu *= prime
    return OrderResult(
        d=d, p=p, case=case_key(unit.norm_sign, ls), ls=ls, q0=q0, n=q0 // nu, q=nu
    )


def naive_order(unit: UnitResidue, p: int, d: int, cap: int | None = None) -> int:
    """First ``nu`` with ``p | y_nu``, by repeated multiplication."""
    cap = p + 1 if cap is None else cap
    if cap < p + 1:
        raise ValueError(f"cap must be >= p + 1 = {p + 1}")
    ctx = ringmod.Context(p, d % p)
    eps = (unit.x, unit.y)
    cur = eps
    for nu in range(1, cap + 1):
        if cur[1] == 0:
            return nu
        cur = ringmod.mul(cur, eps, ctx)
    raise OracleFailure(f"no power of eps up to {cap} lies in O_p for d={d}, p={p}")
