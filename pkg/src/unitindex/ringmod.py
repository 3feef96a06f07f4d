"""Arithmetic in Z[sqrt d]/(p) on bare ``(x, y)`` pairs meaning ``x + y*sqrt(d)``."""

from __future__ import annotations

from typing import NamedTuple

RingElem = tuple[int, int]

ONE: RingElem = (1, 0)


class Context(NamedTuple):
    p: int
    d_mod_p: int


def _check(a: RingElem, ctx: Context) -> None:
    x, y = a
    if not (0 <= x < ctx.p and 0 <= y < ctx.p):
        raise ValueError(f"{a} is not reduced modulo {ctx.p}")


def _reduce(v: int, p: int) -> int:
    return v % p


def mul(a: RingElem, b: RingElem, ctx: Context) -> RingElem:
    _check(a, ctx)
    _check(b, ctx)
    return _mul(a, b, ctx.p, ctx.d_mod_p)


def _mul(a: RingElem, b: RingElem, p: int, dm: int) -> RingElem:
    ax, ay = a
    bx, by = b
    return (
        _reduce(ax * bx + dm * _reduce(ay * by, p), p),
        _reduce(ax * by + ay * bx, p),
    )


def pow(base: RingElem, e: int, ctx: Context) -> RingElem:
    """``base**e`` by left-to-right square and multiply."""
    if e < 0:
        raise ValueError("negative exponent")
    _check(base, ctx)
    p, dm = ctx
    acc = ONE
    for bit in bin(e)[2:] if e else "":
        acc = _mul(acc, acc, p, dm)
        if bit == "1":
            acc = _mul(acc, base, p, dm)
    return acc


def norm(a: RingElem, ctx: Context) -> int:
    x, y = a
    return (x * x - ctx.d_mod_p * y * y) % ctx.p
