"""Integer arithmetic shared by the rest of the package.

Smallest-prime-factor sieve, factorization of small integers, the
Legendre symbol and the squarefree / residue-class filter for ``d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

Factorization = list[tuple[int, int]]


@dataclass(frozen=True)
class PrimeTables:
    """Sieve output over ``[0, limit]``. Read-only once built."""

    limit: int
    is_prime: np.ndarray
    spf: np.ndarray

    def primes(self, lo: int = 2, hi: int | None = None) -> np.ndarray:
        """Primes in ``[lo, hi]`` as an int64 array."""
        hi = self.limit if hi is None else min(hi, self.limit)
        lo = max(lo, 0)
        if hi < lo:
            return np.empty(0, dtype=np.int64)
        return (np.flatnonzero(self.is_prime[lo:hi + 1]) + lo).astype(np.int64)


def build_tables(limit: int) -> PrimeTables:
    if limit < 2:
        raise ValueError(f"sieve limit must be >= 2, got {limit}")
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    idx = np.arange(limit + 1, dtype=np.int64)
    unmarked = spf == 0
    unmarked[:2] = False
    spf[unmarked] = idx[unmarked]
    is_prime = spf == idx
    is_prime[:2] = False
    is_prime.setflags(write=False)
    spf.setflags(write=False)
    return PrimeTables(limit=limit, is_prime=is_prime, spf=spf)


def factorize(n: int, tables: PrimeTables) -> Factorization:
    """Prime factorization of ``n`` as ``[(prime, exponent), ...]``, primes ascending."""
    if n < 1 or n > tables.limit:
        raise ValueError(f"cannot factor {n} with sieve limit {tables.limit}")
    spf = tables.spf
    out: Factorization = []
    while n > 1:
        f = int(spf[n])
        r = 0
        while n % f == 0:
            n //= f
            r += 1
        out.append((f, r))
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for k in range(3, math.isqrt(n) + 1, 2):
        if n % k == 0:
            return False
    return True


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n, by binary reciprocity."""
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(d: int, p: int) -> int:
    """Legendre symbol (d/p) for an odd prime ``p`` not dividing ``d``."""
    if p < 3 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    if d % p == 0:
        raise ValueError(f"p={p} divides d={d}")
    return jacobi(d, p)


def is_squarefree(n: int, tables: PrimeTables | None = None) -> bool:
    if tables is not None and n <= tables.limit:
        return all(r == 1 for _, r in factorize(n, tables))
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def classify_d(d: int, tables: PrimeTables | None = None) -> int | None:
    """Residue ``d mod 4`` (2 or 3) if ``d`` is a usable field parameter, else None."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    r = d % 4
    if r not in (2, 3) or not is_squarefree(d, tables):
        return None
    return r


def valid_d_mask(d_min: int, d_max: int) -> np.ndarray:
    """Boolean mask over ``[d_min, d_max]`` marking squarefree d with d = 2, 3 mod 4."""
    if d_min < 2 or d_max < d_min:
        raise ValueError(f"bad d range [{d_min}, {d_max}]")
    ds = np.arange(d_min, d_max + 1, dtype=np.int64)
    mask = (ds % 4 == 2) | (ds % 4 == 3)
    root = math.isqrt(d_max)
    if root >= 2:
        small = build_tables(max(root, 2))
        for p in small.primes():
            sq = int(p) * int(p)
            first = -(-d_min // sq) * sq
            mask[first - d_min::sq] = False
    return mask


def valid_ds(d_min: int, d_max: int) -> list[int]:
    mask = valid_d_mask(d_min, d_max)
    return (np.flatnonzero(mask) + d_min).tolist()
