"""Pure-Python kernels, used when the compiled ``_core`` extension is unavailable."""

from __future__ import annotations

import numpy as np

from .orderfind import OrderAssertionError, base_exponent, case_key
from .arith import jacobi


def _ypow(x: int, y: int, e: int, p: int, dm: int) -> int:
    ax, ay = 1, 0
    for bit in bin(e)[2:]:
        ax, ay = (ax * ax + dm * ay * ay) % p, (2 * ax * ay) % p
        if bit == "1":
            ax, ay = (ax * x + dm * ay * y) % p, (ax * y + ay * x) % p
    return ay


def _pair(d, quotients, norm, p, spf):
    h_prev, h, c_prev, c = 0, 1, 1, 0
    for a in quotients[:-1]:
        h_prev, h = h, (a * h + h_prev) % p
        c_prev, c = c, (a * c + c_prev) % p
    dm = d % p
    ls = jacobi(dm, p)
    q0 = base_exponent(norm, p, ls)
    if _ypow(h, c, q0, p, dm) != 0:
        raise OrderAssertionError(f"d={d} p={p}: y-coordinate of eps^{q0} is not 0 mod p")
    nu = 1
    m = q0
    while m > 1:
        f = spf[m]
        r = 0
        while m % f == 0:
            m //= f
            r += 1
        e = q0
        for _ in range(r):
            e //= f
            if _ypow(h, c, e, p, dm) != 0:
                break
            nu *= f
    return case_key(norm, ls), ls, q0, q0 // nu, nu


def sweep_d(d, quotients, norm, primes, spf, counts):
    quotients = [int(a) for a in quotients]
    spf_list = spf.tolist() if isinstance(spf, np.ndarray) else spf
    tally: dict[tuple[int, int], int] = {}
    pairs = 0
    for p in np.asarray(primes).tolist():
        if d % p == 0:
            continue
        j, _, _, _, q = _pair(d, quotients, norm, p, spf_list)
        tally[(j, q)] = tally.get((j, q), 0) + 1
        pairs += 1
    for (j, q), c in tally.items():
        counts[j - 1, q] += c
    return pairs


def records_d(d, quotients, norm, primes, spf):
    quotients = [int(a) for a in quotients]
    spf_list = spf.tolist() if isinstance(spf, np.ndarray) else spf
    rows = []
    for p in np.asarray(primes).tolist():
        if d % p == 0:
            continue
        rows.append((p, *_pair(d, quotients, norm, p, spf_list)))
    return np.array(rows, dtype=np.int64).reshape(-1, 6)
