# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled per-d kernels. Same contract as ``_pykernels``."""

import numpy as np

from libc.stdint cimport int64_t, uint64_t

cdef uint64_t NARROW = 1u << 31


cdef inline void _rmul(uint64_t ax, uint64_t ay, uint64_t bx, uint64_t by,
                       uint64_t p, uint64_t dm, uint64_t *rx, uint64_t *ry) noexcept nogil:
    # single reduction seam; p < 2**32 keeps each product below 2**64,
    # p < 2**31 additionally lets two of them be summed before reducing
    if p < NARROW:
        rx[0] = (ax * bx + dm * (ay * by % p)) % p
        ry[0] = (ax * by + ay * bx) % p
    else:
        rx[0] = (ax * bx % p + dm * (ay * by % p) % p) % p
        ry[0] = (ax * by % p + ay * bx % p) % p


cdef inline uint64_t _ypow(uint64_t x, uint64_t y, uint64_t e,
                           uint64_t p, uint64_t dm) noexcept nogil:
    cdef uint64_t ax = 1, ay = 0
    cdef int bit = 63
    if e == 0:
        return 0
    while not (e >> bit) & 1:
        bit -= 1
    while bit >= 0:
        _rmul(ax, ay, ax, ay, p, dm, &ax, &ay)
        if (e >> bit) & 1:
            _rmul(ax, ay, x, y, p, dm, &ax, &ay)
        bit -= 1
    return ay


cdef inline int _jacobi(uint64_t a, uint64_t n) noexcept nogil:
    cdef int result = 1
    cdef uint64_t t
    a %= n
    while a:
        while (a & 1) == 0:
            a >>= 1
            if (n & 7) == 3 or (n & 7) == 5:
                result = -result
        t = a
        a = n
        n = t
        if (a & 3) == 3 and (n & 3) == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


cdef int _pair(int64_t d, const int64_t[::1] quotients, int norm, uint64_t p,
               const int64_t[::1] spf, int64_t *out) noexcept nogil:
    """Fill out = [case, ls, q0, n, q]; return 0 on success, -1 if eps^q0 not in O_p."""
    cdef Py_ssize_t k, ell = quotients.shape[0] - 1
    cdef uint64_t h_prev = 0, h = 1, c_prev = 1, c = 0, a, t
    cdef uint64_t dm = <uint64_t>d % p
    cdef int ls
    cdef uint64_t q0, m, f, e, nu = 1
    cdef int r, b

    for k in range(ell):
        a = <uint64_t>quotients[k] % p
        t = (a * h + h_prev) % p
        h_prev = h
        h = t
        t = (a * c + c_prev) % p
        c_prev = c
        c = t

    ls = _jacobi(dm, p)
    if norm == 1:
        q0 = (p - ls) // 2
    else:
        q0 = p - ls

    if _ypow(h, c, q0, p, dm) != 0:
        out[2] = <int64_t>q0
        return -1

    m = q0
    while m > 1:
        f = <uint64_t>spf[m]
        r = 0
        while m % f == 0:
            m //= f
            r += 1
        e = q0
        for b in range(r):
            e //= f
            if _ypow(h, c, e, p, dm) != 0:
                break
            nu *= f

    if norm == 1:
        out[0] = 1 if ls == 1 else 2
    else:
        out[0] = 3 if ls == 1 else 4
    out[1] = ls
    out[2] = <int64_t>q0
    out[3] = <int64_t>(q0 // nu)
    out[4] = <int64_t>nu
    return 0


def _fail(d, p, q0):
    from .orderfind import OrderAssertionError
    raise OrderAssertionError(f"d={d} p={p}: y-coordinate of eps^{q0} is not 0 mod p")


def sweep_d(int64_t d, const int64_t[::1] quotients, int norm,
            const int64_t[::1] primes, const int64_t[::1] spf,
            int64_t[:, ::1] counts):
    """Add every (d, p), p in ``primes`` with p not dividing d, into ``counts[case-1, q]``."""
    cdef Py_ssize_t i, n = primes.shape[0]
    cdef int64_t out[5]
    cdef int64_t pairs = 0
    cdef uint64_t p
    cdef int status = 0
    with nogil:
        for i in range(n):
            p = <uint64_t>primes[i]
            if d % <int64_t>p == 0:
                continue
            status = _pair(d, quotients, norm, p, spf, out)
            if status != 0:
                break
            counts[out[0] - 1, out[4]] += 1
            pairs += 1
    if status != 0:
        _fail(d, p, out[2])
    return pairs


def records_d(int64_t d, const int64_t[::1] quotients, int norm,
              const int64_t[::1] primes, const int64_t[::1] spf):
    """Per-pair records as an int64 array with columns p, case, ls, q0, n, q."""
    cdef Py_ssize_t i, j = 0, n = primes.shape[0]
    cdef int64_t out[5]
    cdef uint64_t p
    res = np.empty((n, 6), dtype=np.int64)
    cdef int64_t[:, ::1] rv = res
    for i in range(n):
        p = <uint64_t>primes[i]
        if d % <int64_t>p == 0:
            continue
        if _pair(d, quotients, norm, p, spf, out) != 0:
            _fail(d, p, out[2])
        rv[j, 0] = <int64_t>p
        rv[j, 1] = out[0]
        rv[j, 2] = out[1]
        rv[j, 3] = out[2]
        rv[j, 4] = out[3]
        rv[j, 5] = out[4]
        j += 1
    return res[:j]
