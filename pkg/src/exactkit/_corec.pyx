# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for dense arithmetic mod a prime.

Behaviourally identical to ``_corepy``; selected at import time by
``exactkit.kernels``.
"""

from libc.stdlib cimport malloc, free


cdef long _inv_mod(long x, long p):
    # Fermat: p is prime and x != 0 mod p.
    cdef long result = 1
    cdef long base = x % p
    cdef long e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def mat_mul(a, int ar, int ac, b, int br, int bc, int p):
    if ac != br:
        raise ValueError("mat_mul: inner dimensions differ (%d != %d)" % (ac, br))
    cdef int i, j, k
    cdef long aval
    cdef long *am = <long *> malloc(ar * ac * sizeof(long))
    cdef long *bm = <long *> malloc(br * bc * sizeof(long))
    cdef long *om = <long *> malloc(ar * bc * sizeof(long))
    if (ar * ac and am is NULL) or (br * bc and bm is NULL) or (ar * bc and om is NULL):
        free(am); free(bm); free(om)
        raise MemoryError()
    try:
        for i in range(ar * ac):
            am[i] = a[i]
        for i in range(br * bc):
            bm[i] = b[i]
        for i in range(ar * bc):
            om[i] = 0
        for i in range(ar):
            for k in range(ac):
                aval = am[i * ac + k]
                if aval:
                    for j in range(bc):
                        om[i * bc + j] += aval * bm[k * bc + j]
        return [om[i] % p for i in range(ar * bc)]
    finally:
        free(am)
        free(bm)
        free(om)


def rref(data, int rows, int cols, int p):
    cdef int r, c, i, j, piv
    cdef long f, inv, tmp
    cdef long *m = <long *> malloc(rows * cols * sizeof(long))
    if rows * cols and m is NULL:
        raise MemoryError()
    pivots = []
    try:
        for i in range(rows * cols):
            m[i] = data[i] % p
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if m[i * cols + c]:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(c, cols):
                    tmp = m[r * cols + j]
                    m[r * cols + j] = m[piv * cols + j]
                    m[piv * cols + j] = tmp
            inv = _inv_mod(m[r * cols + c], p)
            if inv != 1:
                for j in range(c, cols):
                    m[r * cols + j] = (m[r * cols + j] * inv) % p
            for i in range(rows):
                if i != r:
                    f = m[i * cols + c]
                    if f:
                        for j in range(c, cols):
                            m[i * cols + j] = (m[i * cols + j] - f * m[r * cols + j]) % p
                            if m[i * cols + j] < 0:
                                m[i * cols + j] += p
            pivots.append(c)
            r += 1
        return [m[i] for i in range(rows * cols)], pivots
    finally:
        free(m)
