# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled modular kernels. Same contracts as ``_pykernels``.

All arithmetic is in int64; callers must keep ``p < 2**31`` so a product of
two residues plus an accumulator cannot overflow.
"""

from libc.stdint cimport int64_t
from libc.stdlib cimport malloc, free

MAX_MODULUS = 2 ** 31


cdef int64_t _inv(int64_t x, int64_t p):
    cdef int64_t t = 0, newt = 1, r = p, newr = x, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef int64_t* _load(object seq, Py_ssize_t size) except NULL:
    cdef int64_t* buf = <int64_t*> malloc(max(size, 1) * sizeof(int64_t))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(size):
        buf[i] = seq[i]
    return buf


def matmul_mod(a, b, Py_ssize_t n, Py_ssize_t m, Py_ssize_t k, int64_t p):
    cdef int64_t* A = _load(a, n * m)
    cdef int64_t* B
    try:
        B = _load(b, m * k)
    except MemoryError:
        free(A)
        raise
    cdef Py_ssize_t i, j, t
    cdef int64_t acc, x
    cdef list out = [0] * (n * k)
    try:
        for i in range(n):
            for j in range(k):
                acc = 0
                for t in range(m):
                    x = A[i * m + t]
                    if x:
                        acc = (acc + x * B[t * k + j]) % p
                out[i * k + j] = acc
    finally:
        free(A)
        free(B)
    return out


cdef Py_ssize_t _eliminate(int64_t* M, Py_ssize_t rows, Py_ssize_t cols,
                           int64_t p, Py_ssize_t pivot_limit, Py_ssize_t* pivots,
                           bint full):
    cdef Py_ssize_t r = 0, c, i, j, piv, start
    cdef int64_t inv, f, tmp
    for c in range(pivot_limit):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if M[i * cols + c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = M[r * cols + j]
                M[r * cols + j] = M[piv * cols + j]
                M[piv * cols + j] = tmp
        inv = _inv(M[r * cols + c], p)
        if inv != 1:
            for j in range(cols):
                M[r * cols + j] = M[r * cols + j] * inv % p
        start = 0 if full else r + 1
        for i in range(start, rows):
            if i == r:
                continue
            f = M[i * cols + c]
            if f != 0:
                for j in range(cols):
                    M[i * cols + j] = (M[i * cols + j] - f * M[r * cols + j]) % p
                    if M[i * cols + j] < 0:
                        M[i * cols + j] += p
        pivots[r] = c
        r += 1
    return r


def rref_mod(a, Py_ssize_t rows, Py_ssize_t cols, int64_t p, Py_ssize_t pivot_limit):
    cdef int64_t* M = _load(a, rows * cols)
    cdef Py_ssize_t* pivots = <Py_ssize_t*> malloc(max(rows, 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t r, i
    if pivots == NULL:
        free(M)
        raise MemoryError()
    try:
        r = _eliminate(M, rows, cols, p, pivot_limit, pivots, True)
        out = [M[i] for i in range(rows * cols)]
        piv = [pivots[i] for i in range(r)]
    finally:
        free(M)
        free(pivots)
    return out, piv


def rank_mod(a, Py_ssize_t rows, Py_ssize_t cols, int64_t p):
    cdef int64_t* M = _load(a, rows * cols)
    cdef Py_ssize_t* pivots = <Py_ssize_t*> malloc(max(rows, 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t r
    if pivots == NULL:
        free(M)
        raise MemoryError()
    try:
        r = _eliminate(M, rows, cols, p, cols, pivots, False)
    finally:
        free(M)
        free(pivots)
    return r
