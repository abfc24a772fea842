# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Bit-packed GF(2) Gauss-Jordan elimination on uint64 word arrays."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t

cnp.import_array()


cdef Py_ssize_t _gauss_jordan(uint64_t[:, ::1] M, Py_ssize_t ncols, Py_ssize_t[::1] piv) nogil:
    cdef Py_ssize_t nrows = M.shape[0], nwords = M.shape[1]
    cdef Py_ssize_t col, r, r2, k, w, rank = 0
    cdef uint64_t b, tmp
    for col in range(ncols):
        if rank == nrows:
            break
        w = col >> 6
        b = (<uint64_t>1) << (col & 63)
        r = rank
        while r < nrows and not (M[r, w] & b):
            r += 1
        if r == nrows:
            continue
        if r != rank:
            for k in range(w, nwords):
                tmp = M[r, k]
                M[r, k] = M[rank, k]
                M[rank, k] = tmp
        for r2 in range(nrows):
            if r2 != rank and (M[r2, w] & b):
                for k in range(w, nwords):
                    M[r2, k] ^= M[rank, k]
        piv[rank] = col
        rank += 1
    return rank


def _to_array(rows, Py_ssize_t nwords):
    cdef Py_ssize_t nbytes = nwords * 8
    if not rows:
        return np.zeros((0, max(nwords, 1)), dtype=np.uint64)
    buf = b"".join([r.to_bytes(nbytes, "little") for r in rows])
    return np.frombuffer(buf, dtype="<u8").reshape(len(rows), nwords).astype(np.uint64)


def _row_int(arr, i, start_bit, nbits):
    v = int.from_bytes(arr[i].tobytes(), "little")
    return (v >> start_bit) & ((1 << nbits) - 1)


def rref(rows, Py_ssize_t ncols):
    cdef Py_ssize_t nwords = max(1, (ncols + 63) // 64)
    M = _to_array(list(rows), nwords)
    piv = np.zeros(max(1, M.shape[0]), dtype=np.intp)
    cdef Py_ssize_t rk
    cdef uint64_t[:, ::1] mv = M
    cdef Py_ssize_t[::1] pv = piv
    with nogil:
        rk = _gauss_jordan(mv, ncols, pv)
    return [_row_int(M, i, 0, ncols) for i in range(rk)], [int(p) for p in piv[:rk]]


def rank(rows, Py_ssize_t ncols):
    return len(rref(rows, ncols)[1])


def echelon_kernel(rows, Py_ssize_t ncols):
    rows = list(rows)
    cdef Py_ssize_t n = len(rows), i
    cdef Py_ssize_t width = ncols + n
    cdef Py_ssize_t nwords = max(1, (width + 63) // 64)
    M = _to_array(rows, nwords)
    cdef uint64_t[:, ::1] mv = M
    for i in range(n):
        mv[i, (ncols + i) >> 6] |= (<uint64_t>1) << ((ncols + i) & 63)
    piv = np.zeros(max(1, n), dtype=np.intp)
    cdef Py_ssize_t[::1] pv = piv
    cdef Py_ssize_t rk
    with nogil:
        rk = _gauss_jordan(mv, ncols, pv)
    image = [_row_int(M, i, 0, ncols) for i in range(rk)]
    pivots = [int(p) for p in piv[:rk]]
    # rows past the rank have zero left block; their right block spans the kernel
    K = np.ascontiguousarray(M[rk:])
    if K.shape[0] == 0:
        return image, pivots, []
    # shift the identity block to column 0 and reduce
    kernel_rows = [_row_int(K, i, ncols, n) for i in range(K.shape[0])]
    kernel, _ = rref(kernel_rows, n)
    return image, pivots, kernel
