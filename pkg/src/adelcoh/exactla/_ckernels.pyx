# cython: language_level=3
"""int64 kernels with overflow detection; callers fall back to Python on overflow."""

cdef extern from *:
    """
    static inline int adel_mul(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static inline int adel_sub(long long a, long long b, long long *r) { return __builtin_sub_overflow(a, b, r); }
    static inline int adel_add(long long a, long long b, long long *r) { return __builtin_add_overflow(a, b, r); }
    """
    int adel_mul(long long a, long long b, long long *r) nogil
    int adel_sub(long long a, long long b, long long *r) nogil
    int adel_add(long long a, long long b, long long *r) nogil

from libc.stdlib cimport malloc, free


def bareiss_rank(rows):
    """Rank over Q; returns -1 if an intermediate value overflows int64."""
    cdef Py_ssize_t nrows = len(rows)
    if nrows == 0:
        return 0
    cdef Py_ssize_t ncols = len(rows[0])
    if ncols == 0:
        return 0
    cdef long long *m = <long long *> malloc(nrows * ncols * sizeof(long long))
    if m == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, col, piv, rank = 0
    cdef long long pv, a, prev = 1, t1, t2, tmp
    cdef int overflow = 0
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                m[i * ncols + j] = row[j]
        with nogil:
            for col in range(ncols):
                piv = -1
                for i in range(rank, nrows):
                    if m[i * ncols + col] != 0:
                        piv = i
                        break
                if piv < 0:
                    continue
                if piv != rank:
                    for j in range(ncols):
                        tmp = m[piv * ncols + j]
                        m[piv * ncols + j] = m[rank * ncols + j]
                        m[rank * ncols + j] = tmp
                pv = m[rank * ncols + col]
                for i in range(rank + 1, nrows):
                    a = m[i * ncols + col]
                    for j in range(col + 1, ncols):
                        if adel_mul(pv, m[i * ncols + j], &t1):
                            overflow = 1
                            break
                        if adel_mul(a, m[rank * ncols + j], &t2):
                            overflow = 1
                            break
                        if adel_sub(t1, t2, &t1):
                            overflow = 1
                            break
                        m[i * ncols + j] = t1 // prev
                    if overflow:
                        break
                    m[i * ncols + col] = 0
                if overflow:
                    break
                prev = pv
                rank += 1
                if rank == nrows:
                    break
    finally:
        free(m)
    if overflow:
        return -1
    return rank


def matmul(a, b):
    """Integer matrix product; returns None on int64 overflow."""
    cdef Py_ssize_t n = len(a)
    if n == 0 or len(b) == 0:
        return None
    cdef Py_ssize_t k = len(b), mcols = len(b[0]), i, j, l
    cdef long long acc, t
    out = []
    for i in range(n):
        ra = a[i]
        orow = []
        for j in range(mcols):
            acc = 0
            for l in range(k):
                if adel_mul(<long long> ra[l], <long long> b[l][j], &t):
                    return None
                if adel_add(acc, t, &acc):
                    return None
            orow.append(acc)
        out.append(orow)
    return out
