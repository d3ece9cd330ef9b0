# cython: boundscheck=False, wraparound=False, language_level=3
"""Compiled longest-common-subsequence kernel.

Tokens are interned to small ints with a dict, then the DP runs on C int
arrays with the GIL released, so thread pools get real parallelism.
"""

from libc.stdlib cimport free, malloc


cdef int _lcs_ints(const int* a, Py_ssize_t n, const int* b, Py_ssize_t m, int* prev, int* curr) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef int ai, pj, cj
    for j in range(m + 1):
        prev[j] = 0
    for i in range(1, n + 1):
        ai = a[i - 1]
        curr[0] = 0
        for j in range(1, m + 1):
            if ai == b[j - 1]:
                curr[j] = prev[j - 1] + 1
            else:
                pj = prev[j]
                cj = curr[j - 1]
                curr[j] = pj if pj >= cj else cj
        prev, curr = curr, prev
    return prev[m]


def lcs_length(s1, s2):
    """Length of the LCS of two token sequences."""
    cdef Py_ssize_t n = len(s1)
    cdef Py_ssize_t m = len(s2)
    if n == 0 or m == 0:
        return 0
    cdef dict ids = {}
    cdef int* a = <int*> malloc(n * sizeof(int))
    cdef int* b = <int*> malloc(m * sizeof(int))
    cdef int* prev = <int*> malloc((m + 1) * sizeof(int))
    cdef int* curr = <int*> malloc((m + 1) * sizeof(int))
    cdef int result
    cdef Py_ssize_t i
    if a == NULL or b == NULL or prev == NULL or curr == NULL:
        free(a); free(b); free(prev); free(curr)
        raise MemoryError()
    try:
        for i in range(n):
            a[i] = ids.setdefault(s1[i], len(ids))
        for i in range(m):
            b[i] = ids.setdefault(s2[i], len(ids))
        with nogil:
            result = _lcs_ints(a, n, b, m, prev, curr)
        return result
    finally:
        free(a); free(b); free(prev); free(curr)
