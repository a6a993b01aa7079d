# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled backtracking kernel for isometry search.

Same contract as ``_isosearch_py``.  Tables are copied once into flat int64
buffers (``array.array('q')``) and walked without touching Python objects;
the caller guarantees every value fits in 62 bits.
"""
from array import array

from libc.stdlib cimport malloc, free

ctypedef long long i64


cdef inline bint _consistent(const i64[::1] inner, Py_ssize_t stride, const i64[::1] gram,
                             Py_ssize_t n, i64* chosen, i64 a, Py_ssize_t depth) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(depth):
        if inner[a * stride + chosen[i]] != gram[i * n + depth]:
            return False
    return True


cdef i64 _dfs(const i64[::1] inner, Py_ssize_t stride, const i64[::1] offsets,
              const i64[::1] flat, const i64[::1] gram, i64* chosen,
              Py_ssize_t depth, Py_ssize_t n, bint first_only) noexcept nogil:
    cdef i64 total = 0
    cdef i64 k, a
    if depth == n:
        return 1
    for k in range(offsets[depth], offsets[depth + 1]):
        a = flat[k]
        if _consistent(inner, stride, gram, n, chosen, a, depth):
            chosen[depth] = a
            total += _dfs(inner, stride, offsets, flat, gram, chosen, depth + 1, n, first_only)
            if first_only and total:
                return total
    return total


cdef class SearchTable:
    cdef i64[::1] inner
    cdef i64[::1] offsets
    cdef i64[::1] flat
    cdef i64[::1] gram
    cdef Py_ssize_t stride
    cdef readonly Py_ssize_t n

    def __init__(self, inner, offsets, flat, gram):
        self.stride = len(inner)
        self.inner = array("q", [x for r in inner for x in r])
        self.offsets = array("q", offsets)
        self.flat = array("q", flat)
        self.gram = array("q", [x for r in gram for x in r])
        self.n = len(offsets) - 1

    cdef i64 _run(self, prefix, bint first_only, list out) except -1:
        cdef Py_ssize_t start = len(prefix)
        cdef Py_ssize_t d
        cdef i64 result
        cdef i64* chosen = <i64*> malloc(max(self.n, 1) * sizeof(i64))
        if chosen == NULL:
            raise MemoryError()
        try:
            for d in range(start):
                chosen[d] = prefix[d]
            for d in range(start):
                if not _consistent(self.inner, self.stride, self.gram, self.n, chosen, chosen[d], d):
                    return 0
            with nogil:
                result = _dfs(self.inner, self.stride, self.offsets, self.flat, self.gram,
                              chosen, start, self.n, first_only)
            if result and out is not None:
                for d in range(self.n):
                    out.append(chosen[d])
            return result
        finally:
            free(chosen)

    def find_completion(self, prefix):
        """First completion of ``prefix`` to a full isometry, or ``None``."""
        out = []
        if self._run(prefix, True, out):
            return out
        return None

    def count_completions(self, prefix):
        """Number of completions of ``prefix`` (a brute-force group order)."""
        return int(self._run(prefix, False, None))
