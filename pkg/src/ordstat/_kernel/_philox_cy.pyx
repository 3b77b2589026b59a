# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled Philox4x64-10 kernel.

Bit-identical twin of ``_philox_np``: same block function, same key/counter
layout, same uint64 -> double conversion.  The generation loop runs without
the GIL so caller-level thread pools scale.
"""

from libc.stdint cimport uint64_t
import numpy as np

cdef extern from *:
    """
    #include <stdint.h>
    static inline uint64_t ordstat_mulhi64(uint64_t a, uint64_t b) {
        return (uint64_t)(((unsigned __int128)a * (unsigned __int128)b) >> 64);
    }
    """
    uint64_t ordstat_mulhi64(uint64_t a, uint64_t b) nogil

cdef uint64_t M0 = 0xD2E7470EE14C6C93ULL
cdef uint64_t M1 = 0xCA5A826395121157ULL
cdef uint64_t W0 = 0x9E3779B97F4A7C15ULL
cdef uint64_t W1 = 0xBB67AE8584CAA73BULL

BACKEND_NAME = "compiled"


cdef inline void _philox4(uint64_t c0, uint64_t c1, uint64_t c2, uint64_t c3,
                          uint64_t k0, uint64_t k1, uint64_t* out) noexcept nogil:
    cdef int r
    cdef uint64_t hi0, lo0, hi1, lo1
    for r in range(10):
        hi0 = ordstat_mulhi64(c0, M0)
        lo0 = c0 * M0
        hi1 = ordstat_mulhi64(c2, M1)
        lo1 = c2 * M1
        c0 = hi1 ^ c1 ^ k0
        c1 = lo1
        c2 = hi0 ^ c3 ^ k1
        c3 = lo0
        k0 = k0 + W0
        k1 = k1 + W1
    out[0] = c0
    out[1] = c1
    out[2] = c2
    out[3] = c3


def philox_block(c0, c1, c2, c3, key0, key1):
    """Array form of the block bijection, mirroring the fallback signature."""
    cdef uint64_t[::1] a0, a1, a2, a3, k1v
    b = np.broadcast_arrays(
        np.asarray(c0, dtype=np.uint64), np.asarray(c1, dtype=np.uint64),
        np.asarray(c2, dtype=np.uint64), np.asarray(c3, dtype=np.uint64),
        np.asarray(key1, dtype=np.uint64))
    shape = b[0].shape
    a0, a1, a2, a3, k1v = [np.ascontiguousarray(x).reshape(-1) for x in b]
    cdef Py_ssize_t i, m = a0.shape[0]
    cdef uint64_t k0 = <uint64_t>(int(key0) & 0xFFFFFFFFFFFFFFFF)
    out = np.empty((4, m), dtype=np.uint64)
    cdef uint64_t[:, ::1] o = out
    cdef uint64_t buf[4]
    for i in range(m):
        _philox4(a0[i], a1[i], a2[i], a3[i], k0, k1v[i], buf)
        o[0, i] = buf[0]
        o[1, i] = buf[1]
        o[2, i] = buf[2]
        o[3, i] = buf[3]
    return tuple(out[j].reshape(shape) for j in range(4))


def uniform_matrix(key0, key1_start, Py_ssize_t rows, Py_ssize_t cols):
    """Uniforms in (0, 1): row r is the stream (key0, key1_start + r)."""
    if rows <= 0 or cols <= 0:
        return np.empty((max(rows, 0), max(cols, 0)), dtype=np.float64)
    out = np.empty((rows, cols), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef uint64_t k0 = <uint64_t>(int(key0) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t k1base = <uint64_t>(int(key1_start) & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t r, b, j, col, nblocks = (cols + 3) // 4
    cdef uint64_t buf[4]
    cdef double scale = 2.0 ** -52
    with nogil:
        for r in range(rows):
            for b in range(nblocks):
                _philox4(<uint64_t>b, 0, 0, 0, k0, k1base + <uint64_t>r, buf)
                for j in range(4):
                    col = 4 * b + j
                    if col < cols:
                        o[r, col] = (<double>(buf[j] >> 12) + 0.5) * scale
    return out
