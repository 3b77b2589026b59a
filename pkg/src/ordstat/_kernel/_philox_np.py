"""Pure NumPy implementation of the Philox4x64-10 counter-based generator.

This is the fallback kernel used when the compiled extension is not
available.  Both kernels produce bit-identical output: the block function
is pure 64-bit integer arithmetic and the conversion to doubles uses only
exact floating-point operations, so no reordering or library difference
can leak in.

Layout convention used by the package: a stream is a Philox key pair
``(key0, key1)``; draw ``j`` of the stream comes from counter block
``(j // 4, 0, 0, 0)``, lane ``j % 4``.
"""

from __future__ import annotations

import numpy as np

# Multipliers and Weyl key increments of Philox4x64 (Random123 parameters).
_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = 0x9E3779B97F4A7C15
_W1 = 0xBB67AE8584CAA73B
_MASK64 = (1 << 64) - 1
_MASK32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_S12 = np.uint64(12)
_ROUNDS = 10

BACKEND_NAME = "python"


def _mulhilo(a: np.ndarray, m: np.uint64):
    """Full 64x64 -> 128 bit product of array ``a`` with scalar ``m``.

    The high word is assembled from 32-bit half products; every partial sum
    stays below 2**64 so the arithmetic is exact despite the wraparound
    semantics of uint64.
    """
    lo = a * m
    ah = a >> _S32
    al = a & _MASK32
    mh = m >> _S32
    ml = m & _MASK32
    t = ah * ml + ((al * ml) >> _S32)
    mid = al * mh + (t & _MASK32)
    hi = ah * mh + (t >> _S32) + (mid >> _S32)
    return hi, lo


def philox_block(c0, c1, c2, c3, key0: int, key1):
    """Apply the 10-round Philox4x64 bijection to one batch of counters.

    ``c0..c3`` are uint64 arrays (or scalars) broadcast against each other;
    ``key1`` may be an array to evaluate many streams at once.  Returns the
    four output words.
    """
    c0, c1, c2, c3 = (np.asarray(c, dtype=np.uint64) for c in (c0, c1, c2, c3))
    k1 = np.asarray(key1, dtype=np.uint64)
    # modular wraparound is the point here; silence the overflow warning
    # numpy emits for 0-d operands
    with np.errstate(over="ignore"):
        for r in range(_ROUNDS):
            rk0 = np.uint64((key0 + r * _W0) & _MASK64)
            rk1 = k1 + np.uint64((r * _W1) & _MASK64)
            hi0, lo0 = _mulhilo(c0, _M0)
            hi1, lo1 = _mulhilo(c2, _M1)
            c0, c1, c2, c3 = hi1 ^ c1 ^ rk0, lo1, hi0 ^ c3 ^ rk1, lo0
    return c0, c1, c2, c3


def uniform_matrix(key0: int, key1_start: int, rows: int, cols: int) -> np.ndarray:
    """Uniforms in (0, 1) for ``rows`` consecutive streams, ``cols`` draws each.

    Row ``r`` is the stream keyed ``(key0, key1_start + r)``.  Each uint64
    output word ``x`` maps to ``((x >> 12) + 0.5) * 2**-52``, an odd multiple
    of 2**-53, so 0 and 1 are never produced and the conversion is exact.
    """
    if rows <= 0 or cols <= 0:
        return np.empty((max(rows, 0), max(cols, 0)), dtype=np.float64)
    nblocks = (cols + 3) // 4
    c0 = np.broadcast_to(np.arange(nblocks, dtype=np.uint64)[None, :], (rows, nblocks))
    zero = np.zeros((1, 1), dtype=np.uint64)
    k1 = ((np.uint64(key1_start & _MASK64)) + np.arange(rows, dtype=np.uint64))[:, None]
    o0, o1, o2, o3 = philox_block(c0, zero, zero, zero, key0 & _MASK64, k1)
    words = np.empty((rows, nblocks * 4), dtype=np.uint64)
    words[:, 0::4] = o0
    words[:, 1::4] = o1
    words[:, 2::4] = o2
    words[:, 3::4] = o3
    x = words[:, :cols]
    return ((x >> _S12).astype(np.float64) + 0.5) * 2.0**-52
