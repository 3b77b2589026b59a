"""Kernel tests: the counter-based generator against an independent
reference implementation, and the two backends against each other."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.random import Philox

from ordstat._kernel import _philox_np

try:
    from ordstat._kernel import _philox_cy
except ImportError:
    _philox_cy = None

needs_ext = pytest.mark.skipif(_philox_cy is None,
                               reason="compiled kernel not built")

MASK = (1 << 64) - 1


def _reference_blocks(key, counter, n_blocks):
    """Raw output of numpy's Philox4x64-10 starting at ``counter``.

    numpy's stream increments its counter before producing each block, so
    seeding it at counter - 1 yields the block *at* ``counter``.
    """
    start = list(counter)
    start[0] = (start[0] - 1) & MASK
    if counter[0] == 0:  # borrow propagates
        start[1] = (start[1] - 1) & MASK
        if counter[1] == 0:
            start[2] = (start[2] - 1) & MASK
            if counter[2] == 0:
                start[3] = (start[3] - 1) & MASK
    ph = Philox(counter=np.array(start, dtype=np.uint64),
                key=np.array(key, dtype=np.uint64))
    return ph.random_raw(4 * n_blocks).reshape(n_blocks, 4)


@pytest.mark.parametrize("key,counter", [
    ((0, 0), (0, 0, 0, 0)),
    ((0xDEADBEEF, 42), (0, 0, 0, 0)),
    ((1, 2), (3, 0, 0, 0)),
    ((MASK, MASK), (MASK, 7, 0, 0)),
    ((123456789, 987654321), (10**12, 0, 0, 0)),
])
def test_block_matches_numpy_philox(key, counter):
    ref = _reference_blocks(key, counter, 1)[0]
    out = _philox_np.philox_block(*counter, key[0], key[1])
    assert [int(w) for w in out] == [int(w) for w in ref]


def test_consecutive_blocks_match_reference_stream():
    key = (42, 7)
    ref = _reference_blocks(key, (0, 0, 0, 0), 8)
    c0 = np.arange(8, dtype=np.uint64)
    zero = np.zeros(8, dtype=np.uint64)
    out = np.stack(_philox_np.philox_block(c0, zero, zero, zero, *key), axis=1)
    assert np.array_equal(out, ref)


def test_uniforms_strictly_inside_unit_interval():
    u = _philox_np.uniform_matrix(1, 0, 16, 1000)
    assert np.all(u > 0.0) and np.all(u < 1.0)
    # odd multiples of 2**-53 by construction
    scaled = u * 2.0**53
    assert np.all(scaled == np.round(scaled))
    assert np.all(np.round(scaled).astype(np.int64) % 2 == 1)


def test_batch_rows_equal_individual_streams():
    batch = _philox_np.uniform_matrix(99, 5, 4, 37)
    for r in range(4):
        row = _philox_np.uniform_matrix(99, 5 + r, 1, 37)[0]
        assert np.array_equal(batch[r], row)


def test_distinct_streams_differ():
    a = _philox_np.uniform_matrix(1, 0, 1, 64)[0]
    b = _philox_np.uniform_matrix(1, 1, 1, 64)[0]
    c = _philox_np.uniform_matrix(2, 0, 1, 64)[0]
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


@needs_ext
@given(key0=st.integers(0, MASK), key1=st.integers(0, MASK),
       rows=st.integers(1, 5), cols=st.integers(1, 70))
@settings(max_examples=30, deadline=None)
def test_backends_bit_identical(key0, key1, rows, cols):
    a = _philox_np.uniform_matrix(key0, key1, rows, cols)
    b = _philox_cy.uniform_matrix(key0, key1, rows, cols)
    assert np.array_equal(a, b)


@needs_ext
def test_backend_blocks_bit_identical():
    c0 = np.arange(100, dtype=np.uint64) * np.uint64(12345)
    c1 = np.arange(100, dtype=np.uint64)
    zero = np.zeros(100, dtype=np.uint64)
    oa = _philox_np.philox_block(c0, c1, zero, zero, 7, 9)
    ob = _philox_cy.philox_block(c0, c1, zero, zero, 7, 9)
    assert all(np.array_equal(x, y) for x, y in zip(oa, ob))


def test_empty_request_shapes():
    assert _philox_np.uniform_matrix(0, 0, 0, 5).shape == (0, 5)
    assert _philox_np.uniform_matrix(0, 0, 3, 0).shape == (3, 0)
