"""Reproducible random-number streams.

A stream is identified by a ``(master_seed, stream_index)`` pair which maps
directly onto the two 64-bit key words of the Philox4x64 counter-based
generator.  Draw ``j`` of a stream depends only on the key pair and ``j``,
never on how many draws were batched together or on which thread asked for
them, so any replicate schedule yields the same numbers.

Experiment code derives one sub-seed per (operation, cell) from the user's
master seed with :func:`substream_seed`; replicate ``r`` of that cell then
uses ``stream_index = r``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from ._kernel import BACKEND, uniform_matrix
from .errors import InputError

__all__ = ["RngStream", "substream_seed", "uniforms_batch", "kernel_backend"]

_MASK64 = (1 << 64) - 1


def kernel_backend() -> str:
    """Name of the active kernel backend: ``"compiled"`` or ``"python"``."""
    return BACKEND


def substream_seed(master_seed: int, label: str) -> int:
    """Derive a 64-bit sub-seed from a master seed and a text label.

    Uses BLAKE2b, so the mapping is stable across platforms and Python
    versions.  Distinct labels give (with overwhelming probability)
    distinct, statistically unrelated sub-seeds.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(int(master_seed & _MASK64).to_bytes(8, "little"))
    h.update(label.encode("utf-8"))
    return int.from_bytes(h.digest(), "little")


@dataclass(frozen=True)
class RngStream:
    """One reproducible stream: a (master_seed, stream_index) key pair."""

    master_seed: int
    stream_index: int = 0

    def uniforms(self, n: int) -> np.ndarray:
        """The first ``n`` uniforms of this stream, each strictly in (0, 1)."""
        if n < 0:
            raise InputError(f"draw count must be >= 0, got {n}")
        return uniform_matrix(self.master_seed & _MASK64,
                              self.stream_index & _MASK64, 1, n)[0]

    def replicate(self, r: int) -> "RngStream":
        """Stream for replicate ``r``: same master seed, stream_index = r."""
        return RngStream(self.master_seed, r)


def uniforms_batch(master_seed: int, first_stream: int, replicates: int,
                   n: int) -> np.ndarray:
    """Uniform matrix for ``replicates`` consecutive streams, ``n`` draws each.

    Row ``r`` equals ``RngStream(master_seed, first_stream + r).uniforms(n)``
    bit for bit.
    """
    if replicates < 0 or n < 0:
        raise InputError("replicates and draw count must be >= 0")
    return uniform_matrix(master_seed & _MASK64, first_stream & _MASK64,
                          replicates, n)
