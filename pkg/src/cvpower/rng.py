"""Deterministic random-stream derivation.

Every stochastic component draws from a ``numpy.random.Generator`` whose
seed is derived by hashing a label path with SHA-256.  Streams derived
from distinct paths are independent, reproducible across platforms, and
safe to hand to parallel workers: a worker never shares a stream with
another worker, so results cannot depend on scheduling order.
"""

from __future__ import annotations

import hashlib

import numpy as np

_SEP = b"\x1f"


def derive_seed(*parts: int | float | str) -> int:
    """Hash a label path into a 128-bit seed integer.

    Integers, floats and strings are encoded unambiguously (type tag +
    canonical text), so e.g. 1 and "1" produce different seeds.
    """
    h = hashlib.sha256()
    for part in parts:
        if isinstance(part, bool):
            raise TypeError("bool is ambiguous in a seed path; use int or str")
        if isinstance(part, (int, np.integer)):
            h.update(b"i" + str(int(part)).encode())
        elif isinstance(part, (float, np.floating)):
            h.update(b"f" + repr(float(part)).encode())
        elif isinstance(part, str):
            h.update(b"s" + part.encode("utf-8"))
        else:
            raise TypeError(f"unsupported seed path component: {type(part)!r}")
        h.update(_SEP)
    return int.from_bytes(h.digest()[:16], "little")


def stream_from(*parts: int | float | str) -> np.random.Generator:
    """Create an independent PCG64 stream for the given label path."""
    return np.random.Generator(np.random.PCG64(derive_seed(*parts)))


def child_entropy(rng: np.random.Generator) -> int:
    """Draw one 63-bit integer to anchor sub-streams of an existing stream."""
    return int(rng.integers(0, 2**63))
