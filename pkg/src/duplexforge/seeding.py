"""Deterministic seed derivation for every stochastic component.

All randomness in the toolkit flows from a single master seed through
``derive_seed``, so a run is reproducible bit-for-bit from (scenario,
master_seed) alone, on any platform.
"""

import hashlib
import struct

_U64_MAX = 2**64 - 1


def derive_seed(master_seed: int, label: str) -> int:
    """Derive a child seed from a master seed and a label.

    Uses SHA-256 over the big-endian master seed and the UTF-8 label, so the
    mapping is stable across platforms and Python versions. Returns a u64
    suitable for ``numpy.random.default_rng``.
    """
    if not 0 <= master_seed <= _U64_MAX:
        raise ValueError(f"master_seed must be a u64, got {master_seed}")
    digest = hashlib.sha256(struct.pack(">Q", master_seed) + label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
