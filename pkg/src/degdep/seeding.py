"""Deterministic 64-bit seed fan-out for replicated experiments.

Every experiment cell (size index, replica index, purpose) owns an RNG seeded
by a child seed derived from the master seed.  The derivation is a fixed,
platform-independent rule so that sweeps are reproducible regardless of cell
execution order or concurrency:

    child_seed = first 8 bytes (little-endian) of
                 SHA-256("degdep-seed" 0x1f part_1 0x1f part_2 ...)

where the parts are the master seed followed by the caller-supplied integers
and tags, each rendered in decimal / UTF-8.
"""

import hashlib

_DOMAIN = b"degdep-seed"
_SEP = b"\x1f"


def child_seed(master_seed: int, *parts: int | str) -> int:
    """Derive a deterministic 64-bit child seed from a master seed and parts."""
    h = hashlib.sha256()
    h.update(_DOMAIN)
    for part in (int(master_seed), *parts):
        h.update(_SEP)
        h.update(str(part).encode("utf-8"))
    return int.from_bytes(h.digest()[:8], "little")
