"""Keyed seed derivation.

Every randomized step of an experiment derives its own 64-bit seed from the
run seed plus the identifying strings of the combination it serves.  Seeds
therefore never depend on execution order, which is what makes parallel and
serial runs byte-identical.
"""

from __future__ import annotations

import hashlib


def derive_seed(*parts: object) -> int:
    """Collapse (seed, labels...) into a stable 64-bit integer."""
    text = "\x1f".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
