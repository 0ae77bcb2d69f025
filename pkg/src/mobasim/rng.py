"""Deterministic RNG stream derivation.

A single 64-bit match seed fans out into independent named streams (one per
team per purpose) through a SHA-256 key derivation, so e.g. blue's crit rolls
never perturb red's, and mirror-symmetry experiments stay well-posed.
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(seed: int, label: str) -> int:
    """Derive a child seed from (seed, label); stable across platforms."""
    digest = hashlib.sha256(f"{seed}:{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def stream(seed: int, label: str) -> random.Random:
    """A named deterministic RNG stream derived from the match seed."""
    return random.Random(derive_seed(seed, label))
