"""Deterministic seed derivation for sub-tasks.

Every randomized sub-task (fold split, per-candidate feature draw,
benchmark sampling, ...) derives its own 64-bit seed from a stable hash
of the master seed, a task label, and any indices. Identical inputs give
identical streams on every platform and run.
"""

from __future__ import annotations

import hashlib

import numpy as np


def stable_seed(master_seed: int, label: str, *indices: int) -> int:
    """64-bit seed from sha256 of the (master_seed, label, indices) tuple."""
    parts = [str(int(master_seed)), label] + [str(int(i)) for i in indices]
    digest = hashlib.sha256("\x1f".join(parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def rng_for(master_seed: int, label: str, *indices: int) -> np.random.Generator:
    return np.random.default_rng(stable_seed(master_seed, label, *indices))
