"""Subspace and per-mode recovery metrics.

Both metrics are gauge invariant: inputs are re-orthonormalized under
the empirical inner product before comparison, so sign flips, rotations,
and affine shifts of either argument do not change the scores.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .eigsolve import gauge_fix


@dataclass
class AlignmentReport:
    permutation: tuple[int, ...]
    signs: tuple[int, ...]
    correlations: np.ndarray  # |corr| of each fitted mode with its matched reference
    avg_abs_corr: float


def _regauge(phi: np.ndarray, name: str) -> np.ndarray:
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        try:
            return gauge_fix(phi)
        except Warning as w:
            raise ValueError(f"{name} is rank deficient after re-orthonormalization") from w


def subspace_r2(phi: np.ndarray, phistar: np.ndarray) -> tuple[float, np.ndarray]:
    """Subspace recovery score and principal cosines.

    SubR2 = ||Phi^T PhiStar / N||_F^2 / r, which is the mean squared
    principal cosine between the two r-dimensional subspaces; 1 means
    identical subspaces, 0 orthogonal ones.
    """
    phi = np.asarray(phi, dtype=float)
    phistar = np.asarray(phistar, dtype=float)
    if phi.shape != phistar.shape:
        raise ValueError(f"shape mismatch {phi.shape} vs {phistar.shape}")
    n, r = phi.shape
    u = _regauge(phi, "phi")
    v = _regauge(phistar, "phistar")
    m = u.T @ v / n
    cosines = np.linalg.svd(m, compute_uv=False)
    return float(np.sum(m * m) / r), cosines


def align_and_corr(phi: np.ndarray, phistar: np.ndarray) -> AlignmentReport:
    """Match fitted modes to references by the permutation maximizing the
    total |correlation| (exhaustive over permutations, r <= 8), then
    report per-mode |corr| with positive signs."""
    phi = np.asarray(phi, dtype=float)
    phistar = np.asarray(phistar, dtype=float)
    if phi.shape != phistar.shape:
        raise ValueError(f"shape mismatch {phi.shape} vs {phistar.shape}")
    r = phi.shape[1]
    if r > 8:
        raise ValueError("exhaustive matching is limited to r <= 8")

    corr = np.zeros((r, r))
    for i in range(r):
        a = phi[:, i] - phi[:, i].mean()
        na = np.linalg.norm(a)
        for j in range(r):
            b = phistar[:, j] - phistar[:, j].mean()
            nb = np.linalg.norm(b)
            if na < 1e-12 * np.sqrt(phi.shape[0]) or nb < 1e-12 * np.sqrt(phi.shape[0]):
                warnings.warn(f"constant column in correlation ({i}, {j})")
                continue
            corr[i, j] = a @ b / (na * nb)

    best_perm = None
    best_total = -np.inf
    for perm in itertools.permutations(range(r)):
        total = sum(abs(corr[i, perm[i]]) for i in range(r))
        if total > best_total:
            best_total = total
            best_perm = perm
    matched = np.array([corr[i, best_perm[i]] for i in range(r)])
    signs = tuple(1 if c >= 0 else -1 for c in matched)
    return AlignmentReport(
        permutation=tuple(best_perm),
        signs=signs,
        correlations=np.abs(matched),
        avg_abs_corr=float(np.mean(np.abs(matched))),
    )
