"""Generalized eigensolve, lifting, and gauge fixing.

The estimator solves Sigma a = mu L_lambda a for the top r pairs via a
Cholesky reduction: L_lambda = R^T R, symmetric eigendecomposition of
R^-T Sigma R^-1, and a_k = R^-1 v_k. Eigenvalues come back descending
and eigenvectors L_lambda-normalized (a_k^T L_lambda a_k = 1).

Lifted eigenfunctions Phi_raw = C A (or S A) are defined only up to
sign, rotation, and affine shift; gauge fixing centers each column and
orthonormalizes in the empirical inner product <u, v>_N = u^T v / N.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .operators import OperatorPair

EPS_PSD = 1e-10


class GaugeRankWarning(UserWarning):
    pass


@dataclass
class EigenSolution:
    mu: np.ndarray  # (r,) descending
    A: np.ndarray  # (p, r) coefficient columns
    phi: np.ndarray  # (N, r) gauge-fixed lifted eigenfunctions


def psd_floor(M: np.ndarray, eps: float = EPS_PSD) -> np.ndarray:
    """Symmetrize and clip the spectrum from below at eps."""
    M = 0.5 * (M + M.T)
    vals, vecs = np.linalg.eigh(M)
    return (vecs * np.maximum(vals, eps)) @ vecs.T


def solve_gevp(pair: OperatorPair, r: int) -> tuple[np.ndarray, np.ndarray]:
    """Top r generalized eigenpairs of (Sigma, L_lambda).

    Returns (mu, A) with mu descending and A^T L_lambda A = I. A failed
    Cholesky factorization is retried once after PSD flooring of both
    operators; a second failure is a hard error.
    """
    if r < 1 or r > pair.sigma.shape[0]:
        raise ValueError(f"r must lie in [1, {pair.sigma.shape[0]}]")
    sigma = 0.5 * (pair.sigma + pair.sigma.T)
    llam = 0.5 * (pair.llam + pair.llam.T)
    try:
        R = scipy.linalg.cholesky(llam, lower=False)
    except scipy.linalg.LinAlgError:
        sigma = psd_floor(sigma)
        llam = psd_floor(llam, max(EPS_PSD, 1e-12 * np.abs(np.diag(llam)).max()))
        R = scipy.linalg.cholesky(llam, lower=False)
    Rinv_sigma = scipy.linalg.solve_triangular(R, sigma, trans="T", lower=False)
    B = scipy.linalg.solve_triangular(R, Rinv_sigma.T, trans="T", lower=False)
    vals, vecs = scipy.linalg.eigh(0.5 * (B + B.T))
    order = np.argsort(vals)[::-1][:r]
    mu = vals[order]
    A = scipy.linalg.solve_triangular(R, vecs[:, order], lower=False)
    return mu, A


def lift(C: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Raw lifted eigenfunctions Phi_raw = C A, one column per mode."""
    return C @ A


def gauge_fix(phi_raw: np.ndarray, rank_tol: float = 1e-10) -> np.ndarray:
    """Center columns, then orthonormalize them under <u, v>_N = u^T v / N.

    Column order is preserved (Gram-Schmidt via QR with a positive
    diagonal). Numerically dependent columns are dropped with a warning,
    so the result can be narrower than the input.
    """
    phi = np.asarray(phi_raw, dtype=float)
    if phi.ndim != 2 or phi.shape[0] < 2:
        raise ValueError("phi must be (N, r) with N >= 2")
    n = phi.shape[0]
    phi = phi - phi.mean(axis=0)

    cols = list(range(phi.shape[1]))
    while cols:
        a = phi[:, cols] / np.sqrt(n)
        q, rmat = np.linalg.qr(a)
        col_scale = np.maximum(np.sqrt(np.sum(a * a, axis=0)), 1.0)
        bad = [i for i in range(len(cols)) if abs(rmat[i, i]) <= rank_tol * col_scale[i]]
        if not bad:
            return np.sqrt(n) * q * np.sign(np.diag(rmat))
        warnings.warn(
            f"dropping dependent column {cols[bad[0]]} during gauge fixing", GaugeRankWarning
        )
        del cols[bad[0]]
    return np.empty((n, 0))


def sign_anchor(phi: np.ndarray, anchor: np.ndarray | None = None) -> np.ndarray:
    """Resolve per-column sign: against an anchor matrix when given
    (maximize the inner product per column), otherwise make the first
    entry of largest magnitude positive."""
    phi = np.array(phi, dtype=float)
    for k in range(phi.shape[1]):
        if anchor is not None:
            s = anchor[:, k] @ phi[:, k]
        else:
            s = phi[np.abs(phi[:, k]).argmax(), k]
        if s < 0:
            phi[:, k] = -phi[:, k]
    return phi


def procrustes_align(u_tilde: np.ndarray, u: np.ndarray, tol: float = 1e-6) -> tuple[np.ndarray, float]:
    """Best orthogonal Q aligning u_tilde to u, plus the residual.

    Both inputs must be column-orthonormal under <., .>_N. From the SVD
    u_tilde^T u / N = M S V^T, the minimizer of ||u_tilde Q - u||_N^2 is
    Q = M V^T and the residual equals 2 r - 2 tr(S).
    """
    n, r = u.shape
    if u_tilde.shape != u.shape:
        raise ValueError("shapes must match")
    for mat, name in ((u, "u"), (u_tilde, "u_tilde")):
        gramm = mat.T @ mat / n
        if not np.allclose(gramm, np.eye(r), atol=tol):
            raise ValueError(f"{name} is not orthonormal under the empirical inner product")
    m, s, vt = np.linalg.svd(u_tilde.T @ u / n)
    q = m @ vt
    residual = float(2.0 * r - 2.0 * s.sum())
    return q, residual
