"""Empirical operator pairs (Sigma, L_lambda) in a finite coordinate basis.

Nystrom path: coordinates are kernel sections at p landmark points,
    C[i, m] = k(x_i, z_m)            (N x p)
    W[m, l] = k(z_m, z_l)            (p x p, symmetrized and jittered)
    J[(i, j), m] = d/dx_j k(x_i, z_m)  (N d x p, gaussian dictionary only)
    Sigma = C^T C / N,  L_lambda = J^T J / N + lambda W.

RFF path: coordinates are random Fourier features,
    Sigma = S^T S / N,  L_lambda = D^T D / N + lambda I.

Mixtures aggregate per-kernel parts linearly: C_beta = sum_l beta_l C_l,
and likewise for W and J.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import KernelSpec, gram, gram_cross_derivs

EPS_W = 1e-8  # symmetrization jitter on the landmark gram


@dataclass
class KernelParts:
    """Per-dictionary-entry Nystrom matrices, fixed across mixture weights."""

    specs: list[KernelSpec]
    Z: np.ndarray
    C: list[np.ndarray]
    W: list[np.ndarray]
    J: list[np.ndarray] | None  # None when the dictionary has no derivative path


@dataclass
class NystromMatrices:
    C: np.ndarray
    W: np.ndarray
    J: np.ndarray | None
    Z: np.ndarray


@dataclass
class OperatorPair:
    sigma: np.ndarray
    llam: np.ndarray
    lam: float
    n: int
    coords: str  # "nystrom" | "rff"


def kmeans_landmarks(X: np.ndarray, p: int, seed: int, n_iter: int = 50) -> np.ndarray:
    """Landmarks as k-means centers: k-means++ init, Lloyd iterations.

    Deterministic for fixed (X, p, seed). Empty clusters are reseeded to
    the point farthest from its assigned center.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if p > n:
        raise ValueError(f"asked for {p} landmarks from {n} points")
    rng = np.random.default_rng(seed)

    centers = np.empty((p, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    d2 = np.sum((X - centers[0]) ** 2, axis=1)
    for m in range(1, p):
        probs = d2 / d2.sum() if d2.sum() > 0 else np.full(n, 1.0 / n)
        centers[m] = X[rng.choice(n, p=probs)]
        d2 = np.minimum(d2, np.sum((X - centers[m]) ** 2, axis=1))

    for _ in range(n_iter):
        dist = np.sum((X[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        assign = dist.argmin(axis=1)
        new_centers = centers.copy()
        for m in range(p):
            mask = assign == m
            if mask.any():
                new_centers[m] = X[mask].mean(axis=0)
            else:
                new_centers[m] = X[dist.min(axis=1).argmax()]
        if np.allclose(new_centers, centers):
            centers = new_centers
            break
        centers = new_centers
    return centers


def build_nystrom(
    specs: list[KernelSpec], X: np.ndarray, Z: np.ndarray, derivatives: bool = True
) -> KernelParts:
    """Per-kernel Nystrom matrices for a dictionary. The derivative stack J
    requires a gaussian dictionary; pass derivatives=False to skip it."""
    if not specs:
        raise ValueError("empty kernel dictionary")
    C = [gram(s, X, Z) for s in specs]
    W = [gram(s, Z, Z) for s in specs]
    J = None
    if derivatives:
        if any(s.family != "gaussian" for s in specs):
            raise ValueError("derivative path requires a gaussian dictionary")
        J = [gram_cross_derivs(s, X, Z) for s in specs]
    return KernelParts(specs=list(specs), Z=np.asarray(Z, dtype=float), C=C, W=W, J=J)


def aggregate_mixture(parts: KernelParts, beta: np.ndarray) -> NystromMatrices:
    """Weighted sum of the per-kernel parts; W is symmetrized and jittered:
    W <- (W + W^T)/2 + EPS_W I."""
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (len(parts.C),):
        raise ValueError("one weight per dictionary entry required")
    C = sum(b * Cl for b, Cl in zip(beta, parts.C))
    W = sum(b * Wl for b, Wl in zip(beta, parts.W))
    W = 0.5 * (W + W.T) + EPS_W * np.eye(W.shape[0])
    J = None
    if parts.J is not None:
        J = sum(b * Jl for b, Jl in zip(beta, parts.J))
    return NystromMatrices(C=C, W=W, J=J, Z=parts.Z)


def operator_pair_nystrom(m: NystromMatrices, lam: float, n: int) -> OperatorPair:
    """Sigma = C^T C / N and L_lambda = J^T J / N + lambda W."""
    if m.J is None:
        raise ValueError("nystrom operator pair needs the derivative stack J")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if m.C.shape[0] != n:
        raise ValueError(f"C has {m.C.shape[0]} rows, expected N = {n}")
    sigma = m.C.T @ m.C / n
    llam = m.J.T @ m.J / n + lam * m.W
    return OperatorPair(sigma=sigma, llam=llam, lam=float(lam), n=n, coords="nystrom")


def center_columns(S: np.ndarray) -> np.ndarray:
    """Subtract the column means, removing the constant direction from the
    span. Applied to feature matrices before Sigma so the estimated spectrum
    is free of the quasi-constant mode (mu ~ 1/lambda) that otherwise
    dominates and degrades bandwidth selection."""
    return S - S.mean(axis=0)


def operator_pair_rff(S: np.ndarray, D: np.ndarray, lam: float, n: int) -> OperatorPair:
    """Sigma = S^T S / N and L_lambda = D^T D / N + lambda I."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if S.shape[0] != n or D.shape[0] % n != 0:
        raise ValueError("feature matrices do not match N")
    sigma = S.T @ S / n
    llam = D.T @ D / n + lam * np.eye(S.shape[1])
    return OperatorPair(sigma=sigma, llam=llam, lam=float(lam), n=n, coords="rff")
