"""Pure numpy implementation of the hot evaluation kernels.

Same call surface as the compiled module `kdm._core`; `kdm._backend`
picks one of the two at import time. Family codes match kernels.FAMILIES.
"""

from __future__ import annotations

import numpy as np

GAUSSIAN = 0
LAPLACIAN = 1
MATERN32 = 2
MATERN52 = 3
RATQUAD2 = 4
RATQUAD5 = 5

SQRT3 = np.sqrt(3.0)
SQRT5 = np.sqrt(5.0)


def gram(family: int, X: np.ndarray, Z: np.ndarray, inv_sigma: np.ndarray) -> np.ndarray:
    """Pairwise kernel matrix K[i, m] = k(X[i], Z[m]) for one family.

    inv_sigma is the per-coordinate reciprocal bandwidth (length d).
    Differences are formed explicitly so k(x, x) = 1 holds exactly.
    """
    U = X * inv_sigma
    V = Z * inv_sigma
    R = U[:, None, :] - V[None, :, :]
    if family == LAPLACIAN:
        return np.exp(-np.abs(R).sum(axis=2))
    q = np.einsum("nmd,nmd->nm", R, R)
    if family == GAUSSIAN:
        return np.exp(-0.5 * q)
    if family == MATERN32:
        s = np.sqrt(3.0 * q)
        return (1.0 + s) * np.exp(-s)
    if family == MATERN52:
        s = np.sqrt(5.0 * q)
        return (1.0 + s + s * s / 3.0) * np.exp(-s)
    if family == RATQUAD2:
        return (1.0 + q / 4.0) ** -2.0
    if family == RATQUAD5:
        return (1.0 + q / 10.0) ** -5.0
    raise ValueError(f"unknown family code {family}")


def gaussian_cross_derivs(X: np.ndarray, Z: np.ndarray, inv_sigma: np.ndarray) -> np.ndarray:
    """Stack of Gaussian kernel gradients J[(i, j), m] = d/dx_j k(X[i], Z[m]).

    Row index is the flattened pair i * d + j. Uses
    d k / dx_j = -(x_j - z_j) / sigma_j^2 * k.
    """
    n, d = X.shape
    p = Z.shape[0]
    R = X[:, None, :] - Z[None, :, :]
    q = np.einsum("nmd,nmd->nm", R * inv_sigma, R * inv_sigma)
    K = np.exp(-0.5 * q)
    J = -(R * inv_sigma**2) * K[:, :, None]
    return np.ascontiguousarray(J.transpose(0, 2, 1).reshape(n * d, p))


def cos_features(X: np.ndarray, W: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Random Fourier feature matrix S[i, m] = sqrt(2/p) cos(w_m . x_i + b_m)."""
    p = W.shape[0]
    return np.sqrt(2.0 / p) * np.cos(X @ W.T + b)


def cos_feature_derivs(X: np.ndarray, W: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Coordinate derivatives of the cos features, rows flattened as i * d + j.

    D[(i, j), m] = -sqrt(2/p) sin(w_m . x_i + b_m) * w_{m j}.
    """
    n, d = X.shape
    p = W.shape[0]
    G = -np.sqrt(2.0 / p) * np.sin(X @ W.T + b)
    D = G[:, None, :] * W.T[None, :, :]
    return np.ascontiguousarray(D.reshape(n * d, p))
