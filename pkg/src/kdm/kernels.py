"""Kernel families, their closed forms, and simplex mixture weights.

Six families are supported, all normalized to k(x, x) = 1:

    gaussian    exp(-||r||^2 / (2 sigma^2))
    laplacian   exp(-||r||_1 / sigma)
    matern32    (1 + sqrt(3) rho) exp(-sqrt(3) rho),            rho = ||r|| / sigma
    matern52    (1 + sqrt(5) rho + 5 rho^2 / 3) exp(-sqrt(5) rho)
    ratquad2    (1 + ||r||^2 / (2 a sigma^2))^-a with a = 2
    ratquad5    same with a = 5

Per-coordinate (anisotropic) bandwidths are allowed for gaussian and
matern32 only; the other families are isotropic. Derivative identities
are implemented for the gaussian family only, which is the one family
reachable through the Nystrom derivative path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend

FAMILIES = ("gaussian", "laplacian", "matern32", "matern52", "ratquad2", "ratquad5")
ANISOTROPIC_FAMILIES = ("gaussian", "matern32")
FAMILY_CODES = {name: code for code, name in enumerate(FAMILIES)}


@dataclass(frozen=True)
class KernelSpec:
    """A kernel family plus its bandwidth (scalar, or per-coordinate vector)."""

    family: str
    sigma: float | tuple[float, ...]

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        sig = np.atleast_1d(np.asarray(self.sigma, dtype=float))
        if sig.ndim != 1 or not np.all(np.isfinite(sig)) or np.any(sig <= 0):
            raise ValueError("sigma must be positive and finite")
        if sig.size > 1 and self.family not in ANISOTROPIC_FAMILIES:
            raise ValueError(f"{self.family} supports isotropic bandwidths only")
        if sig.size > 1:
            object.__setattr__(self, "sigma", tuple(float(s) for s in sig))
        else:
            object.__setattr__(self, "sigma", float(sig[0]))

    @property
    def is_anisotropic(self) -> bool:
        return isinstance(self.sigma, tuple)

    def sigma_vec(self, d: int) -> np.ndarray:
        """Bandwidth broadcast to length d."""
        if self.is_anisotropic:
            if len(self.sigma) != d:
                raise ValueError(f"sigma has length {len(self.sigma)}, expected {d}")
            return np.asarray(self.sigma, dtype=float)
        return np.full(d, float(self.sigma))

    def to_json(self) -> dict:
        sigma = list(self.sigma) if self.is_anisotropic else self.sigma
        return {"family": self.family, "sigma": sigma}

    @classmethod
    def from_json(cls, obj: dict) -> "KernelSpec":
        sigma = obj["sigma"]
        if isinstance(sigma, (list, tuple)):
            sigma = tuple(float(s) for s in sigma)
        return cls(family=obj["family"], sigma=sigma)


def eval_kernel(spec: KernelSpec, x: np.ndarray, z: np.ndarray) -> float:
    """Evaluate k(x, z) for a single pair of points."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if x.shape != z.shape:
        raise ValueError("x and z must have the same shape")
    sig = spec.sigma_vec(x.size)
    u = (x - z) / sig
    if spec.family == "laplacian":
        return float(np.exp(-np.abs(u).sum()))
    q = float(u @ u)
    if spec.family == "gaussian":
        return float(np.exp(-0.5 * q))
    if spec.family == "matern32":
        s = np.sqrt(3.0 * q)
        return float((1.0 + s) * np.exp(-s))
    if spec.family == "matern52":
        s = np.sqrt(5.0 * q)
        return float((1.0 + s + s * s / 3.0) * np.exp(-s))
    if spec.family == "ratquad2":
        return float((1.0 + q / 4.0) ** -2.0)
    return float((1.0 + q / 10.0) ** -5.0)


def gram(spec: KernelSpec, X: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Pairwise kernel matrix K[i, m] = k(X[i], Z[m])."""
    X = np.ascontiguousarray(X, dtype=float)
    Z = np.ascontiguousarray(Z, dtype=float)
    inv_sigma = 1.0 / spec.sigma_vec(X.shape[1])
    return _backend.gram(FAMILY_CODES[spec.family], X, Z, inv_sigma)


def grad_kernel(spec: KernelSpec, x: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Gradient in x of the gaussian kernel: d k / dx_j = -(x_j - z_j) / sigma_j^2 * k."""
    if spec.family != "gaussian":
        raise ValueError("analytic kernel derivatives are gaussian-only")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    sig2 = spec.sigma_vec(x.size) ** 2
    return -(x - z) / sig2 * eval_kernel(spec, x, z)


def laplacian_kernel(spec: KernelSpec, x: np.ndarray, z: np.ndarray) -> float:
    """Laplacian in x of the gaussian kernel:

    sum_j (r_j^2 / sigma_j^4 - 1 / sigma_j^2) k with r = x - z.
    """
    if spec.family != "gaussian":
        raise ValueError("analytic kernel derivatives are gaussian-only")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    sig2 = spec.sigma_vec(x.size) ** 2
    r = x - z
    return float(np.sum(r * r / sig2**2 - 1.0 / sig2) * eval_kernel(spec, x, z))


def gram_cross_derivs(spec: KernelSpec, X: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Stacked gradients J[(i, j), m] = d/dx_j k(X[i], Z[m]), rows flattened
    row-major over the (sample, coordinate) pair. Gaussian only."""
    if spec.family != "gaussian":
        raise ValueError("analytic kernel derivatives are gaussian-only")
    X = np.ascontiguousarray(X, dtype=float)
    Z = np.ascontiguousarray(Z, dtype=float)
    inv_sigma = 1.0 / spec.sigma_vec(X.shape[1])
    return _backend.gaussian_cross_derivs(X, Z, inv_sigma)


def gaussian_generator_gram(
    spec: KernelSpec, X: np.ndarray, Z: np.ndarray, alphas: np.ndarray
) -> np.ndarray:
    """Ornstein-Uhlenbeck generator applied to the gaussian kernel in x:

    (G_x k)(x, z) = sum_j (alpha_j x_j r_j / sigma_j^2 + r_j^2 / sigma_j^4
                           - 1 / sigma_j^2) k(x, z)

    for the generator G f = -(A x) . grad f + Delta f with A = diag(alphas).
    """
    if spec.family != "gaussian":
        raise ValueError("analytic generator application is gaussian-only")
    X = np.asarray(X, dtype=float)
    Z = np.asarray(Z, dtype=float)
    alphas = np.asarray(alphas, dtype=float)
    sig2 = spec.sigma_vec(X.shape[1]) ** 2
    K = gram(spec, X, Z)
    R = X[:, None, :] - Z[None, :, :]
    drift = np.einsum("nmd,nd->nm", R / sig2, alphas * X)
    diffusion = np.einsum("nmd->nm", R * R / sig2**2) - np.sum(1.0 / sig2)
    return (drift + diffusion) * K


@dataclass(frozen=True)
class MixtureWeights:
    """Simplex weights over a kernel dictionary, parameterized by logits u.

    beta = (1 - tau) softmax(u) + tau / L, so every entry stays >= tau / L.
    """

    u: np.ndarray
    tau: float
    beta: np.ndarray

    def __post_init__(self):
        if not (0.0 <= self.tau < 1.0):
            raise ValueError("floor tau must lie in [0, 1)")


def softmax_mixture(u: np.ndarray, tau: float = 0.01) -> MixtureWeights:
    """Floored softmax over logits; numerically stable under large |u|."""
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise ValueError("u must be a nonempty vector")
    e = np.exp(u - u.max())
    s = e / e.sum()
    beta = (1.0 - tau) * s + tau / u.size
    return MixtureWeights(u=u.copy(), tau=float(tau), beta=beta)


def mixture_jacobian(weights: MixtureWeights) -> np.ndarray:
    """d beta / d u for the floored softmax: (1 - tau) (diag(s) - s s^T)."""
    e = np.exp(weights.u - weights.u.max())
    s = e / e.sum()
    return (1.0 - weights.tau) * (np.diag(s) - np.outer(s, s))
