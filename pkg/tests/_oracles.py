"""Reference math the tests trust instead of the library.

Everything here is deliberately written the slow, obvious way (Leibniz
determinants, explicit finite differences, hand-copied closed forms) so
that expected values never originate from the code under test. This
module must not import anything from kdm.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def perm_sign(perm) -> int:
    """Permutation parity via cycle decomposition."""
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def charpoly_gevp_eigs(sigma: np.ndarray, llam: np.ndarray) -> np.ndarray:
    """Generalized eigenvalues of (sigma, llam), descending.

    Expands det(sigma - mu * llam) with the Leibniz formula (each entry is
    linear in mu, so every permutation contributes a degree-n polynomial
    factor product) and takes the real roots. Exponential cost; meant for
    4x4 cross-checks only.
    """
    n = sigma.shape[0]
    total = np.zeros(n + 1)
    for perm in itertools.permutations(range(n)):
        prod = np.array([1.0])  # little-endian coefficients
        for i, j in enumerate(perm):
            prod = np.convolve(prod, np.array([sigma[i, j], -llam[i, j]]))
        padded = np.zeros(n + 1)
        padded[: prod.size] = prod
        total += perm_sign(perm) * padded
    roots = np.roots(total[::-1])
    real = roots.real[np.abs(roots.imag) <= 1e-8 * (1.0 + np.abs(roots.real))]
    return np.sort(real)[::-1]


def fd_gradient(f, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2.0 * h)
    return g


def fd_laplacian(f, x: np.ndarray, h: float = 1e-4) -> float:
    x = np.asarray(x, dtype=float)
    f0 = f(x)
    total = 0.0
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        total += (f(x + e) - 2.0 * f0 + f(x - e)) / h**2
    return float(total)


def closed_form_kernel(family: str, sigma, rvec) -> float:
    """Stationary kernel value k(r), written out by hand."""
    rvec = np.atleast_1d(np.asarray(rvec, dtype=float))
    sig = np.zeros(rvec.size) + np.asarray(sigma, dtype=float)
    u = rvec / sig
    if family == "laplacian":
        return float(np.exp(-np.abs(u).sum()))
    q = float(u @ u)
    if family == "gaussian":
        return math.exp(-0.5 * q)
    if family == "matern32":
        s = math.sqrt(3.0 * q)
        return (1.0 + s) * math.exp(-s)
    if family == "matern52":
        s = math.sqrt(5.0 * q)
        return (1.0 + s + s * s / 3.0) * math.exp(-s)
    if family == "ratquad2":
        return (1.0 + q / 4.0) ** -2.0
    if family == "ratquad5":
        return (1.0 + q / 10.0) ** -5.0
    raise ValueError(f"unknown family {family!r}")


def spectral_norm(M: np.ndarray) -> float:
    return float(np.linalg.norm(M, 2))


def greedy_abs_corr_total(corr: np.ndarray) -> float:
    """Row-by-row greedy assignment total on |corr|; never exceeds the
    exhaustive optimum."""
    corr = np.abs(np.asarray(corr, dtype=float))
    free = list(range(corr.shape[1]))
    total = 0.0
    for i in range(corr.shape[0]):
        j = max(free, key=lambda col: corr[i, col])
        total += corr[i, j]
        free.remove(j)
    return total


def simplex_pairs(n_pairs: int, size: int, rng: np.random.Generator,
                  scale: float = 0.02) -> list[tuple[np.ndarray, np.ndarray]]:
    """Dirichlet simplex points, each paired with a nearby renormalized
    perturbation."""
    out = []
    for _ in range(n_pairs):
        beta = rng.dirichlet(np.ones(size))
        step = rng.normal(scale=scale, size=size)
        other = np.clip(beta + step, 1e-6, None)
        out.append((beta, other / other.sum()))
    return out
