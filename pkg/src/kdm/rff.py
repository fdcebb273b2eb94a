"""Random Fourier features for every kernel family.

Features are phi_m(x) = sqrt(2 / p) cos(w_m . x + b_m) with frequencies
drawn from the family's spectral measure and phases uniform on [0, 2 pi).
Frequencies are drawn once at unit bandwidth and scaled by 1 / sigma_j
per coordinate, so rebandwidthing reuses the same underlying draw (the
variational bandwidth loop depends on this).

Unit-bandwidth spectral measures:

    gaussian    w ~ N(0, I)
    laplacian   w_j ~ Cauchy(0, 1) independently
    matern-nu   w = z / sqrt(g), z ~ N(0, I), g ~ ChiSquare(2 nu) / (2 nu)
                (a multivariate t with 2 nu degrees of freedom)
    ratquad-a   w ~ N(0, t I), t ~ Gamma(shape=a, rate=a)

Each is validated against the closed-form kernel by the Monte Carlo
Bochner tests; the matern and ratquad parameterizations were pinned down
that way.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .kernels import ANISOTROPIC_FAMILIES, KernelSpec


@dataclass(frozen=True)
class RffBasis:
    """A frozen feature basis: unit-bandwidth frequency draws, phases, and
    the bandwidth-scaled frequencies actually used for evaluation.

    spec is None for mixture bases, whose frequencies come from several
    dictionary entries at once."""

    spec: KernelSpec | None
    d: int
    seed: int
    unit_freqs: np.ndarray  # (p_rff, d), drawn at sigma = 1
    phases: np.ndarray  # (p_rff,)
    freqs: np.ndarray  # (p_rff, d) = unit_freqs / sigma_j

    @property
    def p_rff(self) -> int:
        return self.unit_freqs.shape[0]


def _unit_draws(family: str, p_rff: int, d: int, rng: np.random.Generator) -> np.ndarray:
    if family == "gaussian":
        return rng.standard_normal((p_rff, d))
    if family == "laplacian":
        return rng.standard_cauchy((p_rff, d))
    if family in ("matern32", "matern52"):
        df = 3.0 if family == "matern32" else 5.0
        z = rng.standard_normal((p_rff, d))
        g = rng.chisquare(df, size=(p_rff, 1)) / df
        return z / np.sqrt(g)
    if family in ("ratquad2", "ratquad5"):
        a = 2.0 if family == "ratquad2" else 5.0
        t = rng.gamma(shape=a, scale=1.0 / a, size=(p_rff, 1))
        z = rng.standard_normal((p_rff, d))
        return np.sqrt(t) * z
    raise ValueError(f"unknown kernel family {family!r}")


def sample_basis(spec: KernelSpec, p_rff: int, d: int, seed: int) -> RffBasis:
    """Draw a feature basis. Same (spec, p_rff, d, seed) reproduces the
    frequencies and phases bit for bit."""
    if p_rff < 1 or d < 1:
        raise ValueError("p_rff and d must be positive")
    rng = np.random.default_rng(seed)
    unit = _unit_draws(spec.family, p_rff, d, rng)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=p_rff)
    freqs = unit / spec.sigma_vec(d)
    return RffBasis(spec=spec, d=d, seed=seed, unit_freqs=unit, phases=phases, freqs=freqs)


def rescale_anisotropic(basis: RffBasis, sigma_vec: np.ndarray) -> RffBasis:
    """Rebandwidth a basis by scaling its stored unit draws per coordinate.

    Only the scale-covariant families used anisotropically are allowed.
    With sigma_vec = (s, ..., s) this equals sampling at bandwidth s with
    the same seed.
    """
    if basis.spec is None or basis.spec.family not in ANISOTROPIC_FAMILIES:
        family = "mixture" if basis.spec is None else basis.spec.family
        raise ValueError(f"{family} is not scale-covariant in this implementation")
    sigma_vec = np.asarray(sigma_vec, dtype=float)
    if sigma_vec.shape != (basis.d,) or np.any(sigma_vec <= 0):
        raise ValueError("sigma_vec must be positive with one entry per coordinate")
    spec = KernelSpec(basis.spec.family, tuple(float(s) for s in sigma_vec))
    return RffBasis(
        spec=spec,
        d=basis.d,
        seed=basis.seed,
        unit_freqs=basis.unit_freqs,
        phases=basis.phases,
        freqs=basis.unit_freqs / sigma_vec,
    )


def features(basis: RffBasis, X: np.ndarray) -> np.ndarray:
    """Feature matrix S, shape (N, p_rff)."""
    X = np.ascontiguousarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != basis.d:
        raise ValueError(f"X must be (N, {basis.d})")
    return _backend.cos_features(X, np.ascontiguousarray(basis.freqs), basis.phases)


def feature_derivs(basis: RffBasis, X: np.ndarray) -> np.ndarray:
    """Coordinate derivative stack D, shape (N * d, p_rff), rows flattened
    row-major over the (sample, coordinate) pair:

    D[(i, j), m] = -sqrt(2 / p) sin(w_m . x_i + b_m) w_{m j}.
    """
    X = np.ascontiguousarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != basis.d:
        raise ValueError(f"X must be (N, {basis.d})")
    return _backend.cos_feature_derivs(X, np.ascontiguousarray(basis.freqs), basis.phases)


def mixture_basis(
    specs: list[KernelSpec], p_rff: int, d: int, seed: int
) -> RffBasis:
    """Basis for a uniform mixture kernel: features are allocated to the
    dictionary entries in contiguous blocks of p_rff // L (remainder going
    to the trailing blocks), each block drawn from its entry's spectral
    measure. Draws are sequential from one seeded stream.
    """
    if not specs:
        raise ValueError("empty kernel dictionary")
    rng = np.random.default_rng(seed)
    counts = np.diff(np.linspace(0, p_rff, len(specs) + 1).astype(int))
    blocks = []
    for spec, count in zip(specs, counts):
        unit = _unit_draws(spec.family, int(count), d, rng)
        blocks.append(unit / spec.sigma_vec(d))
    freqs = np.vstack(blocks)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=p_rff)
    return RffBasis(spec=None, d=d, seed=seed, unit_freqs=freqs, phases=phases, freqs=freqs)
