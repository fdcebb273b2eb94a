"""Benchmark problems with known reference eigenfunctions.

Four generators:

    ou          stationary Ornstein-Uhlenbeck, X ~ N(0, diag(1/alpha_j));
                references are Hermite products with known eigenvalues
    doublewell  1D Langevin with V(x) = (x^2 - 1)^2 / 4 (optionally tilted
                by +0.25 x); references from a finite-difference generator
    circle      noisy unit circle; references cos/sin(theta), cos/sin(2 theta)
    mdlike      d_slow double-well coordinates plus d_fast fast gaussian
                coordinates; references tanh(3 x_j) of the slow coordinates

All references are gauge fixed (centered, orthonormal in <., .>_N).
1D problems carry a tridiagonal discretization of the Langevin generator
G f = -V' f' + f''; OU problems additionally support applying the OU
generator analytically to kernel or feature expansions.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.interpolate
import scipy.linalg
from numpy.polynomial import hermite_e

from .eigsolve import gauge_fix
from .kernels import KernelSpec, gaussian_generator_gram
from .rff import RffBasis
from .seeding import rng_for


@dataclass
class Grid1dGenerator:
    """Conservative second-order discretization of G f = -V' f' + f'' on a
    uniform grid with zero-flux (Neumann) boundaries.

    The scheme is (G f)_i = [c_{i+1/2} (f_{i+1} - f_i) - c_{i-1/2} (f_i -
    f_{i-1})] / (h^2 w_i) with w = exp(-V) and c the edge weights, which
    is self-adjoint in the discrete L2(exp(-V)) inner product; for V = 0
    the stencil reduces to the plain second difference.
    """

    grid: np.ndarray
    weights: np.ndarray  # exp(-V) at the nodes
    c_edges: np.ndarray  # exp(-V) at interior midpoints, length M - 1
    h: float

    @classmethod
    def from_potential(cls, v: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, m: int) -> "Grid1dGenerator":
        grid = np.linspace(lo, hi, m)
        h = grid[1] - grid[0]
        mid = 0.5 * (grid[:-1] + grid[1:])
        return cls(grid=grid, weights=np.exp(-v(grid)), c_edges=np.exp(-v(mid)), h=float(h))

    def apply_grid(self, f: np.ndarray) -> np.ndarray:
        """G_h f for node values f (vector or one column per function)."""
        f = np.asarray(f, dtype=float)
        single = f.ndim == 1
        fm = f[:, None] if single else f
        flux = self.c_edges[:, None] * np.diff(fm, axis=0) / self.h
        div = np.zeros_like(fm)
        div[:-1] += flux
        div[1:] -= flux
        out = div / (self.h * self.weights[:, None])
        return out[:, 0] if single else out

    def apply_values(self, x: np.ndarray, phi: np.ndarray) -> np.ndarray:
        """G_h applied to sample values: interpolate to the grid, apply the
        stencil, interpolate back to the sample locations.

        The sample-to-grid step is a cubic spline, not a linear
        interpolant: the stencil second-differences the interpolant, so a
        piecewise-linear fill would erase the diffusion term between
        samples and spike at the breakpoints. Grid nodes outside the
        sample range continue linearly with the spline's edge slope; a
        clamped fill would put a kink at the extreme samples whose second
        difference is O(1/h^2).
        """
        x = np.asarray(x, dtype=float).reshape(-1)
        phi = np.asarray(phi, dtype=float)
        single = phi.ndim == 1
        pm = phi[:, None] if single else phi
        order = np.argsort(x)
        xs = x[order]
        out = np.empty_like(pm)
        for k in range(pm.shape[1]):
            cs = scipy.interpolate.CubicSpline(xs, pm[order, k], extrapolate=False)
            f_grid = cs(self.grid)
            lo_mask = self.grid < xs[0]
            hi_mask = self.grid > xs[-1]
            f_grid[lo_mask] = cs(xs[0]) + cs(xs[0], 1) * (self.grid[lo_mask] - xs[0])
            f_grid[hi_mask] = cs(xs[-1]) + cs(xs[-1], 1) * (self.grid[hi_mask] - xs[-1])
            g_grid = self.apply_grid(f_grid)
            out[:, k] = np.interp(x, self.grid, g_grid)
        return out[:, 0] if single else out

    def eigenpairs(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        """First k nontrivial eigenpairs, skipping the constant mode.

        Returns (lams, F) with G_h f = -lam f, lams positive ascending,
        and F holding node values of the eigenfunctions.
        """
        m = self.grid.size
        sqrt_w = np.sqrt(self.weights)
        d_main = np.zeros(m)
        d_main[:-1] -= self.c_edges
        d_main[1:] -= self.c_edges
        d_off = self.c_edges / (sqrt_w[:-1] * sqrt_w[1:])
        d_main = d_main / self.weights
        vals, vecs = scipy.linalg.eigh_tridiagonal(
            d_main / self.h**2, d_off / self.h**2, select="i", select_range=(m - k - 1, m - 1)
        )
        # ascending in vals; the last one is the constant (eigenvalue ~ 0)
        lams = -vals[:-1][::-1]
        funcs = vecs[:, :-1][:, ::-1] / sqrt_w[:, None]
        return lams, funcs


@dataclass
class OuGenerator:
    """Analytic OU generator G f = -(A x) . grad f + Delta f, A = diag(alphas).

    Applies termwise to kernel-section or Fourier-feature expansions; the
    sample values of a lifted eigenfunction do not determine G phi, so
    the expansion itself is required.
    """

    alphas: np.ndarray

    def apply_rff_expansion(self, X: np.ndarray, basis: RffBasis, A: np.ndarray) -> np.ndarray:
        p = basis.p_rff
        c = np.sqrt(2.0 / p)
        phase = X @ basis.freqs.T + basis.phases
        drift_phase = (X * self.alphas) @ basis.freqs.T
        gs = drift_phase * (c * np.sin(phase)) - np.sum(basis.freqs**2, axis=1) * (
            c * np.cos(phase)
        )
        return gs @ A

    def apply_nystrom_expansion(
        self, X: np.ndarray, specs: list[KernelSpec], beta: np.ndarray, Z: np.ndarray, A: np.ndarray
    ) -> np.ndarray:
        gc = sum(
            b * gaussian_generator_gram(s, X, Z, self.alphas) for b, s in zip(beta, specs)
        )
        return gc @ A


@dataclass
class BenchmarkDataset:
    name: str
    X: np.ndarray  # (N, d)
    phistar: np.ndarray  # (N, r) gauge-fixed references
    ref_eigenvalues: np.ndarray | None
    seed: int
    params: dict
    grid_generator: Grid1dGenerator | None = None
    ou_generator: OuGenerator | None = None

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def r(self) -> int:
        return self.phistar.shape[1]


def hermite_prob(n: int, x: np.ndarray) -> np.ndarray:
    """Probabilists' Hermite polynomial He_n, normalized by sqrt(n!) so the
    family is orthonormal under the standard normal."""
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    return hermite_e.hermeval(x, coeffs) / math.sqrt(math.factorial(n))


def ou_mode_indices(alphas: np.ndarray, r: int) -> list[tuple[tuple[int, ...], float]]:
    """First r nonconstant Hermite multi-indices ordered by eigenvalue
    sum_j n_j alpha_j, ties broken lexicographically."""
    alphas = np.asarray(alphas, dtype=float)
    d = alphas.size
    zero = (0,) * d
    heap: list[tuple[float, tuple[int, ...]]] = [(0.0, zero)]
    seen = {zero}
    out: list[tuple[tuple[int, ...], float]] = []
    while heap and len(out) < r:
        energy, idx = heapq.heappop(heap)
        if idx != zero:
            out.append((idx, energy))
        for j in range(d):
            nxt = idx[:j] + (idx[j] + 1,) + idx[j + 1 :]
            if nxt not in seen:
                seen.add(nxt)
                heapq.heappush(heap, (energy + alphas[j], nxt))
    return out


def gen_ou(alphas, n: int, seed: int, r: int = 4) -> BenchmarkDataset:
    """Stationary OU samples with Hermite-product references."""
    alphas = np.asarray(alphas, dtype=float)
    if np.any(alphas <= 0):
        raise ValueError("alphas must be positive")
    d = alphas.size
    rng = rng_for(seed, "ou", d)
    X = rng.standard_normal((n, d)) / np.sqrt(alphas)
    modes = ou_mode_indices(alphas, r)
    raw = np.empty((n, r))
    for k, (idx, _) in enumerate(modes):
        col = np.ones(n)
        for j, nj in enumerate(idx):
            if nj:
                col = col * hermite_prob(nj, np.sqrt(alphas[j]) * X[:, j])
        raw[:, k] = col
    phistar = gauge_fix(raw)
    dataset = BenchmarkDataset(
        name=f"ou{d}d",
        X=X,
        phistar=phistar,
        ref_eigenvalues=np.array([e for _, e in modes]),
        seed=seed,
        params={"alphas": alphas.tolist(), "modes": [list(m) for m, _ in modes]},
        ou_generator=OuGenerator(alphas=alphas),
    )
    if d == 1:
        lo = float(X.min()) - 1.0
        hi = float(X.max()) + 1.0
        m = max(int(round((hi - lo) / 1e-2)) + 1, 1000)
        dataset.grid_generator = Grid1dGenerator.from_potential(
            lambda x: 0.5 * alphas[0] * x**2, lo, hi, m
        )
    return dataset


DW_GRID_NODES = 4000
DW_GRID_LO, DW_GRID_HI = -2.5, 2.5


def _dw_potential(asymmetric: bool) -> Callable[[np.ndarray], np.ndarray]:
    if asymmetric:
        return lambda x: (x**2 - 1.0) ** 2 / 4.0 + 0.25 * x
    return lambda x: (x**2 - 1.0) ** 2 / 4.0


def sample_from_potential_1d(
    v: Callable[[np.ndarray], np.ndarray], n: int, rng: np.random.Generator,
    lo: float = DW_GRID_LO, hi: float = DW_GRID_HI, m: int = DW_GRID_NODES,
) -> np.ndarray:
    """Inverse-CDF samples from the density proportional to exp(-V) on a grid."""
    grid = np.linspace(lo, hi, m)
    w = np.exp(-v(grid))
    increments = 0.5 * (w[:-1] + w[1:]) * np.diff(grid)
    cdf = np.concatenate([[0.0], np.cumsum(increments)])
    cdf /= cdf[-1]
    return np.interp(rng.uniform(size=n), cdf, grid)


def gen_doublewell(n: int, seed: int, asymmetric: bool = False, r: int = 4) -> BenchmarkDataset:
    """1D double well; references are the first r nontrivial eigenfunctions
    of the discretized generator, interpolated to the samples."""
    v = _dw_potential(asymmetric)
    rng = rng_for(seed, "doublewell", int(asymmetric))
    X = sample_from_potential_1d(v, n, rng)[:, None]
    gen = Grid1dGenerator.from_potential(v, DW_GRID_LO, DW_GRID_HI, DW_GRID_NODES)
    lams, funcs = gen.eigenpairs(r)
    raw = np.empty((n, r))
    for k in range(r):
        raw[:, k] = np.interp(X[:, 0], gen.grid, funcs[:, k])
    return BenchmarkDataset(
        name="dwasym" if asymmetric else "dw1d",
        X=X,
        phistar=gauge_fix(raw),
        ref_eigenvalues=lams,
        seed=seed,
        params={"asymmetric": asymmetric},
        grid_generator=gen,
    )


def gen_circle(n: int, seed: int, noise: float = 0.05) -> BenchmarkDataset:
    """Noisy unit circle with the first two Fourier pairs as references."""
    rng = rng_for(seed, "circle")
    theta = rng.uniform(0.0, 2.0 * np.pi, size=n)
    X = np.column_stack([np.cos(theta), np.sin(theta)])
    X = X + noise * rng.standard_normal((n, 2))
    raw = np.column_stack(
        [np.cos(theta), np.sin(theta), np.cos(2 * theta), np.sin(2 * theta)]
    )
    return BenchmarkDataset(
        name="circle",
        X=X,
        phistar=gauge_fix(raw),
        ref_eigenvalues=np.array([1.0, 1.0, 4.0, 4.0]),
        seed=seed,
        params={"noise": noise},
    )


def gen_mdlike(d_slow: int, d_fast: int, n: int, seed: int) -> BenchmarkDataset:
    """Slow double-well coordinates plus fast gaussian noise coordinates.

    References are tanh(3 x_j) of the slow coordinates, a smooth stand-in
    for the well indicator of each slow degree of freedom.
    """
    rng = rng_for(seed, "mdlike", d_slow, d_fast)
    v = _dw_potential(False)
    slow = np.column_stack([sample_from_potential_1d(v, n, rng) for _ in range(d_slow)])
    fast = 0.2 * rng.standard_normal((n, d_fast))
    X = np.column_stack([slow, fast])
    raw = np.tanh(3.0 * slow)
    return BenchmarkDataset(
        name=f"mdlike{d_slow + d_fast}d",
        X=X,
        phistar=gauge_fix(raw),
        ref_eigenvalues=None,
        seed=seed,
        params={"d_slow": d_slow, "d_fast": d_fast},
    )


def apply_generator(dataset: BenchmarkDataset, phi: np.ndarray, expansion: dict | None = None) -> np.ndarray:
    """G_h phi at the samples.

    1D datasets use the grid path (interpolate, apply the tridiagonal
    stencil, interpolate back). Multivariate OU requires the expansion
    that produced phi: {"kind": "rff", "basis", "A"} or {"kind":
    "nystrom", "specs", "beta", "Z", "A"}.
    """
    if expansion is not None:
        if dataset.ou_generator is None:
            raise ValueError(f"{dataset.name} has no analytic generator")
        if expansion["kind"] == "rff":
            return dataset.ou_generator.apply_rff_expansion(
                dataset.X, expansion["basis"], expansion["A"]
            )
        if expansion["kind"] == "nystrom":
            return dataset.ou_generator.apply_nystrom_expansion(
                dataset.X, expansion["specs"], expansion["beta"], expansion["Z"], expansion["A"]
            )
        raise ValueError(f"unknown expansion kind {expansion['kind']!r}")
    if dataset.grid_generator is None:
        raise ValueError(f"{dataset.name} has no sample-value generator path")
    return dataset.grid_generator.apply_values(dataset.X[:, 0], phi)


def make_benchmark(problem: str, n: int, seed: int) -> BenchmarkDataset:
    """Benchmark registry used by the command line and reproduction suites."""
    if problem == "ou2d_a4":
        return gen_ou([1.0, 4.0], n, seed)
    if problem == "ou2d_a16":
        return gen_ou([1.0, 16.0], n, seed)
    if problem == "ou3d":
        return gen_ou([1.0, 4.0, 16.0], n, seed)
    if problem == "dw1d":
        return gen_doublewell(n, seed, asymmetric=False)
    if problem == "dwasym":
        return gen_doublewell(n, seed, asymmetric=True)
    if problem == "circle":
        return gen_circle(n, seed)
    if problem.startswith("mdlike"):
        d = int(problem.removeprefix("mdlike").removesuffix("d"))
        d_slow = 2
        return gen_mdlike(d_slow, d - d_slow, n, seed)
    if problem.startswith("ouhd"):
        d = int(problem.removeprefix("ouhd").removesuffix("d"))
        return gen_ou([2.0**j for j in range(1, d + 1)], n, seed)
    raise ValueError(f"unknown problem {problem!r}")


PROBLEMS = ("ou2d_a4", "ou2d_a16", "ou3d", "dw1d", "dwasym", "circle")
