"""Variational outer loops over kernel mixtures and bandwidths.

Two optimizers share the machinery:

    run_vmkl    learns simplex weights beta (via logits u) over a gaussian
                Nystrom dictionary; objective combines the eigenvalue sum,
                a subspace penalty on the raw lifted modes, an RKHS norm
                penalty, and optionally a generator (PDE) residual
    run_varrff  learns per-coordinate bandwidths sigma_j = sigma_cv *
                exp(tanh theta_j) for a matern32 feature basis with frozen
                frequency draws, so each sigma_j stays within a factor e
                of the cross-validated bandwidth

The eigenvalue term has an analytic gradient through the generalized
eigenproblem; the remaining terms are differentiated by central finite
differences. Both loops run Adam and return the best iterate seen.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .eigsolve import EigenSolution, gauge_fix, lift, solve_gevp
from .kernels import KernelSpec, mixture_jacobian, softmax_mixture
from .operators import (
    KernelParts,
    NystromMatrices,
    OperatorPair,
    aggregate_mixture,
    center_columns,
    operator_pair_nystrom,
    operator_pair_rff,
)
from .rff import RffBasis, feature_derivs, features, rescale_anisotropic, sample_basis

ABLATIONS = ("SubOnly", "EigOnly", "Combined")


# ---------------------------------------------------------------------------
# losses


def loss_eig(mu: np.ndarray) -> float:
    """Negated eigenvalue sum (minimized)."""
    return float(-np.sum(mu))


def loss_sub(phi_raw: np.ndarray, eta: float = 1.0) -> float:
    """Subspace penalty on the raw lifted modes:

    sum_k (mean phi_k)^2 + sum_k (||phi_k||_N^2 - 1)^2
    + eta * sum_{k<j} (<phi_k, phi_j>_N)^2.
    """
    n = phi_raw.shape[0]
    means = phi_raw.mean(axis=0)
    g = phi_raw.T @ phi_raw / n
    norms = np.diag(g)
    off = g[np.triu_indices_from(g, k=1)]
    return float(np.sum(means**2) + np.sum((norms - 1.0) ** 2) + eta * np.sum(off**2))


def loss_rkhs(A: np.ndarray, W: np.ndarray | None = None) -> float:
    """RKHS norm surrogate: sum_k a_k^T W a_k on the Nystrom path,
    sum_k ||a_k||^2 on the feature path."""
    if W is None:
        return float(np.sum(A * A))
    return float(np.einsum("pk,pq,qk->", A, W, A))


def rayleigh_eigenvalue_estimate(phi: np.ndarray, gphi: np.ndarray) -> np.ndarray:
    """lambda_hat_k = -<phi_k, G phi_k>_N / <phi_k, phi_k>_N."""
    num = np.einsum("nk,nk->k", phi, gphi)
    den = np.einsum("nk,nk->k", phi, phi)
    return -num / den


def loss_pde(phi: np.ndarray, gphi: np.ndarray, lambda_hat: np.ndarray | None = None) -> float:
    """Generator residual (1/N) sum_k ||G phi_k + lambda_hat_k phi_k||^2."""
    if lambda_hat is None:
        lambda_hat = rayleigh_eigenvalue_estimate(phi, gphi)
    res = gphi + phi * lambda_hat
    return float(np.sum(res * res) / phi.shape[0])


# ---------------------------------------------------------------------------
# gradients


def grad_eig_analytic(
    parts: KernelParts, beta: np.ndarray, pair: OperatorPair, mu: np.ndarray, A: np.ndarray
) -> np.ndarray:
    """d mu_k / d beta_l for the Nystrom mixture, shape (L, r).

    First-order perturbation of the generalized eigenproblem:
    d mu_k / d beta_l = a_k^T (d Sigma - mu_k d L_lambda) a_k with
    d_l Sigma = ((HC_l)^T (HC_beta) + (HC_beta)^T (HC_l)) / N and
    d_l L_lambda = (J_l^T J_beta + J_beta^T J_l) / N + lambda W_l,
    where H is the column-centering projector matching how Sigma is built.
    """
    n = pair.n
    c_beta = sum(b * c for b, c in zip(beta, parts.C))
    j_beta = sum(b * j for b, j in zip(beta, parts.J))
    cb = center_columns(c_beta @ A)
    out = np.empty((len(parts.C), mu.size))
    for l, (c_l, w_l, j_l) in enumerate(zip(parts.C, parts.W, parts.J)):
        d_sigma_quad = 2.0 * np.einsum("nk,nk->k", center_columns(c_l @ A), cb) / n
        ja = j_l.T @ (j_beta @ A) / n
        w_sym = 0.5 * (w_l + w_l.T)
        d_llam_quad = 2.0 * np.einsum("pk,pk->k", A, ja) + pair.lam * np.einsum(
            "pk,pq,qk->k", A, w_sym, A
        )
        out[l] = d_sigma_quad - mu * d_llam_quad
    return out


def grad_fd(f, x: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central finite differences, falling back to a one-sided stencil for
    coordinates where one side fails to evaluate."""
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    f0 = None
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        try:
            g[i] = (f(x + e) - f(x - e)) / (2.0 * h)
        except (np.linalg.LinAlgError, ValueError):
            if f0 is None:
                f0 = f(x)
            try:
                g[i] = (f(x + e) - f0) / h
            except (np.linalg.LinAlgError, ValueError):
                g[i] = (f0 - f(x - e)) / h
    return g


@dataclass
class AdamState:
    """Adam with bias correction and optional gradient norm clipping."""

    params: np.ndarray
    lr: float = 0.05
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    clip_norm: float | None = 10.0
    t: int = 0
    m: np.ndarray = field(init=False)
    v: np.ndarray = field(init=False)

    def __post_init__(self):
        self.params = np.asarray(self.params, dtype=float).copy()
        self.m = np.zeros_like(self.params)
        self.v = np.zeros_like(self.params)


def adam_step(state: AdamState, grad: np.ndarray) -> AdamState:
    """One in-place Adam update; returns the same state for chaining."""
    grad = np.asarray(grad, dtype=float)
    if state.clip_norm is not None:
        norm = np.linalg.norm(grad)
        if norm > state.clip_norm:
            grad = grad * (state.clip_norm / norm)
    state.t += 1
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * grad * grad
    m_hat = state.m / (1.0 - state.beta1**state.t)
    v_hat = state.v / (1.0 - state.beta2**state.t)
    state.params = state.params - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return state


# ---------------------------------------------------------------------------
# VMKL over a Nystrom dictionary


@dataclass
class VmklConfig:
    r: int = 4
    lam: float = 0.01
    w_eig: float = 1.0
    w_sub: float = 1.0
    w_rkhs: float = 1e-3
    w_pde: float = 0.0
    w_reg: float = 0.0
    eta: float = 1.0
    iters: int = 200
    lr: float = 0.05
    mix_floor: float = 0.01
    fd_step: float = 1e-5
    degenerate_gap: float = 1e-8

    @classmethod
    def for_ablation(cls, name: str, **kw) -> "VmklConfig":
        if name == "SubOnly":
            return cls(w_eig=0.0, w_sub=1.0, w_rkhs=0.0, **kw)
        if name == "EigOnly":
            return cls(w_eig=1.0, w_sub=0.0, w_rkhs=0.0, **kw)
        if name == "Combined":
            return cls(w_eig=1.0, w_sub=1.0, w_rkhs=1e-3, **kw)
        raise ValueError(f"unknown ablation {name!r}; choose from {ABLATIONS}")


@dataclass
class VmklResult:
    beta: np.ndarray
    solution: EigenSolution
    trace: list[dict]
    config: VmklConfig


def _vmkl_losses(parts, beta, lam, n, config, generator=None):
    m = aggregate_mixture(parts, beta)
    m = NystromMatrices(C=center_columns(m.C), W=m.W, J=m.J, Z=m.Z)
    pair = operator_pair_nystrom(m, lam, n)
    mu, A = solve_gevp(pair, config.r)
    phi_raw = lift(m.C, A)
    terms = {
        "eig": loss_eig(mu),
        "sub": loss_sub(phi_raw, config.eta),
        "rkhs": loss_rkhs(A, m.W),
        "pde": 0.0,
        "reg": float(beta @ beta),
    }
    if config.w_pde > 0.0:
        if generator is None:
            raise ValueError("w_pde > 0 requires a generator handle")
        gphi = generator(phi_raw, {"kind": "nystrom", "specs": parts.specs,
                                   "beta": beta, "Z": parts.Z, "A": A})
        terms["pde"] = loss_pde(phi_raw, gphi)
    total = (
        config.w_eig * terms["eig"]
        + config.w_sub * terms["sub"]
        + config.w_rkhs * terms["rkhs"]
        + config.w_pde * terms["pde"]
        + config.w_reg * terms["reg"]
    )
    return total, terms, pair, mu, A, m


def run_vmkl(
    X: np.ndarray,
    parts: KernelParts,
    config: VmklConfig,
    generator=None,
) -> VmklResult:
    """Optimize mixture logits with Adam; returns the best iterate.

    The eigenvalue term uses the analytic gradient chained through the
    floored softmax, unless the top-r spectrum is nearly degenerate, in
    which case the whole objective falls back to finite differences.
    The other loss terms always use central finite differences in u.
    """
    n = X.shape[0]
    n_kernels = len(parts.C)
    if n_kernels < 2:
        raise ValueError("dictionary needs at least two kernels")
    state = AdamState(params=np.zeros(n_kernels), lr=config.lr)
    best = None
    trace = []

    def rest_objective(u):
        beta_u = softmax_mixture(u, config.mix_floor).beta
        total_u, terms_u, *_ = _vmkl_losses(parts, beta_u, config.lam, n, config, generator)
        return (
            config.w_sub * terms_u["sub"]
            + config.w_rkhs * terms_u["rkhs"]
            + config.w_pde * terms_u["pde"]
            + config.w_reg * terms_u["reg"]
        )

    def full_objective(u):
        beta_u = softmax_mixture(u, config.mix_floor).beta
        return _vmkl_losses(parts, beta_u, config.lam, n, config, generator)[0]

    for it in range(config.iters):
        weights = softmax_mixture(state.params, config.mix_floor)
        total, terms, pair, mu, A, m = _vmkl_losses(
            parts, weights.beta, config.lam, n, config, generator
        )
        if best is None or total < best[0]:
            best = (total, weights.beta.copy(), mu, A, m)
        trace.append({"iter": it, "total": total, **terms,
                      "beta": weights.beta.copy()})

        gaps = np.abs(np.diff(mu))
        degenerate = gaps.size > 0 and gaps.min() < config.degenerate_gap
        if degenerate:
            grad_u = grad_fd(full_objective, state.params, config.fd_step)
        else:
            grad_u = np.zeros(n_kernels)
            if config.w_eig != 0.0:
                dmu_dbeta = grad_eig_analytic(parts, weights.beta, pair, mu, A)
                deig_du = mixture_jacobian(weights) @ dmu_dbeta @ (-np.ones(mu.size))
                grad_u += config.w_eig * deig_du
            if any((config.w_sub, config.w_rkhs, config.w_pde, config.w_reg)):
                grad_u += grad_fd(rest_objective, state.params, config.fd_step)
        adam_step(state, grad_u)

    total, beta, mu, A, m = best
    phi = gauge_fix(lift(m.C, A))
    return VmklResult(
        beta=beta,
        solution=EigenSolution(mu=mu, A=A, phi=phi),
        trace=trace,
        config=config,
    )


# ---------------------------------------------------------------------------
# bounded per-coordinate bandwidth refinement on the feature path


@dataclass
class VarRffConfig:
    sigma_cv: float = 1.0
    r: int = 4
    lam: float = 0.01
    p_rff: int = 300
    w_rkhs: float = 1e-3
    iters: int = 100
    lr: float = 0.05
    fd_step: float = 1e-4


@dataclass
class VarRffResult:
    sigma: np.ndarray
    solution: EigenSolution
    basis: RffBasis
    trace: list[dict]
    config: VarRffConfig


def run_varrff(X: np.ndarray, config: VarRffConfig, seed: int) -> VarRffResult:
    """Optimize theta with sigma_j = sigma_cv * exp(tanh theta_j) over a
    frozen matern32 frequency draw; loss is -sum mu + w_rkhs sum ||a_k||^2
    with central finite differences in theta."""
    n, d = X.shape
    base = sample_basis(KernelSpec("matern32", 1.0), config.p_rff, d, seed)

    def solve_at(theta):
        sigma = config.sigma_cv * np.exp(np.tanh(theta))
        basis = rescale_anisotropic(base, sigma)
        s = center_columns(features(basis, X))
        dmat = feature_derivs(basis, X)
        mu, A = solve_gevp(operator_pair_rff(s, dmat, config.lam, n), config.r)
        return sigma, basis, s, mu, A

    def objective(theta):
        _, _, _, mu, A = solve_at(theta)
        return loss_eig(mu) + config.w_rkhs * loss_rkhs(A)

    state = AdamState(params=np.zeros(d), lr=config.lr)
    best = None
    trace = []
    for it in range(config.iters):
        sigma, basis, s, mu, A = solve_at(state.params)
        total = loss_eig(mu) + config.w_rkhs * loss_rkhs(A)
        if best is None or total < best[0]:
            best = (total, state.params.copy())
        trace.append({"iter": it, "total": total, "sigma": sigma.copy()})
        adam_step(state, grad_fd(objective, state.params, config.fd_step))

    sigma, basis, s, mu, A = solve_at(best[1])
    return VarRffResult(
        sigma=sigma,
        solution=EigenSolution(mu=mu, A=A, phi=gauge_fix(lift(s, A))),
        basis=basis,
        trace=trace,
        config=config,
    )
