"""Subspace recovery score and correlation-based mode matching."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from kdm.eigsolve import gauge_fix
from kdm.metrics import align_and_corr, subspace_r2

from _oracles import greedy_abs_corr_total

RNG = np.random.default_rng


def _orthonormal(n, r, seed):
    return gauge_fix(RNG(seed).normal(size=(n, r)))


def test_identity_scores_one():
    u = _orthonormal(200, 4, seed=0)
    score, cosines = subspace_r2(u, u)
    assert score == pytest.approx(1.0, abs=1e-12)
    assert_allclose(cosines, 1.0, atol=1e-12)


def test_orthogonal_complement_scores_zero():
    full = _orthonormal(200, 8, seed=1)
    score, cosines = subspace_r2(full[:, :4], full[:, 4:])
    assert score == pytest.approx(0.0, abs=1e-12)
    assert_allclose(cosines, 0.0, atol=1e-7)


def test_invariance_to_rotation_sign_and_affine_maps():
    rng = RNG(2)
    u = _orthonormal(150, 3, seed=3)
    v = gauge_fix(u + 0.5 * rng.normal(size=u.shape))
    base, _ = subspace_r2(u, v)

    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    rotated, _ = subspace_r2(u @ q, v)
    assert rotated == pytest.approx(base, abs=1e-12)

    flipped, _ = subspace_r2(u * np.array([-1.0, 1.0, -1.0]), v)
    assert flipped == pytest.approx(base, abs=1e-12)

    # Per-column affine maps are removed by the internal regauge.
    affine = v * np.array([3.0, 0.2, 7.0]) + np.array([1.0, -2.0, 0.5])
    mapped, _ = subspace_r2(u, affine)
    assert mapped == pytest.approx(base, abs=1e-12)

    sym_ab, _ = subspace_r2(u, v)
    sym_ba, _ = subspace_r2(v, u)
    assert sym_ab == pytest.approx(sym_ba, abs=1e-12)


def test_score_stays_in_unit_interval():
    rng = RNG(4)
    for trial in range(20):
        u = gauge_fix(rng.normal(size=(120, 3)))
        v = gauge_fix(rng.normal(size=(120, 3)))
        score, cosines = subspace_r2(u, v)
        assert -1e-12 <= score <= 1.0 + 1e-12, f"trial {trial}"
        assert np.all(cosines >= -1e-12) and np.all(cosines <= 1.0 + 1e-12)


def test_subspace_r2_validates_input():
    u = _orthonormal(100, 3, seed=5)
    with pytest.raises(ValueError):
        subspace_r2(u, _orthonormal(90, 3, seed=6))
    base = RNG(7).normal(size=(100, 2))
    dup = np.column_stack([base[:, 0], base[:, 0]])
    with pytest.raises(ValueError):
        subspace_r2(dup, u[:, :2])


def test_align_identity():
    u = _orthonormal(100, 4, seed=8)
    report = align_and_corr(u, u)
    assert list(report.permutation) == [0, 1, 2, 3]
    assert_allclose(report.signs, 1.0, atol=0)
    assert_allclose(report.correlations, 1.0, atol=1e-10)
    assert report.avg_abs_corr == pytest.approx(1.0, abs=1e-10)


def test_align_recovers_swap_and_negation():
    u = _orthonormal(100, 3, seed=9)
    shuffled = np.column_stack([-u[:, 2], u[:, 0], -u[:, 1]])
    report = align_and_corr(shuffled, u)
    # permutation[i] names the reference column matched to fitted column i
    assert list(report.permutation) == [2, 0, 1]
    assert list(report.signs) == [-1, 1, -1]
    assert report.avg_abs_corr == pytest.approx(1.0, abs=1e-10)


def test_exhaustive_matching_beats_greedy():
    rng = RNG(10)
    for trial in range(50):
        u = gauge_fix(rng.normal(size=(60, 4)))
        v = gauge_fix(rng.normal(size=(60, 4)))
        report = align_and_corr(u, v)
        total = float(np.sum(report.correlations))
        corr = np.zeros((4, 4))
        for i in range(4):
            for j in range(4):
                corr[i, j] = abs(np.corrcoef(u[:, i], v[:, j])[0, 1])
        assert total >= greedy_abs_corr_total(corr) - 1e-10, f"trial {trial}"


def test_align_rejects_wide_problems():
    u = _orthonormal(64, 9, seed=11)
    with pytest.raises(ValueError):
        align_and_corr(u, u)


def test_align_constant_column_warns_and_zeroes():
    u = _orthonormal(80, 2, seed=12)
    flat = np.column_stack([np.full(80, 3.0), u[:, 1]])
    with pytest.warns(UserWarning):
        report = align_and_corr(flat, u)
    assert np.all(np.isfinite(report.correlations))
    assert report.correlations.min() == pytest.approx(0.0, abs=1e-12)
