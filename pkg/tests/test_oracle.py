import numpy as np
import pytest

from dirfft import (
    HelmholtzKernel,
    KernelPoint,
    OperatorKind,
    dense_evaluate_at,
    kernel_evaluate,
    relative_error,
    sample_points,
)

from conftest import random_density


def test_unit_impulse_density(discretizations):
    disc = discretizations("ellipse", 2)
    kernel = HelmholtzKernel(OperatorKind.SINGLE_LAYER, disc.omega)
    j = 37
    f = np.zeros(disc.n, dtype=complex)
    f[j] = 1.0
    u = dense_evaluate_at(disc, kernel, f, np.arange(disc.n))
    assert u[j] == 0.0
    for x in (0, 5, 100):
        expected = kernel_evaluate(
            kernel.kind,
            KernelPoint(disc.positions[x], disc.normals[x]),
            KernelPoint(disc.positions[j], disc.normals[j]),
            disc.omega,
        )
        assert u[x] == pytest.approx(expected, rel=1e-13)


def test_rotational_symmetry_on_circle(discretizations):
    disc = discretizations("circle", 3)
    kernel = HelmholtzKernel(OperatorKind.SINGLE_LAYER, disc.omega)
    f = np.ones(disc.n, dtype=complex)
    u = dense_evaluate_at(disc, kernel, f, np.arange(disc.n))
    spread = np.abs(u - u.mean()).max() / np.abs(u.mean())
    assert spread <= 1e-10


def test_against_independent_naive_loop(discretizations):
    # second implementation: plain scalar loop over kernel_evaluate
    disc = discretizations("ellipse", 2)
    assert disc.n == 128
    kernel = HelmholtzKernel(OperatorKind.DOUBLE_LAYER, disc.omega)
    f = random_density(disc.n, seed=12)
    targets = [0, 31, 64, 127]
    fast = dense_evaluate_at(disc, kernel, f, targets)
    for row, x in enumerate(targets):
        acc = 0.0 + 0.0j
        for y in range(disc.n):
            if y == x:
                continue
            acc += (
                kernel_evaluate(
                    kernel.kind,
                    KernelPoint(disc.positions[x], disc.normals[x]),
                    KernelPoint(disc.positions[y], disc.normals[y]),
                    disc.omega,
                )
                * f[y]
            )
        assert abs(fast[row] - acc) <= 1e-14 * abs(acc)


def test_relative_error_basics():
    u = np.array([1 + 1j, 2.0, -3j, 0.5])
    report = relative_error(u, u, sample=np.arange(4))
    assert report.relative_l2 == 0.0
    report = relative_error(u, 1.01 * u, sample=np.arange(4))
    assert report.relative_l2 == pytest.approx(0.01, abs=1e-12)


def test_relative_error_scale_invariance():
    rng = np.random.default_rng(0)
    ue = rng.standard_normal(50) + 1j * rng.standard_normal(50)
    ua = ue + 0.01 * rng.standard_normal(50)
    base = relative_error(ue, ua, sample=np.arange(50)).relative_l2
    scaled = relative_error(ue * (3 - 4j), ua * (3 - 4j), sample=np.arange(50)).relative_l2
    assert scaled == pytest.approx(base, abs=1e-14)


def test_relative_error_sampling_is_seeded():
    u = np.arange(1000, dtype=complex)
    r1 = relative_error(u, u, seed=5)
    r2 = relative_error(u, u, seed=5)
    assert np.array_equal(r1.sample_indices, r2.sample_indices)
    assert len(r1.sample_indices) == 100
    assert r1.seed == 5
    r3 = relative_error(u, u, seed=6)
    assert not np.array_equal(r1.sample_indices, r3.sample_indices)


def test_relative_error_rejects_degenerate_input():
    with pytest.raises(ValueError):
        relative_error(np.zeros(4), np.ones(4), sample=np.arange(4))
    with pytest.raises(ValueError):
        relative_error(np.ones(4), np.ones(5))


def test_sample_points_deterministic():
    s1 = sample_points(5000, seed=3)
    s2 = sample_points(5000, seed=3)
    assert np.array_equal(s1, s2)
    assert len(np.unique(s1)) == 100
    assert len(sample_points(30)) == 30
