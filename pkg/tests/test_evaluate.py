import numpy as np
import pytest

from dirfft import (
    HelmholtzKernel,
    Modulation,
    OperatorKind,
    PairPlan,
    SpectralBuffers,
    apply_pairs,
    dense_evaluate_at,
    evaluate,
    forward_transform,
    inverse_transform,
)
from dirfft.plan import PairGroup

from conftest import random_density


def forward_reference(plan, node, f):
    tree = plan.tree
    disc = plan.disc
    seg = tree.segment(node)
    grid = plan.grids[seg.level]
    interp = plan.cheb[node].matrix
    s_rel = disc.s[seg.i_lo : seg.i_hi] - seg.center_s
    phases = np.exp(1j * np.outer(s_rel, grid.points))  # (M, K)
    fs = f[seg.i_lo : seg.i_hi]
    return np.einsum("mj,mk,m->jk", interp, phases, fs)


def inverse_reference(plan, node, uhat):
    tree = plan.tree
    disc = plan.disc
    seg = tree.segment(node)
    grid = plan.grids[seg.level]
    interp = plan.cheb[node].matrix
    s_rel = disc.s[seg.i_lo : seg.i_hi] - seg.center_s
    phases = np.exp(1j * np.outer(s_rel, grid.points))  # (M, K)
    return np.einsum("mj,mk,jk->m", interp, phases, uhat)


def pick_nodes(plan, side):
    nodes = plan.source_nodes() if side == "source" else plan.target_nodes()
    by_level = {}
    for node in nodes:
        by_level.setdefault(int(plan.tree.level[node]), int(node))
    return by_level


def test_forward_transform_zero_density(plans):
    plan = plans("ellipse", 4)
    node = int(plan.source_nodes()[0])
    seg = plan.tree.segment(node)
    grid = plan.grids[seg.level]
    out = forward_transform(seg, np.zeros(plan.disc.n, dtype=complex), plan.cheb[node].matrix, grid)
    assert out.shape == (plan.m_cheb, grid.size)
    assert np.all(out == 0)


def test_forward_transform_unit_impulse(plans):
    plan = plans("ellipse", 4)
    node = int(plan.source_nodes()[0])
    seg = plan.tree.segment(node)
    grid = plan.grids[seg.level]
    interp = plan.cheb[node].matrix
    local = seg.n_points // 3
    f = np.zeros(plan.disc.n, dtype=complex)
    f[seg.i_lo + local] = 1.0
    out = forward_transform(seg, f, interp, grid)
    s_rel = plan.disc.s[seg.i_lo + local] - seg.center_s
    expected = interp[local][:, None] * np.exp(1j * grid.points * s_rel)[None, :]
    assert np.abs(out - expected).max() <= 1e-12


def test_transforms_match_direct_sums(plans):
    plan = plans("ellipse", 5)
    rng = np.random.default_rng(42)
    f = random_density(plan.disc.n, seed=42)
    for node in pick_nodes(plan, "source").values():
        seg = plan.tree.segment(node)
        grid = plan.grids[seg.level]
        fast = forward_transform(seg, f, plan.cheb[node].matrix, grid)
        ref = forward_reference(plan, node, f)
        assert np.abs(fast - ref).max() <= 1e-12 * np.abs(ref).max()
    for node in pick_nodes(plan, "target").values():
        seg = plan.tree.segment(node)
        grid = plan.grids[seg.level]
        uhat = rng.standard_normal((plan.m_cheb, grid.size)) + 1j * rng.standard_normal(
            (plan.m_cheb, grid.size)
        )
        fast = inverse_transform(seg, uhat, plan.cheb[node].matrix, grid)
        ref = inverse_reference(plan, node, uhat)
        assert np.abs(fast - ref).max() <= 1e-12 * np.abs(ref).max()


def test_inverse_zero_spectrum(plans):
    plan = plans("ellipse", 4)
    node = int(plan.target_nodes()[0])
    seg = plan.tree.segment(node)
    grid = plan.grids[seg.level]
    out = inverse_transform(seg, np.zeros((plan.m_cheb, grid.size), dtype=complex),
                            plan.cheb[node].matrix, grid)
    assert np.all(out == 0)


def test_inverse_single_bin(plans):
    plan = plans("ellipse", 4)
    node = int(plan.target_nodes()[0])
    seg = plan.tree.segment(node)
    grid = plan.grids[seg.level]
    interp = plan.cheb[node].matrix
    rng = np.random.default_rng(3)
    uhat = np.zeros((plan.m_cheb, grid.size), dtype=complex)
    k0 = grid.size // 3
    uhat[:, k0] = rng.standard_normal(plan.m_cheb) + 1j * rng.standard_normal(plan.m_cheb)
    out = inverse_transform(seg, uhat, interp, grid)
    s_rel = plan.disc.s[seg.i_lo : seg.i_hi] - seg.center_s
    expected = (interp @ uhat[:, k0]) * np.exp(1j * grid.points[k0] * s_rel)
    assert np.abs(out - expected).max() <= 1e-12 * np.abs(expected).max()


def test_forward_inverse_are_transposes(plans):
    # <inverse(A), g> == <A, forward(g)> under the bilinear pairing
    plan = plans("bean", 4)
    rng = np.random.default_rng(9)
    node = int(plan.target_nodes()[0])
    seg = plan.tree.segment(node)
    grid = plan.grids[seg.level]
    interp = plan.cheb[node].matrix
    a = rng.standard_normal((plan.m_cheb, grid.size)) + 1j * rng.standard_normal(
        (plan.m_cheb, grid.size)
    )
    g = random_density(plan.disc.n, seed=10)
    lhs = np.sum(inverse_transform(seg, a, interp, grid) * g[seg.i_lo : seg.i_hi])
    rhs = np.sum(a * forward_transform(seg, g, interp, grid))
    assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


def test_dense_only_plan_matches_oracle(plans, discretizations):
    disc = discretizations("ellipse", 2)
    plan = plans("ellipse", 2)
    assert plan.n_lowrank == 0
    f = random_density(disc.n, seed=0)
    kernel = HelmholtzKernel(OperatorKind.SINGLE_LAYER, disc.omega)
    u = evaluate(plan, f)
    exact = dense_evaluate_at(disc, kernel, f, np.arange(disc.n))
    assert np.abs(u - exact).max() <= 1e-13 * np.abs(exact).max()


def single_pair_plan(plan, variant, idx):
    """Copy of ``plan`` stripped to one low-rank pair."""
    groups = {
        Modulation.BOTH: plan.mod_both,
        Modulation.SOURCE: plan.mod_source,
        Modulation.TARGET: plan.mod_target,
    }
    empty = PairGroup.from_lists([], [])
    empty.blocks = np.empty((0, 1, 1), dtype=complex)

    def one(group):
        sel = PairGroup(
            t=group.t[idx : idx + 1],
            s=group.s[idx : idx + 1],
            kt=group.kt[idx : idx + 1],
            ks=group.ks[idx : idx + 1],
            blocks=group.blocks[idx : idx + 1],
        )
        return sel

    dense = PairGroup.from_lists([], [])
    dense.blocks = np.empty((0, 1, 1), dtype=complex)
    return PairPlan(
        tree=plan.tree,
        cover=plan.cover,
        dense=dense,
        mod_both=one(groups[variant]) if variant == Modulation.BOTH else empty,
        mod_source=one(groups[variant]) if variant == Modulation.SOURCE else empty,
        mod_target=one(groups[variant]) if variant == Modulation.TARGET else empty,
        m_cheb=plan.m_cheb,
        m_freq=plan.m_freq,
        cheb=plan.cheb,
        grids=plan.grids,
    )


@pytest.mark.parametrize("variant", list(Modulation))
def test_single_pair_matches_direct_chain(plans, discretizations, variant):
    # one isolated pair: the FFT pipeline equals the explicit factor chain
    # (the pointy ellipse is the shape whose plan has all three variants)
    disc = discretizations("pointy", 4)
    plan = plans("pointy", 4)
    tree = plan.tree
    group = {
        Modulation.BOTH: plan.mod_both,
        Modulation.SOURCE: plan.mod_source,
        Modulation.TARGET: plan.mod_target,
    }[variant]
    assert len(group) > 0
    idx = len(group) // 2
    sub = single_pair_plan(plan, variant, idx)
    f = random_density(disc.n, seed=17)
    u = evaluate(sub, f)

    t, s = int(group.t[idx]), int(group.s[idx])
    ts, ss = slice(tree.i_lo[t], tree.i_hi[t]), slice(tree.i_lo[s], tree.i_hi[s])
    s_t = disc.s[ts] - tree.center_s[t]
    s_s = disc.s[ss] - tree.center_s[s]
    block = group.blocks[idx]
    if variant == Modulation.BOTH:
        mod_t = np.exp(1j * plan.grids[int(tree.level[t])].points[group.kt[idx]] * s_t)
        mod_s = np.exp(1j * plan.grids[int(tree.level[s])].points[group.ks[idx]] * s_s)
        contrib = mod_t * (
            plan.cheb[t].matrix @ (block @ (plan.cheb[s].matrix.T @ (mod_s * f[ss])))
        )
    elif variant == Modulation.SOURCE:
        mod_s = np.exp(1j * plan.grids[int(tree.level[s])].points[group.ks[idx]] * s_s)
        contrib = block @ (plan.cheb[s].matrix.T @ (mod_s * f[ss]))
    else:
        mod_t = np.exp(1j * plan.grids[int(tree.level[t])].points[group.kt[idx]] * s_t)
        contrib = mod_t * (plan.cheb[t].matrix @ (block @ f[ss]))
    expected = np.zeros(disc.n, dtype=complex)
    expected[ts] = contrib
    scale = np.abs(contrib).max()
    assert np.abs(u - expected).max() <= 1e-12 * scale


def test_pair_order_does_not_matter(plans, discretizations):
    disc = discretizations("ellipse", 4)
    plan = plans("ellipse", 4)
    f = random_density(disc.n, seed=23)
    u = evaluate(plan, f)
    perm = np.random.default_rng(1).permutation(len(plan.mod_both))
    permuted = PairGroup(
        t=plan.mod_both.t[perm],
        s=plan.mod_both.s[perm],
        kt=plan.mod_both.kt[perm],
        ks=plan.mod_both.ks[perm],
        blocks=plan.mod_both.blocks[perm],
    )
    shuffled = PairPlan(
        tree=plan.tree,
        cover=plan.cover,
        dense=plan.dense,
        mod_both=permuted,
        mod_source=plan.mod_source,
        mod_target=plan.mod_target,
        m_cheb=plan.m_cheb,
        m_freq=plan.m_freq,
        cheb=plan.cheb,
        grids=plan.grids,
    )
    u2 = evaluate(shuffled, f)
    assert np.abs(u - u2).max() <= 1e-12 * np.abs(u).max()


def test_evaluate_is_linear(plans, discretizations):
    disc = discretizations("bean", 4)
    plan = plans("bean", 4)
    f1 = random_density(disc.n, seed=1)
    f2 = random_density(disc.n, seed=2)
    alpha, beta = 0.7 - 0.2j, -1.3 + 0.4j
    lhs = evaluate(plan, alpha * f1 + beta * f2)
    rhs = alpha * evaluate(plan, f1) + beta * evaluate(plan, f2)
    assert np.abs(lhs - rhs).max() <= 1e-12 * np.abs(lhs).max()


def test_end_to_end_accuracy_q5(plans, discretizations):
    disc = discretizations("ellipse", 5)
    plan = plans("ellipse", 5, "S", 8)
    kernel = HelmholtzKernel(OperatorKind.SINGLE_LAYER, disc.omega)
    f = random_density(disc.n, seed=7)
    u = evaluate(plan, f)
    rng = np.random.default_rng(7)
    sample = rng.choice(disc.n, size=100, replace=False)
    exact = dense_evaluate_at(disc, kernel, f, sample)
    err = np.sqrt(np.sum(np.abs(exact - u[sample]) ** 2) / np.sum(np.abs(exact) ** 2))
    assert err <= 1e-4


def test_end_to_end_with_all_variants(plans, discretizations):
    # pointy ellipse plans route through dense, both-, source- and
    # target-modulated paths at once; check against the oracle
    disc = discretizations("pointy", 4)
    plan = plans("pointy", 4, "S", 10)
    assert len(plan.mod_source) > 0 and len(plan.mod_target) > 0
    kernel = HelmholtzKernel(OperatorKind.SINGLE_LAYER, disc.omega)
    f = random_density(disc.n, seed=4)
    u = evaluate(plan, f)
    exact = dense_evaluate_at(disc, kernel, f, np.arange(disc.n))
    err = np.sqrt(np.sum(np.abs(exact - u) ** 2) / np.sum(np.abs(exact) ** 2))
    assert err <= 1e-5


def test_evaluate_validates_input(plans):
    plan = plans("ellipse", 2)
    with pytest.raises(ValueError):
        evaluate(plan, np.zeros(3))


def test_missing_source_spectrum_detected(plans):
    plan = plans("ellipse", 4)
    f = np.zeros(plan.disc.n, dtype=complex)
    with pytest.raises(RuntimeError):
        apply_pairs(plan, f, SpectralBuffers())
