"""Interaction classification and directional low-rank compression.

All segment pairs from the cover set are pushed through a work queue and
classified into *dense* pairs (stored verbatim as kernel blocks, with the
x = y diagonal zeroed) and *low-rank* pairs. A pair qualifies as low rank
when it is parabolically separated,

    d > 1,   d > max(w_T, w_S),   d > 2 * max(h_T, h_S)**2,

(gap d, longitudinal extents w, transverse extents h, all in wavelengths)
and at least one side is almost planar. Pairs failing the test are split
and re-queued until everything lands in a dense leaf block or a low-rank
block.

For a low-rank pair the kernel is demodulated on each almost-planar side
by exp(i k (s - s_center)), where k is the per-segment frequency
omega * a.t rounded onto the segment's dyadic grid; the remaining smooth
factor is sampled on Chebyshev grids. Three variants exist depending on
which sides are almost planar: both, source-only, or target-only.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .geometry import Discretization
from .grids import ChebGrid, FrequencyGrid, chebyshev_nodes, interpolation_matrix
from .tree import Segment, SegmentTree, build_cover_set, build_tree

__all__ = [
    "SeparationData",
    "separation_data",
    "is_parabolically_separated",
    "Modulation",
    "PairGroup",
    "PairPlan",
    "classify_pairs",
    "compute_factors",
    "build_plan",
    "rank_estimate",
    "save_plan",
    "load_plan",
]

PLAN_FORMAT_VERSION = 1


@dataclass(frozen=True)
class SeparationData:
    """Projected geometry of a segment pair, in wavelength units.

    ``direction`` points from the source center to the target center;
    extents are measured from each segment's discretization points plus
    its exact endpoints. ``d`` is the gap between the two projection
    intervals on the center line (0 when they overlap).
    """

    direction: np.ndarray
    d: float
    w_t: float
    w_s: float
    h_t: float
    h_s: float


def _projected_extents(points, end_lo, end_hi, axis, perp):
    pts = np.vstack([points, end_lo[None, :], end_hi[None, :]])
    along = pts @ axis
    across = pts @ perp
    return along.min(), along.max(), across.max() - across.min()


def _separation(points_t, end_t, center_t, points_s, end_s, center_s, lam):
    gap_vec = center_t - center_s
    dist = float(np.hypot(gap_vec[0], gap_vec[1]))
    if dist == 0.0:
        raise ValueError("segment centers coincide; separation is undefined")
    axis = gap_vec / dist
    perp = np.array([-axis[1], axis[0]])
    t_lo, t_hi, h_t = _projected_extents(points_t, end_t[0], end_t[1], axis, perp)
    s_lo, s_hi, h_s = _projected_extents(points_s, end_s[0], end_s[1], axis, perp)
    gap = max(0.0, max(t_lo, s_lo) - min(t_hi, s_hi))
    return SeparationData(
        direction=axis,
        d=gap / lam,
        w_t=(t_hi - t_lo) / lam,
        w_s=(s_hi - s_lo) / lam,
        h_t=h_t / lam,
        h_s=h_s / lam,
    )


def separation_data(seg_t: Segment, seg_s: Segment, disc: Discretization) -> SeparationData:
    """Separation geometry of the pair (target, source)."""
    return _separation(
        seg_t.positions,
        (seg_t.end_lo, seg_t.end_hi),
        seg_t.center,
        seg_s.positions,
        (seg_s.end_lo, seg_s.end_hi),
        seg_s.center,
        disc.lam,
    )


def is_parabolically_separated(sd: SeparationData) -> bool:
    """Admissibility: d > 1, d > max(w), and d > 2 * max(h)^2 (all strict)."""
    return (
        sd.d > 1.0
        and sd.d > max(sd.w_t, sd.w_s)
        and sd.d > 2.0 * max(sd.h_t, sd.h_s) ** 2
    )


class Modulation(IntEnum):
    """Which sides of a low-rank pair carry the exponential demodulation."""

    BOTH = 0
    SOURCE = 1  # target is a non-planar leaf, evaluated densely
    TARGET = 2  # source is a non-planar leaf, evaluated densely


@dataclass
class PairGroup:
    """One class of pairs: parallel arrays of node ids plus their blocks."""

    t: np.ndarray
    s: np.ndarray
    kt: np.ndarray  # frequency-grid index on the target side (-1 if unused)
    ks: np.ndarray  # frequency-grid index on the source side (-1 if unused)
    blocks: np.ndarray | None = None  # (n_pairs, rows, cols), filled by compute_factors

    def __len__(self):
        return len(self.t)

    @staticmethod
    def from_lists(t, s):
        n = len(t)
        return PairGroup(
            t=np.asarray(t, dtype=np.int64),
            s=np.asarray(s, dtype=np.int64),
            kt=np.full(n, -1, dtype=np.int64),
            ks=np.full(n, -1, dtype=np.int64),
        )


@dataclass
class PairPlan:
    """The classified interaction set with its compressed factors.

    ``dense`` holds leaf-by-leaf kernel blocks; ``mod_both``,
    ``mod_source`` and ``mod_target`` hold the three low-rank variants.
    Together the pairs tile every ordered point pair (x, y), x != y,
    exactly once. Immutable once factors are computed.
    """

    tree: SegmentTree
    cover: list[int]
    dense: PairGroup
    mod_both: PairGroup
    mod_source: PairGroup
    mod_target: PairGroup
    m_cheb: int | None = None
    m_freq: int | None = None
    kernel_name: str = ""
    cheb: dict[int, ChebGrid] = field(default_factory=dict)
    grids: dict[int, FrequencyGrid] = field(default_factory=dict)

    @property
    def disc(self) -> Discretization:
        return self.tree.disc

    @property
    def n_dense(self) -> int:
        return len(self.dense)

    @property
    def n_lowrank(self) -> int:
        return len(self.mod_both) + len(self.mod_source) + len(self.mod_target)

    @property
    def has_factors(self) -> bool:
        return self.m_cheb is not None and self.dense.blocks is not None

    def lowrank_groups(self):
        yield Modulation.BOTH, self.mod_both
        yield Modulation.SOURCE, self.mod_source
        yield Modulation.TARGET, self.mod_target

    def source_nodes(self) -> np.ndarray:
        """Nodes whose density spectrum is consumed by some low-rank pair."""
        return np.unique(np.concatenate([self.mod_both.s, self.mod_source.s]))

    def target_nodes(self) -> np.ndarray:
        """Nodes whose potential is accumulated in spectral form."""
        return np.unique(np.concatenate([self.mod_both.t, self.mod_target.t]))

    def covered_pair_count(self) -> int:
        """Number of ordered point pairs (x, y), x != y, the plan covers."""
        tree = self.tree
        total = 0
        for group in (self.dense, self.mod_both, self.mod_source, self.mod_target):
            nt = tree.i_hi[group.t] - tree.i_lo[group.t]
            ns = tree.i_hi[group.s] - tree.i_lo[group.s]
            total += int(np.sum(nt * ns)) - int(np.sum(nt[group.t == group.s]))
        return total


def classify_pairs(tree: SegmentTree, cover: list[int]) -> PairPlan:
    """Run the pair queue over cover x cover and classify every interaction.

    Returns the plan structure only; frequency indices and factor blocks
    are filled in by :func:`compute_factors`.
    """
    disc = tree.disc
    lam = disc.lam
    pos = disc.positions
    planar = tree.almost_planar
    leaf = tree.is_leaf
    level = tree.level
    i_lo, i_hi = tree.i_lo, tree.i_hi
    c0, c1 = tree.child0, tree.child1

    def separated(t, s):
        if t == s:
            return False
        sd = _separation(
            pos[i_lo[t] : i_hi[t]],
            (tree.end_lo[t], tree.end_hi[t]),
            tree.center[t],
            pos[i_lo[s] : i_hi[s]],
            (tree.end_lo[s], tree.end_hi[s]),
            tree.center[s],
            lam,
        )
        return is_parabolically_separated(sd)

    dense_t, dense_s = [], []
    low_t = {m: [] for m in Modulation}
    low_s = {m: [] for m in Modulation}

    queue = deque((t, s) for t in cover for s in cover)
    while queue:
        t, s = queue.popleft()
        ap_t, ap_s = planar[t], planar[s]
        if not ap_t and not ap_s:
            dense_t.append(t)
            dense_s.append(s)
        elif not ap_t:  # target is a non-planar leaf, source almost planar
            if separated(t, s):
                low_t[Modulation.SOURCE].append(t)
                low_s[Modulation.SOURCE].append(s)
            elif not leaf[s]:
                queue.append((t, c0[s]))
                queue.append((t, c1[s]))
            else:
                dense_t.append(t)
                dense_s.append(s)
        elif not ap_s:  # source is a non-planar leaf, target almost planar
            if separated(t, s):
                low_t[Modulation.TARGET].append(t)
                low_s[Modulation.TARGET].append(s)
            elif not leaf[t]:
                queue.append((c0[t], s))
                queue.append((c1[t], s))
            else:
                dense_t.append(t)
                dense_s.append(s)
        else:  # both almost planar
            if separated(t, s):
                low_t[Modulation.BOTH].append(t)
                low_s[Modulation.BOTH].append(s)
            elif level[t] > level[s]:
                queue.append((c0[t], s))
                queue.append((c1[t], s))
            elif level[s] > level[t]:
                queue.append((t, c0[s]))
                queue.append((t, c1[s]))
            elif not leaf[t]:
                queue.append((c0[t], c0[s]))
                queue.append((c1[t], c0[s]))
                queue.append((c0[t], c1[s]))
                queue.append((c1[t], c1[s]))
            else:
                dense_t.append(t)
                dense_s.append(s)

    return PairPlan(
        tree=tree,
        cover=list(cover),
        dense=PairGroup.from_lists(dense_t, dense_s),
        mod_both=PairGroup.from_lists(low_t[Modulation.BOTH], low_s[Modulation.BOTH]),
        mod_source=PairGroup.from_lists(
            low_t[Modulation.SOURCE], low_s[Modulation.SOURCE]
        ),
        mod_target=PairGroup.from_lists(
            low_t[Modulation.TARGET], low_s[Modulation.TARGET]
        ),
    )


def _cheb_for(plan: PairPlan, node: int) -> ChebGrid:
    grid = plan.cheb.get(node)
    if grid is None:
        tree = plan.tree
        disc = tree.disc
        nodes = chebyshev_nodes(tree.s_lo[node], tree.s_hi[node], plan.m_cheb)
        positions, _, normals, _ = disc.geometry.frame(nodes)
        seg_s = disc.s[tree.i_lo[node] : tree.i_hi[node]]
        grid = ChebGrid(
            node_s=nodes,
            positions=positions,
            normals=normals,
            matrix=interpolation_matrix(seg_s, nodes),
        )
        plan.cheb[node] = grid
    return grid


def _grid_for(plan: PairPlan, level: int) -> FrequencyGrid:
    grid = plan.grids.get(level)
    if grid is None:
        grid = FrequencyGrid(plan.disc.omega, level, plan.m_freq)
        # every spectrum must fit in the segment's FFT (needs p >= 3)
        assert grid.size <= 2**level * plan.m_freq * plan.disc.p
        plan.grids[level] = grid
    return grid


def compute_factors(
    plan: PairPlan, disc: Discretization, kernel, m_cheb: int = 8, m_freq: int = 2
) -> PairPlan:
    """Fill the plan with kernel blocks and demodulated Chebyshev factors.

    ``kernel`` is any callable ``kernel(x_pos, x_nrm, y_pos, y_nrm)``
    returning the (len(x), len(y)) complex kernel matrix; nothing here
    depends on its analytic form beyond the oscillatory-times-smooth
    structure.
    """
    if disc is not plan.tree.disc:
        raise ValueError("plan was classified for a different discretization")
    if m_cheb < 2:
        raise ValueError("m_cheb must be >= 2")
    tree = plan.tree
    omega = disc.omega
    plan.m_cheb = int(m_cheb)
    plan.m_freq = int(m_freq)
    plan.kernel_name = getattr(getattr(kernel, "kind", None), "value", "") or getattr(
        kernel, "__name__", type(kernel).__name__
    )
    plan.cheb.clear()
    plan.grids.clear()

    pos, nrm = disc.positions, disc.normals
    i_lo, i_hi = tree.i_lo, tree.i_hi

    n_leaf_pts = tree.m_leaf * disc.p
    dense = plan.dense
    dense.blocks = np.empty((len(dense), n_leaf_pts, n_leaf_pts), dtype=np.complex128)
    for idx in range(len(dense)):
        t, s = dense.t[idx], dense.s[idx]
        ts, ss = slice(i_lo[t], i_hi[t]), slice(i_lo[s], i_hi[s])
        block = kernel(pos[ts], nrm[ts], pos[ss], nrm[ss])
        if t == s:
            np.fill_diagonal(block, 0.0)
        dense.blocks[idx] = block

    def direction(t, s):
        gap = tree.center[t] - tree.center[s]
        return gap / np.hypot(gap[0], gap[1])

    group = plan.mod_both
    group.blocks = np.empty((len(group), m_cheb, m_cheb), dtype=np.complex128)
    for idx in range(len(group)):
        t, s = group.t[idx], group.s[idx]
        axis = direction(t, s)
        grid_t = _grid_for(plan, int(tree.level[t]))
        grid_s = _grid_for(plan, int(tree.level[s]))
        kt = grid_t.round_index(omega * float(axis @ tree.tangent[t]))
        ks = grid_s.round_index(-omega * float(axis @ tree.tangent[s]))
        group.kt[idx], group.ks[idx] = kt, ks
        cheb_t, cheb_s = _cheb_for(plan, t), _cheb_for(plan, s)
        block = kernel(cheb_t.positions, cheb_t.normals, cheb_s.positions, cheb_s.normals)
        mod_t = np.exp(1j * grid_t.points[kt] * (cheb_t.node_s - tree.center_s[t]))
        mod_s = np.exp(1j * grid_s.points[ks] * (cheb_s.node_s - tree.center_s[s]))
        group.blocks[idx] = block / (mod_t[:, None] * mod_s[None, :])

    group = plan.mod_source
    group.blocks = np.empty((len(group), n_leaf_pts, m_cheb), dtype=np.complex128)
    for idx in range(len(group)):
        t, s = group.t[idx], group.s[idx]
        axis = direction(t, s)
        grid_s = _grid_for(plan, int(tree.level[s]))
        ks = grid_s.round_index(-omega * float(axis @ tree.tangent[s]))
        group.ks[idx] = ks
        cheb_s = _cheb_for(plan, s)
        ts = slice(i_lo[t], i_hi[t])
        block = kernel(pos[ts], nrm[ts], cheb_s.positions, cheb_s.normals)
        mod_s = np.exp(1j * grid_s.points[ks] * (cheb_s.node_s - tree.center_s[s]))
        group.blocks[idx] = block / mod_s[None, :]

    group = plan.mod_target
    group.blocks = np.empty((len(group), m_cheb, n_leaf_pts), dtype=np.complex128)
    for idx in range(len(group)):
        t, s = group.t[idx], group.s[idx]
        axis = direction(t, s)
        grid_t = _grid_for(plan, int(tree.level[t]))
        kt = grid_t.round_index(omega * float(axis @ tree.tangent[t]))
        group.kt[idx] = kt
        cheb_t = _cheb_for(plan, t)
        ss = slice(i_lo[s], i_hi[s])
        block = kernel(cheb_t.positions, cheb_t.normals, pos[ss], nrm[ss])
        mod_t = np.exp(1j * grid_t.points[kt] * (cheb_t.node_s - tree.center_s[t]))
        group.blocks[idx] = block / mod_t[:, None]

    return plan


def build_plan(
    disc: Discretization, kernel, m_cheb: int = 8, m_freq: int = 2, m_leaf: int = 4
) -> PairPlan:
    """Tree, cover set, classification, and factors in one call."""
    tree = build_tree(disc, m_leaf)
    plan = classify_pairs(tree, build_cover_set(tree))
    return compute_factors(plan, disc, kernel, m_cheb=m_cheb, m_freq=m_freq)


def rank_estimate(seg_t: Segment, seg_s: Segment, kernel, eps: float = 1e-6) -> int:
    """Numerical eps-rank of the kernel block between two segments.

    Counts singular values above eps times the largest, from a dense SVD;
    intended for verification at desk scale (at most 512 points per side).
    """
    if seg_t.n_points > 512 or seg_s.n_points > 512:
        raise ValueError("segments too large for dense SVD rank estimation")
    block = kernel(seg_t.positions, seg_t.normals, seg_s.positions, seg_s.normals)
    singular = np.linalg.svd(block, compute_uv=False)
    return int(np.count_nonzero(singular > eps * singular[0]))


# -- persistence -----------------------------------------------------------


def shape_fingerprint(disc: Discretization) -> str:
    """Hash identifying the shape and discretization a plan belongs to."""
    text = f"{disc.geometry.shape!r}|q={disc.q}|p={disc.p}"
    return hashlib.sha256(text.encode()).hexdigest()


def save_plan(plan: PairPlan, path) -> None:
    """Dump a factored plan (versioned header plus all blocks) to ``path``."""
    if not plan.has_factors:
        raise ValueError("plan has no factors to save; run compute_factors first")
    disc = plan.disc
    payload = {
        "version": np.int64(PLAN_FORMAT_VERSION),
        "q": np.int64(disc.q),
        "p": np.int64(disc.p),
        "m_leaf": np.int64(plan.tree.m_leaf),
        "m_freq": np.int64(plan.m_freq),
        "m_cheb": np.int64(plan.m_cheb),
        "shape_hash": np.bytes_(shape_fingerprint(disc).encode()),
        "kernel_name": np.bytes_(plan.kernel_name.encode()),
        "cover": np.asarray(plan.cover, dtype=np.int64),
    }
    for name, group in [
        ("dense", plan.dense),
        ("mm", plan.mod_both),
        ("dm", plan.mod_source),
        ("md", plan.mod_target),
    ]:
        payload[f"{name}_t"] = group.t
        payload[f"{name}_s"] = group.s
        payload[f"{name}_kt"] = group.kt
        payload[f"{name}_ks"] = group.ks
        payload[f"{name}_blocks"] = group.blocks
    np.savez_compressed(path, **payload)


def load_plan(path, disc: Discretization) -> PairPlan:
    """Load a plan saved by :func:`save_plan`, validating it against ``disc``."""
    with np.load(path) as data:
        if int(data["version"]) != PLAN_FORMAT_VERSION:
            raise ValueError(f"unsupported plan format version {int(data['version'])}")
        if data["shape_hash"].item().decode() != shape_fingerprint(disc):
            raise ValueError("plan was built for a different shape or discretization")
        if int(data["q"]) != disc.q or int(data["p"]) != disc.p:
            raise ValueError("plan was built for a different discretization")
        tree = build_tree(disc, int(data["m_leaf"]))
        groups = {}
        for name in ("dense", "mm", "dm", "md"):
            groups[name] = PairGroup(
                t=data[f"{name}_t"],
                s=data[f"{name}_s"],
                kt=data[f"{name}_kt"],
                ks=data[f"{name}_ks"],
                blocks=data[f"{name}_blocks"],
            )
        plan = PairPlan(
            tree=tree,
            cover=[int(c) for c in data["cover"]],
            dense=groups["dense"],
            mod_both=groups["mm"],
            mod_source=groups["dm"],
            mod_target=groups["md"],
            m_cheb=int(data["m_cheb"]),
            m_freq=int(data["m_freq"]),
            kernel_name=data["kernel_name"].item().decode(),
        )
    for node in np.unique(
        np.concatenate([plan.mod_both.t, plan.mod_both.s, plan.mod_source.s, plan.mod_target.t])
    ):
        _cheb_for(plan, int(node))
    for level in np.unique(
        np.concatenate(
            [
                tree.level[plan.mod_both.t],
                tree.level[plan.mod_both.s],
                tree.level[plan.mod_source.s],
                tree.level[plan.mod_target.t],
            ]
        )
    ):
        _grid_for(plan, int(level))
    return plan
