"""Dyadic segment tree over the boundary and the cover set.

The boundary [0, L) is bisected recursively into a complete binary tree
whose leaves have length m_leaf * lambda (m_leaf * p points). A segment
of length 2**level * lambda is *almost planar* when

    2**level * lambda <= 2**q * lambda / sqrt(kappa_max),

i.e. it deviates from its tangent line by at most O(lambda); straight
pieces (kappa_max = 0) are almost planar by convention. The cover set is
the disjoint union of the shallowest almost-planar segments plus any
non-planar leaves.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .geometry import Discretization

__all__ = ["Segment", "SegmentTree", "build_tree", "build_cover_set"]


@dataclass(frozen=True)
class Segment:
    """View of one tree node: a dyadic arclength interval and its points."""

    index: int
    level: int  # segment length is 2**level wavelengths
    s_lo: float
    s_hi: float
    i_lo: int  # first point index
    i_hi: int  # one past the last point index
    center: np.ndarray  # boundary position at the midpoint arclength
    center_s: float
    tangent: np.ndarray  # unit tangent at the center
    max_kappa: float
    almost_planar: bool
    is_leaf: bool
    positions: np.ndarray  # (n_points, 2) view into the discretization
    normals: np.ndarray
    end_lo: np.ndarray  # boundary position at s_lo
    end_hi: np.ndarray  # boundary position at s_hi

    @property
    def n_points(self) -> int:
        return self.i_hi - self.i_lo

    @property
    def length(self) -> float:
        return self.s_hi - self.s_lo


class SegmentTree:
    """Complete binary tree of boundary segments, stored arrays-of-fields.

    Nodes are indexed in breadth-first order; node 0 is the whole
    boundary. ``child0``/``child1`` give the two halves of a non-leaf
    node. Immutable after construction.
    """

    def __init__(self, disc: Discretization, m_leaf: int = 4):
        if m_leaf not in (2, 4):
            raise ValueError("m_leaf must be 2 or 4")
        if 4**disc.q < m_leaf:
            raise ValueError("boundary shorter than one leaf; increase q")
        self.disc = disc
        self.m_leaf = m_leaf
        self.leaf_level = int(np.log2(m_leaf))
        q = disc.q
        L = disc.geometry.L
        max_depth = 2 * q - self.leaf_level

        depth = np.concatenate([np.full(2**d, d) for d in range(max_depth + 1)])
        offsets = np.cumsum([0] + [2**d for d in range(max_depth + 1)])
        pos_in_level = np.concatenate([np.arange(2**d) for d in range(max_depth + 1)])
        self.n_nodes = offsets[-1]
        self.level = 2 * q - depth
        self.s_lo = pos_in_level * (L / 2.0**depth)
        self.s_hi = (pos_in_level + 1) * (L / 2.0**depth)

        self.child0 = np.full(self.n_nodes, -1, dtype=np.int64)
        self.child1 = np.full(self.n_nodes, -1, dtype=np.int64)
        inner = depth < max_depth
        self.child0[inner] = offsets[depth[inner] + 1] + 2 * pos_in_level[inner]
        self.child1[inner] = self.child0[inner] + 1

        # staggered points make every dyadic interval boundary fall between points
        self.i_lo = np.round(self.s_lo / disc.spacing).astype(np.int64)
        self.i_hi = np.round(self.s_hi / disc.spacing).astype(np.int64)

        self.center_s = 0.5 * (self.s_lo + self.s_hi)
        self.center, self.tangent, _, _ = disc.geometry.frame(self.center_s)

        # endpoint positions and curvatures, deduplicated: all segment
        # endpoints are leaf boundaries j * m_leaf * lambda
        n_leaves = 4**q // m_leaf
        bnd_s = np.arange(n_leaves + 1) * (m_leaf * disc.lam)
        bnd_pos, _, _, bnd_kap = disc.geometry.frame(bnd_s)
        lo_idx = np.round(self.s_lo / (m_leaf * disc.lam)).astype(np.int64)
        hi_idx = np.round(self.s_hi / (m_leaf * disc.lam)).astype(np.int64)
        self.end_lo = bnd_pos[lo_idx]
        self.end_hi = bnd_pos[hi_idx]

        # max |kappa| per node: leaf = its points + endpoints, parents by merge
        kap_abs = np.abs(disc.curvatures)
        bnd_abs = np.abs(bnd_kap)
        kmax = np.empty(self.n_nodes)
        leaf_first = offsets[max_depth]
        for j in range(n_leaves):
            k = leaf_first + j
            kmax[k] = max(
                kap_abs[self.i_lo[k] : self.i_hi[k]].max(), bnd_abs[j], bnd_abs[j + 1]
            )
        for k in range(leaf_first - 1, -1, -1):
            kmax[k] = max(kmax[self.child0[k]], kmax[self.child1[k]])
        self.max_kappa = kmax

        seg_len = self.s_hi - self.s_lo
        with np.errstate(divide="ignore"):
            planar_bound = np.where(kmax > 0.0, 2**q * disc.lam / np.sqrt(kmax), np.inf)
        # tolerance keeps exact-threshold cases (e.g. circles) almost planar
        self.almost_planar = seg_len <= planar_bound * (1.0 + 1e-9)
        self.is_leaf = self.level == self.leaf_level

    def segment(self, index: int) -> Segment:
        """Materialize a Segment view of node ``index``."""
        d = self.disc
        return Segment(
            index=int(index),
            level=int(self.level[index]),
            s_lo=float(self.s_lo[index]),
            s_hi=float(self.s_hi[index]),
            i_lo=int(self.i_lo[index]),
            i_hi=int(self.i_hi[index]),
            center=self.center[index],
            center_s=float(self.center_s[index]),
            tangent=self.tangent[index],
            max_kappa=float(self.max_kappa[index]),
            almost_planar=bool(self.almost_planar[index]),
            is_leaf=bool(self.is_leaf[index]),
            positions=d.positions[self.i_lo[index] : self.i_hi[index]],
            normals=d.normals[self.i_lo[index] : self.i_hi[index]],
            end_lo=self.end_lo[index],
            end_hi=self.end_hi[index],
        )

    def n_points(self, index: int) -> int:
        return int(self.i_hi[index] - self.i_lo[index])


def build_tree(disc: Discretization, m_leaf: int = 4) -> SegmentTree:
    """Build the complete dyadic segment tree with leaves of m_leaf wavelengths."""
    return SegmentTree(disc, m_leaf)


def build_cover_set(tree: SegmentTree) -> list[int]:
    """Disjoint cover of the boundary by shallowest almost-planar segments.

    Breadth-first walk: the first almost-planar segment on each branch is
    taken whole (its subtree is skipped); non-planar leaves are taken
    individually.
    """
    cover: list[int] = []
    queue = deque([0])
    while queue:
        k = queue.popleft()
        if tree.almost_planar[k] or tree.is_leaf[k]:
            cover.append(k)
        else:
            queue.append(int(tree.child0[k]))
            queue.append(int(tree.child1[k]))
    return cover
