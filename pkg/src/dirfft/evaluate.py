"""Application of a compressed pair plan to a density vector.

The sum u(x) = sum_{y != x} K(x, y) f(y) is evaluated in four steps:

1. allocate u and the per-segment spectral accumulators;
2. for every segment feeding a modulated source side, build its density
   spectrum fhat(j, k) = sum_y exp(i k (s_y - s_c)) I(y, j) f(y) with one
   local FFT per Chebyshev column;
3. sweep the pairs: dense blocks multiply f directly into u; both-sided
   pairs route spectra into the target accumulator column picked by the
   pair's target frequency; one-sided pairs mix the two forms;
4. for every accumulating target segment, transform its spectrum back to
   the points (one local FFT per Chebyshev column) and add into u.

The transforms are exact reorderings of the defining sums: the dyadic
frequency grid times the point spacing is 2*pi / n_fft, so each
modulation inner product is a bin of a length-n_fft FFT up to fixed
linear phases in front and behind.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grids import FrequencyGrid
from .plan import PairPlan
from .tree import Segment

__all__ = ["SpectralBuffers", "forward_transform", "inverse_transform", "apply_pairs", "evaluate"]


@dataclass
class SpectralBuffers:
    """Per-segment spectra: density side (sources) and potential side (targets)."""

    source: dict[int, np.ndarray] = field(default_factory=dict)
    target: dict[int, np.ndarray] = field(default_factory=dict)


def _angles(numerators: np.ndarray, denominator: int) -> np.ndarray:
    """exp(-i pi * numerators / denominator) with exact modular reduction."""
    reduced = np.asarray(numerators, dtype=np.int64) % (2 * denominator)
    return np.exp(-1j * np.pi * reduced / denominator)


def forward_transform(
    segment: Segment, f: np.ndarray, interp: np.ndarray, grid: FrequencyGrid
) -> np.ndarray:
    """Density spectrum fhat(j, k) of one segment, all frequencies at once.

    Equals sum_{y in segment} exp(i k (s_y - s_center)) * interp[y, j] * f[y]
    for every Chebyshev column j and gridpoint k, computed with one
    length-(n_points * m_freq) FFT per column. The linear phases in front
    and behind the FFT are exact rational multiples of 2*pi (see _angles),
    so the result matches the direct sum to round-off.
    """
    m = segment.n_points
    n_fft = m * grid.m_freq
    ppw = n_fft // (2**segment.level * grid.m_freq)  # points per wavelength
    # omega * spacing = 2*pi / ppw
    pre = _angles(2 * np.arange(m), ppw)
    weighted = interp.T * (pre * f[segment.i_lo : segment.i_hi])[None, :]
    spectrum = np.fft.ifft(weighted, n=n_fft, axis=1) * n_fft
    # k_j * (M-1)/2 * spacing = pi * (j - N/ppw) * (M-1) / N
    post = _angles((np.arange(grid.size) - n_fft // ppw) * (m - 1), n_fft)
    return spectrum[:, : grid.size] * post[None, :]


def inverse_transform(
    segment: Segment, uhat: np.ndarray, interp: np.ndarray, grid: FrequencyGrid
) -> np.ndarray:
    """Pointwise contribution of one target segment's accumulated spectrum.

    Equals sum_j interp[:, j] * sum_k exp(i k (s - s_center)) uhat[j, k],
    with one length-(n_points * m_freq) FFT per Chebyshev column and the
    same exact rational phase bookkeeping as the forward transform.
    """
    m = segment.n_points
    n_fft = m * grid.m_freq
    ppw = n_fft // (2**segment.level * grid.m_freq)
    # (k_j + omega) * (M-1)/2 * spacing = pi * j * (M-1) / N
    pre = _angles(np.arange(grid.size) * (m - 1), n_fft)
    spectrum = np.fft.ifft(uhat * pre[None, :], n=n_fft, axis=1) * n_fft
    # omega * (m - (M-1)/2) * spacing = pi * (2m - (M-1)) / ppw
    carrier = _angles(2 * np.arange(m) - (m - 1), ppw)
    values = spectrum[:, :m] * carrier[None, :]
    return np.einsum("mj,jm->m", interp, values)


def apply_pairs(plan: PairPlan, f: np.ndarray, buffers: SpectralBuffers) -> np.ndarray:
    """Sweep all pairs; returns the dense/one-sided part of u and fills
    the target spectra in ``buffers``."""
    tree = plan.tree
    i_lo, i_hi = tree.i_lo, tree.i_hi
    u = np.zeros(plan.disc.n, dtype=np.complex128)

    for node in plan.target_nodes():
        grid = plan.grids[int(tree.level[node])]
        buffers.target[int(node)] = np.zeros((plan.m_cheb, grid.size), dtype=np.complex128)

    dense = plan.dense
    if len(dense):
        width = dense.blocks.shape[2]
        gathered = f[i_lo[dense.s][:, None] + np.arange(width)[None, :]]
        contrib = np.einsum("pij,pj->pi", dense.blocks, gathered)
        np.add.at(u, i_lo[dense.t][:, None] + np.arange(width)[None, :], contrib)

    group = plan.mod_both
    for idx in range(len(group)):
        t, s = int(group.t[idx]), int(group.s[idx])
        spec = buffers.source.get(s)
        if spec is None:
            raise RuntimeError("missing source spectrum; run forward transforms first")
        buffers.target[t][:, group.kt[idx]] += group.blocks[idx] @ spec[:, group.ks[idx]]

    group = plan.mod_source
    for idx in range(len(group)):
        t, s = int(group.t[idx]), int(group.s[idx])
        u[i_lo[t] : i_hi[t]] += group.blocks[idx] @ buffers.source[s][:, group.ks[idx]]

    group = plan.mod_target
    for idx in range(len(group)):
        t, s = int(group.t[idx]), int(group.s[idx])
        buffers.target[t][:, group.kt[idx]] += group.blocks[idx] @ f[i_lo[s] : i_hi[s]]

    return u


def evaluate(plan: PairPlan, f: np.ndarray) -> np.ndarray:
    """Apply the compressed operator: u(x) ~= sum_{y != x} K(x, y) f(y).

    Linear in f; agrees with the dense sum up to the compression accuracy
    set by the plan's Chebyshev order.
    """
    if not plan.has_factors:
        raise ValueError("plan has no factors; run compute_factors first")
    f = np.asarray(f)
    if f.shape != (plan.disc.n,):
        raise ValueError(f"density must have shape ({plan.disc.n},), got {f.shape}")
    f = f.astype(np.complex128, copy=False)

    tree = plan.tree
    buffers = SpectralBuffers()
    for node in plan.source_nodes():
        node = int(node)
        segment = tree.segment(node)
        grid = plan.grids[segment.level]
        buffers.source[node] = forward_transform(segment, f, plan.cheb[node].matrix, grid)

    u = apply_pairs(plan, f, buffers)

    for node, uhat in buffers.target.items():
        segment = tree.segment(node)
        grid = plan.grids[segment.level]
        u[segment.i_lo : segment.i_hi] += inverse_transform(
            segment, uhat, plan.cheb[node].matrix, grid
        )
    return u
