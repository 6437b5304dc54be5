"""Helmholtz layer-potential kernels and the Hankel functions behind them.

The four boundary-integral kernels, written with r = |x - y| and
rhat = (x - y)/r, are

    S :  (i/4) H1_0(w r)
    D :  (i w/4) H1_1(w r) (rhat . n_y)
    D':  -(i w/4) H1_1(w r) (rhat . n_x)
    N :  (i w/4) [ w H1_0(w r) (rhat . n_x)(rhat . n_y)
                   + H1_1(w r) (n_x . n_y - 2 (rhat . n_x)(rhat . n_y)) / r ]

with outward unit normals. N is the normal derivative of D' along n_y
(equivalently of D along n_x); the sign conventions here are fixed by
that identity.

The fast summation treats a kernel as a black box: anything callable as
``kernel(x_pos, x_nrm, y_pos, y_nrm) -> (len(x), len(y)) complex`` works,
as long as kernel(x, y) * exp(-i w |x-y|) is non-oscillatory. Entries
with coincident x and y must not fault (their value is unspecified;
callers zero them).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import hankel1

__all__ = [
    "OperatorKind",
    "KernelPoint",
    "hankel1_0",
    "hankel1_1",
    "kernel_evaluate",
    "HelmholtzKernel",
]


class OperatorKind(Enum):
    SINGLE_LAYER = "S"
    DOUBLE_LAYER = "D"
    NORMAL_DERIV_SINGLE = "Dp"
    NORMAL_DERIV_DOUBLE = "N"


@dataclass(frozen=True)
class KernelPoint:
    """A boundary point with its outward unit normal."""

    position: np.ndarray
    normal: np.ndarray

    def __post_init__(self):
        if abs(np.linalg.norm(self.normal) - 1.0) > 1e-12:
            raise ValueError("normal must be a unit vector")


def hankel1_0(z):
    """Hankel function of the first kind, order zero: J0(z) + i Y0(z).

    Accepts positive scalars or arrays; relative accuracy is well below
    1e-10 over z in [1e-6, 1e7].
    """
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0.0):
        raise ValueError("hankel1_0 requires z > 0")
    return hankel1(0, z)


def hankel1_1(z):
    """Hankel function of the first kind, order one (d/dz H1_0 = -H1_1)."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0.0):
        raise ValueError("hankel1_1 requires z > 0")
    return hankel1(1, z)


class HelmholtzKernel:
    """One of the four layer-potential kernels at a fixed frequency.

    Instances are callable on point blocks and return the full cross
    matrix; this is the interface the setup/evaluation stages consume.
    """

    def __init__(self, kind: OperatorKind, omega: float):
        self.kind = OperatorKind(kind)
        self.omega = float(omega)
        if self.omega <= 0:
            raise ValueError("omega must be positive")

    def __call__(self, x_pos, x_nrm, y_pos, y_nrm):
        """Kernel matrix of shape (len(x), len(y)); coincident entries are garbage."""
        w = self.omega
        diff = x_pos[:, None, :] - y_pos[None, :, :]
        r = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        safe = np.where(r == 0.0, 1.0, r)
        z = w * safe
        if self.kind is OperatorKind.SINGLE_LAYER:
            return 0.25j * hankel1(0, z)
        rhat = diff / safe[..., None]
        if self.kind is OperatorKind.DOUBLE_LAYER:
            rn_y = np.einsum("ijk,jk->ij", rhat, y_nrm)
            return 0.25j * w * hankel1(1, z) * rn_y
        if self.kind is OperatorKind.NORMAL_DERIV_SINGLE:
            rn_x = np.einsum("ijk,ik->ij", rhat, x_nrm)
            return -0.25j * w * hankel1(1, z) * rn_x
        rn_x = np.einsum("ijk,ik->ij", rhat, x_nrm)
        rn_y = np.einsum("ijk,jk->ij", rhat, y_nrm)
        nn = np.einsum("ik,jk->ij", x_nrm, y_nrm)
        return (
            0.25j
            * w
            * (w * hankel1(0, z) * rn_x * rn_y + hankel1(1, z) * (nn - 2.0 * rn_x * rn_y) / safe)
        )


def kernel_evaluate(kind: OperatorKind, x: KernelPoint, y: KernelPoint, omega: float) -> complex:
    """Evaluate one kernel entry between two boundary points.

    Raises ValueError when the points coincide (the discrete sums exclude
    the diagonal).
    """
    xp = np.asarray(x.position, dtype=float)
    yp = np.asarray(y.position, dtype=float)
    if np.array_equal(xp, yp):
        raise ValueError("kernel is singular at coincident points")
    kernel = HelmholtzKernel(kind, omega)
    block = kernel(
        xp[None, :],
        np.asarray(x.normal, dtype=float)[None, :],
        yp[None, :],
        np.asarray(y.normal, dtype=float)[None, :],
    )
    return complex(block[0, 0])
