"""Exponential radial grid, linear interpolation and quadrature.

Nodes follow r_i = rnt * (exp((i-1) h) - 1) for i = 1..n, so the first node
sits exactly at the origin and halving h while doubling the node count keeps
every old node in place.  All tabulations and integrals truncate at the
maximum tabulation point ``mtp``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, UnsupportedGridError

__all__ = ["RadialGrid", "build_grid", "integrate", "interp_linear"]


@dataclass(frozen=True)
class RadialGrid:
    """Immutable exponential radial grid (lengths in a.u.)."""

    rnt: float
    h: float
    n: int
    r: np.ndarray
    mtp: int

    def __post_init__(self):
        self.r.setflags(write=False)

    @property
    def weights(self) -> np.ndarray:
        """Trapezoidal quadrature weights on nodes 1..mtp."""
        return _trapezoid_weights(self.r[: self.mtp])

    def with_mtp(self, mtp: int) -> "RadialGrid":
        if not 1 <= mtp <= self.n:
            raise DomainError(f"mtp must be in [1, {self.n}], got {mtp}")
        return RadialGrid(self.rnt, self.h, self.n, self.r, mtp)

    def truncated_to(self, r_max: float) -> "RadialGrid":
        """Grid with mtp at the last node not beyond r_max."""
        if r_max < 0:
            raise DomainError(f"r_max must be non-negative, got {r_max}")
        mtp = int(np.searchsorted(self.r, r_max, side="right"))
        if mtp < 2:
            raise DomainError(f"r_max = {r_max} lies below the second grid node")
        return self.with_mtp(min(mtp, self.n))


def build_grid(rnt: float, h: float, n: int, hp: float = 0.0) -> RadialGrid:
    """Construct the exponential grid; only the pure-log variant (hp = 0)."""
    if hp != 0.0:
        raise UnsupportedGridError(
            f"mixed log-linear grids (hp = {hp}) are not supported; hp must be 0"
        )
    if not (np.isfinite(rnt) and rnt > 0):
        raise DomainError(f"rnt must be positive, got {rnt}")
    if not (np.isfinite(h) and h > 0):
        raise DomainError(f"h must be positive, got {h}")
    if n < 10:
        raise DomainError(f"need at least 10 nodes, got {n}")
    i = np.arange(n, dtype=float)
    r = rnt * np.expm1(i * h)
    r[0] = 0.0
    return RadialGrid(rnt=float(rnt), h=float(h), n=int(n), r=r, mtp=int(n))


def _trapezoid_weights(r: np.ndarray) -> np.ndarray:
    w = np.empty_like(r)
    w[0] = 0.5 * (r[1] - r[0])
    w[-1] = 0.5 * (r[-1] - r[-2])
    w[1:-1] = 0.5 * (r[2:] - r[:-2])
    return w


def integrate(values: np.ndarray, grid: RadialGrid) -> float:
    """Trapezoidal quadrature of a node-tabulated function over [0, r_mtp]."""
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.mtp,):
        raise DomainError(
            f"expected {grid.mtp} tabulated values (nodes 1..mtp), got shape {values.shape}"
        )
    return float(np.dot(grid.weights, values))


def _segment_weights(m: int) -> np.ndarray:
    """Composite Simpson weights for one smooth segment of m equidistant nodes.

    Odd cell counts use a 3/8 block at the end; one- and two-node segments
    fall back to the trapezoid.  Unit step assumed (index space).
    """
    if m <= 1:
        return np.zeros(max(m, 0))
    if m == 2:
        return np.array([0.5, 0.5])
    w = np.zeros(m)
    cells = m - 1
    if cells % 2 == 0:
        w[0] = w[-1] = 1.0 / 3.0
        w[1:-1:2] = 4.0 / 3.0
        w[2:-1:2] = 2.0 / 3.0
        return w
    if m == 4:
        return np.array([3.0, 9.0, 9.0, 3.0]) / 8.0
    head = _segment_weights(m - 3)
    w[: m - 3] = head
    w[m - 4] += 3.0 / 8.0
    w[m - 3] += 9.0 / 8.0
    w[m - 2] += 9.0 / 8.0
    w[m - 1] += 3.0 / 8.0
    return w


def _index_jacobian(grid: RadialGrid) -> np.ndarray:
    """dr/di on the exponential grid: h (r + rnt), exact for r = rnt(e^{ih}-1)."""
    return grid.h * (grid.r[: grid.mtp] + grid.rnt)


def integrate_smooth(values: np.ndarray, grid: RadialGrid) -> float:
    """Fourth-order quadrature for integrands smooth on the exponential grid.

    Transforms to the uniform index variable and applies composite Simpson;
    intended for verification integrals where the trapezoid's resolution
    error would mask the quantity under test.
    """
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.mtp,):
        raise DomainError(
            f"expected {grid.mtp} tabulated values (nodes 1..mtp), got shape {values.shape}"
        )
    w = _segment_weights(grid.mtp) * _index_jacobian(grid)
    return float(np.dot(w, values))


def split_weight_matrix(grid: RadialGrid) -> np.ndarray:
    """Per-column quadrature weights split at the diagonal node.

    Row j holds 4th-order index-space weights for an integrand smooth on
    [0, r_j] and on [r_j, r_mtp] separately (kernels with a diagonal kink).
    Includes the dr/di jacobian.
    """
    mtp = grid.mtp
    segs = [_segment_weights(m) for m in range(mtp + 1)]
    W = np.zeros((mtp, mtp))
    for j in range(mtp):
        W[j, : j + 1] += segs[j + 1]
        W[j, j:] += segs[mtp - j]
    return W * _index_jacobian(grid)[None, :]


def interp_linear(values: np.ndarray, grid: RadialGrid, r: float) -> float:
    """Piecewise-linear interpolation of a node tabulation; exact at nodes."""
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.mtp,):
        raise DomainError(
            f"expected {grid.mtp} tabulated values (nodes 1..mtp), got shape {values.shape}"
        )
    rs = grid.r[: grid.mtp]
    if not (0.0 <= r <= rs[-1]):
        raise DomainError(f"r = {r} outside tabulated range [0, {rs[-1]}]")
    return float(np.interp(r, rs, values))
