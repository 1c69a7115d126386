"""Rank of dense matrices over GF(p).

:func:`rank` streams row batches against a reduced echelon basis, which is
cheap when the rank is far below the order.  :func:`rank_blocked` is a
right-looking column-panel elimination.  Both do their bulk updates with
float64 matrix products; these stay exact because every intermediate is
bounded by ``v * (p-1)^2 + p``, far under 2^53.  :func:`rank_reference` is
the textbook row reduction kept as an oracle.

:func:`rank` is a right-looking blocked elimination: each column panel is
reduced with plain row operations, and the trailing block is updated with
one float64 matrix product, exact because every entry stays below
``panel * (p-1)^2 + p``, far under 2^53.  :func:`rank_reference` is the
textbook row reduction kept as an oracle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
import numpy as np

from .graphio import read_edge_list  # noqa: F401  (re-exported)
from .pds import Graph


@dataclass(eq=False)
class GFpMatrix:
    p: int
    data: np.ndarray  # uint8 entries in [0, p)

    def __post_init__(self):
        self.data = np.asarray(self.data) % self.p
        self.data = self.data.astype(np.uint8)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def transpose(self) -> "GFpMatrix":
        return GFpMatrix(self.p, self.data.T.copy())


def from_graph(g: Graph, p: int) -> GFpMatrix:
    return GFpMatrix(p, g.adjacency.astype(np.uint8))


def _reduce_panel(panel: np.ndarray, p: int):
    """Eliminate inside one column panel.

    Returns pivot row positions (in order) and the multiplier matrix ``C``
    with ``row_i(final) = row_i - sum_j C[i, j] * V_j``, where ``V_j`` is
    pivot row ``j`` at the moment it was chosen.
    """
    m, width = panel.shape
    P = panel.astype(np.int64)
    C = np.zeros((m, width), dtype=np.int64)
    free = np.ones(m, dtype=bool)
    pivots = []
    for c in range(width):
        cand = np.flatnonzero(free & (P[:, c] != 0))
        if len(cand) == 0:
            continue
        r = int(cand[0])
        j = len(pivots)
        pivots.append(r)
        free[r] = False
        inv = pow(int(P[r, c]), -1, p)
        rows = np.flatnonzero(free & (P[:, c] != 0))
        if len(rows):
            f = (P[rows, c] * inv) % p
            C[rows, j] = f
            P[rows, c:] = (P[rows, c:] - f[:, None] * P[r, c:]) % p
    return pivots, C[:, : len(pivots)]


def rank_blocked(m: GFpMatrix, panel: int = 128) -> int:
    """Column-panel blocked elimination; cost ~ v^3 regardless of rank."""
    p = m.p
    if panel * (p - 1) ** 2 + p >= 2**52:
        raise ValueError("panel too wide for exact float64 updates")
    active = m.data.astype(np.float64)
    total = 0
    while active.shape[1] and active.shape[0]:
        width = min(panel, active.shape[1])
        pivots, C = _reduce_panel(active[:, :width], p)
        s = len(pivots)
        total += s
        trailing = active[:, width:]
        if s == 0:
            active = trailing[trailing.any(axis=1)]
            continue
        # V_j = R[pivot_j] - sum_{i<j} C[pivot_j, i] V_i  (unit lower triangular)
        V = trailing[pivots].copy()
        Cp = C[pivots].astype(np.float64)
        for j in range(1, s):
            V[j] = np.mod(V[j] - Cp[j, :j] @ V[:j], p)
        keep = np.ones(active.shape[0], dtype=bool)
        keep[pivots] = False
        rest = trailing[keep]
        if rest.size:
            rest = np.mod(rest - C[keep].astype(np.float64) @ V, p)
            rest = rest[rest.any(axis=1)]
        active = rest
    return total


def _gauss_jordan_rows(R: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduce a small batch of rows to reduced echelon form in place."""
    pivcols = []
    done = 0
    for i in range(R.shape[0]):
        nz = np.flatnonzero(R[i])
        if len(nz) == 0:
            continue
        c = int(nz[0])
        R[i] = np.mod(R[i] * pow(int(R[i, c]), -1, p), p)
        others = np.flatnonzero(R[:, c])
        others = others[others != i]
        if len(others):
            R[others] = np.mod(R[others] - R[others, c][:, None] * R[i], p)
        R[[done, i]] = R[[i, done]]
        pivcols.append(c)
        done += 1
    return R[:done], pivcols


def rank(m: GFpMatrix, batch: int = 32, switch: float = 0.25) -> int:
    """Number of pivots of ``m`` over GF(p).

    Rows are streamed in batches against a reduced echelon basis of the
    pivots found so far, so the cost is about ``rows * cols * rank``.  Once
    the basis holds more than ``switch * cols`` pivots the remaining rows are
    reduced against it in one product and finished by :func:`rank_blocked`;
    they vanish on the pivot columns, so the two ranks simply add.
    """
    p = m.p
    rows, cols = m.shape
    if min(rows, cols) * (p - 1) ** 2 + p >= 2**52:
        raise ValueError("matrix too large for exact float64 updates")
    data = m.data
    basis = np.zeros((0, cols), dtype=np.float64)
    pivcols: list[int] = []
    for start in range(0, rows, batch):
        R = data[start:start + batch].astype(np.float64)
        if pivcols:
            R = np.mod(R - R[:, pivcols] @ basis, p)
        new, newcols = _gauss_jordan_rows(R, p)
        if not newcols:
            continue
        if pivcols:
            basis = np.mod(basis - basis[:, newcols] @ new, p)
        basis = np.vstack([basis, new])
        pivcols.extend(newcols)
        if len(pivcols) == cols:
            break
        rest = data[start + batch:]
        if len(pivcols) > switch * cols and len(rest):
            R = rest.astype(np.float64)
            R = np.mod(R - R[:, pivcols] @ basis, p)
            free = np.setdiff1d(np.arange(cols), pivcols)
            return len(pivcols) + rank_blocked(GFpMatrix(p, R[:, free]))
    return len(pivcols)


def rank_reference(m: GFpMatrix) -> int:
    """Plain row reduction, first non-zero pivot per column."""
    p = m.p
    A = m.data.astype(np.int64)
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        below = np.flatnonzero(A[r + 1:, c]) + r + 1
        if len(below):
            A[below] = (A[below] - A[below, c][:, None] * A[r]) % p
        r += 1
    return r


def rank_report(g: Graph, p: int) -> dict:
    return {"p": p, "v": g.v, "rank": rank(from_graph(g, p))}


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True)
