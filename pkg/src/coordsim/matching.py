"""Exact minimum-cost bipartite matching (Hungarian method, shortest-augmenting-path form).

The solver returns a matching of maximum cardinality among those avoiding
INFEASIBLE entries, of minimum total cost among those, with ties broken to the
lexicographically smallest pair set. Infeasible entries are screened out and
replaced internally by a dominating finite sentinel only for the square solve,
never used in reported costs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import INFEASIBLE, CostMatrix


@dataclass(frozen=True)
class MatchResult:
    """pairs is sorted (row, col); total_cost is the sum of the paired entries."""

    pairs: tuple[tuple[int, int], ...]
    total_cost: float


@dataclass(frozen=True)
class PaddingMap:
    """Remembers the real extent of a matrix padded to square."""

    n_rows: int
    n_cols: int

    def is_padding(self, row: int, col: int) -> bool:
        return row >= self.n_rows or col >= self.n_cols

    def strip(self, pairs: list[tuple[int, int]]) -> list[tuple[int, int]]:
        return [(r, c) for r, c in pairs if not self.is_padding(r, c)]


def rectangular_pad(matrix: CostMatrix) -> tuple[CostMatrix, PaddingMap]:
    """Pad to square with INFEASIBLE sentinel rows/cols; square input passes through."""
    r, c = matrix.n_rows, matrix.n_cols
    n = max(r, c)
    pad = PaddingMap(n_rows=r, n_cols=c)
    if r == c:
        return matrix, pad
    rows = [row + (INFEASIBLE,) * (n - c) for row in matrix.entries]
    rows += [(INFEASIBLE,) * n] * (n - r)
    return CostMatrix(entries=tuple(rows)), pad


def hungarian_min_cost(matrix: CostMatrix) -> MatchResult:
    """Solve the assignment problem on a possibly rectangular, possibly infeasible matrix.

    If no feasible pair exists at all the result is the empty matching with
    cost 0 (meaning: no assignable work).
    """
    if matrix.n_rows == 0 or matrix.n_cols == 0:
        return MatchResult(pairs=(), total_cost=0.0)

    square, pad = rectangular_pad(matrix)
    grid = np.asarray(square.entries, dtype=np.float64)
    finite = np.isfinite(grid)
    if np.any(grid[finite] < 0):
        raise ValueError("cost entries must be nonnegative")
    if not finite.any():
        return MatchResult(pairs=(), total_cost=0.0)

    n = grid.shape[0]
    max_finite = float(grid[finite].max())
    big = (max_finite + 1.0) * n
    work = np.where(finite, grid, big)

    col4row, u, v = _solve_square(work)

    reduced = work - u[:, None] - v[None, :]
    tol = 1e-9 * max(1.0, big)
    tight = reduced <= tol

    if _has_alternating_cycle(tight, col4row):
        pairs = _lex_smallest_pairs(tight, finite, pad)
    else:
        pairs = sorted((i, int(col4row[i])) for i in range(n) if finite[i, col4row[i]])
        pairs = pad.strip(pairs)

    total = float(sum(grid[i, j] for i, j in pairs))
    return MatchResult(pairs=tuple(pairs), total_cost=total)


def _solve_square(cost: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Min-cost perfect matching on a finite square matrix.

    Returns (col4row, u, v) where col4row[i] is the column matched to row i and
    (u, v) are optimal dual potentials: cost - u - v >= 0 everywhere, == 0 on
    matched cells. Shortest-augmenting-path with incremental potentials; only
    additions and subtractions, so integer-valued inputs stay exact.
    """
    n = cost.shape[0]
    u = np.zeros(n)
    v = np.zeros(n)
    col4row = np.full(n, -1, dtype=np.int64)
    row4col = np.full(n, -1, dtype=np.int64)
    inf = np.inf

    for cur_row in range(n):
        spc = np.full(n, inf)  # shortest path cost to each column
        path = np.full(n, -1, dtype=np.int64)
        scanned_cols = np.zeros(n, dtype=bool)
        scanned_rows: list[int] = []
        i = cur_row
        min_val = 0.0
        sink = -1
        while sink == -1:
            scanned_rows.append(i)
            r = min_val + cost[i] - u[i] - v
            improve = (~scanned_cols) & (r < spc)
            spc[improve] = r[improve]
            path[improve] = i
            dist = np.where(scanned_cols, inf, spc)
            j = int(np.argmin(dist))
            min_val = float(dist[j])
            scanned_cols[j] = True
            if row4col[j] == -1:
                sink = j
            else:
                i = int(row4col[j])

        u[cur_row] += min_val
        for i2 in scanned_rows:
            if i2 != cur_row:
                u[i2] += min_val - spc[col4row[i2]]
        sc = np.flatnonzero(scanned_cols)
        v[sc] -= min_val - spc[sc]

        j = sink
        while True:
            i = int(path[j])
            row4col[j] = i
            col4row[i], j = j, col4row[i]
            if i == cur_row:
                break

    return col4row, u, v


def _has_alternating_cycle(tight: np.ndarray, col4row: np.ndarray) -> bool:
    """True iff the tight-edge graph admits another perfect matching.

    Orient unmatched tight edges row -> col and matched edges col -> row; an
    alternating cycle exists iff this digraph has a directed cycle.
    """
    n = tight.shape[0]
    # nodes: rows 0..n-1, cols n..2n-1
    adj: list[list[int]] = [[] for _ in range(2 * n)]
    rows, cols = np.nonzero(tight)
    for i, j in zip(rows.tolist(), cols.tolist()):
        if col4row[i] == j:
            adj[n + j].append(i)
        else:
            adj[i].append(n + j)

    color = [0] * (2 * n)  # 0 unseen, 1 on stack, 2 done
    for start in range(2 * n):
        if color[start] != 0:
            continue
        stack: list[tuple[int, int]] = [(start, 0)]
        color[start] = 1
        while stack:
            node, idx = stack[-1]
            if idx < len(adj[node]):
                stack[-1] = (node, idx + 1)
                nxt = adj[node][idx]
                if color[nxt] == 0:
                    color[nxt] = 1
                    stack.append((nxt, 0))
                elif color[nxt] == 1:
                    return True
            else:
                color[node] = 2
                stack.pop()
    return False


def _lex_smallest_pairs(tight: np.ndarray, finite: np.ndarray, pad: PaddingMap) -> list[tuple[int, int]]:
    """Lexicographically smallest real pair set among all optimal matchings.

    Every perfect matching of the tight graph is optimal, so greedily fix real
    pairs in (row, col) order whenever a perfect completion still exists; a row
    with no workable real column is forced onto sentinel cells.
    """
    n = tight.shape[0]
    allowed = tight.copy()
    fixed: list[tuple[int, int]] = []
    fixed_rows: set[int] = set()
    fixed_cols: set[int] = set()

    for r in range(pad.n_rows):
        chosen = -1
        for c in range(pad.n_cols):
            if c in fixed_cols or not allowed[r, c] or not finite[r, c]:
                continue
            if _perfect_matching_exists(allowed, fixed_rows | {r}, fixed_cols | {c}):
                chosen = c
                break
        if chosen >= 0:
            fixed.append((r, chosen))
            fixed_rows.add(r)
            fixed_cols.add(chosen)
        else:
            # every optimal completion parks this row on a sentinel cell
            allowed[r] &= ~finite[r]

    return fixed


def _perfect_matching_exists(allowed: np.ndarray, skip_rows: set[int], skip_cols: set[int]) -> bool:
    """Can every non-skipped row be matched into non-skipped columns? (Kuhn's algorithm)"""
    n = allowed.shape[0]
    match_col = [-1] * n  # col -> row

    def try_row(row: int, seen: list[bool]) -> bool:
        for col in range(n):
            if col in skip_cols or seen[col] or not allowed[row, col]:
                continue
            seen[col] = True
            if match_col[col] == -1 or try_row(match_col[col], seen):
                match_col[col] = row
                return True
        return False

    for row in range(n):
        if row in skip_rows:
            continue
        if not try_row(row, [False] * n):
            return False
    return True
