"""Exact minimum-cost bipartite matching via matrix reduction.

The solver follows the classical staging of the Hungarian method: subtract
each row's minimum, subtract each column's minimum, then repeatedly run the
optimality test — cover every zero entry with a minimum number of full
rows/columns — and, while the cover is smaller than the matrix dimension,
shift the zero pattern by the smallest uncovered entry. Once a complete
assignment exists on zero entries it is optimal for the original matrix.

The minimum line cover is computed exactly: a maximum matching on the zero
entries followed by the König alternating-reachability marking. Rectangular
inputs are padded to square with a sentinel cost and the padded pairs are
stripped from the result.

``brute_force_solve`` enumerates every injective assignment and is kept as
an independent verification oracle for the reduction-based solver.

All operations are pure; input matrices are never modified. Ties are broken
deterministically: among equal-cost optima, the pairing whose (row, column)
list sorted by row is lexicographically smallest wins.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InternalError, SizeError

# Zero test tolerance on reduced entries. Costs are pixel-scale distances,
# so anything at 1e-9 is float dust left over from the subtractions.
EPS = 1e-9

# Largest min(n_rows, n_cols) accepted by the exhaustive oracle.
BRUTE_FORCE_CAP = 8


@dataclass(frozen=True)
class CostMatrix:
    """Rectangular nonnegative cost matrix (rows: tracks, cols: detections)."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2:
            raise ValueError("cost matrix must be two-dimensional")
        if v.size:
            if not np.all(np.isfinite(v)):
                raise ValueError("cost matrix entries must be finite")
            if v.min() < -EPS:
                raise ValueError("cost matrix entries must be nonnegative")
        object.__setattr__(self, "values", v)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class Assignment:
    """A partial injective row-to-column matching and its cost.

    ``pairs`` together with ``unmatched_rows``/``unmatched_cols`` partitions
    both index sets exactly. ``total_cost`` is the sum of the original
    (unreduced) matrix entries over the selected pairs.
    """

    pairs: frozenset[tuple[int, int]]
    unmatched_rows: frozenset[int]
    unmatched_cols: frozenset[int]
    total_cost: float


def reduce_rows(cost: CostMatrix) -> CostMatrix:
    """Subtract each row's minimum, leaving at least one zero per row."""
    v = cost.values
    if v.size == 0:
        return CostMatrix(v.copy())
    return CostMatrix(v - v.min(axis=1, keepdims=True))


def reduce_cols(cost: CostMatrix) -> CostMatrix:
    """Subtract each column's minimum, leaving at least one zero per column."""
    v = cost.values
    if v.size == 0:
        return CostMatrix(v.copy())
    return CostMatrix(v - v.min(axis=0, keepdims=True))


def _zero_mask(values: np.ndarray) -> np.ndarray:
    return np.abs(values) <= EPS


def _max_zero_matching(zeros: np.ndarray) -> tuple[list[int], list[int]]:
    """Maximum bipartite matching on zero entries (Kuhn augmenting paths).

    Returns (col_of_row, row_of_col) with -1 for unmatched vertices. Rows
    and columns are scanned in ascending order, so the result is
    deterministic.
    """
    n_rows, n_cols = zeros.shape
    adjacency = [np.flatnonzero(zeros[r]).tolist() for r in range(n_rows)]
    col_of_row = [-1] * n_rows
    row_of_col = [-1] * n_cols

    def augment(row: int, visited: list[bool]) -> bool:
        for col in adjacency[row]:
            if visited[col]:
                continue
            visited[col] = True
            if row_of_col[col] < 0 or augment(row_of_col[col], visited):
                row_of_col[col] = row
                col_of_row[row] = col
                return True
        return False

    for row in range(n_rows):
        augment(row, [False] * n_cols)
    return col_of_row, row_of_col


def min_line_cover(reduced: CostMatrix) -> tuple[set[int], set[int]]:
    """Minimum set of full rows/columns covering every zero entry.

    Realized as a maximum matching on the zero bipartite graph followed by
    the König alternating-reachability marking: starting from unmatched
    rows, alternately reach columns over zero entries and rows over matching
    edges. Covered rows are the unmarked ones, covered columns the marked
    ones; the cover size equals the matching size and is minimum.
    """
    zeros = _zero_mask(reduced.values)
    n_rows, n_cols = zeros.shape
    col_of_row, row_of_col = _max_zero_matching(zeros)

    marked_rows = {r for r in range(n_rows) if col_of_row[r] < 0}
    marked_cols: set[int] = set()
    frontier = list(marked_rows)
    while frontier:
        row = frontier.pop()
        for col in np.flatnonzero(zeros[row]):
            col = int(col)
            if col in marked_cols:
                continue
            marked_cols.add(col)
            owner = row_of_col[col]
            if owner >= 0 and owner not in marked_rows:
                marked_rows.add(owner)
                frontier.append(owner)

    covered_rows = set(range(n_rows)) - marked_rows
    return covered_rows, marked_cols


def shift_zeros(reduced: CostMatrix, cover: tuple[set[int], set[int]]) -> CostMatrix:
    """Shift the zero pattern by the smallest uncovered entry.

    The minimum over uncovered entries is subtracted from every uncovered
    entry and added to every doubly-covered one; singly-covered entries are
    unchanged. Each application strictly decreases the entry sum, which is
    what guarantees termination of the solve loop.
    """
    covered_rows, covered_cols = cover
    v = reduced.values.copy()
    n_rows, n_cols = v.shape
    row_covered = np.zeros(n_rows, dtype=bool)
    row_covered[list(covered_rows)] = True
    col_covered = np.zeros(n_cols, dtype=bool)
    col_covered[list(covered_cols)] = True

    uncovered = ~row_covered[:, None] & ~col_covered[None, :]
    doubly = row_covered[:, None] & col_covered[None, :]
    if not uncovered.any():
        raise InternalError("shift_zeros called with a complete cover")
    shift = v[uncovered].min()
    if shift <= EPS:
        raise InternalError("uncovered minimum is zero; cover was not minimal")
    v[uncovered] -= shift
    v[doubly] += shift
    return CostMatrix(v)


def _perfect_matching_exists(allowed: list[list[int]], dim: int) -> bool:
    """True when a perfect matching exists with row r restricted to allowed[r]."""
    row_of_col = [-1] * dim

    def augment(row: int, visited: list[bool]) -> bool:
        for col in allowed[row]:
            if visited[col]:
                continue
            visited[col] = True
            if row_of_col[col] < 0 or augment(row_of_col[col], visited):
                row_of_col[col] = row
                return True
        return False

    for row in range(dim):
        if not augment(row, [False] * dim):
            return False
    return True


def _lex_min_zero_matching(zeros: np.ndarray, n_rows: int, n_cols: int) -> dict[int, int]:
    """Lexicographically smallest complete matching on a square zero pattern.

    Rows 0..n_rows-1 are the real rows; columns >= n_cols are padding and
    count as "unmatched", so a real column is always preferred over padding.
    Each real row is fixed, in ascending order, to the smallest column that
    still leaves the remaining rows completable; feasibility is checked by
    running a matching with the committed rows restricted to their choice.

    Returns the {real row: real column} pairs of the selected matching.
    """
    dim = zeros.shape[0]
    adjacency = [np.flatnonzero(zeros[r]).tolist() for r in range(dim)]
    allowed: list[list[int]] = [list(cols) for cols in adjacency]
    chosen: dict[int, int] = {}

    for row in range(n_rows):
        picked = None
        for col in adjacency[row]:
            if col >= n_cols:
                break  # adjacency is ascending; padding columns come last
            allowed[row] = [col]
            if _perfect_matching_exists(allowed, dim):
                picked = col
                break
        if picked is None:
            # Row stays unmatched: commit it to padding columns only.
            allowed[row] = [c for c in adjacency[row] if c >= n_cols]
            if not _perfect_matching_exists(allowed, dim):
                raise InternalError("zero matching lost completeness during extraction")
        else:
            chosen[row] = picked
    return chosen


def solve(cost: CostMatrix) -> Assignment:
    """Minimum-cost injective assignment of rows to columns.

    Rectangular matrices are padded to square with (max entry + 1) so the
    square reduction procedure applies unchanged; pairs touching padding are
    dropped afterwards, which preserves the optimum over injective maps.
    The reductions operate on a working copy; ``total_cost`` is accumulated
    from the original matrix.

    Raises DimensionError when either dimension is zero.
    """
    n_rows, n_cols = cost.n_rows, cost.n_cols
    if n_rows == 0 or n_cols == 0:
        raise DimensionError("cost matrix must have at least one row and one column")

    dim = max(n_rows, n_cols)
    if n_rows == n_cols:
        padded = cost.values
    else:
        pad_cost = float(cost.values.max()) + 1.0
        padded = np.full((dim, dim), pad_cost)
        padded[:n_rows, :n_cols] = cost.values

    work = reduce_cols(reduce_rows(CostMatrix(padded)))
    iterations = 0
    while True:
        covered_rows, covered_cols = min_line_cover(work)
        if len(covered_rows) + len(covered_cols) >= dim:
            break
        work = shift_zeros(work, (covered_rows, covered_cols))
        iterations += 1
        if iterations > dim * dim:
            raise InternalError("cover iteration bound exceeded")

    chosen = _lex_min_zero_matching(_zero_mask(work.values), n_rows, n_cols)
    pairs = frozenset(chosen.items())
    total = float(sum(cost.values[r, c] for r, c in chosen.items()))
    return Assignment(
        pairs=pairs,
        unmatched_rows=frozenset(range(n_rows)) - frozenset(chosen),
        unmatched_cols=frozenset(range(n_cols)) - frozenset(chosen.values()),
        total_cost=total,
    )


def brute_force_solve(cost: CostMatrix) -> Assignment:
    """Exhaustive minimum over all injective assignments (test oracle).

    Enumerates every injective row-to-column map (or column-to-row when
    there are more rows than columns) and keeps the cheapest, breaking ties
    by the same lexicographic rule as ``solve``. Refuses matrices whose
    smaller dimension exceeds BRUTE_FORCE_CAP.
    """
    n_rows, n_cols = cost.n_rows, cost.n_cols
    if n_rows == 0 or n_cols == 0:
        raise DimensionError("cost matrix must have at least one row and one column")
    if min(n_rows, n_cols) > BRUTE_FORCE_CAP:
        raise SizeError(f"brute force capped at min dimension {BRUTE_FORCE_CAP}")

    v = cost.values
    if n_rows <= n_cols:
        perms = np.array(list(itertools.permutations(range(n_cols), n_rows)))
        totals = v[np.arange(n_rows)[None, :], perms].sum(axis=1)
        # permutations() is lexicographic and rows are taken in order, so the
        # first minimum is already the tie-broken winner.
        best = perms[int(np.argmin(totals))]
        pairs = frozenset((r, int(c)) for r, c in enumerate(best))
        total = float(totals.min())
    else:
        candidates = [
            tuple(zip(rows, cols))
            for rows in itertools.combinations(range(n_rows), n_cols)
            for cols in itertools.permutations(range(n_cols))
        ]
        totals = np.array([sum(v[r, c] for r, c in cand) for cand in candidates])
        minimum = totals.min()
        # Enumeration order is not pair-lexicographic here, so compare the
        # tied candidates explicitly.
        best_pairs = min(candidates[i] for i in np.flatnonzero(totals == minimum))
        pairs = frozenset(best_pairs)
        total = float(minimum)

    matched_rows = {r for r, _ in pairs}
    matched_cols = {c for _, c in pairs}
    return Assignment(
        pairs=pairs,
        unmatched_rows=frozenset(range(n_rows)) - matched_rows,
        unmatched_cols=frozenset(range(n_cols)) - matched_cols,
        total_cost=total,
    )
