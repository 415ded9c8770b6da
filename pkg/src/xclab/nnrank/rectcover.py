"""Exact minimum rectangle covering of a nonnegative matrix's support.

A combinatorial rectangle is a row set times a column set whose cells are all
positive.  Every nonnegative rank-one factor is supported on such a rectangle,
so the minimum number of rectangles covering all positive cells is a certified
lower bound on the nonnegative rank.

The solver enumerates all maximal rectangles (closed row-set/column-set pairs,
Close-by-One), then runs exact branch-and-bound set cover over them:
branching on the uncovered cell contained in the fewest rectangles, pruning
with a greedy packing of pairwise rectangle-disjoint cells.  Worst case is
exponential; a node budget turns long runs into an explicit BudgetExceeded
instead of a silent wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import BudgetExceeded
from ..ratmat import RatMatrix


class _Budget:
    __slots__ = ("left",)

    def __init__(self, limit: int):
        self.left = limit

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise BudgetExceeded("rectangle covering budget exceeded")


Rectangle = tuple[tuple[int, ...], tuple[int, ...]]  # (rows, cols), sorted


def _row_masks(mat: RatMatrix) -> list[int]:
    masks = []
    for i in range(mat.rows):
        m = 0
        for j in range(mat.cols):
            if mat[i, j] > 0:
                m |= 1 << j
        masks.append(m)
    return masks


def _bits(x: int):
    while x:
        b = x & -x
        yield b.bit_length() - 1
        x ^= b


def enumerate_maximal_rectangles(mat: RatMatrix, budget: _Budget) -> list[tuple[int, int]]:
    """All maximal all-positive rectangles as (row_mask, col_mask) pairs.

    Close-by-One over rows: extents only grow, intents only shrink, and the
    canonicity test (no earlier row sneaks into the closure) guarantees each
    closed pair is produced exactly once.  Empty intents are pruned; every
    rectangle with a nonempty column set is reachable without them.
    """
    m = mat.rows
    row_masks = _row_masks(mat)
    full_cols = (1 << mat.cols) - 1 if mat.cols else 0

    def extent_of(intent: int) -> int:
        e = 0
        for i in range(m):
            if row_masks[i] & intent == intent:
                e |= 1 << i
        return e

    out: list[tuple[int, int]] = []

    def close_by_one(extent: int, intent: int, start: int):
        if extent and intent:
            out.append((extent, intent))
        for r in range(start, m):
            budget.tick()
            if extent >> r & 1:
                continue
            new_intent = intent & row_masks[r]
            if not new_intent:
                continue
            new_extent = extent_of(new_intent)
            if (new_extent & ~extent) & ((1 << r) - 1):
                continue  # not canonical: an earlier row joined the closure
            close_by_one(new_extent, new_intent, r + 1)

    if m and mat.cols:
        top = extent_of(full_cols)
        close_by_one(top, full_cols, 0)
    return out


@dataclass(frozen=True)
class CoverResult:
    size: int
    cover: tuple[Rectangle, ...]
    nodes_used: int


def _greedy_cover(rect_cells: list[int], target: int) -> list[int]:
    chosen = []
    missing = target
    while missing:
        best, best_gain = None, 0
        for idx, rc in enumerate(rect_cells):
            gain = (rc & missing).bit_count()
            if gain > best_gain:
                best, best_gain = idx, gain
        if best is None:
            raise AssertionError("positive cell not covered by any maximal rectangle")
        chosen.append(best)
        missing &= ~rect_cells[best]
    return chosen


def rectangle_cover_lower_bound(mat: RatMatrix,
                                budget: int = 10_000_000) -> tuple[int, list[Rectangle]]:
    """Exact minimum rectangle cover of the positive support, with an optimal
    cover as certificate.  The zero (or empty) matrix needs 0 rectangles.

    Raises BudgetExceeded once enumeration steps plus search nodes pass the
    budget; an aborted run proves nothing and is never reported as a value.
    """
    if not mat.is_nonnegative():
        raise ValueError("matrix must be nonnegative")
    cells = [(i, j) for i in range(mat.rows) for j in range(mat.cols) if mat[i, j] > 0]
    if not cells:
        return 0, []
    b = _Budget(budget)
    rects = enumerate_maximal_rectangles(mat, b)

    cell_id = {c: k for k, c in enumerate(cells)}
    all_mask = (1 << len(cells)) - 1
    rect_cells = []
    for rmask, cmask in rects:
        mask = 0
        for i in _bits(rmask):
            for j in _bits(cmask):
                mask |= 1 << cell_id[(i, j)]
        rect_cells.append(mask)

    cell_rects = [[] for _ in cells]
    for ridx, mask in enumerate(rect_cells):
        for c in _bits(mask):
            cell_rects[c].append(ridx)
    cell_rect_masks = [0 for _ in cells]
    for c, lst in enumerate(cell_rects):
        m = 0
        for ridx in lst:
            m |= 1 << ridx
        cell_rect_masks[c] = m
        if not lst:
            raise AssertionError("positive cell belongs to no maximal rectangle")

    # static branching order: scarcest cells first
    order = sorted(range(len(cells)), key=lambda c: (len(cell_rects[c]), c))

    # cells covered by exactly one rectangle force that rectangle into any cover
    forced: list[int] = []
    forced_mask = 0
    for c in order:
        if len(cell_rects[c]) == 1 and not (forced_mask >> c & 1):
            ridx = cell_rects[c][0]
            forced.append(ridx)
            forced_mask |= rect_cells[ridx]

    best_extra = _greedy_cover(rect_cells, all_mask & ~forced_mask) if forced_mask != all_mask else []
    best = {"size": len(forced) + len(best_extra),
            "picks": list(forced) + best_extra}

    def packing_bound(uncovered: int) -> int:
        used = 0
        lb = 0
        for c in order:
            if uncovered >> c & 1 and not (cell_rect_masks[c] & used):
                lb += 1
                used |= cell_rect_masks[c]
        return lb

    stack: list[int] = list(forced)

    def search(uncovered: int):
        b.tick()
        if not uncovered:
            if len(stack) < best["size"]:
                best["size"] = len(stack)
                best["picks"] = list(stack)
            return
        if len(stack) + packing_bound(uncovered) >= best["size"]:
            return
        cell = next(c for c in order if uncovered >> c & 1)
        cands = sorted(cell_rects[cell],
                       key=lambda r: (-(rect_cells[r] & uncovered).bit_count(), r))
        for ridx in cands:
            if len(stack) + 1 >= best["size"]:
                break
            stack.append(ridx)
            search(uncovered & ~rect_cells[ridx])
            stack.pop()

    search(all_mask & ~forced_mask)

    cover = []
    for ridx in best["picks"]:
        rmask, cmask = rects[ridx]
        cover.append((tuple(_bits(rmask)), tuple(_bits(cmask))))
    cover.sort()
    return best["size"], cover
