"""Exact rational scalars and dense matrices.

All arithmetic is over ``fractions.Fraction`` (arbitrary precision, always in
canonical lowest terms, denominator > 0), so zero tests are exact.  Rank is
computed with fraction-free (Bareiss) elimination on denominator-cleared
integer rows to keep intermediate numbers small.

Matrices with zero rows or zero columns are legal everywhere and have rank 0;
degenerate polytopes (points) need them.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import FormatError

# All scalar quantities in the package are Rationals.
Rational = Fraction


def frac(x) -> Fraction:
    """Coerce int / str / Fraction to Fraction.  Floats are rejected on purpose:
    anything numeric must be rationalized explicitly before entering exact code."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad rational literal {x!r}") from exc
    raise TypeError(f"cannot coerce {type(x).__name__} to Rational exactly")


def format_frac(x: Fraction) -> str:
    """Render as ``p/q``, or ``p`` when q = 1 (exact round-trip with frac())."""
    return str(x)


class RatMatrix:
    """Immutable dense matrix of Rationals, row-major."""

    __slots__ = ("rows", "cols", "_rows")

    def __init__(self, rows: int, cols: int, data: Iterable[Iterable]):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        grid = tuple(tuple(frac(x) for x in row) for row in data)
        if len(grid) != rows or any(len(r) != cols for r in grid):
            raise ValueError(f"data does not match declared shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self._rows = grid

    @classmethod
    def from_rows(cls, data: Sequence[Sequence]) -> "RatMatrix":
        data = [list(r) for r in data]
        cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        z = Fraction(0)
        return cls(rows, cols, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, [[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    @classmethod
    def outer(cls, u: Sequence, w: Sequence) -> "RatMatrix":
        u = [frac(x) for x in u]
        w = [frac(x) for x in w]
        return cls(len(u), len(w), [[a * b for b in w] for a in u])

    def __getitem__(self, key) -> Fraction:
        i, j = key
        return self._rows[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows,
                         [[self._rows[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for r in self._rows for x in r)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def scale_rows(self, factors: Sequence) -> "RatMatrix":
        factors = [frac(f) for f in factors]
        if len(factors) != self.rows:
            raise ValueError("one scale factor per row required")
        return RatMatrix(self.rows, self.cols,
                         [[f * x for x in r] for f, r in zip(factors, self._rows)])

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "RatMatrix":
        return RatMatrix(len(row_idx), len(col_idx),
                         [[self._rows[i][j] for j in col_idx] for i in row_idx])

    def delete_row_col(self, i: int, j: int) -> "RatMatrix":
        keep_r = [r for r in range(self.rows) if r != i]
        keep_c = [c for c in range(self.cols) if c != j]
        return self.submatrix(keep_r, keep_c)

    def add(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return RatMatrix(self.rows, self.cols,
                         [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self._rows, other._rows)])

    def to_float_rows(self) -> list[list[float]]:
        return [[float(x) for x in r] for r in self._rows]

    def __eq__(self, other) -> bool:
        return (isinstance(other, RatMatrix) and self.shape == other.shape
                and self._rows == other._rows)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._rows))

    def __repr__(self) -> str:
        if self.rows * self.cols > 64:
            return f"RatMatrix({self.rows}x{self.cols})"
        body = "; ".join(" ".join(format_frac(x) for x in r) for r in self._rows)
        return f"RatMatrix({self.rows}x{self.cols}: {body})"


def mat_mul(left: RatMatrix, right: RatMatrix) -> RatMatrix:
    """Exact matrix product.  One side having zero extent is fine: the result
    of a 1x0 by 0x1 product is the 1x1 zero matrix."""
    if left.cols != right.rows:
        raise ValueError(f"dimension mismatch: {left.shape} x {right.shape}")
    zero = Fraction(0)
    rrows = right._rows
    out = []
    for lrow in left._rows:
        acc = [zero] * right.cols
        for k, a in enumerate(lrow):
            if a == 0:
                continue
            rrow = rrows[k]
            for j, b in enumerate(rrow):
                if b != 0:
                    acc[j] += a * b
        out.append(acc)
    return RatMatrix(left.rows, right.cols, out)


def _integer_rows(mat: RatMatrix) -> list[list[int]]:
    # Clearing denominators row by row changes no rank.
    out = []
    for r in mat._rows:
        lcm = 1
        for x in r:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        out.append([x.numerator * (lcm // x.denominator) for x in r])
    return out


def mat_rank(mat: RatMatrix) -> int:
    """Linear rank over the rationals via fraction-free (Bareiss) elimination.

    Works on denominator-cleared integer rows; every division below is exact
    because intermediate entries are minors of the pivot columns.
    """
    m, n = mat.rows, mat.cols
    if m == 0 or n == 0:
        return 0
    a = _integer_rows(mat)
    rank = 0
    prev = 1
    for col in range(n):
        piv = next((i for i in range(rank, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        if piv != rank:
            a[piv], a[rank] = a[rank], a[piv]
        p = a[rank][col]
        for i in range(rank + 1, m):
            ai = a[i]
            ar = a[rank]
            f = ai[col]
            for j in range(col + 1, n):
                ai[j] = (p * ai[j] - f * ar[j]) // prev
            ai[col] = 0
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def solve_consistent(columns: Sequence[Sequence[Fraction]],
                     b: Sequence[Fraction]) -> Optional[list[Fraction]]:
    """Solve sum_k x_k * columns[k] = b exactly, or return None if inconsistent.

    Free variables are pinned to 0, so the returned particular solution is
    deterministic.  Used by the rationalization step of the factorization
    search; sizes are small, plain fraction elimination is fine here.
    """
    k = len(columns)
    m = len(b)
    if any(len(c) != m for c in columns):
        raise ValueError("column length mismatch")
    # Augmented system rows: [A | b]
    rows = [[columns[j][i] for j in range(k)] + [frac(b[i])] for i in range(m)]
    piv_cols = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if rows[i][k] != 0:
            return None
    x = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        x[c] = rows[i][k]
    return x


# ---------------------------------------------------------------------------
# MAT text format: first line "MAT <rows> <cols>", then one line per row of
# whitespace-separated rationals written p/q (or p when q = 1).
# ---------------------------------------------------------------------------

def format_mat(mat: RatMatrix) -> str:
    lines = [f"MAT {mat.rows} {mat.cols}"]
    for i in range(mat.rows):
        lines.append(" ".join(format_frac(x) for x in mat.row(i)))
    return "\n".join(lines) + "\n"


def parse_mat(text: str) -> RatMatrix:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty MAT input")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "MAT":
        raise FormatError(f"bad MAT header: {lines[0]!r}")
    try:
        rows, cols = int(head[1]), int(head[2])
    except ValueError as exc:
        raise FormatError(f"bad MAT header: {lines[0]!r}") from exc
    if len(lines) < 1 + rows:
        raise FormatError(f"expected {rows} matrix rows, found {len(lines) - 1}")
    data = []
    for i in range(rows):
        toks = lines[1 + i].split()
        if len(toks) != cols:
            raise FormatError(f"row {i}: expected {cols} entries, found {len(toks)}")
        data.append([frac(t) for t in toks])
    return RatMatrix(rows, cols, data)
