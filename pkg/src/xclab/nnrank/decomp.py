"""Nonnegative rank-one factors, decompositions, and the structural
constructors that transport them across products and pyramids.

A decomposition is a list of outer products u (x) w with u, w >= 0; its
support facts are the workhorse of every lower-bound argument here:

* a zero cell of the target forces a zero in every factor;
* the support of a rank-one factor is a combinatorial rectangle, so a zero
  cell kills the whole row-of-w or column-of-u through it.

``zero_propagation_check`` makes both facts executable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional

from ..errors import FormatError, ValidationError
from ..ratmat import RatMatrix, frac, format_frac


@dataclass(frozen=True)
class RankOneFactor:
    """Outer product u (x) w of nonnegative vectors; never the zero matrix."""
    u: tuple[Fraction, ...]
    w: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(frac(x) for x in self.u))
        object.__setattr__(self, "w", tuple(frac(x) for x in self.w))
        if any(x < 0 for x in self.u) or any(x < 0 for x in self.w):
            raise ValidationError("rank-one factor with a negative entry")

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.u) or all(x == 0 for x in self.w)

    def entry(self, i: int, j: int) -> Fraction:
        return self.u[i] * self.w[j]

    def matrix(self) -> RatMatrix:
        return RatMatrix.outer(self.u, self.w)

    def u_support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.u) if x != 0)

    def w_support(self) -> tuple[int, ...]:
        return tuple(j for j, x in enumerate(self.w) if x != 0)


@dataclass(frozen=True)
class Decomposition:
    """Ordered factors of a common shape; empty decompositions (of the zero
    matrix) are legal, zero factors are not."""
    factors: tuple[RankOneFactor, ...]
    target_rows: int
    target_cols: int

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        for idx, f in enumerate(self.factors):
            if len(f.u) != self.target_rows or len(f.w) != self.target_cols:
                raise ValidationError(f"factor {idx} has the wrong shape")
            if f.is_zero():
                raise ValidationError(f"factor {idx} is the zero matrix")

    def __len__(self) -> int:
        return len(self.factors)

    def total(self) -> RatMatrix:
        acc = RatMatrix.zeros(self.target_rows, self.target_cols)
        for f in self.factors:
            acc = acc.add(f.matrix())
        return acc


def decomposition_from_factors(pairs: Iterable[tuple], rows: int, cols: int,
                               drop_zero: bool = True) -> Decomposition:
    """Build a Decomposition from (u, w) pairs, silently dropping zero factors
    (factor counts are the whole point, so zeros must not inflate them)."""
    factors = []
    for u, w in pairs:
        f = RankOneFactor(tuple(u), tuple(w))
        if f.is_zero():
            if drop_zero:
                continue
            raise ValidationError("zero factor")
        factors.append(f)
    return Decomposition(tuple(factors), rows, cols)


def verify_decomposition(d: Decomposition, target: RatMatrix) -> bool:
    """True iff the factors sum to target exactly (entries are nonnegative by
    construction)."""
    if (d.target_rows, d.target_cols) != target.shape:
        raise ValueError(f"dimension mismatch: decomposition {d.target_rows}x"
                         f"{d.target_cols} vs target {target.rows}x{target.cols}")
    return d.total() == target


class ZeroPropagationViolation(NamedTuple):
    fact: int          # 1: positive factor entry on a zero target cell
                       # 2: rectangle support breach around a zero cell
    factor: int
    i: int
    j: int
    i2: Optional[int] = None
    j2: Optional[int] = None


def zero_propagation_check(d: Decomposition, target: RatMatrix) -> list[ZeroPropagationViolation]:
    """Executable support lemmas; the list is empty for every valid input.

    For each zero cell (i, j) of the target: (1) every factor must vanish
    there; (2) for every factor and every pair (i', j'), the factor is zero at
    (i', j) or at (i, j'), because a rank-one support is a rectangle and
    cannot clip the corner at (i, j).
    """
    if (d.target_rows, d.target_cols) != target.shape:
        raise ValueError("dimension mismatch")
    violations = []
    zero_cells = [(i, j) for i in range(target.rows) for j in range(target.cols)
                  if target[i, j] == 0]
    for i, j in zero_cells:
        for idx, f in enumerate(d.factors):
            if f.entry(i, j) != 0:
                violations.append(ZeroPropagationViolation(1, idx, i, j))
            # fact 2 breach: some i' keeps column j positive AND some j' keeps
            # row i positive, i.e. w_j != 0 and u_i != 0 with the factor nonzero
            if f.w[j] != 0 and f.u[i] != 0:
                i2 = next((r for r in f.u_support()), None)
                j2 = next((c for c in f.w_support()), None)
                violations.append(ZeroPropagationViolation(2, idx, i, j, i2, j2))
    return violations


# ---------------------------------------------------------------------------
# Structural constructors.
# ---------------------------------------------------------------------------

def product_decomposition(ds: Decomposition, dt: Decomposition,
                          n_p: int, n_q: int) -> Decomposition:
    """Decomposition of the product slack matrix from factor decompositions.

    Each left factor (u, w) lifts to (u padded with the right side's rows as
    zeros, w repeated once per right vertex block); each right factor lifts to
    (zeros prefixed, each weight w_j spread over the n_p columns of block j).
    The result has exactly len(ds) + len(dt) factors and sums to
    product_slack(sum(ds), sum(dt)).
    """
    if ds.target_cols != n_p or dt.target_cols != n_q:
        raise ValueError("column counts do not match the declared vertex counts")
    m_p, m_q = ds.target_rows, dt.target_rows
    zero = Fraction(0)
    pairs = []
    for f in ds.factors:
        u = tuple(f.u) + (zero,) * m_q
        w = tuple(f.w) * n_q
        pairs.append((u, w))
    for f in dt.factors:
        u = (zero,) * m_p + tuple(f.u)
        w = tuple(x for x in f.w for _ in range(n_p))
        pairs.append((u, w))
    out = decomposition_from_factors(pairs, m_p + m_q, n_p * n_q, drop_zero=False)
    return out


def pyramid_lift(dprime: Decomposition) -> Decomposition:
    """Lift a decomposition of T' to one of [[T', 0], [0, 1]]: pad every
    factor with a zero row and column, then add the corner factor."""
    m, n = dprime.target_rows, dprime.target_cols
    zero, one = Fraction(0), Fraction(1)
    pairs = [(tuple(f.u) + (zero,), tuple(f.w) + (zero,)) for f in dprime.factors]
    corner_u = (zero,) * m + (one,)
    corner_w = (zero,) * n + (one,)
    pairs.append((corner_u, corner_w))
    return decomposition_from_factors(pairs, m + 1, n + 1, drop_zero=False)


def pyramid_restrict(d: Decomposition) -> Decomposition:
    """Peel the apex off a decomposition of [[T', 0], [0, c]], c > 0.

    Deletes the last row and column of every factor and drops factors that
    become zero.  At least one factor vanishes: whichever factor covers the
    corner is confined to it, because the zeros of the last row and column
    propagate through its rank-one support.
    """
    m, n = d.target_rows, d.target_cols
    if m < 1 or n < 1:
        raise ValidationError("nothing to restrict: target has no apex row/column")
    total = d.total()
    if total[m - 1, n - 1] <= 0:
        raise ValidationError("corner entry must be positive")
    for j in range(n - 1):
        if total[m - 1, j] != 0:
            raise ValidationError("last row is not zero outside the corner")
    for i in range(m - 1):
        if total[i, n - 1] != 0:
            raise ValidationError("last column is not zero outside the corner")
    pairs = [(f.u[:-1], f.w[:-1]) for f in d.factors]
    out = decomposition_from_factors(pairs, m - 1, n - 1, drop_zero=True)
    if len(out) > len(d) - 1:
        raise AssertionError("no factor vanished on apex restriction")  # unreachable
    return out


# ---------------------------------------------------------------------------
# DECOMP text format: "DECOMP <m> <n> <r>" then r pairs of lines (u then w).
# ---------------------------------------------------------------------------

def format_decomposition(d: Decomposition) -> str:
    lines = [f"DECOMP {d.target_rows} {d.target_cols} {len(d)}"]
    for f in d.factors:
        lines.append(" ".join(format_frac(x) for x in f.u))
        lines.append(" ".join(format_frac(x) for x in f.w))
    return "\n".join(lines) + "\n"


def parse_decomposition(text: str) -> Decomposition:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty DECOMP input")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "DECOMP":
        raise FormatError(f"bad DECOMP header: {lines[0]!r}")
    try:
        m, n, r = int(head[1]), int(head[2]), int(head[3])
    except ValueError as exc:
        raise FormatError(f"bad DECOMP header: {lines[0]!r}") from exc
    if len(lines) < 1 + 2 * r:
        raise FormatError(f"expected {2 * r} factor lines, found {len(lines) - 1}")
    pairs = []
    for idx in range(r):
        utoks = lines[1 + 2 * idx].split()
        wtoks = lines[2 + 2 * idx].split()
        if len(utoks) != m or len(wtoks) != n:
            raise FormatError(f"factor {idx}: expected {m}+{n} entries")
        pairs.append((tuple(frac(t) for t in utoks), tuple(frac(t) for t in wtoks)))
    return decomposition_from_factors(pairs, m, n, drop_zero=False)
