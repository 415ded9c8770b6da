"""Slack matrices and the structured product matrix used by the verifier.

The slack matrix of a polytope pairs constraints with vertices,
S[i, j] = b_i - <a_i, v_j>; it is nonnegative with a zero exactly where a
vertex sits on a constraint's hyperplane.  This module also provides:

* ``drop_redundant_rows`` - keep only rows containing a zero (a row without
  any zero is a redundant inequality);
* ``pyramid_normal_form`` - detect the block shape [[T', 0], [0, 1]] that the
  slack matrix of an irredundantly-described pyramid always has, purely
  structurally;
* ``product_slack`` / ``assemble_A`` - the slack matrix of a Cartesian
  product as repeated blocks, and its partition into green / red / blue /
  zero regions when the right factor is in pyramid normal form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import FormatError, NotPyramidError, ValidationError
from .polytope import Polytope, cartesian_product  # noqa: F401  (re-exported pairing)
from .ratmat import RatMatrix, format_frac


@dataclass(frozen=True)
class SlackMatrix:
    """Nonnegative matrix plus labels mapping rows back to constraint indices
    and columns back to vertex indices of the originating polytope."""
    mat: RatMatrix
    row_labels: tuple[int, ...]
    col_labels: tuple[int, ...]

    def __post_init__(self):
        if len(self.row_labels) != self.mat.rows or len(self.col_labels) != self.mat.cols:
            raise ValueError("label count must match matrix shape")
        for i in range(self.mat.rows):
            for j in range(self.mat.cols):
                if self.mat[i, j] < 0:
                    raise ValidationError(
                        f"negative slack entry {format_frac(self.mat[i, j])} at ({i}, {j})")

    @classmethod
    def plain(cls, mat: RatMatrix) -> "SlackMatrix":
        return cls(mat, tuple(range(mat.rows)), tuple(range(mat.cols)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.mat.shape


def slack_matrix(p: Polytope) -> SlackMatrix:
    """Exact m x n slack matrix of (the given description of) p.

    A negative entry means the H- and V-representations disagree; validate()
    the polytope first to get a detailed report.
    """
    rows = [[p.slack(i, j) for j in range(p.v.n)] for i in range(p.h.m)]
    return SlackMatrix.plain(RatMatrix(p.h.m, p.v.n, rows))


def drop_redundant_rows(s: SlackMatrix) -> SlackMatrix:
    """Restrict to rows containing at least one zero entry.

    Afterwards every remaining row has a zero; the dropped rows correspond to
    redundant inequalities and removing them cannot change the nonnegative
    rank.
    """
    keep = [i for i in range(s.mat.rows)
            if any(s.mat[i, j] == 0 for j in range(s.mat.cols))]
    mat = s.mat.submatrix(keep, range(s.mat.cols))
    return SlackMatrix(mat, tuple(s.row_labels[i] for i in keep), s.col_labels)


@dataclass(frozen=True)
class PyramidForm:
    """Result of pyramid normal form detection: the base block T', the apex
    facet row / apex vertex column positions in the input, and the original
    corner value (recorded so factorizations can be mapped back to the
    unscaled matrix; scaling a row never changes the nonnegative rank)."""
    tprime: SlackMatrix
    apex_row: int
    apex_col: int
    corner: Fraction

    def normal_form_matrix(self) -> RatMatrix:
        """The full matrix [[T', 0], [0, 1]] with the corner rescaled to 1."""
        t = self.tprime.mat
        rows = [list(t.row(i)) + [Fraction(0)] for i in range(t.rows)]
        rows.append([Fraction(0)] * t.cols + [Fraction(1)])
        return RatMatrix(t.rows + 1, t.cols + 1, rows)


def pyramid_normal_form(s: SlackMatrix) -> PyramidForm:
    """Detect the pyramid block shape of a slack matrix, structurally.

    Looks for a column c with exactly one nonzero entry, at a row r that is
    zero outside column c: c is the apex vertex (on every facet but one), r is
    the base facet (containing every other vertex).  With several candidates
    (in a simplex every vertex qualifies) the lexicographically smallest
    (r, c) wins, for determinism.  The corner entry is rescaled to 1 and the
    original value recorded.
    """
    mat = s.mat
    m, n = mat.rows, mat.cols
    best = None
    for r in range(m):
        row_support = [j for j in range(n) if mat[r, j] != 0]
        if len(row_support) != 1:
            continue
        c = row_support[0]
        col_support = [i for i in range(m) if mat[i, c] != 0]
        if col_support == [r]:
            best = (r, c)
            break  # rows scanned in order, so the first hit is lexicographically least
    if best is None:
        raise NotPyramidError(
            "no pyramid normal form: no column has a single nonzero entry whose "
            "row is zero elsewhere (not a pyramid, or description redundant)")
    r, c = best
    corner = mat[r, c]
    tmat = mat.delete_row_col(r, c)
    tprime = SlackMatrix(tmat,
                         tuple(l for i, l in enumerate(s.row_labels) if i != r),
                         tuple(l for j, l in enumerate(s.col_labels) if j != c))
    return PyramidForm(tprime=tprime, apex_row=r, apex_col=c, corner=corner)


def product_slack(s: SlackMatrix, t: SlackMatrix) -> SlackMatrix:
    """Slack matrix of a product from the factors' slack matrices.

    Shape (m_P + m_Q) x (n_P * n_Q): block j holds a copy of S on top of the
    j-th column of T repeated n_P times.  Bit-exact equal to
    slack_matrix(cartesian_product(P, Q)) under the fixed orderings.
    """
    mp, np_ = s.mat.rows, s.mat.cols
    mq, nq = t.mat.rows, t.mat.cols
    rows = []
    for i in range(mp):
        srow = s.mat.row(i)
        rows.append([x for _ in range(nq) for x in srow])
    for i in range(mq):
        trow = t.mat.row(i)
        rows.append([trow[j] for j in range(nq) for _ in range(np_)])
    return SlackMatrix.plain(RatMatrix(mp + mq, np_ * nq, rows))


@dataclass(frozen=True)
class RegionMap:
    """Partition of the assembled product matrix A into four regions.

    A has m_P + m_Qprime + 1 rows (S rows, then T' rows, then the apex row)
    and n_P * (k + 1) columns in k + 1 blocks of width n_P (block k+1 is the
    apex vertex block).  Regions:

    * green: S rows x blocks 1..k         (copies of S over base vertices)
    * blue:  S rows x block k+1, and apex row x block k+1
    * red:   T' rows x blocks 1..k        (columns of T' repeated)
    * zero:  T' rows x block k+1, and apex row x blocks 1..k
    """
    n_P: int
    m_P: int
    k: int
    m_Qprime: int

    @property
    def nrows(self) -> int:
        return self.m_P + self.m_Qprime + 1

    @property
    def ncols(self) -> int:
        return self.n_P * (self.k + 1)

    @property
    def apex_row(self) -> int:
        return self.m_P + self.m_Qprime

    def block_of_col(self, j: int) -> int:
        """1-based block index of column j."""
        return j // self.n_P + 1

    def is_apex_block(self, j: int) -> bool:
        return self.block_of_col(j) == self.k + 1

    def block_cols(self, b: int) -> range:
        """Columns of 1-based block b."""
        return range((b - 1) * self.n_P, b * self.n_P)

    def region(self, i: int, j: int) -> str:
        apex_block = self.is_apex_block(j)
        if i < self.m_P:
            return "blue" if apex_block else "green"
        if i < self.apex_row:
            return "zero" if apex_block else "red"
        return "blue" if apex_block else "zero"

    def red_rows(self) -> range:
        return range(self.m_P, self.m_P + self.m_Qprime)

    def to_json_dict(self) -> dict:
        return {"n_P": self.n_P, "m_P": self.m_P, "k": self.k, "m_Qprime": self.m_Qprime}

    @classmethod
    def from_json_dict(cls, d: dict) -> "RegionMap":
        try:
            return cls(n_P=int(d["n_P"]), m_P=int(d["m_P"]),
                       k=int(d["k"]), m_Qprime=int(d["m_Qprime"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad region map: {d!r}") from exc


def assemble_A(s: SlackMatrix, tprime: SlackMatrix) -> tuple[SlackMatrix, RegionMap]:
    """Build A = product_slack(S, [[T', 0], [0, 1]]) together with its region map.

    Requires every row of S to contain a zero (drop_redundant_rows must be a
    no-op on S): the audit of undersized factorizations leans on that zero in
    every block.  Requires k = T'.cols >= 1; for a point right-hand factor the
    product machinery is vacuous and this is flagged rather than silently
    accepted.
    """
    for i in range(s.mat.rows):
        if all(s.mat[i, j] != 0 for j in range(s.mat.cols)):
            raise ValidationError(
                f"row {i} of S has no zero entry; drop_redundant_rows first")
    k = tprime.mat.cols
    if k < 1:
        raise ValidationError("T' must have at least one column (k >= 1)")
    form = PyramidForm(tprime=tprime, apex_row=tprime.mat.rows,
                       apex_col=tprime.mat.cols, corner=Fraction(1))
    t_full = SlackMatrix.plain(form.normal_form_matrix())
    a = product_slack(s, t_full)
    regions = RegionMap(n_P=s.mat.cols, m_P=s.mat.rows, k=k, m_Qprime=tprime.mat.rows)
    return a, regions


def labels_json(s: SlackMatrix, regions: RegionMap | None = None) -> str:
    """JSON sidecar for a MAT file: row/column labels, region map if known."""
    d = {"row_labels": list(s.row_labels), "col_labels": list(s.col_labels)}
    if regions is not None:
        d["regions"] = regions.to_json_dict()
    return json.dumps(d, indent=2, sort_keys=True) + "\n"
