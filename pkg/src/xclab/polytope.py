"""Rational polytopes as paired H- and V-representations, plus the canonical
generators: simplices, cubes, convex polygons, pyramids, Cartesian products.

A Polytope carries both an inequality system  <a_i, x> <= b_i  and an explicit
vertex list; ``validate`` checks the two against each other (nonnegative
slacks, vertex extremality via tight-row rank).  Generators emit irredundant
descriptions by construction.  Completeness of either list is never verified:
facet enumeration and convex hulls are out of scope.

Conventions that every other module relies on:

* cube vertices are ordered lexicographically;
* pyramids put lifted facets first, the base facet last, the apex vertex last;
* products order vertices with the left factor's index varying fastest and
  stack the left factor's constraints first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import FormatError, ValidationError
from .ratmat import RatMatrix, frac, format_frac, mat_rank


@dataclass(frozen=True)
class HRep:
    """Inequality description {x : normals @ x <= offsets}, one row per facet."""
    ambient_dim: int
    normals: RatMatrix          # m x d
    offsets: tuple[Fraction, ...]

    def __post_init__(self):
        if self.normals.cols != self.ambient_dim:
            raise ValueError("normal width does not match ambient dimension")
        if self.normals.rows != len(self.offsets):
            raise ValueError("one offset per inequality required")

    @property
    def m(self) -> int:
        return self.normals.rows


@dataclass(frozen=True)
class VRep:
    """Vertex list, one row per vertex."""
    ambient_dim: int
    vertices: RatMatrix         # n x d

    def __post_init__(self):
        if self.vertices.cols != self.ambient_dim:
            raise ValueError("vertex width does not match ambient dimension")

    @property
    def n(self) -> int:
        return self.vertices.rows


@dataclass(frozen=True)
class Polytope:
    name: str
    h: HRep
    v: VRep

    def __post_init__(self):
        if self.h.ambient_dim != self.v.ambient_dim:
            raise ValueError("H and V ambient dimensions differ")
        if self.v.n < 1:
            raise ValueError("polytope must have at least one vertex")

    @property
    def dim(self) -> int:
        return self.h.ambient_dim

    def slack(self, i: int, j: int) -> Fraction:
        """b_i minus <a_i, v_j>; nonnegative iff vertex j satisfies constraint i."""
        a = self.h.normals.row(i)
        v = self.v.vertices.row(j)
        return self.h.offsets[i] - sum((x * y for x, y in zip(a, v)), Fraction(0))


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...]

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "invalid:\n" + "\n".join("  " + v for v in self.violations)


def validate(p: Polytope) -> ValidationReport:
    """Check nonnegative slacks, vertex distinctness and vertex extremality.

    Extremality of vertex j means the constraints tight at it span the
    ambient space; the check is skipped for m = 0 or d = 0 (point
    conventions).  Completeness of either representation is not checked.
    """
    bad = []
    n, m, d = p.v.n, p.h.m, p.dim
    seen = {}
    for j in range(n):
        key = p.v.vertices.row(j)
        if key in seen:
            bad.append(f"duplicate vertex: rows {seen[key]} and {j}")
        else:
            seen[key] = j
    for i in range(m):
        for j in range(n):
            s = p.slack(i, j)
            if s < 0:
                bad.append(f"negative slack {format_frac(s)} at constraint {i}, vertex {j}")
    if m > 0 and d > 0:
        for j in range(n):
            tight = [i for i in range(m) if p.slack(i, j) == 0]
            r = mat_rank(p.h.normals.submatrix(tight, range(d)))
            if r < d:
                bad.append(f"vertex {j} not extreme: tight rows have rank {r} < {d}")
    return ValidationReport(ok=not bad, violations=tuple(bad))


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def make_simplex(d: int) -> Polytope:
    """Standard simplex conv{0, e_1, ..., e_d} with x_i >= 0 and sum x_i <= 1.

    d = 0 yields the point polytope: one empty-coordinate vertex, no
    inequalities, slack matrix 0x1.
    """
    if d < 0:
        raise ValueError("dimension must be nonnegative")
    normals = []
    offsets = []
    for i in range(d):
        row = [Fraction(0)] * d
        row[i] = Fraction(-1)
        normals.append(row)
        offsets.append(Fraction(0))
    if d > 0:
        normals.append([Fraction(1)] * d)
        offsets.append(Fraction(1))
    verts = [[Fraction(0)] * d]
    for i in range(d):
        row = [Fraction(0)] * d
        row[i] = Fraction(1)
        verts.append(row)
    return Polytope(f"simplex{d}",
                    HRep(d, RatMatrix(len(normals), d, normals), tuple(offsets)),
                    VRep(d, RatMatrix(len(verts), d, verts)))


def make_cube(d: int) -> Polytope:
    """Unit cube [0,1]^d: 2d inequalities (-x_i <= 0 then x_i <= 1, per axis),
    2^d vertices in lexicographic order."""
    if d < 1:
        raise ValueError("cube dimension must be >= 1 (use make_simplex(0) for a point)")
    normals = []
    offsets = []
    for i in range(d):
        lo = [Fraction(0)] * d
        lo[i] = Fraction(-1)
        hi = [Fraction(0)] * d
        hi[i] = Fraction(1)
        normals.extend([lo, hi])
        offsets.extend([Fraction(0), Fraction(1)])
    verts = []
    for code in range(1 << d):
        # lexicographic order on coordinate tuples = first coordinate most significant
        verts.append([Fraction((code >> (d - 1 - i)) & 1) for i in range(d)])
    return Polytope(f"cube{d}",
                    HRep(d, RatMatrix(2 * d, d, normals), tuple(offsets)),
                    VRep(d, RatMatrix(1 << d, d, verts)))


def make_polygon(points: VRep) -> Polytope:
    """Convex polygon from vertices listed strictly convex, counterclockwise.

    Each consecutive pair contributes the edge inequality oriented to contain
    the polygon; rejects duplicate points and any collinear or reflex triple.
    """
    if points.ambient_dim != 2:
        raise ValidationError("polygon vertices must live in dimension 2")
    n = points.n
    if n < 3:
        raise ValidationError("polygon needs at least 3 vertices")
    verts = [points.vertices.row(j) for j in range(n)]
    if len(set(verts)) != n:
        raise ValidationError("duplicate polygon vertices")
    for j in range(n):
        a, b, c = verts[j], verts[(j + 1) % n], verts[(j + 2) % n]
        cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if cross <= 0:
            kind = "collinear" if cross == 0 else "reflex/clockwise"
            raise ValidationError(f"vertex triple {j},{j + 1},{j + 2} is {kind}")
    normals = []
    offsets = []
    for j in range(n):
        vx, vy = verts[j]
        ux, uy = verts[(j + 1) % n]
        # outward normal of a counterclockwise edge (v -> u)
        a = (uy - vy, -(ux - vx))
        normals.append(list(a))
        offsets.append(a[0] * vx + a[1] * vy)
    return Polytope(f"polygon{n}",
                    HRep(2, RatMatrix(n, 2, normals), tuple(offsets)),
                    VRep(2, points.vertices))


def make_pyramid(base: Polytope, apex_coords: Optional[Sequence] = None) -> Polytope:
    """Pyramid over ``base``: the base embeds at height 0 in one more
    dimension, the apex defaults to (vertex centroid, 1).

    Facet layout: every base facet lifts to a facet through the apex (the
    inequality <a_i, x> + ((b_i - <a_i, c>)/h) t <= b_i is tight exactly where
    the base facet was tight, and at the apex), then the base facet t >= 0
    comes last.  Vertices keep base order, apex last.  This makes the slack
    matrix come out block-diagonal: base slack in the upper-left, the apex's
    positive slack against the base facet in the corner.

    A 0-dimensional base (the point polytope) gets the extra cap facet
    t <= height that the lift cannot supply.
    """
    d = base.dim
    m = base.h.m
    nv = base.v.n
    if m == 0 and (d > 0 or nv != 1):
        raise ValidationError(
            "a base with no inequalities is only supported as the 0-dimensional point")
    if apex_coords is not None:
        apex = [frac(x) for x in apex_coords]
        if len(apex) != d + 1:
            raise ValidationError(f"apex needs {d + 1} coordinates")
    else:
        cols = [sum((base.v.vertices[j, i] for j in range(nv)), Fraction(0)) / nv
                for i in range(d)]
        apex = cols + [Fraction(1)]
    c, h = apex[:d], apex[d]
    if h == 0:
        raise ValidationError("apex height 0 would lie in the base's affine hull")

    normals = []
    offsets = []
    for i in range(m):
        a = list(base.h.normals.row(i))
        b = base.h.offsets[i]
        gap = b - sum((x * y for x, y in zip(a, c)), Fraction(0))
        normals.append(a + [gap / h])
        offsets.append(b)
    if m == 0:
        # cap facet through the apex (t <= h for h > 0)
        sign = Fraction(1) if h > 0 else Fraction(-1)
        normals.append([sign])
        offsets.append(sign * h)
    # base facet: t >= 0 for a positive apex height
    sign = Fraction(-1) if h > 0 else Fraction(1)
    normals.append([Fraction(0)] * d + [sign])
    offsets.append(Fraction(0))

    verts = [list(base.v.vertices.row(j)) + [Fraction(0)] for j in range(nv)]
    verts.append(apex)
    d1 = d + 1
    return Polytope(f"pyr_{base.name}",
                    HRep(d1, RatMatrix(len(normals), d1, normals), tuple(offsets)),
                    VRep(d1, RatMatrix(nv + 1, d1, verts)))


def cartesian_product(p: Polytope, q: Polytope) -> Polytope:
    """P x Q: stacked inequality systems (P's first), vertices are all pairs
    ordered with the P index fastest, i.e. pair (i, j) lands in row j*n_P + i."""
    dp, dq = p.dim, q.dim
    d = dp + dq
    zero_p = [Fraction(0)] * dp
    zero_q = [Fraction(0)] * dq
    normals = []
    offsets = []
    for i in range(p.h.m):
        normals.append(list(p.h.normals.row(i)) + zero_q)
        offsets.append(p.h.offsets[i])
    for i in range(q.h.m):
        normals.append(zero_p + list(q.h.normals.row(i)))
        offsets.append(q.h.offsets[i])
    verts = []
    for j in range(q.v.n):
        vq = list(q.v.vertices.row(j))
        for i in range(p.v.n):
            verts.append(list(p.v.vertices.row(i)) + vq)
    return Polytope(f"{p.name}x{q.name}",
                    HRep(d, RatMatrix(len(normals), d, normals), tuple(offsets)),
                    VRep(d, RatMatrix(len(verts), d, verts)))


# ---------------------------------------------------------------------------
# POLY text format.
# ---------------------------------------------------------------------------

def format_poly(p: Polytope) -> str:
    lines = [f"POLY {p.name}", f"DIM {p.dim}", f"H {p.h.m}"]
    for i in range(p.h.m):
        toks = [format_frac(x) for x in p.h.normals.row(i)]
        toks.append(format_frac(p.h.offsets[i]))
        lines.append(" ".join(toks))
    lines.append(f"V {p.v.n}")
    for j in range(p.v.n):
        lines.append(" ".join(format_frac(x) for x in p.v.vertices.row(j)))
    return "\n".join(lines) + "\n"


def parse_poly(text: str) -> Polytope:
    lines = text.splitlines()
    pos = 0

    def take(prefix: str) -> str:
        nonlocal pos
        if pos >= len(lines) or not lines[pos].startswith(prefix):
            raise FormatError(f"expected {prefix!r} at line {pos + 1}")
        out = lines[pos][len(prefix):].strip()
        pos += 1
        return out

    name = take("POLY")
    try:
        d = int(take("DIM"))
        m = int(take("H"))
    except ValueError as exc:
        raise FormatError("bad DIM/H header") from exc
    normals = []
    offsets = []
    for _ in range(m):
        if pos >= len(lines):
            raise FormatError("truncated H block")
        toks = lines[pos].split()
        pos += 1
        if len(toks) != d + 1:
            raise FormatError(f"H row needs {d + 1} entries, found {len(toks)}")
        normals.append([frac(t) for t in toks[:d]])
        offsets.append(frac(toks[d]))
    try:
        n = int(take("V"))
    except ValueError as exc:
        raise FormatError("bad V header") from exc
    verts = []
    for _ in range(n):
        if pos >= len(lines):
            raise FormatError("truncated V block")
        toks = lines[pos].split()
        pos += 1
        if len(toks) != d:
            raise FormatError(f"V row needs {d} entries, found {len(toks)}")
        verts.append([frac(t) for t in toks])
    return Polytope(name,
                    HRep(d, RatMatrix(m, d, normals), tuple(offsets)),
                    VRep(d, RatMatrix(n, d, verts)))
