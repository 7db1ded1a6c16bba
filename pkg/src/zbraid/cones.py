"""
Piecewise-linear subsets of Q^n as finite unions of relatively open rational
cones, with exact boolean algebra, Minkowski sums and recovery of a
lexicographic matrix from a positivity set.

A Cell is a conjunction {x : e.x = 0, s.x > 0, t.x >= 0} stored as sorted
tuples of primitive integer covectors. A PLSet is a finite union of cells
plus an explicit include-origin flag: membership of the zero vector is
decided by the flag alone (the U^0 convention), cells only speak for x != 0.

Relint form means: no nonstrict constraints and nonempty, so the cell equals
the relative interior of its closure; cells of positivity sets of total
orders have this shape by construction. Conversions between constraint (H)
and generator (V) descriptions use an exact double description method.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

from .feasibility import null_space_int, system_feasible
from .matrices import (
    Mat,
    ZbraidError,
    check_unimodular,
    mat_col,
    primitive_vector,
    rat_inv,
)

Vec = tuple[int, ...]


class DegenerateCellError(ZbraidError):
    pass


class NotLexicographicError(ZbraidError):
    pass


class Cell(NamedTuple):
    eqs: tuple[Vec, ...]
    stricts: tuple[Vec, ...]
    nonstricts: tuple[Vec, ...]


def _canon_eq(v: Sequence) -> Vec:
    p = primitive_vector(v)
    lead = next((x for x in p if x), 0)
    return tuple(-x for x in p) if lead < 0 else p


def make_cell(eqs: Iterable, stricts: Iterable, nonstricts: Iterable = ()) -> Optional[Cell]:
    """Normalize constraint lists into a Cell; None means syntactically empty
    (a zero strict covector)."""
    e = sorted({_canon_eq(v) for v in eqs if any(v)})
    s = set()
    for v in stricts:
        if not any(v):
            return None  # 0 > 0
        s.add(primitive_vector(v))
    t = {primitive_vector(v) for v in nonstricts if any(v)}
    t -= s
    return Cell(tuple(e), tuple(sorted(s)), tuple(sorted(t)))


def cell_nonempty(cell: Cell, n: int) -> bool:
    return system_feasible(cell.eqs, cell.stricts, cell.nonstricts, n)


def cell_member(cell: Cell, x: Sequence) -> bool:
    return (
        all(_dot(e, x) == 0 for e in cell.eqs)
        and all(_dot(s, x) > 0 for s in cell.stricts)
        and all(_dot(t, x) >= 0 for t in cell.nonstricts)
    )


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class PLSet:
    n: int
    cells: tuple[Cell, ...]
    include_origin: bool = False

    def dump(self) -> str:
        """One cell per line: `E: ... | S: ... | T: ...` (used by --trace)."""
        lines = [f"origin: {'in' if self.include_origin else 'out'}"]
        for c in self.cells:
            e = " ".join("(" + " ".join(map(str, v)) + ")" for v in c.eqs)
            s = " ".join("(" + " ".join(map(str, v)) + ")" for v in c.stricts)
            t = " ".join("(" + " ".join(map(str, v)) + ")" for v in c.nonstricts)
            lines.append(f"E: {e} | S: {s} | T: {t}")
        return "\n".join(lines)


def plset(n: int, cells: Iterable[Optional[Cell]], include_origin: bool = False, prune: bool = True) -> PLSet:
    live = [c for c in cells if c is not None]
    if prune:
        live = [c for c in live if cell_nonempty(c, n)]
        live = _subsume(live)
    return PLSet(n, tuple(sorted(set(live))), include_origin)


def _subsume(cells: list[Cell]) -> list[Cell]:
    """Drop cells whose constraint set contains another cell's (region subset:
    fewer constraints cover a larger region)."""
    cells = list(dict.fromkeys(cells))
    out = []
    for c in cells:
        dominated = any(
            d != c
            and set(d.eqs) <= set(c.eqs)
            and set(d.stricts) <= set(c.stricts)
            and set(d.nonstricts) <= set(c.nonstricts) | set(c.stricts)
            for d in cells
        )
        if not dominated:
            out.append(c)
    return out


def pl_member(p: PLSet, x: Sequence) -> bool:
    if len(x) != p.n:
        raise ZbraidError("dimension mismatch")
    if all(v == 0 for v in x):
        return p.include_origin
    return any(cell_member(c, x) for c in p.cells)


def pl_union(p: PLSet, q: PLSet) -> PLSet:
    _same_dim(p, q)
    return plset(p.n, p.cells + q.cells, p.include_origin or q.include_origin)


def pl_intersect(p: PLSet, q: PLSet) -> PLSet:
    _same_dim(p, q)
    cells = []
    for a in p.cells:
        for b in q.cells:
            cells.append(make_cell(a.eqs + b.eqs, a.stricts + b.stricts, a.nonstricts + b.nonstricts))
    return plset(p.n, cells, p.include_origin and q.include_origin)


def pl_negate(p: PLSet) -> PLSet:
    """{-x : x in P}: flip the sign side of every inequality."""
    cells = [
        make_cell(c.eqs, [_neg(s) for s in c.stricts], [_neg(t) for t in c.nonstricts])
        for c in p.cells
    ]
    return plset(p.n, cells, p.include_origin)


def _neg(v: Vec) -> Vec:
    return tuple(-x for x in v)


def pl_complement(p: PLSet) -> PLSet:
    """Complement within Q^n minus the origin (origin flag comes back False;
    set it explicitly where the U^0 convention needs it)."""
    universe = [make_cell((), (), ())]
    current: list[Cell] = [c for c in universe if c is not None]
    for cell in p.cells:
        alternatives: list[tuple[tuple, tuple, tuple]] = []
        for e in cell.eqs:
            alternatives.append(((), (e,), ()))
            alternatives.append(((), (_neg(e),), ()))
        for s in cell.stricts:
            alternatives.append(((), (), (_neg(s),)))
        for t in cell.nonstricts:
            alternatives.append(((), (_neg(t),), ()))
        nxt = []
        for cur in current:
            for eqs, stricts, nonstricts in alternatives:
                cand = make_cell(cur.eqs + eqs, cur.stricts + stricts, cur.nonstricts + nonstricts)
                if cand is not None and cell_nonempty(cand, p.n):
                    nxt.append(cand)
        current = _subsume(list(dict.fromkeys(nxt)))
        if not current:
            break
    return plset(p.n, current, False)


def pl_difference(p: PLSet, q: PLSet) -> PLSet:
    out = pl_intersect(p, pl_complement(q))
    return PLSet(out.n, out.cells, p.include_origin and not q.include_origin)


def pl_boolean(op: str, p: PLSet, q: Optional[PLSet] = None) -> PLSet:
    """Dispatcher for the boolean algebra: union, intersect, complement, negate."""
    if op == "union":
        return pl_union(p, q)
    if op == "intersect":
        return pl_intersect(p, q)
    if op == "complement":
        return pl_complement(p)
    if op == "negate":
        return pl_negate(p)
    raise ZbraidError(f"unknown boolean op {op!r}")


def _same_dim(p: PLSet, q: PLSet) -> None:
    if p.n != q.n:
        raise ZbraidError("dimension mismatch")


# -- positivity sets ---------------------------------------------------------

def positivity_set(a: Mat) -> PLSet:
    """K(u(a)) = {x : x.a >_lex 0}: one cell per pivot position, the covector
    for (x.a)_k being column k of a."""
    check_unimodular(a)
    n = len(a)
    cols = [mat_col(a, j) for j in range(n)]
    cells = [make_cell(cols[:i], [cols[i]]) for i in range(n)]
    return plset(n, cells, False)


# -- double description ------------------------------------------------------

class VCone(NamedTuple):
    """Generator form of a closed cone: nonneg combinations of rays plus the
    span of the lineality vectors."""
    rays: tuple[Vec, ...]
    lineality: tuple[Vec, ...]


def dd_h_to_v(eqs: Sequence[Vec], nonstricts: Sequence[Vec], n: int) -> VCone:
    """Exact double description: V-form of {x : e.x = 0, a.x >= 0}.

    Lineality is cut first; in the pointed part every positive/negative ray
    pair is combined and the ray list is then filtered to the extreme rays of
    the intermediate cone (face dimension = lineality dimension + 1), which
    keeps the description minimal without floating point or LP calls.
    """
    lineality: list[Vec] = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays: list[Vec] = []
    cons = [(primitive_vector(e), True) for e in eqs if any(e)] + [
        (primitive_vector(a), False) for a in nonstricts if any(a)
    ]
    processed: list[tuple[Vec, bool]] = []
    for a, is_eq in cons:
        idx = next((i for i, l in enumerate(lineality) if _dot(a, l) != 0), None)
        if idx is not None:
            l0 = lineality.pop(idx)
            if _dot(a, l0) < 0:
                l0 = _neg(l0)
            al0 = _dot(a, l0)
            lineality = [
                primitive_vector(tuple(al0 * x - _dot(a, l) * y for x, y in zip(l, l0)))
                for l in lineality
            ]
            lineality = [l for l in lineality if any(l)]
            new_rays = []
            for vec in rays:
                av = _dot(a, vec)
                if av:
                    vec = primitive_vector(tuple(al0 * x - av * y for x, y in zip(vec, l0)))
                new_rays.append(vec)
            rays = new_rays
            if not is_eq:
                rays.append(l0)
        else:
            pos = [v for v in rays if _dot(a, v) > 0]
            zero = [v for v in rays if _dot(a, v) == 0]
            negs = [v for v in rays if _dot(a, v) < 0]
            combos = []
            for vp in pos:
                for vn in negs:
                    w = primitive_vector(tuple(_dot(a, vp) * x - _dot(a, vn) * y for x, y in zip(vn, vp)))
                    if any(w):
                        combos.append(w)
            rays = zero + combos + ([] if is_eq else pos)
        processed.append((a, is_eq))
        rays = _extreme_filter(list(dict.fromkeys(rays)), lineality, processed, n)
    out = VCone(tuple(sorted(rays)), tuple(sorted(lineality)))
    _assert_vcone_sound(out, cons)
    return out


def _extreme_filter(rays: list[Vec], lineality: list[Vec], processed, n: int) -> list[Vec]:
    """Keep exactly the extreme rays: the minimal face of the intermediate
    cone containing r must have dimension dim(lineality) + 1."""
    if not rays:
        return rays
    ldim = len(lineality)
    out = []
    for r in rays:
        tight = [a for a, is_eq in processed if is_eq or _dot(a, r) == 0]
        if n - _rank(tight) == ldim + 1:
            out.append(r)
    return out


def _assert_vcone_sound(v: VCone, cons) -> None:
    for a, is_eq in cons:
        for r in v.rays:
            val = _dot(a, r)
            assert val == 0 if is_eq else val >= 0, "double description produced an unsound ray"
        for l in v.lineality:
            assert _dot(a, l) == 0, "double description produced unsound lineality"


def vcone_polar(v: VCone, n: int) -> VCone:
    """Polar cone {a : a.r >= 0 for rays, a.l = 0 for lineality}."""
    return dd_h_to_v(v.lineality, v.rays, n)


_vform_cache: dict = {}


def clear_cone_caches() -> None:
    _vform_cache.clear()
    _relint_cache.clear()


def cell_closure_vform(cell: Cell, n: int) -> VCone:
    """V-form of the closure of a (nonempty) cell: stricts weaken to >=."""
    key = (cell, n)
    hit = _vform_cache.get(key)
    if hit is not None:
        return hit
    rows = list(cell.eqs) + list(cell.stricts) + list(cell.nonstricts)
    ineqs = list(cell.stricts) + list(cell.nonstricts)
    if _rank(rows) == len(rows):
        lin = null_space_int(rows, n) if rows else [tuple(int(i == j) for j in range(n)) for i in range(n)]
        rays = []
        for k, s in enumerate(ineqs):
            rays.append(_dual_ray(cell.eqs, ineqs, k, n))
        out = VCone(tuple(sorted(rays)), tuple(sorted(lin)))
        _assert_vcone_sound(out, [(e, True) for e in cell.eqs] + [(s, False) for s in ineqs])
    else:
        out = dd_h_to_v(cell.eqs, ineqs, n)
    _vform_cache[key] = out
    return out


def _rank(rows: Sequence[Vec]) -> int:
    rank = 0
    used: list[tuple[int, list]] = []  # (lead column, reduced row)
    for r in rows:
        row = list(r)
        for lead, piv in used:
            if row[lead]:
                f1, f2 = piv[lead], row[lead]
                row = [f1 * x - f2 * y for x, y in zip(row, piv)]
        head = next((c for c, x in enumerate(row) if x), None)
        if head is not None:
            import math

            g = 0
            for x in row:
                g = math.gcd(g, x)
                if g == 1:
                    break
            if g > 1:
                row = [x // g for x in row]
            used.append((head, row))
            rank += 1
    return rank


def _dual_ray(eqs: Sequence[Vec], ineqs: Sequence[Vec], k: int, n: int) -> Vec:
    """Solve e.x = 0, s_j.x = delta_jk over the independent system."""
    rows = list(eqs) + list(ineqs)
    target = [0] * len(eqs) + [int(j == k) for j in range(len(ineqs))]
    extra = null_space_int(rows, n)
    full = [list(r) for r in rows] + [list(v) for v in extra]
    target += [0] * len(extra)
    inv = rat_inv(tuple(tuple(Fraction(x) for x in r) for r in full))
    x = [sum(inv[i][j] * target[j] for j in range(n)) for i in range(n)]
    # inv is the inverse of the row matrix A with A x^T = target, so x = inv . target
    return primitive_vector(x)


_relint_cache: dict = {}


def vform_to_relint_cell(v: VCone, n: int) -> Cell:
    """Constraint form of relint(cone(v)): polar rays become strict unless
    implicit (then equalities), polar lineality becomes equalities."""
    key = (v, n)
    hit = _relint_cache.get(key)
    if hit is not None:
        return hit
    out = _vform_to_relint_cell_raw(v, n)
    _relint_cache[key] = out
    return out


def _vform_to_relint_cell_raw(v: VCone, n: int) -> Cell:
    polar = vcone_polar(v, n)
    eqs = list(polar.lineality)
    stricts = []
    for a in polar.rays:
        implicit = all(_dot(a, r) == 0 for r in v.rays) and all(_dot(a, l) == 0 for l in v.lineality)
        if implicit:
            eqs.append(a)
        else:
            stricts.append(a)
    cell = make_cell(eqs, stricts)
    assert cell is not None
    return cell


# -- Minkowski sums ----------------------------------------------------------

def minkowski_sum(p: PLSet, q: PLSet) -> PLSet:
    """Exact Minkowski sum of PL sets whose cells are in relint form, using
    relint(C) + relint(D) = relint(C + D) on closures in V-form. The origin
    flag follows the U^0 convention: a set containing 0 contributes its
    partner's cells unchanged."""
    _same_dim(p, q)
    n = p.n
    pc = [c for c in p.cells if cell_nonempty(c, n)]
    qc = [c for c in q.cells if cell_nonempty(c, n)]
    for c in pc + qc:
        if c.nonstricts:
            raise DegenerateCellError("degenerate cell")
    cells: list[Optional[Cell]] = []
    for a in pc:
        va = cell_closure_vform(a, n)
        for b in qc:
            vb = cell_closure_vform(b, n)
            vsum = VCone(tuple(sorted(set(va.rays + vb.rays))), tuple(sorted(set(va.lineality + vb.lineality))))
            cells.append(vform_to_relint_cell(vsum, n))
    if q.include_origin:
        cells.extend(pc)
    if p.include_origin:
        cells.extend(qc)
    return plset(n, cells, p.include_origin and q.include_origin)


# -- recovery of a lexicographic matrix --------------------------------------

def dominant_functional(cells: Sequence[Cell], n: int) -> Vec:
    """The unique primitive f with {f >= 0} equal to the closure of the union
    of the full-dimensional cells' conical hull (error if there is no single
    dominant halfspace)."""
    gens: list[Vec] = []
    for c in cells:
        v = cell_closure_vform(c, n)
        if _rank(list(v.rays) + list(v.lineality)) < n:
            continue
        gens.extend(v.rays)
        gens.extend(v.lineality)
        gens.extend(_neg(l) for l in v.lineality)
    if not gens:
        raise NotLexicographicError("input not lexicographic")
    polar = dd_h_to_v((), tuple(set(gens)), n)
    if polar.lineality or len(polar.rays) != 1:
        raise NotLexicographicError("input not lexicographic")
    return polar.rays[0]


def restrict_cells(cells: Sequence[Cell], basis: Sequence[Vec]) -> list[Cell]:
    """Pull cells back along x = y.B for the rows B spanning a subspace."""
    out = []
    for c in cells:
        cand = make_cell(
            [_pullback(basis, e) for e in c.eqs],
            [_pullback(basis, s) for s in c.stricts],
            [_pullback(basis, t) for t in c.nonstricts],
        )
        if cand is not None and cell_nonempty(cand, len(basis)):
            out.append(cand)
    return out


def _pullback(basis: Sequence[Vec], covector: Vec) -> tuple:
    return tuple(_dot(b, covector) for b in basis)


def subspace_right_inverse(basis: Sequence[Vec], normal: Vec, n: int):
    """Columns C with B.C = I for B the basis rows of ker(normal)."""
    full = [list(b) for b in basis] + [list(normal)]
    inv = rat_inv(tuple(tuple(Fraction(x) for x in r) for r in full))
    # Column k of C is column k of inv (solves B.c_k = e_k, normal.c_k = 0).
    return [tuple(inv[i][k] for i in range(n)) for k in range(len(basis))]


def recover_lex_matrix(p: PLSet):
    """Rational g with P = {x : x.g >_lex 0}, assuming P is the positivity set
    of a lexicographic ordering. Column 1 is the dominant functional of the
    conical hull of the full-dimensional cells; recurse on its kernel."""
    n = p.n
    cells = [c for c in p.cells if cell_nonempty(c, n)]
    cols = _recover_columns(cells, n)
    return tuple(tuple(cols[k][i] for k in range(n)) for i in range(n))


def _recover_columns(cells: Sequence[Cell], dim: int) -> list[tuple]:
    if dim == 0:
        return []
    if not cells:
        raise NotLexicographicError("input not lexicographic")
    f = dominant_functional(cells, dim)
    if dim == 1:
        return [(Fraction(f[0]),)]
    basis = null_space_int([f], dim)
    sub = restrict_cells(cells, basis)
    c_right = subspace_right_inverse(basis, f, dim)
    sub_cols = _recover_columns(sub, dim - 1)
    cols = [tuple(Fraction(x) for x in f)]
    for col in sub_cols:
        cols.append(tuple(sum(c_right[m][i] * col[m] for m in range(dim - 1)) for i in range(dim)))
    return cols


# -- integral factorization --------------------------------------------------

def rat_to_int_factor(g) -> tuple[Mat, tuple]:
    """Factor invertible rational g as x.y with x in GL(n,Z) and y upper
    triangular with positive diagonal, by the first-column induction: clear
    the Z-module generator of column 1 with a unimodular left factor, recurse."""
    n = len(g)
    gf = tuple(tuple(Fraction(x) for x in row) for row in g)
    x, y = _factor(gf, n)
    return x, y


def _factor(g, n: int):
    from .matrices import identity, mat_inv, mat_mul

    if n == 0:
        return (), ()
    col = [g[i][0] for i in range(n)]
    if all(x == 0 for x in col):
        raise ZbraidError("singular matrix")
    lcm = 1
    for x in col:
        lcm = lcm * x.denominator // _gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in col]
    g0 = 0
    for v in ints:
        g0 = _gcd(g0, v)
    prim = [v // g0 for v in ints]
    u = _unimodular_to_e1(prim, n)
    a = Fraction(g0, lcm)
    ug = mat_mul(u, g)
    assert ug[0][0] == a and all(ug[i][0] == 0 for i in range(1, n))
    sub = tuple(tuple(ug[i][j] for j in range(1, n)) for i in range(1, n))
    x1, y1 = _factor(sub, n - 1)
    xblock = tuple(
        tuple(1 if (i == 0 and j == 0) else (x1[i - 1][j - 1] if i and j else 0) for j in range(n))
        for i in range(n)
    )
    y = tuple(
        tuple(
            a if (i == 0 and j == 0) else (ug[0][j] if i == 0 else (y1[i - 1][j - 1] if j else Fraction(0)))
            for j in range(n)
        )
        for i in range(n)
    )
    x = mat_mul(mat_inv(u), xblock)
    return x, y


def _gcd(a: int, b: int) -> int:
    import math

    return math.gcd(a, b)


def _unimodular_to_e1(prim: Sequence[int], n: int) -> Mat:
    """Integer unimodular U with U.prim = e1 for a primitive column prim."""
    from .matrices import _egcd, identity

    u = [list(r) for r in identity(n)]
    v = list(prim)
    for i in range(1, n):
        if v[i] == 0:
            continue
        if v[0] == 0:
            u[0], u[i] = u[i], [-x for x in u[0]]
            v[0], v[i] = v[i], 0
            continue
        p, q = _egcd(v[0], v[i])
        gg = p * v[0] + q * v[i]
        r0 = [p * x + q * y for x, y in zip(u[0], u[i])]
        ri = [-(v[i] // gg) * x + (v[0] // gg) * y for x, y in zip(u[0], u[i])]
        u[0], u[i] = r0, ri
        v[0], v[i] = gg, 0
    if v[0] == -1:
        u[0] = [-x for x in u[0]]
        v[0] = 1
    assert v[0] == 1 and all(x == 0 for x in v[1:])
    return tuple(tuple(r) for r in u)
