"""
Exact integer and rational matrix algebra for GL(n,Z) and GL(n,Q).

Matrices are tuples of tuples, row-major, so they are hashable and can key
caches. A group element g acts on integer row vectors on the right:
e_i g = sum_j g[i][j] e_j, and x.g is computed by row_action.

The subgroup H of GL(n,Z) preserving the standard lexicographic order is the
group of upper triangular integer matrices with unit diagonal; coset_reduce
computes the canonical representative of gH by reducing each column to its
canonical residue modulo the integer span of the earlier columns (Hermite
basis residues). No floating point anywhere.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Sequence

Vec = tuple[int, ...]
Mat = tuple[tuple[int, ...], ...]
RatVec = tuple[Fraction, ...]
RatMat = tuple[tuple[Fraction, ...], ...]


class ZbraidError(ValueError):
    """Base class for all domain errors."""


class NotUnimodularError(ZbraidError):
    pass


class SingularMatrixError(ZbraidError):
    pass


def ext_gcd_bezout(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, c, d) with a*d - b*c = g = gcd(a, b) > 0.

    Canonical choice: among all valid (c, d), |c| is minimal with ties broken
    by c >= 0; when a = 0 (d is then unconstrained) |d| is minimal, d >= 0.
    """
    if a == 0 and b == 0:
        raise ZbraidError("gcd undefined")
    g = math.gcd(a, b)
    if a == 0:
        # -b*c = g forces c = -sign(b); d free.
        return g, -_sign(b), 0
    if b == 0:
        # a*d = g forces d = sign(a); c free, minimal |c| is 0.
        return g, 0, _sign(a)
    # a*d0 + b*(-c0) = g from the standard extended gcd.
    d0, negc0 = _egcd(a, b)
    c0 = -negc0
    # General solution: (c, d) = (c0 + t*(a//g), d0 + t*(b//g)); pick the
    # residue of c modulo |a/g| with minimal |c|, ties to c >= 0.
    m = abs(a // g)
    r = c0 % m
    c = r - m if r > m - r else r
    d = (g + b * c) // a
    assert a * d - b * c == g
    return g, c, d


def _egcd(a: int, b: int) -> tuple[int, int]:
    """Return (x, y) with a*x + b*y = gcd(a, b) (some solution)."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_x, old_y = -old_x, -old_y
    return old_x, old_y


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def neg(m: Mat) -> Mat:
    return tuple(tuple(-x for x in row) for row in m)


def minus_identity(n: int) -> Mat:
    return neg(identity(n))


def transpose(m) -> Mat:
    return tuple(zip(*m))


def mat_mul(a, b):
    """Matrix product; works for int and Fraction entries."""
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def row_action(x: Sequence, g) -> tuple:
    """x . g for a row vector x (the right action of G on Z^n)."""
    return tuple(sum(x[i] * g[i][j] for i in range(len(x))) for j in range(len(g[0])))


def mat_col(g, j: int) -> tuple:
    return tuple(row[j] for row in g)


def det(m):
    """Exact determinant (Bareiss); integer matrices give an int."""
    n = len(m)
    integral = all(isinstance(x, int) for row in m for x in row)
    a = [list(row) for row in m] if integral else [[Fraction(x) for x in row] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num // prev if integral else num / prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(m) -> bool:
    return len(m) == len(m[0]) and all(isinstance(x, int) for row in m for x in row) and det(m) in (1, -1)


def check_unimodular(m: Mat) -> Mat:
    if not is_unimodular(m):
        raise NotUnimodularError(f"matrix is not in GL(n,Z): {format_matrix(m)}")
    return m


def mat_inv(m: Mat) -> Mat:
    """Inverse of a unimodular integer matrix (integral, via the adjugate)."""
    n = len(m)
    if n == 2:
        (a, b), (c, d) = m
        dt = a * d - b * c
        if dt not in (1, -1):
            raise NotUnimodularError("inverse requested for a non-unimodular integer matrix")
        return ((d * dt, -b * dt), (-c * dt, a * dt))
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = m
        dt = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
        if dt not in (1, -1):
            raise NotUnimodularError("inverse requested for a non-unimodular integer matrix")
        adj = (
            (e * i - f * h, c * h - b * i, b * f - c * e),
            (f * g - d * i, a * i - c * g, c * d - a * f),
            (d * h - e * g, b * g - a * h, a * e - b * d),
        )
        return tuple(tuple(x * dt for x in row) for row in adj)
    d = det(m)
    if d not in (1, -1):
        raise NotUnimodularError("inverse requested for a non-unimodular integer matrix")
    if n == 1:
        return ((d,),)
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = [row[:j] + row[j + 1 :] for k, row in enumerate(m) if k != i]
            cof[i][j] = (-1) ** (i + j) * det(tuple(tuple(r) for r in sub))
    adj = transpose(tuple(tuple(r) for r in cof))
    return tuple(tuple(x * d for x in row) for row in adj)


def rat_inv(m) -> RatMat:
    """Inverse of an invertible rational matrix by Gauss-Jordan."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def rat_solve_right(m, target) -> RatVec:
    """Solve v . m = target for the row vector v (m invertible)."""
    inv = rat_inv(m)
    return tuple(sum(Fraction(target[i]) * inv[i][j] for i in range(len(target))) for j in range(len(inv[0])))


def is_upper_unitriangular(m) -> bool:
    n = len(m)
    for i in range(n):
        if m[i][i] != 1:
            return False
        for j in range(i):
            if m[i][j] != 0:
                return False
    return True


def primitive_vector(v: Sequence) -> Vec:
    """Scale a rational vector to a primitive integer vector, same direction."""
    ints = None
    if all(type(x) is int for x in v):
        ints = list(v)
    else:
        fracs = [Fraction(x) for x in v]
        lcm = 1
        for x in fracs:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        ints = [int(x * lcm) for x in fracs]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
        if g == 1:
            return tuple(ints)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def row_hnf(rows: Sequence[Sequence[int]]) -> list[Vec]:
    """Canonical row-style Hermite normal form basis of the lattice spanned
    by the given integer rows. Pivots are positive, entries above a pivot lie
    in [0, pivot); zero rows are dropped."""
    work = [list(r) for r in rows if any(r)]
    if not work:
        return []
    ncols = len(rows[0])
    basis: list[list[int]] = []
    col = 0
    while col < ncols and work:
        nz = [r for r in work if r[col] != 0]
        rest = [r for r in work if r[col] == 0]
        if not nz:
            col += 1
            continue
        # Combine rows until one nonzero entry remains in this column.
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            a, b = nz[0], nz[1]
            q = b[col] // a[col]
            nz[1] = [x - q * y for x, y in zip(b, a)]
            if all(v == 0 for v in nz[1]):
                nz.pop(1)
            elif nz[1][col] == 0:
                rest.append(nz.pop(1))
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        work = rest
        col += 1
    # Reduce entries above each pivot.
    for i in range(len(basis) - 1, -1, -1):
        pcol = next(c for c, v in enumerate(basis[i]) if v)
        p = basis[i][pcol]
        for j in range(i):
            q = basis[j][pcol] // p
            if q:
                basis[j] = [x - q * y for x, y in zip(basis[j], basis[i])]
    return [tuple(r) for r in basis]


def lattice_residue(v: Sequence[int], hnf_basis: Sequence[Vec]) -> Vec:
    """Canonical representative of v modulo the lattice with the given HNF basis."""
    w = list(v)
    for row in hnf_basis:
        pcol = next(c for c, x in enumerate(row) if x)
        q = w[pcol] // row[pcol]
        if q:
            w = [x - q * y for x, y in zip(w, row)]
    return tuple(w)


_coset_cache: dict = {}


def coset_reduce(g: Mat) -> Mat:
    """Canonical representative of gH, H = upper unitriangular integer matrices.

    Right multiplication by H adds integer multiples of earlier columns to
    later columns, so column j is reduced to its canonical residue modulo the
    integer span of columns 1..j-1. Idempotent; constant on right H-orbits.
    """
    hit = _coset_cache.get(g)
    if hit is not None:
        return hit
    check_unimodular(g)
    n = len(g)
    cols = [list(mat_col(g, j)) for j in range(n)]
    for j in range(1, n):
        basis = row_hnf([tuple(c) for c in cols[:j]])
        cols[j] = list(lattice_residue(cols[j], basis))
    out = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    _coset_cache[g] = out
    return out


def clear_coset_cache() -> None:
    _coset_cache.clear()


def in_H(g: Mat) -> bool:
    """Membership in the lex-order-preserving subgroup H (derived structural
    test: integer, upper triangular, unit diagonal)."""
    return all(isinstance(x, int) for row in g for x in row) and is_upper_unitriangular(g)


# -- text / JSON formats -----------------------------------------------------

def parse_matrix(text: str, expect_group: bool = False) -> Mat:
    """Parse `-1 0; 0 1` or a JSON array-of-arrays into an integer matrix.

    Rejects non-square input; with expect_group also rejects non-unimodular.
    """
    text = text.strip()
    if text.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ZbraidError(f"bad matrix JSON: {e}") from e
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise ZbraidError("matrix JSON must be an array of arrays")
        rows = []
        for r in data:
            row = []
            for x in r:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise ZbraidError(f"bad matrix entry: {x!r}")
                row.append(x)
            rows.append(tuple(row))
        m = tuple(rows)
    else:
        rows = []
        for chunk in text.split(";"):
            parts = chunk.split()
            if not parts:
                raise ZbraidError("empty matrix row")
            try:
                rows.append(tuple(int(p) for p in parts))
            except ValueError:
                bad = next(p for p in parts if not _is_int_token(p))
                raise ZbraidError(f"bad matrix entry: {bad!r}") from None
        m = tuple(rows)
    n = len(m)
    if n == 0 or any(len(r) != n for r in m):
        raise ZbraidError("matrix must be square")
    if expect_group:
        check_unimodular(m)
    return m


def _is_int_token(tok: str) -> bool:
    try:
        int(tok)
        return True
    except ValueError:
        return False


def format_matrix(m) -> str:
    return "; ".join(" ".join(str(x) for x in row) for row in m)


def matrix_to_json(m) -> list[list[int]]:
    return [list(row) for row in m]
