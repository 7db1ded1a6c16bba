"""
The order oracle on G = GL(n,Z): lex signs, membership in the
order-preserving subgroup H, the preorder a ≲ c (a precedes c), the partial
product a*b, and the sign-flip sets N and M.

precedes(a, c) is decided exactly: a ≲ c fails iff some x has
lex_sign(x) = +1, lex_sign(x.a) = -1, lex_sign(x.c) = +1, and such x exist
iff one of n^3 pivot-triple systems {x_1..x_{i-1}=0, (xa)_1..(xa)_{j-1}=0,
(xc)_1..(xc)_{k-1}=0; x_i>0, -(xa)_j>0, (xc)_k>0} is feasible over Q
(a rational witness scales to an integer one). Witnesses are returned as
primitive integer vectors.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .cones import PLSet, make_cell, plset
from .feasibility import linear_feasible
from .matrices import Mat, check_unimodular, in_H, mat_col, mat_mul, mat_inv, minus_identity, row_action
from .matrices import identity as identity_mat

_precedes_cache: dict = {}


def clear_precedes_cache() -> None:
    _precedes_cache.clear()


def lex_sign(x: Sequence) -> int:
    for v in x:
        if v > 0:
            return 1
        if v < 0:
            return -1
    return 0


def is_in_H(g: Mat) -> bool:
    """True iff g preserves the standard lex order (upper triangular with
    unit diagonal; unimodularity forces the diagonal entries to 1)."""
    check_unimodular(g)
    return in_H(g)


def _is_witness(a: Mat, c: Mat, x) -> bool:
    return lex_sign(x) == 1 and lex_sign(row_action(x, a)) == -1 and lex_sign(row_action(x, c)) == 1


def _quick_candidates(n: int):
    out = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        out.append(tuple(e))
    for i in range(n):
        for j in range(n):
            if i != j:
                for s in (1, -1):
                    v = [0] * n
                    v[i], v[j] = 1, s
                    out.append(tuple(v))
    return out


_quick_cache: dict[int, list] = {}


def precedes_witness(a: Mat, c: Mat) -> Optional[tuple[int, ...]]:
    """None if a ≲ c; otherwise a primitive integer x with x > 0 > x.a and
    x.c > 0, refuting the order relation. Decided exactly by the pivot-triple
    systems; a cheap candidate scan usually finds refutations first."""
    n = len(a)
    if len(c) != n:
        raise ValueError("dimension mismatch")
    if a == c or c == minus_identity(n) or a == identity_mat(n):
        return None
    cands = _quick_cache.get(n)
    if cands is None:
        cands = _quick_candidates(n)
        _quick_cache[n] = cands
    for x in cands:
        if _is_witness(a, c, x):
            return x
    unit = [tuple(int(t == i) for t in range(n)) for i in range(n)]
    acols = [mat_col(a, j) for j in range(n)]
    ccols = [mat_col(c, j) for j in range(n)]
    neg_acols = [tuple(-v for v in col) for col in acols]
    for i in range(n):
        # x_1 .. x_{i-1} = 0: work in the coordinates i..n-1 directly
        m = n - i
        acols_s = [v[i:] for v in acols]
        ccols_s = [v[i:] for v in ccols]
        neg_s = [v[i:] for v in neg_acols]
        e_i = unit[i][i:]
        for j in range(n):
            for k in range(n):
                eqs = acols_s[:j] + ccols_s[:k]
                stricts = [e_i, neg_s[j], ccols_s[k]]
                feasible, witness = linear_feasible(eqs, stricts, (), m, cache=False)
                if feasible:
                    full = (0,) * i + tuple(witness)
                    assert _is_witness(a, c, full)
                    return full
    return None


def precedes(a: Mat, c: Mat) -> bool:
    """The preorder a ≲ c on G, i.e. aH ≤ cH in the lattice of lexicographic
    orders based at the standard one. Invariant under right H-multiplication
    of either argument."""
    key = (a, c)
    hit = _precedes_cache.get(key)
    if hit is None:
        hit = precedes_witness(a, c) is None
        _precedes_cache[key] = hit
    return hit


def star(a: Mat, b: Mat) -> Optional[Mat]:
    """a*b = ab when a ≲ ab, else None (undefined is a value, not an error)."""
    c = mat_mul(a, b)
    return c if precedes(a, c) else None


def in_M(g: Mat, x: Sequence) -> bool:
    """x > 0 > x.g in the standard lex order."""
    return lex_sign(x) == 1 and lex_sign(row_action(x, g)) == -1


def in_N(g: Mat, x: Sequence) -> bool:
    """Nonzero x whose lex sign flips under g."""
    s = lex_sign(x)
    return s != 0 and lex_sign(row_action(x, g)) == -s


def m_set(g: Mat) -> PLSet:
    """M(g) = {x : x > 0 > x.g} as a PL set (cross-check oracle for precedes:
    a ≲ c iff M(a) is contained in M(c))."""
    n = len(g)
    unit = [tuple(int(t == i) for t in range(n)) for i in range(n)]
    cols = [mat_col(g, j) for j in range(n)]
    cells = []
    for i in range(n):
        for j in range(n):
            cells.append(
                make_cell(unit[:i] + cols[:j], [unit[i], tuple(-v for v in cols[j])])
            )
    return plset(n, cells, False)


def tau(a: Mat) -> Mat:
    """Conjugation by w0 = -I, which is central: the identity map."""
    return a


def w0(n: int) -> Mat:
    return minus_identity(n)


def inv_w0_times(a: Mat) -> Mat:
    """a^{-1} w0 (the right complement appearing throughout section 4)."""
    return tuple(tuple(-v for v in row) for row in mat_inv(a))
