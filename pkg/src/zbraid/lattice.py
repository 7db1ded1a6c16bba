"""
The lattice (G/H, <=) of lexicographic orderings on Z^n: canonical cosets,
the order, joins and meets.

Cosets are identified with orderings via u(a): 0 <_{u(a)} x iff 0 < x.a, so
aH <= bH iff a ≲ b. The join of u(a) and u(b) over the standard order l is
computed from U0(s) = U0(u(a)) + U0(u(b)) (Minkowski sum of the difference
sets, the lattice-closure equation). The default algorithm extracts the
join's matrix column by column from T = cl(U(s)) directly: T is either
lower-dimensional (the dominant functional of s equals the base's) or the
wedge {f_l >= 0, f_s <= 0}, so f_s falls out of one polar computation; then
restrict U(s) to ker f_s and recurse. join_reference follows the literal
assembly K(s) = (K(l) \\ U(s)) ∪ -U(s) and recover_lex_matrix instead; the
two must agree and are cross-checked in the tests.

Meets are joins of the reversed orderings: reversal (right multiplication by
w0 = -I) is an anti-automorphism of the lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cones import (
    Cell,
    NotLexicographicError,
    PLSet,
    cell_closure_vform,
    dd_h_to_v,
    minkowski_sum,
    pl_difference,
    pl_intersect,
    pl_negate,
    pl_union,
    positivity_set,
    rat_to_int_factor,
    recover_lex_matrix,
    restrict_cells,
    subspace_right_inverse,
)
from .feasibility import null_space_int
from .lexgerm import precedes
from .matrices import Mat, ZbraidError, check_unimodular, coset_reduce, identity, minus_identity, neg, primitive_vector


class JoinRecoveryError(ZbraidError):
    pass


@dataclass(frozen=True, order=True)
class Coset:
    n: int
    rep: Mat


def coset(g: Mat) -> Coset:
    return Coset(len(g), coset_reduce(g))


def bottom(n: int) -> Coset:
    return Coset(n, identity(n))


def top(n: int) -> Coset:
    return Coset(n, coset_reduce(minus_identity(n)))


def leq(a: Coset, b: Coset) -> bool:
    if a.n != b.n:
        raise ZbraidError("dimension mismatch")
    return precedes(a.rep, b.rep)


_u0_cache: dict = {}


def u0_set(a: Mat) -> PLSet:
    """U0 of u(a) over the standard order: {0} ∪ (K(l) \\ K(u(a))), computed
    as K(identity) ∩ -K(u(a)) by trichotomy (stays in relint form)."""
    hit = _u0_cache.get(a)
    if hit is not None:
        return hit
    n = len(a)
    inter = pl_intersect(positivity_set(identity(n)), pl_negate(positivity_set(a)))
    out = PLSet(n, inter.cells, True)
    _u0_cache[a] = out
    return out


_join_cache: dict = {}
_meet_cache: dict = {}


def clear_lattice_caches() -> None:
    _join_cache.clear()
    _meet_cache.clear()
    _u0_cache.clear()


def join(a: Coset, b: Coset) -> Coset:
    """Least upper bound in (G/H, <=)."""
    if a.n != b.n:
        raise ZbraidError("dimension mismatch")
    key = (a.rep, b.rep)
    hit = _join_cache.get(key)
    if hit is not None:
        return hit
    g = join_order_matrix(a.rep, b.rep)
    x, _ = rat_to_int_factor(g)
    out = coset(x)
    if not (leq(a, out) and leq(b, out)):
        raise JoinRecoveryError("join recovery failed")
    _join_cache[key] = out
    return out


def meet(a: Coset, b: Coset) -> Coset:
    """Greatest lower bound, via the reversal anti-automorphism: the meet is
    the reversal of the join of the reversals."""
    if a.n != b.n:
        raise ZbraidError("dimension mismatch")
    key = (a.rep, b.rep)
    hit = _meet_cache.get(key)
    if hit is not None:
        return hit
    j = join(coset(neg(a.rep)), coset(neg(b.rep)))
    out = coset(neg(j.rep))
    if not (leq(out, a) and leq(out, b)):
        raise JoinRecoveryError("join recovery failed")
    _meet_cache[key] = out
    return out


def join_order_matrix(a: Mat, b: Mat):
    """Rational g with {x : x.g >_lex 0} the positivity set of u(a) ∨ u(b)."""
    check_unimodular(a)
    check_unimodular(b)
    n = len(a)
    summed = minkowski_sum(u0_set(a), u0_set(b))
    ell = [tuple(int(t == i) for t in range(n)) for i in range(n)]
    cols = _wedge_columns(list(summed.cells), ell, n)
    return tuple(tuple(cols[k][i] for k in range(n)) for i in range(n))


def _wedge_columns(cells: list[Cell], ell: list[tuple[int, ...]], dim: int) -> list[tuple]:
    """Columns (in the current coordinates) of the join order's matrix, from
    the cells of U(s) and the pullback list of the base order's functionals."""
    if dim == 0:
        return []
    f_ell = next((e for e in ell if any(e)), None)
    if f_ell is None:
        raise JoinRecoveryError("join recovery failed")
    f = _wedge_dominant(cells, f_ell, dim)
    if dim == 1:
        return [(Fraction(f[0]),)]
    basis = null_space_int([f], dim)
    sub_cells = restrict_cells(cells, basis)
    sub_ell = [p for p in (_pullback(basis, e) for e in ell) if any(p)]
    c_right = subspace_right_inverse(basis, f, dim)
    sub_cols = _wedge_columns(sub_cells, sub_ell, dim - 1)
    cols = [tuple(Fraction(v) for v in f)]
    for col in sub_cols:
        cols.append(tuple(sum(c_right[m][i] * col[m] for m in range(dim - 1)) for i in range(dim)))
    return cols


def _pullback(basis, covector):
    return tuple(sum(b[i] * covector[i] for i in range(len(covector))) for b in basis)


def _wedge_dominant(cells: list[Cell], f_ell, dim: int):
    """Dominant functional f_s of the join order at this level. T = cl(U(s))
    is empty or lower-dimensional iff f_s is the base functional; otherwise
    T is the wedge {f_ell >= 0} ∩ {f_s <= 0} and f_s is read off the polar."""
    gens: list = []
    for c in cells:
        v = cell_closure_vform(c, dim)
        gens.extend(v.rays)
        gens.extend(v.lineality)
        gens.extend(tuple(-t for t in l) for l in v.lineality)
    gens = sorted(set(gens))
    if not gens or _gen_rank(gens) < dim:
        return primitive_vector(f_ell)
    polar = dd_h_to_v((), gens, dim)
    if polar.lineality:
        raise JoinRecoveryError("join recovery failed")
    fl = primitive_vector(f_ell)
    rays = list(polar.rays)
    if len(rays) == 1:
        if rays[0] != fl:
            raise JoinRecoveryError("join recovery failed")
        return tuple(-v for v in fl)
    if len(rays) == 2 and fl in rays:
        other = rays[0] if rays[1] == fl else rays[1]
        return tuple(-v for v in other)
    raise JoinRecoveryError("join recovery failed")


def _gen_rank(gens) -> int:
    from .cones import _rank

    return _rank(list(gens))


# -- literal spec pipeline (reference implementation) ------------------------

def join_reference(a: Coset, b: Coset) -> Coset:
    """The assembly K(s) = (K(l) \\ U(s)) ∪ -U(s) followed by
    recover_lex_matrix; kept as the reference algorithm and cross-checked
    against join()."""
    n = a.n
    summed = minkowski_sum(u0_set(a.rep), u0_set(b.rep))
    u_s = PLSet(n, summed.cells, False)
    k_l = positivity_set(identity(n))
    k_s = pl_union(pl_difference(k_l, u_s), pl_negate(u_s))
    try:
        g = recover_lex_matrix(k_s)
    except NotLexicographicError as e:
        raise JoinRecoveryError("join recovery failed") from e
    x, _ = rat_to_int_factor(g)
    out = coset(x)
    if not (leq(a, out) and leq(b, out)):
        raise JoinRecoveryError("join recovery failed")
    return out


def meet_reference(a: Coset, b: Coset) -> Coset:
    j = join_reference(coset(neg(a.rep)), coset(neg(b.rep)))
    out = coset(neg(j.rep))
    if not (leq(out, a) and leq(out, b)):
        raise JoinRecoveryError("join recovery failed")
    return out


def meet_fast(a: Coset, b: Coset) -> Coset:
    """meet() with the lattice-law shortcut meet(A,B) = A when A <= B; used
    on the normal-form hot path (semantically invisible, cross-checked)."""
    if leq(a, b):
        return a
    if leq(b, a):
        return b
    return meet(a, b)
