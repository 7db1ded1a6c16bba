"""
Exact feasibility of small linear systems over Q by Fourier-Motzkin.

The one decision this package ever needs is: does there exist x in Q^n with
e.x = 0 for all equality covectors, s.x > 0 for all strict covectors and
t.x >= 0 for all nonstrict covectors? Homogeneity makes the strict system
scaling-equivalent to s.y >= 1, so everything reduces to a system of >=
constraints decided by exact variable elimination. Dimensions here are tiny
(n <= 5), so Fourier-Motzkin is the right tool; a witness is reconstructed by
back substitution when the system is feasible.

All arithmetic is on Python ints (elimination) and Fractions (witnesses).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence

from .matrices import ZbraidError, primitive_vector

Row = tuple[tuple[int, ...], int]  # (coefficients, rhs) meaning coeffs . y >= rhs

_cache: dict = {}
_bool_cache: dict = {}


def clear_caches() -> None:
    _cache.clear()
    _bool_cache.clear()


def null_space_int(rows: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Primitive integer basis of {x : r . x = 0 for all rows r}.

    Fraction-free integer elimination with full reduction (every pivot row is
    zero at the other pivot columns), gcd-normalized to keep entries small.
    """
    pivots: dict[int, list[int]] = {}
    for r in rows:
        if not any(r):
            continue
        row = list(r)
        for col, piv in pivots.items():
            if row[col]:
                f1, f2 = piv[col], row[col]
                row = [f1 * x - f2 * y for x, y in zip(row, piv)]
        lead = next((c for c, x in enumerate(row) if x), None)
        if lead is None:
            continue
        row = _gcd_reduce(row)
        for col, piv in pivots.items():
            if piv[lead]:
                f1, f2 = row[lead], piv[lead]
                pivots[col] = _gcd_reduce([f1 * x - f2 * y for x, y in zip(piv, row)])
        pivots[lead] = row
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        scale = 1
        for col, piv in pivots.items():
            scale = scale * abs(piv[col]) // math.gcd(scale, piv[col])
        v = [0] * n
        v[f] = scale
        for col, piv in pivots.items():
            v[col] = -piv[f] * scale // piv[col]
        basis.append(primitive_vector(v))
    return basis


def _gcd_reduce(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        g = math.gcd(g, x)
        if g == 1:
            return row
    return row if g <= 1 else [x // g for x in row]


def _eliminate(rows: list[Row], nvars: int):
    """Fourier-Motzkin elimination. Returns (feasible, stack) where stack holds
    per-variable bound rows for witness reconstruction."""
    rows = list(rows)
    stack = []
    order = list(range(nvars))
    for _ in range(nvars):
        # Quick contradiction scan on variable-free rows.
        live = []
        for coeffs, rhs in rows:
            if any(coeffs):
                live.append((coeffs, rhs))
            elif rhs > 0:
                return False, stack
        rows = _dedup(live)
        if not rows:
            break
        # Pick the remaining variable with the cheapest pos*neg product.
        def cost(k: int) -> int:
            pos = sum(1 for c, _ in rows if c[k] > 0)
            neg = sum(1 for c, _ in rows if c[k] < 0)
            if pos == 0 and neg == 0:
                return 1 << 30
            return pos * neg - pos - neg
        k = min(order, key=cost)
        order.remove(k)
        pos = [(c, r) for c, r in rows if c[k] > 0]
        negs = [(c, r) for c, r in rows if c[k] < 0]
        zero = [(c, r) for c, r in rows if c[k] == 0]
        stack.append((k, pos, negs))
        new_rows = list(zero)
        for cp, rp in pos:
            for cn, rn in negs:
                alpha, beta = cp[k], -cn[k]
                coeffs = tuple(beta * x + alpha * y for x, y in zip(cp, cn))
                new_rows.append((coeffs, beta * rp + alpha * rn))
        rows = new_rows
    for coeffs, rhs in rows:
        if not any(coeffs) and rhs > 0:
            return False, stack
    return True, stack


def _dedup(rows: list[Row]) -> list[Row]:
    out = {}
    for coeffs, rhs in rows:
        g = 0
        for x in coeffs:
            g = math.gcd(g, x)
        if g > 1 and rhs % g == 0:
            coeffs = tuple(x // g for x in coeffs)
            rhs //= g
        elif g > 1 and rhs == 0:
            coeffs = tuple(x // g for x in coeffs)
        key = coeffs
        if key not in out or rhs > out[key]:
            out[key] = rhs  # keep the tightest rhs per direction
    return [(c, r) for c, r in out.items()]


def _witness_from_stack(stack, nvars: int) -> list[Fraction]:
    vals = [Fraction(0)] * nvars
    for k, pos, negs in reversed(stack):
        lowers = []
        for coeffs, rhs in pos:
            rest = sum(c * v for i, (c, v) in enumerate(zip(coeffs, vals)) if i != k)
            lowers.append(Fraction(rhs - rest, coeffs[k]))
        uppers = []
        for coeffs, rhs in negs:
            rest = sum(c * v for i, (c, v) in enumerate(zip(coeffs, vals)) if i != k)
            uppers.append(Fraction(rhs - rest, coeffs[k]))
        if lowers:
            vals[k] = max(lowers)
        elif uppers:
            vals[k] = min(uppers)
        else:
            vals[k] = Fraction(0)
    return vals


def linear_feasible(
    equalities: Sequence[Sequence[int]],
    stricts: Sequence[Sequence[int]],
    nonstricts: Sequence[Sequence[int]] = (),
    n: Optional[int] = None,
    cache: bool = True,
) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Decide {x : E x = 0, S x > 0, T x >= 0} over Q^n exactly.

    Returns (feasible, witness); the witness is a primitive integer vector
    (valid by homogeneity) or None when infeasible. Callers that already
    memoize at a higher level pass cache=False to skip key canonicalization.
    """
    dims = {len(v) for v in (*equalities, *stricts, *nonstricts)}
    if n is None:
        if not dims:
            raise ZbraidError("dimension unknown: no covectors given")
        n = dims.pop() if len(dims) == 1 else None
    if n is None or (dims and dims != {n}):
        raise ZbraidError("covector dimension mismatch")
    if not cache:
        return _linear_feasible_raw(equalities, stricts, nonstricts, n)
    key = (
        n,
        frozenset(_eq_key(e) for e in equalities),
        frozenset(primitive_vector(s) for s in stricts),
        frozenset(primitive_vector(t) for t in nonstricts),
    )
    hit = _cache.get(key)
    if hit is not None:
        return hit
    result = _linear_feasible_raw(equalities, stricts, nonstricts, n)
    _cache[key] = result
    return result


def system_feasible(
    equalities: Sequence[Sequence[int]],
    stricts: Sequence[Sequence[int]],
    nonstricts: Sequence[Sequence[int]],
    n: int,
) -> bool:
    """Cached bool-only feasibility (no witness reconstruction)."""
    key = (
        n,
        frozenset(_eq_key(e) for e in equalities),
        frozenset(primitive_vector(s) for s in stricts),
        frozenset(primitive_vector(t) for t in nonstricts),
    )
    hit = _bool_cache.get(key)
    if hit is None:
        hit = _linear_feasible_raw(equalities, stricts, nonstricts, n, want_witness=False)[0]
        _bool_cache[key] = hit
    return hit


def _eq_key(e: Sequence[int]) -> tuple[int, ...]:
    p = primitive_vector(e)
    lead = next((x for x in p if x), 0)
    return tuple(-x for x in p) if lead < 0 else p


def _linear_feasible_raw(equalities, stricts, nonstricts, n, want_witness=True):
    eqs = [e for e in equalities if any(e)]
    if any(not any(s) for s in stricts):
        return False, None  # 0 > 0 is unsatisfiable
    basis = null_space_int(eqs, n) if eqs else [tuple(int(i == j) for j in range(n)) for i in range(n)]
    k = len(basis)
    if k == 0:
        return (False, None) if stricts else (True, None)
    proj_s = [tuple(_dot(s, b) for b in basis) for s in stricts]
    proj_t = [tuple(_dot(t, b) for b in basis) for t in nonstricts]
    if any(not any(row) for row in proj_s):
        return False, None  # strict covector vanishes on the whole null space
    rows: list[Row] = [(c, 1) for c in proj_s] + [(c, 0) for c in proj_t]
    if not rows:
        # Any nonzero null-space point does; witness the first basis vector.
        return True, primitive_vector(basis[0])
    feasible, stack = _eliminate(rows, k)
    if not feasible:
        return False, None
    if not want_witness:
        return True, None
    y = _witness_from_stack(stack, k)
    x = [sum(y[i] * b[j] for i, b in enumerate(basis)) for j in range(n)]
    witness = primitive_vector(x)
    return True, witness


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def strict_cone_feasible(
    equalities: Sequence[Sequence[int]], stricts: Sequence[Sequence[int]], n: Optional[int] = None
) -> bool:
    """True iff some x in Q^n satisfies e.x = 0 for all equalities and
    s.x > 0 for all stricts. Exact; no tolerances."""
    feasible, _ = linear_feasible(equalities, stricts, (), n)
    return feasible
