"""
The weak Bruhat order on S_m and the classical braid germ.

Permutations are tuples of 1-based images acting on {1..m} on the right:
x . p = p[x-1]. The ordering indexed by p compares x, y by their images, so
the difference set against the identity ordering is the classical inversion
set, joins are transitive closures of unions of inversion sets, and meets
come from the reversal duality (right multiplication by the longest
element). H = {1}, so the germ's cosets are the permutations themselves and
the engine can be cross-checked exhaustively for small m.
"""

from __future__ import annotations

from itertools import permutations as iter_permutations

from .matrices import ZbraidError

Perm = tuple[int, ...]


class LatticeBreachError(ZbraidError):
    pass


def perm_identity(m: int) -> Perm:
    return tuple(range(1, m + 1))


def perm_mul(a: Perm, b: Perm) -> Perm:
    """x.(ab) = (x.a).b"""
    return tuple(b[a[i] - 1] for i in range(len(a)))


def perm_inv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, v in enumerate(a):
        out[v - 1] = i + 1
    return tuple(out)


def longest_element(m: int) -> Perm:
    return tuple(range(m, 0, -1))


def inversion_set(p: Perm) -> frozenset[tuple[int, int]]:
    m = len(p)
    return frozenset((i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1) if p[i - 1] > p[j - 1])


def weak_leq(p: Perm, q: Perm) -> bool:
    """Weak Bruhat order: containment of inversion sets."""
    return inversion_set(p) <= inversion_set(q)


def _closure(pairs: set[tuple[int, int]], m: int) -> frozenset[tuple[int, int]]:
    pairs = set(pairs)
    changed = True
    while changed:
        changed = False
        for (x, y) in list(pairs):
            for z in range(y + 1, m + 1):
                if (y, z) in pairs and (x, z) not in pairs:
                    pairs.add((x, z))
                    changed = True
    return frozenset(pairs)


def realize_inversions(pairs: frozenset[tuple[int, int]], m: int) -> Perm:
    """The permutation whose inversion set is the given closed, co-closed set;
    raises if the set is not realizable."""
    def before(i: int, j: int) -> bool:
        # i comes before j in the new order
        if i < j:
            return (i, j) not in pairs
        return (j, i) in pairs

    ranks = []
    for i in range(1, m + 1):
        ranks.append(1 + sum(1 for j in range(1, m + 1) if j != i and before(j, i)))
    p = tuple(ranks)
    if sorted(p) != list(range(1, m + 1)) or inversion_set(p) != pairs:
        raise LatticeBreachError("lattice breach")
    return p


def bruhat_join(p: Perm, q: Perm) -> Perm:
    """Join in the weak order: realize the transitive closure of the union of
    the inversion sets."""
    if len(p) != len(q):
        raise ZbraidError("dimension mismatch")
    m = len(p)
    return realize_inversions(_closure(set(inversion_set(p) | inversion_set(q)), m), m)


def bruhat_meet(p: Perm, q: Perm) -> Perm:
    """Meet via the reversal duality: reverse both, join, reverse."""
    w0 = longest_element(len(p))
    j = bruhat_join(perm_mul(p, w0), perm_mul(q, w0))
    return perm_mul(j, w0)


def all_perms(m: int):
    return [tuple(p) for p in iter_permutations(range(1, m + 1))]


class BraidGerm:
    """The classical germ (S_m, {1}, weak order, longest element)."""

    def __init__(self, m: int):
        if m < 1:
            raise ZbraidError("need at least one strand")
        self.m = m
        self.identity = perm_identity(m)
        self.w0 = longest_element(m)
        self.name = f"braid:{m}"

    def mul(self, a: Perm, b: Perm) -> Perm:
        return perm_mul(a, b)

    def inv(self, a: Perm) -> Perm:
        return perm_inv(a)

    def is_unit(self, a: Perm) -> bool:
        return a == self.identity

    def key(self, a: Perm) -> Perm:
        return a  # H = {1}: cosets are elements

    def precedes(self, a: Perm, b: Perm) -> bool:
        return weak_leq(a, b)

    def meet_key(self, a: Perm, b: Perm) -> Perm:
        return bruhat_meet(a, b)

    def join_key(self, a: Perm, b: Perm) -> Perm:
        return bruhat_join(a, b)

    def tau(self, a: Perm) -> Perm:
        return perm_mul(self.w0, perm_mul(a, self.w0))

    def tau_inv(self, a: Perm) -> Perm:
        return self.tau(a)  # w0 is an involution
