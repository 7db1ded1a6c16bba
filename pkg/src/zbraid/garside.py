"""
Generic pseudo-Garside machinery over an abstract germ: words, relation
moves, greedy and strongly greedy normal forms, Delta-power forms for the
group, and the diamond lemma used by the rewriting tests.

A germ supplies: identity, w0, mul, inv, is_unit (membership in H up to ~),
key (canonical coset representative), precedes (the preorder), meet_key
(canonical representative of the coset meet) and tau (conjugation by w0).
Two germs live in this package: ZnGerm (GL(n,Z) over the lex lattice) and
bruhat.BraidGerm (S_m with the weak order), the latter small enough to brute
force against.

Words are plain tuples of germ elements. A relation move rewrites an
adjacent pair (a, b*c) into (a*b, c); strong equivalence shifts unit factors
between adjacent letters. The monoid normal form is the strongly greedy
representative with letters canonicalized left to right by coset keys, the
whole unit residue absorbed into the last letter, so equality in B+ is
letter-wise equality. Group elements are Delta^k times such а body whose
first letter is not ~ Delta.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from .lattice import Coset, meet_fast
from .lexgerm import precedes as zn_precedes
from .matrices import Mat, ZbraidError, coset_reduce, identity, mat_inv, mat_mul, minus_identity


class GermBreachError(ZbraidError):
    pass


class NonTerminationError(ZbraidError):
    pass


class ZnGerm:
    """The germ (GL(n,Z), H, lattice of lex orders, w0 = -I)."""

    def __init__(self, n: int):
        if n < 1:
            raise ZbraidError("dimension must be positive")
        self.n = n
        self.identity = identity(n)
        self.w0 = minus_identity(n)
        self.name = f"zn:{n}"

    def mul(self, a: Mat, b: Mat) -> Mat:
        return mat_mul(a, b)

    def inv(self, a: Mat) -> Mat:
        return mat_inv(a)

    def is_unit(self, a: Mat) -> bool:
        from .matrices import in_H

        return in_H(a)

    def key(self, a: Mat) -> Mat:
        return coset_reduce(a)

    def precedes(self, a: Mat, b: Mat) -> bool:
        return zn_precedes(a, b)

    def meet_key(self, a: Mat, b: Mat) -> Mat:
        return meet_fast(Coset(self.n, coset_reduce(a)), Coset(self.n, coset_reduce(b))).rep

    def tau(self, a: Mat) -> Mat:
        return a  # w0 = -I is central

    def tau_inv(self, a: Mat) -> Mat:
        return a


Word = tuple


def word_product(germ, w: Word):
    out = germ.identity
    for x in w:
        out = germ.mul(out, x)
    return out


def is_minimal(germ, w: Word) -> bool:
    """True iff the left-folded star product x1*...*xk is defined (PG2 makes
    the bracketing irrelevant)."""
    if len(w) <= 1:
        return True
    acc = w[0]
    for x in w[1:]:
        nxt = germ.mul(acc, x)
        if not germ.precedes(acc, nxt):
            return False
        acc = nxt
    return True


def pair_greedy_step(germ, a, b):
    """One greedy step on an adjacent pair: move the meet of (a^-1 w0)H and
    bH out of b into a. Always applicable; the result is pair-greedy.

    Contract: a*x and x*(x^-1 b) must be defined. Both reduce to the meet's
    own postconditions (xH below bH gives the second; xH below (a^-1 w0)H
    gives the first through the complement lemma a ≲ ab iff b ≲ a^-1 w0),
    and the germ's meet certifies those bounds, raising on any breach."""
    comp = germ.mul(germ.inv(a), germ.w0)
    x = germ.meet_key(comp, b)  # already a canonical representative
    if not (germ.precedes(x, germ.key(comp)) and germ.precedes(x, germ.key(b))):
        raise GermBreachError("germ breach")
    return germ.mul(a, x), germ.mul(germ.inv(x), b)


def is_greedy(germ, w: Word) -> bool:
    """Every adjacent pair has trivial meet of (head-complement, next letter).

    Defined for arbitrary words: greediness is maximality of the strong
    equivalence class under relation moves, and the pairwise meet criterion
    needs no minimality (the examples include non-minimal greedy words like
    a repeated sign flip)."""
    return _is_greedy_any(germ, w)


def _is_greedy_any(germ, w: Word) -> bool:
    for i in range(len(w) - 1):
        x = germ.meet_key(germ.mul(germ.inv(w[i]), germ.w0), w[i + 1])
        if not germ.is_unit(x):
            return False
    return True


def _greedy_any(germ, w: Word) -> Word:
    """Greedy form of an arbitrary word by the insertion recursion of the
    existence proof: normalize the tail, then bubble the head letter in."""
    budget = 4 * len(w) * len(w) + 16
    out: list = []
    for letter in reversed(w):
        out_word, used = _insert(germ, letter, tuple(out), budget)
        budget -= used
        if budget < 0:
            raise NonTerminationError("non-termination suspected")
        out = list(out_word)
    return tuple(out)


def _insert(germ, a, v: Word, budget: int):
    used = 0
    result: list = []
    while True:
        if not v:
            result.append(a)
            return tuple(result) + tuple(v), used
        a1, b1 = pair_greedy_step(germ, a, v[0])
        used += 1
        if used > budget:
            raise NonTerminationError("non-termination suspected")
        result.append(a1)
        a, v = b1, v[1:]


def greedy_normal_form(germ, w: Word) -> Word:
    """A greedy word reachable from w by relation moves (the insertion
    recursion of the existence proof); result verified by is_greedy."""
    out = _greedy_any(germ, w)
    if not _is_greedy_any(germ, out):
        raise NonTerminationError("non-termination suspected")
    return out


class MonoidNF(NamedTuple):
    letters: Word

    def __len__(self) -> int:
        return len(self.letters)


class GroupNF(NamedTuple):
    k: int
    body: MonoidNF


def _strong_canonical(germ, w: Word) -> Word:
    """Canonical representative of the strong equivalence class: letters
    replaced left to right by coset keys, the unit residue accumulating into
    the last letter."""
    if not w:
        return w
    out = []
    carry = germ.identity
    for i, x in enumerate(w):
        y = germ.mul(carry, x)
        if i < len(w) - 1:
            c = germ.key(y)
            out.append(c)
            carry = germ.mul(germ.inv(c), y)
        else:
            out.append(y)
    return tuple(out)


def monoid_normal_form(germ, w: Word) -> MonoidNF:
    """Canonical strongly greedy word for the B+ element of w. Two positive
    words have the same image in B+ iff their normal forms are letter-wise
    equal."""
    letters = tuple(x for x in w if x != germ.identity)
    if not letters:
        return MonoidNF(())
    g = _greedy_any(germ, letters)
    units = [germ.is_unit(x) for x in g]
    if all(units):
        h = word_product(germ, g)
        return MonoidNF(()) if h == germ.identity else MonoidNF((h,))
    if len(g) >= 2:
        k = max(i for i, u in enumerate(units) if not u)
        tail = word_product(germ, g[k:])
        g = g[: k] + (tail,)
    nf = MonoidNF(_strong_canonical(germ, g))
    assert _is_greedy_any(germ, nf.letters), "normal form failed the greedy check"
    return nf


def _tau_pow(germ, a, k: int):
    for _ in range(k):
        a = germ.tau(a)
    for _ in range(-k):
        a = germ.tau_inv(a)
    return a


def group_normal_form(germ, signed: Sequence[tuple[object, int]]) -> GroupNF:
    """Delta-power form of a signed word. Inverse letters are eliminated via
    r(a)^-1 = r(a^-1 w0) Delta^-1; the Delta^-1 passes left by conjugating
    every letter with tau; leading letters ~ Delta are absorbed into k."""
    k = 0
    letters: list = []
    for g, sgn in signed:
        if sgn == 1:
            letters.append(g)
        elif sgn == -1:
            letters.append(germ.mul(germ.inv(g), germ.w0))
            letters = [germ.tau(x) for x in letters]
            k -= 1
        else:
            raise ZbraidError(f"bad letter sign {sgn!r}")
    return _delta_normalize(germ, k, monoid_normal_form(germ, tuple(letters)))


def _delta_normalize(germ, k: int, body: MonoidNF) -> GroupNF:
    top = germ.key(germ.w0)
    letters = body.letters
    while letters and germ.key(letters[0]) == top:
        h = germ.mul(germ.inv(germ.w0), letters[0])
        k += 1
        if len(letters) == 1:
            letters = (h,) if h != germ.identity else ()
            letters = monoid_normal_form(germ, letters).letters
        else:
            merged = (germ.mul(h, letters[1]),) + letters[2:]
            letters = monoid_normal_form(germ, merged).letters
    return GroupNF(k, MonoidNF(letters))


def group_mul(germ, a: GroupNF, b: GroupNF) -> GroupNF:
    shifted = tuple(_tau_pow(germ, x, -b.k) for x in a.body.letters)
    body = monoid_normal_form(germ, shifted + b.body.letters)
    return _delta_normalize(germ, a.k + b.k, body)


def group_inv(germ, a: GroupNF) -> GroupNF:
    inv_word = group_normal_form(germ, [(x, -1) for x in reversed(a.body.letters)])
    return group_mul(germ, inv_word, GroupNF(-a.k, MonoidNF(())))


def group_eq(a: GroupNF, b: GroupNF) -> bool:
    return a.k == b.k and a.body.letters == b.body.letters


def group_product(germ, a: GroupNF):
    """Projection to the germ's group: Delta^k times the body product."""
    out = germ.identity
    w0k = germ.w0
    if a.k >= 0:
        for _ in range(a.k):
            out = germ.mul(out, w0k)
    else:
        iw = germ.inv(w0k)
        for _ in range(-a.k):
            out = germ.mul(out, iw)
    return germ.mul(out, word_product(germ, a.body.letters))


# -- relation moves and the diamond lemma ------------------------------------

class Move(NamedTuple):
    """The relation move at pos: (a, b*c) -> (a*b, c), identified by the left
    factor b split off the second letter."""
    pos: int
    split: object


def move_applicable(germ, w: Word, m: Move) -> bool:
    if not (0 <= m.pos < len(w) - 1):
        return False
    a, y = w[m.pos], w[m.pos + 1]
    b = m.split
    c = germ.mul(germ.inv(b), y)
    return germ.precedes(b, y) and germ.precedes(a, germ.mul(a, b)) and c is not None


def apply_move(germ, w: Word, m: Move) -> Word:
    if not (0 <= m.pos < len(w) - 1):
        raise ZbraidError("move position out of range")
    a, y = w[m.pos], w[m.pos + 1]
    b = m.split
    if not germ.precedes(b, y):
        raise ZbraidError("move split does not left-divide the letter")
    ab = germ.mul(a, b)
    if not germ.precedes(a, ab):
        raise ZbraidError("move head product is not defined")
    c = germ.mul(germ.inv(b), y)
    return w[: m.pos] + (ab, c) + w[m.pos + 2 :]


def diamond_check(germ, u: Word, m1: Move, m2: Move) -> Word:
    w, _, _ = diamond_full(germ, u, m1, m2)
    return w


def diamond_full(germ, u: Word, m1: Move, m2: Move):
    """Complete the local diamond: given single moves u -> v and u -> w,
    return (x, moves_v_to_x, moves_w_to_x) with both sides being at most one
    move. Cases: same pair, disjoint (commuting) pair, adjacent triple."""
    v = apply_move(germ, u, m1)
    w = apply_move(germ, u, m2)
    if v == w:
        return v, [], []
    if m1.pos == m2.pos:
        p = m1.pos
        a, bletter = u[p], u[p + 1]
        c, e = m1.split, m2.split
        r = _join_key(germ, c, e)
        if not germ.precedes(r, bletter):
            raise GermBreachError("germ breach")
        pfac = germ.mul(germ.inv(c), r)
        qfac = germ.mul(germ.inv(e), r)
        mv = Move(p, pfac)
        mw = Move(p, qfac)
        xv = apply_move(germ, v, mv)
        xw = apply_move(germ, w, mw)
        if _strong_keys(germ, xv) != _strong_keys(germ, xw):
            raise GermBreachError("germ breach")
        return xv, [mv], [mw]
    if abs(m1.pos - m2.pos) >= 2:
        xv = apply_move(germ, v, m2)
        xw = apply_move(germ, w, m1)
        assert xv == xw
        return xv, [m2], [m1]
    # adjacent positions: orient so m1 acts on the left pair
    if m1.pos > m2.pos:
        x, mw_list, mv_list = diamond_full(germ, u, m2, m1)
        return x, mv_list, mw_list
    p = m1.pos
    b, d = m1.split, m2.split
    mv = Move(p + 1, d)
    mw = Move(p, b)
    xv = apply_move(germ, v, mv)
    xw = apply_move(germ, w, mw)
    assert xv == xw
    return xv, [mv], [mw]


def _join_key(germ, a, b):
    """Canonical representative of aH ∨ bH through the germ's meet and the
    w0 duality: join(a,b) = w0 * meet(w0^-1 ... ) is not available directly,
    so germs expose joins where needed."""
    if hasattr(germ, "join_key"):
        return germ.join_key(a, b)
    from .lattice import Coset, join
    from .matrices import coset_reduce

    return join(Coset(germ.n, coset_reduce(a)), Coset(germ.n, coset_reduce(b))).rep


def _strong_keys(germ, w: Word):
    return _strong_canonical(germ, w)


def replay_moves(germ, w: Word, moves: Sequence[Move]) -> Word:
    for m in moves:
        w = apply_move(germ, w, m)
    return w


def upper_bound_by_diamonds(germ, u: Word, path1: Sequence[Move], path2: Sequence[Move]):
    """A common word reachable from the endpoints of both move paths,
    obtained by replaying diamond completions (the finite-upper-bounds
    lemma). Returns (z, ext1, ext2): endpoint_i -> z via ext_i."""
    if not path2:
        return replay_moves(germ, u, path1), [], list(path1)
    ml, rest = path2[0], path2[1:]
    cur = u
    left = [ml]
    bottom: list[Move] = []
    for m in path1:
        if not left:
            bottom.append(m)
            cur = apply_move(germ, cur, m)
            continue
        _, mv, mw = diamond_full(germ, cur, m, left[0])
        cur = apply_move(germ, cur, m)
        left = mv
        bottom.extend(mw)
    # endpoint of path1 reaches the strip corner via `left`;
    # apply(u, ml) reaches it via `bottom`.
    z0_from_u2 = bottom
    u2 = apply_move(germ, u, ml)
    z, ext_a, ext_b = upper_bound_by_diamonds(germ, u2, z0_from_u2, list(rest))
    return z, list(left) + list(ext_a), list(ext_b)
