"""
Named property suites with seeded sampling, shared by the CLI `check` verb,
the service endpoint and the acceptance tests.

Every suite returns a CheckReport with one line per law; a suite passes only
if every law saw zero violations. Samplers are deterministic in the seed, and
matrix entries are drawn from [-3, 3] with rejection to determinant +-1.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from . import matrices
from .bruhat import BraidGerm, all_perms, bruhat_join, bruhat_meet, weak_leq
from .garside import (
    Move,
    ZnGerm,
    apply_move,
    group_normal_form,
    group_product,
    monoid_normal_form,
    move_applicable,
    word_product,
)
from .lattice import coset, join, leq, meet
from .lexgerm import in_N, precedes, star
from .matrices import ZbraidError, det, identity, mat_inv, mat_mul, minus_identity


@dataclass
class CheckReport:
    suite: str
    lines: list[str] = field(default_factory=list)
    passed: bool = True
    seconds: float = 0.0

    def law(self, name: str, violations: int, trials: int) -> None:
        ok = violations == 0
        self.passed = self.passed and ok
        self.lines.append(f"{'PASS' if ok else 'FAIL'} {name}: {violations} violations in {trials} trials")

    def note(self, text: str) -> None:
        self.lines.append(text)


def rand_unimodular(rng: random.Random, n: int, bound: int = 3):
    while True:
        m = tuple(tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(n))
        if det(m) in (1, -1):
            return m


def rand_h_elem(rng: random.Random, n: int, bound: int = 2):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = rng.randint(-bound, bound)
    return tuple(tuple(r) for r in m)


def rand_vector(rng: random.Random, n: int, bound: int = 5):
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(n))
        if any(v):
            return v


def _dims(dim):
    return (2, 3) if dim is None else (dim,)


def suite_germ_laws(dims=None, trials: int = 10000, seed: int = 0) -> CheckReport:
    """PG2 definedness equivalence, the complement duality, PG3, and the
    sampled N-set identity on the Z^n germ."""
    rep = CheckReport("germ-laws")
    t0 = time.time()
    dims = _dims(dims)
    per = max(1, trials // len(dims))
    pg2 = dual = pg3 = 0
    for n in dims:
        rng = random.Random((seed, "germ", n).__hash__())
        w0 = minus_identity(n)
        for _ in range(per):
            a, b, c = (rand_unimodular(rng, n) for _ in range(3))
            ab, bc = mat_mul(a, b), mat_mul(b, c)
            left = precedes(a, ab) and precedes(ab, mat_mul(ab, c))
            right = precedes(b, bc) and precedes(a, mat_mul(a, bc))
            if left != right:
                pg2 += 1
            if left and right and mat_mul(ab, c) != mat_mul(a, bc):
                pg2 += 1
            # duality: a*b defined iff b precedes a^-1 w0
            if precedes(a, ab) != precedes(b, mat_mul(mat_inv(a), w0)):
                dual += 1
            # PG3 via literal conjugation by w0
            ca = mat_mul(mat_mul(w0, a), mat_inv(w0))
            cb = mat_mul(mat_mul(w0, b), mat_inv(w0))
            if precedes(a, b) != precedes(ca, cb):
                pg3 += 1
    rep.law("PG2 definedness equivalence", pg2, per * len(dims))
    rep.law("duality a*b defined iff b <= a^-1 w0", dual, per * len(dims))
    rep.law("PG3 conjugation invariance", pg3, per * len(dims))
    rep.seconds = time.time() - t0
    return rep


def suite_nset(dims=None, trials: int = 1000, vectors: int = 100, seed: int = 0) -> CheckReport:
    """The sampled N-set identity N(ab) = N(a) xor N(b) a^-1."""
    rep = CheckReport("nset")
    t0 = time.time()
    dims = _dims(dims)
    per = max(1, trials // len(dims))
    bad = 0
    for n in dims:
        rng = random.Random((seed, "nset", n).__hash__())
        for _ in range(per):
            a, b = rand_unimodular(rng, n), rand_unimodular(rng, n)
            ab = mat_mul(a, b)
            for _ in range(vectors):
                x = rand_vector(rng, n)
                lhs = in_N(ab, x)
                rhs = in_N(a, x) != in_N(b, matrices.row_action(x, a))
                if lhs != rhs:
                    bad += 1
    rep.law("N(ab) = N(a) xor N(b)a^-1 on sampled vectors", bad, per * len(dims) * vectors)
    rep.seconds = time.time() - t0
    return rep


def suite_lattice_laws(dims=None, trials: int = 1000, seed: int = 0) -> CheckReport:
    """Commutativity, associativity, idempotence, absorption, leq-consistency
    on random coset pairs/triples; the diagonal sublattice is checked
    exhaustively against the Boolean lattice."""
    rep = CheckReport("lattice-laws")
    t0 = time.time()
    dims = _dims(dims)
    per = max(1, trials // len(dims))
    comm = assoc = idem = absorb = consist = 0
    for n in dims:
        rng = random.Random((seed, "lattice", n).__hash__())
        for _ in range(per):
            a, b, c = (coset(rand_unimodular(rng, n)) for _ in range(3))
            jab, jba = join(a, b), join(b, a)
            mab, mba = meet(a, b), meet(b, a)
            if jab != jba or mab != mba:
                comm += 1
            if join(jab, c) != join(a, join(b, c)):
                assoc += 1
            if meet(mab, c) != meet(a, meet(b, c)):
                assoc += 1
            if join(a, a) != a or meet(a, a) != a:
                idem += 1
            if join(a, mab) != a or meet(a, jab) != a:
                absorb += 1
            lab = leq(a, b)
            if lab != (jab == b) or lab != (mab == a):
                consist += 1
    rep.law("join/meet commutativity", comm, per * len(dims))
    rep.law("join/meet associativity", assoc, per * len(dims))
    rep.law("idempotence", idem, per * len(dims))
    rep.law("absorption", absorb, per * len(dims))
    rep.law("leq consistency", consist, per * len(dims))
    viol, total = _diagonal_sublattice_check()
    rep.law("diagonal sublattice = Boolean lattice (n <= 3, exhaustive)", viol, total)
    rep.seconds = time.time() - t0
    return rep


def _diagonal_sublattice_check():
    from itertools import product as iproduct

    bad = 0
    total = 0
    for n in (2, 3):
        elems = []
        for signs in iproduct((1, -1), repeat=n):
            m = tuple(tuple(signs[i] if i == j else 0 for j in range(n)) for i in range(n))
            elems.append((frozenset(i for i, s in enumerate(signs) if s == -1), coset(m)))
        for fa, ca in elems:
            for fb, cb in elems:
                total += 1
                ju = join(ca, cb)
                me = meet(ca, cb)
                ju_expect = next(c for f, c in elems if f == fa | fb)
                me_expect = next(c for f, c in elems if f == fa & fb)
                if ju != ju_expect or me != me_expect:
                    bad += 1
                if leq(ca, cb) != (fa <= fb):
                    bad += 1
    return bad, total


def suite_join_leastness(dims=None, trials: int = 1000, seed: int = 0) -> CheckReport:
    """join(A,B) is below every sampled upper bound, and star(a, d) is
    defined whenever dH = bH v cH with a*b, a*c defined."""
    rep = CheckReport("join-leastness")
    t0 = time.time()
    dims = _dims(dims)
    per = max(1, trials // len(dims))
    least = starlaw = 0
    bounds_seen = 0
    for n in dims:
        rng = random.Random((seed, "least", n).__hash__())
        for _ in range(per):
            a, b = coset(rand_unimodular(rng, n)), coset(rand_unimodular(rng, n))
            j = join(a, b)
            for _ in range(8):
                d = coset(rand_unimodular(rng, n))
                if leq(a, d) and leq(b, d):
                    bounds_seen += 1
                    if not leq(j, d):
                        least += 1
            # lemma: a*b and a*c defined => a*d defined for dH = bH v cH
            g = rand_unimodular(rng, n)
            gb, gc = rand_unimodular(rng, n), rand_unimodular(rng, n)
            if star(g, gb) is not None and star(g, gc) is not None:
                d = join(coset(mat_mul(g, gb)), coset(mat_mul(g, gc)))
                dd = join(coset(gb), coset(gc))
                if star(g, dd.rep) is None:
                    starlaw += 1
    rep.law("join below sampled upper bounds", least, bounds_seen)
    rep.law("star closes under joins of right factors", starlaw, per * len(dims))
    rep.seconds = time.time() - t0
    return rep


def suite_nf_stability(dims=None, trials: int = 1000, rewrites: int = 100, seed: int = 0,
                       max_len: int = 6) -> CheckReport:
    """Normal-form soundness: projection identity, idempotence, invariance
    under random defining-relation rewrites."""
    rep = CheckReport("nf-stability")
    t0 = time.time()
    dims = _dims(dims)
    per = max(1, trials // len(dims))
    proj = idem = invar = 0
    rewrites_done = 0
    for n in dims:
        rng = random.Random((seed, "nf", n).__hash__())
        germ = ZnGerm(n)
        pool = [rand_unimodular(rng, n, 1) for _ in range(25)] + [
            rand_h_elem(rng, n, 1) for _ in range(10)
        ]
        for _ in range(per):
            w = tuple(rand_unimodular(rng, n) for _ in range(rng.randint(1, max_len)))
            nf = monoid_normal_form(germ, w)
            if word_product(germ, nf.letters) != word_product(germ, w):
                proj += 1
            if monoid_normal_form(germ, nf.letters).letters != nf.letters:
                idem += 1
            gnf = group_normal_form(germ, [(x, 1) for x in w])
            if group_product(germ, gnf) != word_product(germ, w):
                proj += 1
            cur = w
            for _ in range(rewrites):
                mv = _random_move(germ, cur, rng, pool)
                if mv is None:
                    break
                cur = apply_move(germ, cur, mv)
                rewrites_done += 1
                if monoid_normal_form(germ, cur).letters != nf.letters:
                    invar += 1
    rep.law("projection identity (monoid and group forms)", proj, 2 * per * len(dims))
    rep.law("normal form idempotence", idem, per * len(dims))
    rep.law(f"invariance under relation rewrites ({rewrites_done} moves)", invar, rewrites_done)
    rep.seconds = time.time() - t0
    return rep


def _random_move(germ, w, rng, pool):
    if len(w) < 2:
        return None
    # H elements are always movable; mix them with rejection-sampled pool letters
    for _ in range(24):
        pos = rng.randrange(len(w) - 1)
        if rng.random() < 0.5:
            b = rand_h_elem(rng, germ.n, 1)
            return Move(pos, b)
        b = rng.choice(pool)
        m = Move(pos, b)
        if move_applicable(germ, w, m):
            return m
    return None


def suite_bruhat_oracle(max_m: int = 4, seed: int = 0) -> CheckReport:
    """Exhaustive: joins and meets in the weak order equal brute-force
    bounds for every pair, m <= max_m."""
    rep = CheckReport("bruhat-oracle")
    t0 = time.time()
    bad = 0
    pairs = 0
    for m in range(2, max_m + 1):
        perms = all_perms(m)
        for p in perms:
            for q in perms:
                pairs += 1
                jn = bruhat_join(p, q)
                mt = bruhat_meet(p, q)
                ubs = [r for r in perms if weak_leq(p, r) and weak_leq(q, r)]
                lbs = [r for r in perms if weak_leq(r, p) and weak_leq(r, q)]
                least = [u for u in ubs if all(weak_leq(u, v) for v in ubs)]
                greatest = [l for l in lbs if all(weak_leq(v, l) for v in lbs)]
                if least != [jn] or greatest != [mt]:
                    bad += 1
    rep.law("join/meet equal brute-force bounds", bad, pairs)
    rep.seconds = time.time() - t0
    return rep


def suite_classical_engine(seed: int = 0, max_len: int = 3) -> CheckReport:
    """m = 3: normal-form classes of all positive words of length <= max_len
    coincide with brute-force congruence classes; Delta forms project
    correctly to S_3."""
    rep = CheckReport("classical-engine")
    t0 = time.time()
    germ = BraidGerm(3)
    perms = all_perms(3)
    words: list[tuple] = [()]
    frontier: list[tuple] = [()]
    for _ in range(max_len):
        frontier = [w + (p,) for w in frontier for p in perms]
        words.extend(frontier)
    index = {w: i for i, w in enumerate(words)}
    parent = list(range(len(words)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        parent[find(i)] = find(j)

    for w in words:
        # unit insertion/removal edges
        for pos in range(len(w) + 1):
            if len(w) + 1 <= max_len:
                union(index[w], index[w[:pos] + (germ.identity,) + w[pos:]])
        # relation-move edges at every pair, for every left factor
        for pos in range(len(w) - 1):
            a, y = w[pos], w[pos + 1]
            for b in perms:
                if weak_leq(b, y) and weak_leq(a, germ.mul(a, b)):
                    c = germ.mul(germ.inv(b), y)
                    union(index[w], index[w[:pos] + (germ.mul(a, b), c) + w[pos + 2 :]])
    mism = 0
    delta_bad = 0
    nfs = {}
    for w in words:
        nfs[w] = monoid_normal_form(germ, w).letters
        gnf = group_normal_form(germ, [(x, 1) for x in w])
        if group_product(germ, gnf) != word_product(germ, w):
            delta_bad += 1
    for w in words:
        for v in words:
            same_class = find(index[w]) == find(index[v])
            same_nf = nfs[w] == nfs[v]
            if same_class != same_nf:
                mism += 1
    rep.law("NF classes match brute-force congruence classes", mism, len(words) ** 2)
    rep.law("Delta forms project to S_3", delta_bad, len(words))
    rep.seconds = time.time() - t0
    return rep


def precedes_perm(germ, a, b) -> bool:
    """a ≲ ab in the weak order (definedness of the move's head product)."""
    return weak_leq(a, germ.mul(a, b))


def suite_presentation(seed: int = 0, factor_trials: int = 10000, decompose_trials: int = 1000,
                       max_n: int = 4) -> CheckReport:
    """factor_step postconditions, decompose round trips, type rewriting to
    D1, the doubled-descent lemma, and transport NF preservation."""
    from . import presentation as pres

    rep = CheckReport("presentation")
    t0 = time.time()
    rng = random.Random((seed, "pres").__hash__())
    bad_factor = 0
    done_factor = 0
    attempts = 0
    while done_factor < factor_trials and attempts < factor_trials * 20:
        attempts += 1
        n = rng.randint(2, max_n)
        x = rand_unimodular(rng, n, 2)
        c = pres.shape_of(x)
        corners = [
            (i, j)
            for (i, j) in c
            if i > j and pres.is_shape(frozenset(c - {(i, j)}), n)
            and (j - 1 < 1 or (i - 1, j - 1) not in c - {(i, j)})
            and (i + 1 > n or (i + 1, j) not in c - {(i, j)})
        ]
        if not corners:
            continue
        i, j = rng.choice(corners)
        a = frozenset(c - {(i, j)})
        try:
            y, zz = pres.factor_step(x, i - 1, j, a)
        except ZbraidError:
            continue
        done_factor += 1
        if not (mat_mul(y, zz) == x and pres.in_Gi(y, i - 1)):
            bad_factor += 1
        elif not (pres.in_GA(zz, a) and precedes(y, x)):
            bad_factor += 1
    rep.law("factor_step postconditions", bad_factor, done_factor)

    bad_dec = 0
    for _ in range(decompose_trials):
        n = rng.randint(2, max_n)
        x = rand_unimodular(rng, n, 2)
        w = pres.decompose(x)
        if pres.sword_product(w, n) != x or not pres.sword_minimal(w, n) or not pres.valid_type(w):
            bad_dec += 1
    rep.law("decompose round trip (product, minimality, types)", bad_dec, decompose_trials)

    bad_t = 0
    total_t = 0
    import itertools as it

    for L in range(0, 7):
        for t in it.product((1, 2), repeat=L):
            total_t += 1
            log = pres.t_rewrite_to_D1(t, 3)
            if pres.replay_t_derivation(t, log, 3) != pres.d_word(3):
                bad_t += 1
    for _ in range(1000):
        L = rng.randint(0, 10)
        t = tuple(rng.randint(1, 3) for _ in range(L))
        total_t += 1
        log = pres.t_rewrite_to_D1(t, 4)
        if pres.replay_t_derivation(t, log, 4) != pres.d_word(4):
            bad_t += 1
    rep.law("type rewriting reaches D1 (exhaustive n=3, random n=4)", bad_t, total_t)

    bad_lemma = 0
    cases = 0
    for n in range(2, 6):
        for k in range(1, n):
            cases += 1
            log = pres.lemma_chain_derivation(k, n)
            start = tuple(range(k, 0, -1)) * 2
            target = tuple(range(k, 0, -1)) + tuple(range(k, 1, -1))
            if pres.replay_t_derivation(start, log, n) != target:
                bad_lemma += 1
    rep.law("doubled-descent lemma derivations (k < n <= 5)", bad_lemma, cases)

    bad_tr = 0
    steps_tr = 0
    germ = ZnGerm(3)
    for _ in range(40):
        x = rand_unimodular(rng, 3, 2)
        w = pres.decompose(x)
        if not w:
            continue
        nf0 = monoid_normal_form(germ, tuple(m for m, _ in w)).letters
        tlog = pres.t_rewrite_to_D1(pres.sword_type(w), 3)
        cur = w
        for st in tlog:
            cur = pres.transport(cur, (st["rule"], st["pos"], st.get("param")), 3)
            steps_tr += 1
            if monoid_normal_form(germ, tuple(m for m, _ in cur)).letters != nf0:
                bad_tr += 1
    rep.law("transport preserves engine NF on every step", bad_tr, steps_tr)
    rep.seconds = time.time() - t0
    return rep


def suite_connect(seed: int = 0, pairs: int = 200) -> CheckReport:
    """Theorem-level desk check: connect returns validated derivations for
    independently shuffled minimal decompositions (n = 2 and 3)."""
    from . import presentation as pres

    rep = CheckReport("connect")
    t0 = time.time()
    rng = random.Random((seed, "connect").__hash__())
    per = pairs // 2
    for n in (2, 3):
        bad = 0
        exceeded = 0
        for _ in range(per):
            x = rand_unimodular(rng, n, 2)
            w1 = pres.decompose(x)
            w2 = _shuffle_sword(w1, n, rng)
            try:
                d = pres.connect(w1, w2, n)
            except pres.DepthExceededError:
                exceeded += 1
                continue
            try:
                cur = w1
                prod = pres.sword_product(w1, n)
                nf0 = monoid_normal_form(ZnGerm(n), tuple(m for m, _ in w1)).letters
                for st in d:
                    cur = pres.s_move(cur, st["rule"], st["pos"], st.get("params"), n)
                    if pres.sword_product(cur, n) != prod:
                        raise ZbraidError("product drift")
                    if monoid_normal_form(ZnGerm(n), tuple(m for m, _ in cur)).letters != nf0:
                        raise ZbraidError("NF drift")
                if tuple(m for m, _ in cur) != tuple(m for m, _ in w2):
                    raise ZbraidError("endpoint mismatch")
            except ZbraidError:
                bad += 1
        rep.law(f"n={n} connect derivations validate", bad, per - exceeded)
        rep.note(f"n={n} depth-exceeded rate: {exceeded}/{per}")
        if n == 2:
            rep.law("n=2 depth-exceeded rate is zero", exceeded, per)
    rep.seconds = time.time() - t0
    return rep


def _shuffle_sword(w, n: int, rng: random.Random):
    from . import presentation as pres

    out = list(w)
    for _ in range(rng.randint(0, 3)):
        if not out or rng.random() < 0.4:
            pos = rng.randrange(len(out) + 1)
            out.insert(pos, (identity(n), rng.randint(1, n - 1)))
        else:
            pos = rng.randrange(len(out))
            m, t = out[pos]
            h = rand_h_elem(rng, n, 1)
            left = mat_mul(m, mat_inv(h))
            if pres.in_Hi(left, t):
                out[pos] = (left, t)
                out.insert(pos + 1, (h, t))
    return tuple(out)


SUITES = {
    "germ-laws": suite_germ_laws,
    "nset": suite_nset,
    "lattice-laws": suite_lattice_laws,
    "join-leastness": suite_join_leastness,
    "nf-stability": suite_nf_stability,
    "bruhat-oracle": suite_bruhat_oracle,
    "classical-engine": suite_classical_engine,
    "presentation": suite_presentation,
    "connect": suite_connect,
}


def run_suite(name: str, germ: str = "zn", dim=None, trials=None, seed: int = 0) -> CheckReport:
    """Dispatch a named suite with CLI-level parameters."""
    if name == "germ-laws":
        return suite_germ_laws(dims=dim, trials=trials or 10000, seed=seed)
    if name == "nset":
        return suite_nset(dims=dim, trials=trials or 1000, seed=seed)
    if name == "lattice-laws":
        return suite_lattice_laws(dims=dim, trials=trials or 1000, seed=seed)
    if name == "join-leastness":
        return suite_join_leastness(dims=dim, trials=trials or 1000, seed=seed)
    if name == "nf-stability":
        return suite_nf_stability(dims=dim, trials=trials or 1000, seed=seed)
    if name == "bruhat-oracle":
        return suite_bruhat_oracle(max_m=dim or 4, seed=seed)
    if name == "classical-engine":
        return suite_classical_engine(seed=seed)
    if name == "presentation":
        return suite_presentation(seed=seed, factor_trials=trials or 10000)
    if name == "connect":
        return suite_connect(seed=seed, pairs=trials or 200)
    raise ZbraidError(f"unknown suite {name!r}")
