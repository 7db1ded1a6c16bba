import random
from itertools import product

import pytest

from zbraid.garside import ZnGerm, monoid_normal_form
from zbraid.lexgerm import precedes
from zbraid.matrices import ZbraidError, det, identity, mat_inv, mat_mul
from zbraid.presentation import (
    DepthExceededError,
    a0_shape,
    apply_s_derivation,
    apply_t_rule,
    connect,
    d_word,
    decompose,
    e_elem,
    factor_step,
    h_split_left,
    h_split_right,
    in_GA,
    in_Gi,
    in_Hi,
    is_shape,
    lemma_chain_derivation,
    replay_t_derivation,
    s_elem,
    s_move,
    shape_of,
    sword_minimal,
    sword_product,
    sword_type,
    t_rewrite_to_D1,
    transport,
    transport_with_moves,
    valid_type,
)


def rand_uni(rng, n, bound=2):
    while True:
        m = tuple(tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(n))
        if det(m) in (1, -1):
            return m


def rand_h(rng, n, bound=1):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = rng.randint(-bound, bound)
    return tuple(tuple(r) for r in m)


def test_shapes():
    assert is_shape(a0_shape(3), 3)
    assert shape_of(((1, 2), (0, 1))) == a0_shape(2)
    assert shape_of(((1, 0), (1, 1))) == a0_shape(2) | {(2, 1)}
    # closure property: a shape never has a hole above or right of a member
    rng = random.Random(70)
    for _ in range(20):
        n = rng.choice([2, 3, 4])
        s = shape_of(rand_uni(rng, n))
        assert is_shape(s, n)


def test_in_GA_H_invariance():
    rng = random.Random(71)
    for _ in range(20):
        n = rng.choice([2, 3])
        g = rand_uni(rng, n)
        h1, h2 = rand_h(rng, n, 2), rand_h(rng, n, 2)
        assert in_GA(mat_mul(h1, mat_mul(g, h2)), shape_of(g))


def test_factor_step_example():
    x = ((1, 0), (1, 1))
    y, z = factor_step(x, 1, 1, frozenset(shape_of(x) - {(2, 1)}))
    assert y == ((1, 0), (1, -1))
    assert z == ((1, 0), (0, -1))
    assert mat_mul(y, z) == x
    assert precedes(y, x)


def test_factor_step_trivial_case():
    x = ((1, 2, 0), (0, 1, 0), (0, 0, 1))
    y, z = factor_step(x, 1, 1, a0_shape(3))
    assert y == identity(3) and z == x


def test_factor_step_named_preconditions():
    x = ((1, 0), (1, 1))
    with pytest.raises(ZbraidError, match="not a shape"):
        factor_step(x, 1, 1, frozenset({(1, 1)}))
    x3 = ((1, 0, 0), (1, 1, 0), (1, 0, 1))
    c3 = shape_of(x3)
    with pytest.raises(ZbraidError, match="removed cell"):
        # A removes (3,1) but the call names the corner (2,1)
        factor_step(x3, 1, 1, frozenset(c3 - {(3, 1)}))
    # (i, j-1) in A: a staircase with both (2,1) and (3,2) alive
    x4 = ((1, 0, 0), (1, 1, 0), (0, 2, 1))
    c4 = shape_of(x4)
    with pytest.raises(ZbraidError, match="lies in A"):
        factor_step(x4, 2, 2, frozenset(c4 - {(3, 2)}))


def test_factor_step_ambiguity_classes():
    # any second valid pair differs by t in <s_{i+1}, H ∩ G_i>
    rng = random.Random(72)
    n = 2
    for _ in range(40):
        x = rand_uni(rng, n)
        c = shape_of(x)
        if (2, 1) not in c:
            continue
        a = frozenset(c - {(2, 1)})
        y, z = factor_step(x, 1, 1, a)
        # enumerate alternatives y' = y * t over sign/unit choices
        for eps in (0, 1):
            for u in range(-2, 3):
                t = mat_mul(
                    mat_mul(e_elem(n, 1, u), s_elem(n, 2)) if eps else e_elem(n, 1, u),
                    identity(n),
                )
                y2 = mat_mul(y, t)
                z2 = mat_mul(mat_inv(t), z)
                if precedes(y2, x) and in_GA(z2, a):
                    assert mat_mul(y2, z2) == x


def test_decompose_examples():
    assert decompose(identity(2)) == ()
    w = decompose(((-1, 0), (0, 1)))
    assert w == ((s_elem(2, 1), 1),)
    h = ((1, 5), (0, 1))
    assert decompose(h) == ((h, 1),)
    w = decompose(((1, 0), (1, 1)))
    assert len(w) == 2
    assert sword_product(w, 2) == ((1, 0), (1, 1))
    assert sword_minimal(w, 2)


def test_decompose_round_trip_random():
    rng = random.Random(73)
    for n in (2, 3, 4):
        for _ in range(8):
            x = rand_uni(rng, n)
            w = decompose(x)
            assert sword_product(w, n) == x
            assert sword_minimal(w, n)
            assert valid_type(w)


def test_h_splits():
    rng = random.Random(74)
    for _ in range(30):
        n = rng.choice([2, 3])
        i = rng.randint(1, n - 1)
        from zbraid.presentation import block_embed

        while True:
            blk = tuple(tuple(rng.randint(-2, 2) for _ in range(2)) for _ in range(2))
            if blk[0][0] * blk[1][1] - blk[0][1] * blk[1][0] in (1, -1):
                break
        g = mat_mul(block_embed(n, i, blk), rand_h(rng, n, 2))
        assert in_Hi(g, i)
        b, y = h_split_right(g, i)
        assert in_Gi(b, i) and mat_mul(b, y) == g
        x, a = h_split_left(g, i)
        assert in_Gi(a, i) and mat_mul(x, a) == g


def test_t_rules_validate():
    assert apply_t_rule((), "T0", 0, 2, 3) == (2,)
    assert apply_t_rule((1, 1), "T1", 0, None, 3) == (1,)
    assert apply_t_rule((1, 3), "T2", 0, None, 4) == (3, 1)
    assert apply_t_rule((1, 2, 1), "T3", 0, None, 3) == (2, 1, 2)
    with pytest.raises(ZbraidError):
        apply_t_rule((2, 1, 2), "T3", 0, None, 3)  # directional
    with pytest.raises(ZbraidError):
        apply_t_rule((1, 2), "T2", 0, None, 3)


def test_t_rewrite_examples():
    log = t_rewrite_to_D1((), 3)
    assert replay_t_derivation((), log, 3) == (2, 1, 2)
    assert all(st["rule"] == "T0" for st in log)
    log = t_rewrite_to_D1((1, 1), 3)
    assert replay_t_derivation((1, 1), log, 3) == (2, 1, 2)
    assert log[0]["rule"] == "T1"
    log = t_rewrite_to_D1((2, 1, 2, 1), 3)
    assert replay_t_derivation((2, 1, 2, 1), log, 3) == (2, 1, 2)


def test_t_rewrite_exhaustive_small():
    for L in range(0, 5):
        for t in product((1, 2), repeat=L):
            log = t_rewrite_to_D1(t, 3)
            assert replay_t_derivation(t, log, 3) == d_word(3)


def test_lemma_chain_all_k():
    for n in range(2, 6):
        for k in range(1, n):
            log = lemma_chain_derivation(k, n)
            start = tuple(range(k, 0, -1)) * 2
            target = tuple(range(k, 0, -1)) + tuple(range(k, 1, -1))
            assert replay_t_derivation(start, log, n) == target


def test_transport_cases():
    rng = random.Random(75)
    germ = ZnGerm(3)
    # case T0: unit insertion
    w = decompose(rand_uni(rng, 3))
    out = transport(w, ("T0", 0, 2), 3)
    assert out[0][0] == identity(3)
    assert sword_product(out, 3) == sword_product(w, 3)
    # full pipelines preserve NF, type, minimality
    checked = 0
    for _ in range(6):
        x = rand_uni(rng, 3)
        w = decompose(x)
        if not w:
            continue
        nf0 = monoid_normal_form(germ, tuple(m for m, _ in w)).letters
        tlog = t_rewrite_to_D1(sword_type(w), 3)
        cur = w
        for st in tlog:
            cur = transport(cur, (st["rule"], st["pos"], st.get("param")), 3)
            assert sword_product(cur, 3) == x
            assert valid_type(cur)
            assert sword_minimal(cur, 3)
            assert monoid_normal_form(germ, tuple(m for m, _ in cur)).letters == nf0
            checked += 1
        assert sword_type(cur) == d_word(3)
    assert checked > 10


def test_transport_moves_replay():
    rng = random.Random(76)
    for _ in range(5):
        x = rand_uni(rng, 3)
        w = decompose(x)
        if not w:
            continue
        tlog = t_rewrite_to_D1(sword_type(w), 3)
        cur = w
        for st in tlog:
            nxt, mvs = transport_with_moves(cur, (st["rule"], st["pos"], st.get("param")), 3)
            if mvs is not None:
                chk = apply_s_derivation(cur, mvs, 3)
                assert tuple(m for m, _ in chk) == tuple(m for m, _ in nxt)
            cur = nxt


def test_transport_rejects_non_minimal():
    s = s_elem(2, 2)
    bad = ((s, 1), (s, 1))  # product is 1, not minimal
    with pytest.raises(ZbraidError):
        transport(bad, ("T1", 0, None), 2)


def test_s_moves():
    n = 3
    h = rand_h(random.Random(77), n, 2)
    w = ((h, 1), (s_elem(n, 1), 1))
    out = s_move(w, "S0", 1, {"insert": 2}, n)
    assert out[1][0] == identity(n)
    back = s_move(out, "S0", 1, {"remove": True}, n)
    assert back == w
    merged = s_move(w, "S1", 0, {"tag": 1}, n)
    assert merged[0][0] == mat_mul(h, s_elem(n, 1))
    split = s_move(merged, "S1", 0, {"split": h, "tags": (1, 1)}, n)
    assert tuple(m for m, _ in split) == (h, s_elem(n, 1))
    with pytest.raises(ZbraidError, match="unit"):
        s_move(w, "S0", 0, {"remove": True}, n)


def test_s2_move():
    n = 4
    from zbraid.presentation import block_embed

    g1 = block_embed(n, 1, ((1, 1), (0, 1)))
    g3 = block_embed(n, 3, ((0, 1), (-1, 0)))
    w = ((g1, 1), (g3, 3))
    out = s_move(w, "S2", 0, {}, n)
    assert tuple(m for m, _ in out) == (g3, g1)
    with pytest.raises(ZbraidError):
        s_move(((g1, 1), (block_embed(n, 2, ((0, 1), (-1, 0))), 2)), "S2", 0, {}, n)


def test_connect_n2():
    rng = random.Random(78)
    for _ in range(20):
        x = rand_uni(rng, 2)
        w1 = decompose(x)
        # an independent spelling: pad with units and reassociate H parts
        w2 = w1 + ((identity(2), 1),)
        d = connect(w1, w2, 2)
        out = apply_s_derivation(w1, d, 2)
        assert tuple(m for m, _ in out) == tuple(m for m, _ in w2)
    assert connect((), (), 2) == []


def test_connect_same_word_empty_derivation():
    w = decompose(((1, 0), (1, 1)))
    assert connect(w, w, 2) == []


def test_connect_unequal_products():
    w1 = decompose(((1, 0), (1, 1)))
    w2 = decompose(((0, 1), (1, 0)))
    with pytest.raises(ZbraidError, match="unequal products"):
        connect(w1, w2, 2)


def test_connect_n3():
    rng = random.Random(79)
    germ = ZnGerm(3)
    for _ in range(6):
        x = rand_uni(rng, 3)
        w1 = decompose(x)
        w2 = list(w1)
        w2.insert(rng.randrange(len(w2) + 1), (identity(3), rng.randint(1, 2)))
        # shuffle an H factor when possible
        if w2:
            pos = rng.randrange(len(w2))
            m, t = w2[pos]
            h = rand_h(rng, 3, 1)
            left = mat_mul(m, mat_inv(h))
            if in_Hi(left, t):
                w2[pos] = (left, t)
                w2.insert(pos + 1, (h, t))
        w2 = tuple(w2)
        d = connect(w1, w2, 3)
        cur = w1
        nf0 = monoid_normal_form(germ, tuple(m for m, _ in w1)).letters
        for st in d:
            cur = s_move(cur, st["rule"], st["pos"], st.get("params"), 3)
            assert sword_product(cur, 3) == x
            assert monoid_normal_form(germ, tuple(m for m, _ in cur)).letters == nf0
        assert tuple(m for m, _ in cur) == tuple(m for m, _ in w2)


def test_connect_rejects_large_n():
    with pytest.raises(DepthExceededError):
        connect((), (), 4)


def test_transport_t2_n4():
    from zbraid.presentation import block_embed

    g1 = block_embed(4, 1, ((1, 1), (0, 1)))
    g3 = block_embed(4, 3, ((0, 1), (-1, 0)))
    w = ((g1, 1), (g3, 3))
    assert sword_minimal(w, 4)
    out = transport(w, ("T2", 0, None), 4)
    assert sword_product(out, 4) == sword_product(w, 4)
    assert (out[0][1], out[1][1]) == (3, 1)
    germ4 = ZnGerm(4)
    assert (
        monoid_normal_form(germ4, tuple(m for m, _ in out)).letters
        == monoid_normal_form(germ4, (g1, g3)).letters
    )
