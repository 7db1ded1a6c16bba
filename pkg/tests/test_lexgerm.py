import random

from zbraid.cones import pl_difference
from zbraid.lexgerm import (
    in_M,
    in_N,
    is_in_H,
    lex_sign,
    m_set,
    precedes,
    precedes_witness,
    star,
)
from zbraid.matrices import det, identity, mat_inv, mat_mul, minus_identity, row_action


def rand_uni(rng, n, bound=3):
    while True:
        m = tuple(tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(n))
        if det(m) in (1, -1):
            return m


def rand_vec(rng, n, bound=6):
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(n))
        if any(v):
            return v


def test_lex_sign():
    assert lex_sign((0, 0, 0)) == 0
    assert lex_sign((0, 2, -5)) == 1
    assert lex_sign((-1, 100)) == -1


def test_is_in_H_examples():
    assert is_in_H(identity(2))
    assert is_in_H(((1, 5), (0, 1)))
    assert not is_in_H(((-1, 0), (0, 1)))


def test_is_in_H_agrees_with_sign_preservation():
    rng = random.Random(30)
    for _ in range(40):
        n = rng.choice([2, 3])
        g = rand_uni(rng, n)
        preserved = all(
            lex_sign(row_action(x, g)) == lex_sign(x)
            for x in [rand_vec(rng, n) for _ in range(60)]
        ) and all(
            lex_sign(row_action(e, g)) == 1
            for e in [tuple(int(i == j) for j in range(n)) for i in range(n)]
        )
        if is_in_H(g):
            assert preserved
        # sampling cannot prove non-membership, but structural members must preserve


def test_precedes_extremes():
    rng = random.Random(31)
    for _ in range(20):
        n = rng.choice([2, 3])
        g = rand_uni(rng, n)
        assert precedes(identity(n), g)
        assert precedes(g, minus_identity(n))


def test_precedes_diag_example():
    assert precedes(((-1, 0), (0, 1)), ((1, 0), (0, -1))) is False
    w = precedes_witness(((-1, 0), (0, 1)), ((1, 0), (0, -1)))
    assert w is not None
    assert lex_sign(w) == 1
    assert lex_sign(row_action(w, ((-1, 0), (0, 1)))) == -1
    assert lex_sign(row_action(w, ((1, 0), (0, -1)))) == 1


def test_precedes_reflexive_transitive():
    rng = random.Random(32)
    for _ in range(40):
        n = rng.choice([2, 3])
        a = rand_uni(rng, n)
        assert precedes(a, a)
    # transitivity on chains a <= ab <= abc constructed via star
    for _ in range(60):
        n = rng.choice([2, 3])
        a, b, c = (rand_uni(rng, n) for _ in range(3))
        ab = mat_mul(a, b)
        abc = mat_mul(ab, c)
        if precedes(a, ab) and precedes(ab, abc):
            assert precedes(a, abc)


def test_precedes_right_H_invariant():
    rng = random.Random(33)
    for _ in range(30):
        n = rng.choice([2, 3])
        a, c = rand_uni(rng, n), rand_uni(rng, n)
        h = [[int(i == j) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                h[i][j] = rng.randint(-3, 3)
        h = tuple(tuple(r) for r in h)
        assert precedes(a, c) == precedes(mat_mul(a, h), c) == precedes(a, mat_mul(c, h))


def test_precedes_vs_m_set_containment():
    """Cross-check the pivot-triple decision against PL containment of M-sets."""
    rng = random.Random(34)
    for _ in range(25):
        n = rng.choice([2, 3])
        a, c = rand_uni(rng, n, 2), rand_uni(rng, n, 2)
        ma, mc = m_set(a), m_set(c)
        diff = pl_difference(ma, mc)
        contained = not diff.cells
        assert precedes(a, c) == contained, (a, c)


def test_witness_vs_m_sets():
    rng = random.Random(35)
    for _ in range(40):
        n = rng.choice([2, 3])
        a, c = rand_uni(rng, n), rand_uni(rng, n)
        w = precedes_witness(a, c)
        if w is not None:
            assert in_M(a, w) and not in_M(c, w)


def test_star_examples():
    rng = random.Random(36)
    for _ in range(20):
        n = rng.choice([2, 3])
        a = rand_uni(rng, n)
        b = mat_mul(mat_inv(a), minus_identity(n))
        assert star(a, b) == minus_identity(n)
    assert star(((-1, 0), (0, 1)), ((1, 0), (0, -1))) == minus_identity(2)


def test_star_with_H():
    rng = random.Random(37)
    for _ in range(20):
        n = rng.choice([2, 3])
        a = rand_uni(rng, n)
        h = [[int(i == j) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                h[i][j] = rng.randint(-3, 3)
        h = tuple(tuple(r) for r in h)
        assert star(a, h) is not None
        assert star(h, a) is not None


def test_in_M_examples():
    rng = random.Random(38)
    for _ in range(50):
        n = rng.choice([2, 3])
        x = rand_vec(rng, n)
        assert in_M(minus_identity(n), x) == (lex_sign(x) == 1)
        assert in_M(identity(n), x) is False
    assert in_N(((-1, 0), (0, 1)), (1, 7))
