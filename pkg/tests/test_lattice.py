import random

import pytest

from zbraid.lattice import (
    bottom,
    coset,
    join,
    join_reference,
    leq,
    meet,
    meet_fast,
    meet_reference,
    top,
)
from zbraid.matrices import ZbraidError, det, identity, minus_identity


def rand_coset(rng, n, bound=3):
    while True:
        m = tuple(tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(n))
        if det(m) in (1, -1):
            return coset(m)


D1 = ((-1, 0), (0, 1))
D2 = ((1, 0), (0, -1))


def test_extremes():
    assert bottom(2).rep == identity(2)
    assert top(2).rep == minus_identity(2)
    rng = random.Random(40)
    for _ in range(15):
        a = rand_coset(rng, rng.choice([2, 3]))
        assert leq(bottom(a.n), a)
        assert leq(a, top(a.n))


def test_leq_diag_example():
    assert leq(coset(D1), coset(D2)) is False


def test_join_meet_diag_examples():
    a, b = coset(D1), coset(D2)
    assert join(a, b) == top(2)
    assert meet(a, b) == bottom(2)


def test_lattice_identities():
    rng = random.Random(41)
    for _ in range(25):
        n = rng.choice([2, 3])
        a = rand_coset(rng, n)
        assert join(a, a) == a
        assert meet(a, a) == a
        assert join(bottom(n), a) == a
        assert join(a, top(n)) == top(n)
        assert meet(top(n), a) == a
        assert meet(a, bottom(n)) == bottom(n)


def test_lattice_laws_random():
    rng = random.Random(42)
    for _ in range(30):
        n = rng.choice([2, 3])
        a, b, c = (rand_coset(rng, n) for _ in range(3))
        assert join(a, b) == join(b, a)
        assert meet(a, b) == meet(b, a)
        assert join(join(a, b), c) == join(a, join(b, c))
        assert meet(meet(a, b), c) == meet(a, meet(b, c))
        assert join(a, meet(a, b)) == a
        assert meet(a, join(a, b)) == a
        assert leq(a, b) == (join(a, b) == b) == (meet(a, b) == a)


def test_join_is_least_upper_bound_sampled():
    rng = random.Random(43)
    for _ in range(25):
        n = rng.choice([2, 3])
        a, b = rand_coset(rng, n), rand_coset(rng, n)
        j = join(a, b)
        assert leq(a, j) and leq(b, j)
        for _ in range(15):
            d = rand_coset(rng, n)
            if leq(a, d) and leq(b, d):
                assert leq(j, d)


def test_reference_pipeline_agrees():
    rng = random.Random(44)
    for _ in range(20):
        n = rng.choice([2, 3])
        a, b = rand_coset(rng, n), rand_coset(rng, n)
        assert join_reference(a, b) == join(a, b)
        assert meet_reference(a, b) == meet(a, b)


def test_meet_fast_agrees():
    rng = random.Random(45)
    for _ in range(25):
        n = rng.choice([2, 3])
        a, b = rand_coset(rng, n), rand_coset(rng, n)
        assert meet_fast(a, b) == meet(a, b)


def test_dimension_mismatch():
    with pytest.raises(ZbraidError):
        leq(bottom(2), bottom(3))
    with pytest.raises(ZbraidError):
        join(bottom(2), bottom(3))


def test_join_meet_exact_m_set_containment():
    # exact PL containment of the sign-flip sets, independent of the
    # pivot-triple oracle that leq uses
    from zbraid.cones import pl_difference
    from zbraid.lexgerm import m_set

    rng = random.Random(46)
    for _ in range(10):
        n = rng.choice([2, 3])
        a, b = rand_coset(rng, n), rand_coset(rng, n)
        j, m = join(a, b), meet(a, b)
        for lo, hi in ((a, j), (b, j), (m, a), (m, b)):
            assert not pl_difference(m_set(lo.rep), m_set(hi.rep)).cells
