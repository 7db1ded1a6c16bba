import random
from fractions import Fraction
from itertools import product

import pytest

from zbraid.feasibility import linear_feasible, null_space_int, strict_cone_feasible
from zbraid.matrices import ZbraidError


def grid_feasible(eqs, stricts, n, bound=4, denom=2):
    """Brute-force oracle: scan a rational grid for a feasible point."""
    vals = [Fraction(a, b) for a in range(-bound, bound + 1) for b in range(1, denom + 1)]
    vals = sorted(set(vals))
    for x in product(vals, repeat=n):
        if all(sum(e[i] * x[i] for i in range(n)) == 0 for e in eqs) and all(
            sum(s[i] * x[i] for i in range(n)) > 0 for s in stricts
        ):
            return True
    return False


def test_spec_examples():
    assert strict_cone_feasible([], [(1, 0)]) is True
    assert strict_cone_feasible([(1, 0)], [(1, 0)]) is False
    assert strict_cone_feasible([], [(1, 0), (-1, 0)]) is False


def test_dimension_mismatch():
    with pytest.raises(ZbraidError):
        strict_cone_feasible([(1, 0)], [(1, 0, 0)])


def test_against_grid_oracle():
    rng = random.Random(4)
    for _ in range(300):
        n = rng.choice([2, 3])
        eqs = [tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(rng.randint(0, 2))]
        stricts = [tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(rng.randint(1, 3))]
        got = strict_cone_feasible(eqs, stricts, n)
        if grid_feasible(eqs, stricts, n):
            assert got, (eqs, stricts)
        # the grid oracle can miss feasible points, so only the one-sided
        # implication is exact; witnesses close the other side below


def test_witnesses_are_valid():
    rng = random.Random(5)
    for _ in range(400):
        n = rng.choice([2, 3, 4])
        eqs = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(rng.randint(0, 2))]
        stricts = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(rng.randint(1, 3))]
        feasible, witness = linear_feasible(eqs, stricts, (), n)
        if feasible:
            assert witness is not None
            assert all(sum(e[i] * witness[i] for i in range(n)) == 0 for e in eqs)
            assert all(sum(s[i] * witness[i] for i in range(n)) > 0 for s in stricts)


def test_monotone_in_stricts():
    rng = random.Random(6)
    for _ in range(150):
        n = rng.choice([2, 3])
        eqs = [tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(rng.randint(0, 1))]
        stricts = [tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(rng.randint(1, 2))]
        extra = tuple(rng.randint(-2, 2) for _ in range(n))
        before = strict_cone_feasible(eqs, stricts, n)
        after = strict_cone_feasible(eqs, stricts + [extra], n)
        assert not (after and not before)


def test_full_rank_equalities_kill_stricts():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.choice([2, 3])
        eqs = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        stricts = [tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(rng.randint(1, 2))]
        assert strict_cone_feasible(eqs, stricts, n) is False


def test_null_space():
    basis = null_space_int([(1, 0, 0), (0, 1, 0)], 3)
    assert basis == [(0, 0, 1)]
    basis = null_space_int([(-3, 1, 2), (-1, 0, 0)], 3)
    for v in basis:
        assert -3 * v[0] + v[1] + 2 * v[2] == 0 and v[0] == 0
    assert len(basis) == 1
