import pytest

from zbraid.matrices import ZbraidError, identity
from zbraid.presentation import block_embed, s_elem
from zbraid.wordfmt import (
    format_group_nf,
    format_perm,
    format_word,
    parse_letter,
    parse_perm,
    parse_positive_word,
    parse_signed_word,
    parse_sword,
)


def test_named_generators():
    assert parse_letter("s1", 2) == s_elem(2, 1)
    assert parse_letter("s3", 3) == s_elem(3, 3)
    assert parse_letter("h:1 5; 0 1", 2) == ((1, 5), (0, 1))
    assert parse_letter("g1:0 1; -1 0", 3) == block_embed(3, 1, ((0, 1), (-1, 0)))
    assert parse_letter("g2:[[1,1],[0,1]]", 3) == block_embed(3, 2, ((1, 1), (0, 1)))


def test_named_generator_errors():
    with pytest.raises(ZbraidError):
        parse_letter("s5", 2)
    with pytest.raises(ZbraidError):
        parse_letter("h:-1 0; 0 1", 2)  # not in H
    with pytest.raises(ZbraidError):
        parse_letter("g2:1 0; 0 1", 2)  # index out of range for n=2
    with pytest.raises(ZbraidError):
        parse_letter("1 0; 1", 2)


def test_signed_word():
    w = parse_signed_word("s1 | 2 1; 3 2^-1 | h:1 1; 0 1", 2)
    assert [s for _, s in w] == [1, -1, 1]
    assert parse_signed_word("", 2) == []
    with pytest.raises(ZbraidError):
        parse_positive_word("s1^-1", 2)


def test_sword_tags():
    w = parse_sword("s1 | 1 0; 1 1", 2)
    assert all(t == 1 for _, t in w)
    w3 = parse_sword("g2:0 1; -1 0", 3)
    assert w3[0][1] == 2


def test_perm_parsing():
    assert parse_perm("2 1 3", 3) == (2, 1, 3)
    with pytest.raises(ZbraidError):
        parse_perm("2 2 3", 3)


def test_formatting():
    assert format_word([identity(2)]) == "1 0; 0 1"
    assert format_group_nf(2, []) == "D^2 |"
    assert format_group_nf(0, [identity(2)]) == "D^0 | 1 0; 0 1"
    assert format_group_nf(1, [(2, 1, 3)], fmt=format_perm) == "D^1 | 2 1 3"


def test_pl_boolean_dispatcher():
    from zbraid.cones import pl_boolean, pl_member, positivity_set
    from zbraid.matrices import identity as ident

    p = positivity_set(ident(2))
    q = pl_boolean("negate", p)
    assert pl_member(q, (-1, 5)) and not pl_member(q, (1, 0))
    u = pl_boolean("union", p, q)
    assert pl_member(u, (1, 0)) and pl_member(u, (-1, 5))
    i = pl_boolean("intersect", p, q)
    assert not i.cells
    c = pl_boolean("complement", p)
    assert pl_member(c, (-1, 5))
    with pytest.raises(ZbraidError):
        pl_boolean("xor", p, q)
