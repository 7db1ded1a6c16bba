"""
Text formats for words and letters.

Words: letters separated by `|`; a letter is a matrix (`-1 0; 0 1` or JSON
array-of-arrays), or a named generator `s<i>` (sign flip), `h:<matrix>`
(an H element), `g<i>:<2x2 block>` (a block letter in G_i). A trailing
`^-1` marks an inverse letter. Braid-germ letters are permutations in
one-line notation, e.g. `2 1 3`.
"""

from __future__ import annotations

import re

from .matrices import Mat, ZbraidError, format_matrix, parse_matrix
from .presentation import block_embed, in_Hi, s_elem


def parse_letter(text: str, n: int) -> Mat:
    text = text.strip()
    m = re.fullmatch(r"s(\d+)", text)
    if m:
        i = int(m.group(1))
        if not (1 <= i <= n):
            raise ZbraidError(f"bad generator {text!r}: index out of range")
        return s_elem(n, i)
    if text.startswith("h:"):
        mat = parse_matrix(text[2:], expect_group=True)
        if len(mat) != n:
            raise ZbraidError(f"bad letter {text!r}: dimension mismatch")
        from .matrices import in_H

        if not in_H(mat):
            raise ZbraidError(f"bad letter {text!r}: not upper unitriangular")
        return mat
    m = re.fullmatch(r"g(\d+):(.*)", text, re.S)
    if m:
        i = int(m.group(1))
        if not (1 <= i <= n - 1):
            raise ZbraidError(f"bad generator index in {text!r}")
        block = parse_matrix(m.group(2), expect_group=True)
        if len(block) != 2:
            raise ZbraidError(f"bad block in {text!r}: need a 2x2 matrix")
        return block_embed(n, i, block)
    mat = parse_matrix(text, expect_group=True)
    if len(mat) != n:
        raise ZbraidError(f"bad letter {text!r}: dimension mismatch")
    return mat


def parse_signed_word(text: str, n: int) -> list[tuple[Mat, int]]:
    """`letter | letter^-1 | ...` into (matrix, sign) pairs; empty text is
    the empty word."""
    text = text.strip()
    if not text:
        return []
    out = []
    for chunk in text.split("|"):
        chunk = chunk.strip()
        if not chunk:
            raise ZbraidError("empty letter in word")
        sign = 1
        if chunk.endswith("^-1"):
            sign = -1
            chunk = chunk[:-3].strip()
        out.append((parse_letter(chunk, n), sign))
    return out


def parse_positive_word(text: str, n: int) -> tuple[Mat, ...]:
    signed = parse_signed_word(text, n)
    if any(s == -1 for _, s in signed):
        raise ZbraidError("this operation takes a positive word (no ^-1 letters)")
    return tuple(m for m, _ in signed)


def parse_sword(text: str, n: int):
    """An S-word: positive letters with inferred type tags (smallest i with
    the letter in H_i)."""
    letters = parse_positive_word(text, n)
    out = []
    for m in letters:
        tag = next((k for k in range(1, n) if in_Hi(m, k)), None)
        if tag is None:
            raise ZbraidError(f"letter {format_matrix(m)} lies in no H_i; split it first")
        out.append((m, tag))
    return tuple(out)


def parse_perm(text: str, m: int) -> tuple[int, ...]:
    try:
        vals = tuple(int(p) for p in text.replace("|", " ").split())
    except ValueError:
        raise ZbraidError(f"bad permutation {text!r}") from None
    if sorted(vals) != list(range(1, m + 1)):
        raise ZbraidError(f"{text!r} is not a permutation of 1..{m}")
    return vals


def parse_perm_signed_word(text: str, m: int) -> list[tuple[tuple[int, ...], int]]:
    text = text.strip()
    if not text:
        return []
    out = []
    for chunk in text.split("|"):
        chunk = chunk.strip()
        sign = 1
        if chunk.endswith("^-1"):
            sign = -1
            chunk = chunk[:-3].strip()
        out.append((parse_perm(chunk, m), sign))
    return out


def format_letter(m) -> str:
    return format_matrix(m)


def format_word(letters) -> str:
    return " | ".join(format_matrix(m) for m in letters)


def format_perm(p) -> str:
    return " ".join(str(v) for v in p)


def format_perm_word(letters) -> str:
    return " | ".join(format_perm(p) for p in letters)


def format_group_nf(k: int, letters, fmt=format_matrix) -> str:
    if not letters:
        return f"D^{k} |"
    return " | ".join([f"D^{k}"] + [fmt(m) for m in letters])
