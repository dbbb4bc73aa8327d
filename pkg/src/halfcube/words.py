"""Binary words of fixed length n, stored as plain Python ints.

Coordinate 1 is the leftmost character of a literal and the most
significant bit of the integer, so "000011" (n=6) is the integer 3 with
ones in coordinates 5 and 6.  Addition of words is XOR.  Lengths up to
64 are accepted; everything in the bundled computations uses n <= 24.
"""

from __future__ import annotations

MAX_N = 64


def check_length(n: int) -> int:
    if not 1 <= n <= MAX_N:
        raise ValueError(f"word length must be in 1..{MAX_N}, got {n}")
    return n


def weight(w: int) -> int:
    """Number of set bits."""
    return w.bit_count()


def parity(w: int) -> int:
    """Weight mod 2."""
    return w.bit_count() & 1


def all_ones(n: int) -> int:
    return (1 << n) - 1


def parse_word(text: str, n: int) -> int:
    """Parse a word literal: a width-n binary string or 0x-prefixed hex.

    In both forms coordinate 1 is the most significant bit of the
    width-n field.
    """
    check_length(n)
    text = text.strip()
    if text.startswith(("0x", "0X")):
        w = int(text, 16)
    else:
        if len(text) != n or set(text) - {"0", "1"}:
            raise ValueError(f"expected a {n}-character binary string, got {text!r}")
        w = int(text, 2)
    if w >> n:
        raise ValueError(f"word {text!r} does not fit in {n} bits")
    return w


def format_word(w: int, n: int) -> str:
    """Fixed-width binary string, coordinate 1 leftmost."""
    check_length(n)
    if not 0 <= w < (1 << n):
        raise ValueError(f"word {w} does not fit in {n} bits")
    return format(w, f"0{n}b")


def coord(w: int, i: int, n: int) -> int:
    """Value of coordinate i (1-based, 1 = most significant)."""
    if not 1 <= i <= n:
        raise IndexError(f"coordinate {i} out of 1..{n}")
    return (w >> (n - i)) & 1
