"""Implicit hypercube and halved-hypercube graphs.

Three kinds are supported: the full n-cube H(n) on all 2^n words with
Hamming-distance-1 adjacency, and the two halved cubes on the even or
odd weight class with Hamming-distance-2 adjacency.  Vertices are
addressed either as words (ints) or as ordinals, the rank of the word
among the graph's vertices in ascending numeric order.

For a halved cube the ordinal map is just a shift: dropping the last
coordinate of an even-weight word is a bijection onto all (n-1)-bit
words that preserves numeric order, so ordinal(w) = w >> 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .errors import MalformedFaceError, ParityError
from .words import all_ones, check_length, parity, weight

ADJACENCY_TABLE_MAX_N = 16


class Kind(str, Enum):
    FULL = "full"
    HALVED_EVEN = "halved-even"
    HALVED_ODD = "halved-odd"

    @property
    def halved(self) -> bool:
        return self is not Kind.FULL


@dataclass(frozen=True)
class CubeGraph:
    kind: Kind
    n: int

    def __post_init__(self):
        check_length(self.n)
        if self.kind.halved and self.n < 2:
            raise ValueError("halved cubes need n >= 2")

    @property
    def parity(self) -> int | None:
        """Weight parity of the vertex class, None for the full cube."""
        if self.kind is Kind.FULL:
            return None
        return 0 if self.kind is Kind.HALVED_EVEN else 1

    @property
    def num_vertices(self) -> int:
        return 1 << (self.n if self.kind is Kind.FULL else self.n - 1)

    @property
    def degree(self) -> int:
        return self.n if self.kind is Kind.FULL else self.n * (self.n - 1) // 2

    @property
    def diameter(self) -> int:
        return self.n if self.kind is Kind.FULL else self.n // 2

    def contains(self, w: int) -> bool:
        if not 0 <= w < (1 << self.n):
            return False
        return self.kind is Kind.FULL or parity(w) == self.parity

    def check_vertex(self, w: int) -> int:
        if not 0 <= w < (1 << self.n):
            raise ValueError(f"word {w} does not fit in {self.n} bits")
        if self.kind.halved and parity(w) != self.parity:
            raise ParityError(f"word {w:0{self.n}b} has the wrong parity for {self.kind.value}")
        return w

    def vertex_index(self, w: int) -> int:
        """Rank of w among the graph's vertices in ascending numeric order."""
        self.check_vertex(w)
        return w if self.kind is Kind.FULL else w >> 1

    def vertex_word(self, idx: int) -> int:
        """Inverse of vertex_index."""
        if not 0 <= idx < self.num_vertices:
            raise IndexError(f"ordinal {idx} out of range for {self}")
        if self.kind is Kind.FULL:
            return idx
        return (idx << 1) | ((parity(idx) ^ self.parity) & 1)

    def shift_masks(self) -> tuple[int, ...]:
        """XOR masks generating the adjacency, in ascending order."""
        return _shift_masks(self.kind.halved, self.n)

    def neighbors(self, w: int) -> list[int]:
        self.check_vertex(w)
        return [w ^ m for m in self.shift_masks()]

    def sphere(self, w: int, d: int) -> list[int]:
        """All vertices at graph distance exactly d, ascending."""
        self.check_vertex(w)
        if not 0 <= d <= self.diameter:
            raise ValueError(f"distance {d} out of 0..{self.diameter}")
        flips = d if self.kind is Kind.FULL else 2 * d
        out = [w ^ _combo_mask(pos) for pos in combinations(range(self.n), flips)]
        out.sort()
        return out

    def sphere_size(self, d: int) -> int:
        flips = d if self.kind is Kind.FULL else 2 * d
        return comb(self.n, flips)

    def distance(self, u: int, v: int) -> int:
        self.check_vertex(u)
        self.check_vertex(v)
        h = weight(u ^ v)
        return h if self.kind is Kind.FULL else h // 2

    def vertex_words_array(self) -> np.ndarray:
        """All vertex words in ordinal order, as an int64 array."""
        idx = np.arange(self.num_vertices, dtype=np.int64)
        if self.kind is Kind.FULL:
            return idx
        last = (np.bitwise_count(idx).astype(np.int64) ^ self.parity) & 1
        return (idx << 1) | last


def full_cube(n: int) -> CubeGraph:
    return CubeGraph(Kind.FULL, n)


def halved_cube(n: int, odd: bool = False) -> CubeGraph:
    return CubeGraph(Kind.HALVED_ODD if odd else Kind.HALVED_EVEN, n)


@lru_cache(maxsize=None)
def _shift_masks(halved: bool, n: int) -> tuple[int, ...]:
    if not halved:
        return tuple(1 << i for i in range(n))
    masks = [(1 << i) | (1 << j) for i in range(n) for j in range(i + 1, n)]
    masks.sort()
    return tuple(masks)


def _combo_mask(positions) -> int:
    m = 0
    for p in positions:
        m |= 1 << p
    return m


@lru_cache(maxsize=None)
def neighbor_table(g: CubeGraph) -> np.ndarray:
    """Ordinal adjacency table, shape (V, degree), built once per graph.

    Only offered for n <= 16 so that giant graphs stay implicit.
    """
    if g.n > ADJACENCY_TABLE_MAX_N:
        raise ValueError(f"adjacency table limited to n <= {ADJACENCY_TABLE_MAX_N}")
    w = g.vertex_words_array()
    masks = np.array(g.shift_masks(), dtype=np.int64)
    nbr_words = w[:, None] ^ masks[None, :]
    if g.kind is Kind.FULL:
        return nbr_words.astype(np.int32)
    return (nbr_words >> 1).astype(np.int32)


@dataclass(frozen=True)
class Face:
    """An s-face of a halved cube: free coordinates plus a fixed anchor.

    The anchor must be zero on the free coordinates.  The face holds the
    2^(s-1) words of the host's parity that agree with the anchor off
    the free mask; its direction vector is exactly free_mask.
    """

    graph: CubeGraph
    free_mask: int
    anchor: int

    def __post_init__(self):
        if not self.graph.kind.halved:
            raise MalformedFaceError("faces are defined inside halved cubes")
        top = all_ones(self.graph.n)
        if not 0 <= self.free_mask <= top or self.free_mask == 0:
            raise MalformedFaceError(f"free mask {self.free_mask:#x} out of range")
        if not 0 <= self.anchor <= top:
            raise MalformedFaceError(f"anchor {self.anchor:#x} out of range")
        if self.anchor & self.free_mask:
            raise MalformedFaceError("anchor overlaps the free coordinates")

    @property
    def s(self) -> int:
        return weight(self.free_mask)

    def vertices(self) -> list[int]:
        """The 2^(s-1) member words, ascending."""
        want = self.graph.parity
        out = []
        sub = self.free_mask
        while True:
            w = self.anchor | sub
            if parity(w) == want:
                out.append(w)
            if sub == 0:
                break
            sub = (sub - 1) & self.free_mask
        out.sort()
        return out

    def contains(self, w: int) -> bool:
        return (w & ~self.free_mask) == self.anchor and parity(w) == self.graph.parity


def face_of_pair(g: CubeGraph, u: int, v: int) -> Face:
    """The 2-face (an edge of the halved cube) through two adjacent words."""
    if g.distance(u, v) != 1 or not g.kind.halved:
        raise MalformedFaceError("a 2-face needs two adjacent halved-cube words")
    mask = u ^ v
    return Face(g, mask, u & ~mask)
