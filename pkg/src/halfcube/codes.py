"""Binary codes: GF(2) linear algebra on bit-packed rows plus the two
concrete codes the constructions need, the repetition code and the
24-word Hadamard code of length 12.

Rows and words are ints with coordinate 1 as the most significant bit.
Linear codes are kept in reduced row echelon form so the basis is a
canonical function of the code.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import EmptyCodeError, ShapeError
from .words import all_ones, check_length, format_word, parse_word, parity, weight


def rref(rows, n: int) -> tuple[int, ...]:
    """Reduced row echelon form of bit-packed rows, pivots from the left."""
    check_length(n)
    basis: list[int] = []
    for row in rows:
        if not 0 <= row < (1 << n):
            raise ShapeError(f"row {row:#x} does not fit in {n} bits")
    work = [int(r) for r in rows]
    out: list[int] = []
    for bit in range(n - 1, -1, -1):
        pivot = None
        for i, r in enumerate(work):
            if (r >> bit) & 1:
                pivot = work.pop(i)
                break
        if pivot is None:
            continue
        work = [r ^ pivot if (r >> bit) & 1 else r for r in work]
        out = [r ^ pivot if (r >> bit) & 1 else r for r in out]
        out.append(pivot)
    return tuple(out)


@dataclass(frozen=True)
class LinearCode:
    n: int
    basis: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return 1 << self.dimension

    def codewords(self) -> list[int]:
        """All 2^dim words, ascending."""
        words = [0]
        for b in self.basis:
            words += [w ^ b for w in words]
        words.sort()
        return words

    def contains(self, w: int) -> bool:
        for b in self.basis:
            if (w >> (b.bit_length() - 1)) & 1:
                w ^= b
        return w == 0

    def coset_representatives(self, even_only: bool = False) -> list[int]:
        """Minimal representatives of the cosets tiling the ambient space.

        With even_only the ambient is the even-weight class; the code
        must then consist of even-weight words.
        """
        if even_only and any(parity(b) for b in self.basis):
            raise ShapeError("code has odd-weight words; even ambient impossible")
        seen = bytearray(1 << self.n)
        words = self.codewords()
        reps = []
        for w in range(1 << self.n):
            if seen[w] or (even_only and parity(w)):
                continue
            reps.append(w)
            for cw in words:
                seen[w ^ cw] = 1
        return reps

    def coset(self, rep: int) -> list[int]:
        return sorted(rep ^ cw for cw in self.codewords())

    def parity_checks(self) -> tuple[int, ...]:
        """A basis of the dual code (rows h with h . c = 0 for all c)."""
        dual = [w for w in range(1 << self.n) if all(
            weight(w & b) % 2 == 0 for b in self.basis)]
        return rref(dual, self.n)


def span_code(generators, n: int) -> LinearCode:
    return LinearCode(n, rref(generators, n))


def kernel_code(rows, n: int) -> LinearCode:
    """The code {w : H w = 0} for the given parity-check rows."""
    checks = rref(rows, n)
    pivots = {r.bit_length() - 1 for r in checks}
    basis = []
    for free in range(n - 1, -1, -1):
        if free in pivots:
            continue
        vec = 1 << free
        for r in checks:
            top = r.bit_length() - 1
            if (r >> free) & 1:
                vec |= 1 << top
        basis.append(vec)
    return LinearCode(n, rref(basis, n))


@dataclass(frozen=True)
class UnrestrictedCode:
    """An explicit word set, not necessarily linear."""

    n: int
    words: tuple[int, ...]

    def __post_init__(self):
        check_length(self.n)
        if not self.words:
            raise EmptyCodeError("code has no words")
        ws = tuple(sorted(set(self.words)))
        if len(ws) != len(self.words):
            raise ValueError("code words must be distinct")
        object.__setattr__(self, "words", ws)
        for w in ws:
            if not 0 <= w < (1 << self.n):
                raise ValueError(f"word {w} does not fit in {self.n} bits")

    @property
    def size(self) -> int:
        return len(self.words)

    def min_distance(self) -> int:
        return min(weight(u ^ v) for u, v in combinations(self.words, 2))

    def all_even(self) -> bool:
        return all(parity(w) == 0 for w in self.words)

    def translate(self, t: int) -> "UnrestrictedCode":
        return UnrestrictedCode(self.n, tuple(w ^ t for w in self.words))


def repetition(n: int) -> UnrestrictedCode:
    """The two-word code {all-zero, all-one}."""
    if n < 2:
        raise ValueError("repetition code needs n >= 2")
    return UnrestrictedCode(n, (0, all_ones(n)))


def code_distance(c1: UnrestrictedCode, c2: UnrestrictedCode) -> int:
    return min(weight(u ^ v) for u in c1.words for v in c2.words)


def hadamard12() -> UnrestrictedCode:
    """The 24-word length-12 code from a normalized order-12 Hadamard matrix.

    The matrix comes from the quadratic-residue construction over
    GF(11): rows and columns are indexed by {inf} union GF(11), the
    border row is all plus, the border column is minus below the
    corner, and the core is the residue character with plus on the
    diagonal.  Rows map to words via plus -> 0, minus -> 1, and the 12
    row words together with their complements form the code.
    """
    q = 11
    residues = {(x * x) % q for x in range(1, q)}

    def chi(x: int) -> int:
        x %= q
        if x == 0:
            return 0
        return 1 if x in residues else -1

    size = q + 1
    H = [[1] * size for _ in range(size)]
    for r in range(1, size):
        H[r][0] = -1
        for c in range(1, size):
            H[r][c] = 1 if r == c else chi((c - 1) - (r - 1))
    for r in range(size):
        for c in range(size):
            dot = sum(H[r][j] * H[c][j] for j in range(size))
            assert dot == (size if r == c else 0), "not a Hadamard matrix"

    top = all_ones(size)
    row_words = [int("".join("0" if x == 1 else "1" for x in row), 2) for row in H]
    code = sorted(set(row_words) | {w ^ top for w in row_words})
    assert len(code) == 24
    return UnrestrictedCode(size, tuple(code))


# ---------------------------------------------------------------------------
# Code files: "n=<n>" then one binary word per line.

def code_to_text(code: UnrestrictedCode) -> str:
    lines = [f"n={code.n}"]
    lines += [format_word(w, code.n) for w in code.words]
    return "\n".join(lines) + "\n"


def code_from_text(text: str) -> UnrestrictedCode:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("n="):
        raise ValueError("code file must start with an n=<n> header")
    n = int(lines[0][2:])
    return UnrestrictedCode(n, tuple(parse_word(ln, n) for ln in lines[1:]))


def save_code(code: UnrestrictedCode, path) -> None:
    with open(path, "w") as fh:
        fh.write(code_to_text(code))


def load_code(path) -> UnrestrictedCode:
    with open(path) as fh:
        return code_from_text(fh.read())
