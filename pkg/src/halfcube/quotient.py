"""Exact quotient-matrix algebra for halved cubes.

Everything here is integer or rational arithmetic, never floating
point: the admissibility question for a candidate matrix is ultimately
an integrality test, so exactness is the whole point.

A quotient matrix S of an equitable partition of a halved n-cube must
pass four necessary checks:

  1. nonnegative integer entries, off-diagonal b and c positive, and
     every row summing to the degree n(n-1)/2;
  2. (b+c)/gcd(b,c) divides 2^(n-1), which pins the cell sizes
     |C0| = 2^(n-1) c/(b+c) and |C1| = 2^(n-1) b/(b+c);
  3. the second eigenvalue a-c = d-b equals theta_i(n) for some i;
  4. the distance-count matrices S^(0)=Id, S^(2)=S, S^(4), ... obtained
     from the three-term recursion implemented by recursion_table all
     have nonnegative integer entries.

For the minimum eigenvalue theta_{n/2}(n) (n even) there is a further
exact correspondence with 2-partitions of the cube H(n-1) carrying
eigenvalue -1: S is feasible iff S = thm2_forward(S') for a matrix
S' = [[c-1, n-c], [c, n-c-1]].  As printed, the correspondence formula
uses an identity coefficient of 1, which is dimensionally inconsistent
(row sums would not equal the degree); the consistent coefficient is
n-1 with a minus sign, which also reproduces every published
minimum-eigenvalue candidate.  thm2_forward implements the corrected
map, and on the parametric form above it collapses to (n/2) * S'.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd

from .errors import NoPreimageError, NotStochasticError, ShapeError
from .graphs import Kind

Matrix = tuple[tuple[int, ...], ...]


def as_matrix(rows) -> Matrix:
    """Normalize a nested sequence into a tuple-of-tuples integer matrix."""
    m = tuple(tuple(int(x) for x in row) for row in rows)
    if not m or any(len(row) != len(m[0]) for row in m):
        raise ShapeError("matrix rows must be nonempty and of equal length")
    return m


def halved_degree(n: int) -> int:
    return n * (n - 1) // 2


def theta(n: int, i: int) -> int:
    """The i-th halved-cube eigenvalue ((n-2i)^2 - n) / 2, decreasing in i."""
    if not 0 <= i <= n // 2:
        raise IndexError(f"eigenvalue index {i} out of 0..{n // 2}")
    return ((n - 2 * i) ** 2 - n) // 2


def theta_list(n: int) -> list[int]:
    return [theta(n, i) for i in range(n // 2 + 1)]


def full_cube_eigenvalues(n: int) -> list[int]:
    return [n - 2 * i for i in range(n + 1)]


@dataclass(frozen=True)
class SpectrumPoint:
    n: int
    i: int
    value: int


@dataclass(frozen=True)
class QuotientMatrix:
    """A k x k candidate quotient matrix in the context of a graph."""

    n: int
    kind: Kind
    S: Matrix

    @property
    def k(self) -> int:
        return len(self.S)

    def row_sums(self) -> list[int]:
        return [sum(row) for row in self.S]

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "kind": self.kind.value, "k": self.k,
                           "S": [list(r) for r in self.S]})

    @classmethod
    def from_json(cls, text: str) -> "QuotientMatrix":
        data = json.loads(text)
        qm = cls(int(data["n"]), Kind(data["kind"]), as_matrix(data["S"]))
        if "k" in data and int(data["k"]) != qm.k:
            raise ShapeError("declared k does not match the matrix")
        return qm


def eigenvalues_2x2(S) -> tuple[int, int]:
    """(row sum, a - c) of a 2x2 matrix with equal row sums."""
    S = as_matrix(S)
    if len(S) != 2 or len(S[0]) != 2:
        raise ShapeError("expected a 2x2 matrix")
    (a, b), (c, d) = S
    if a + b != c + d:
        raise NotStochasticError(f"row sums differ: {a + b} vs {c + d}")
    return a + b, a - c


def cell_sizes_2x2(S, num_vertices: int) -> tuple[Fraction, Fraction]:
    """Cell sizes forced by edge counting: |C0| b = |C1| c."""
    (_, b), (c, _) = as_matrix(S)
    total = b + c
    return (Fraction(num_vertices * c, total), Fraction(num_vertices * b, total))


@dataclass
class WeightDistributionTable:
    """The distance-count matrices S^(0), S^(2), ..., S^(2*floor(n/2)).

    S^(i)[j][m] counts, for a vertex v in cell j, the cell-m vertices at
    Hamming distance i from v.  Entries are exact rationals; the table
    is admissible when every entry is a nonnegative integer.
    """

    n: int
    base: Matrix
    matrices: list[list[list[Fraction]]]
    integral: list[bool]
    nonnegative: list[bool]

    def distances(self) -> list[int]:
        return [2 * t for t in range(len(self.matrices))]

    @property
    def ok(self) -> bool:
        return all(self.integral) and all(self.nonnegative)

    def first_offending(self) -> int | None:
        """Smallest distance i whose S^(i) is not nonnegative integral."""
        for t, (ig, nn) in enumerate(zip(self.integral, self.nonnegative)):
            if not (ig and nn):
                return 2 * t
        return None

    def matrix_at(self, i: int) -> list[list[Fraction]]:
        if i % 2 or not 0 <= i // 2 < len(self.matrices):
            raise IndexError(f"no S^({i}) in this table")
        return self.matrices[i // 2]

    def int_matrix_at(self, i: int) -> Matrix:
        m = self.matrix_at(i)
        if any(x.denominator != 1 for row in m for x in row):
            raise ValueError(f"S^({i}) is not integral")
        return tuple(tuple(int(x) for x in row) for row in m)


def recursion_table(S, n: int) -> WeightDistributionTable:
    """Run the three-term recursion that generates S^(i+2) from S^(i).

    Solves S * S^(i) = C(n-i+2, 2) S^(i-2) + i(n-i) S^(i) + C(i+2, 2) S^(i+2)
    for S^(i+2), starting from S^(0) = Id and S^(2) = S, up to distance
    2 * floor(n/2).  Works for any cell count k.
    """
    S = as_matrix(S)
    k = len(S)
    if any(len(row) != k for row in S):
        raise ShapeError("expected a square matrix")
    ident = [[Fraction(int(r == c)) for c in range(k)] for r in range(k)]
    cur = [[Fraction(x) for x in row] for row in S]
    mats = [ident, cur]
    for i in range(2, 2 * (n // 2), 2):
        prev, cur = mats[-2], mats[-1]
        nxt = [[Fraction(0)] * k for _ in range(k)]
        lead = comb(i + 2, 2)
        back = comb(n - i + 2, 2)
        mid = i * (n - i)
        for r in range(k):
            for c in range(k):
                acc = sum(Fraction(S[r][m]) * cur[m][c] for m in range(k))
                nxt[r][c] = (acc - back * prev[r][c] - mid * cur[r][c]) / lead
        mats.append(nxt)
    integral = [all(x.denominator == 1 for row in m for x in row) for m in mats]
    nonneg = [all(x >= 0 for row in m for x in row) for m in mats]
    return WeightDistributionTable(n, S, mats, integral, nonneg)


@dataclass
class AdmissibilityReport:
    """Outcome of the four necessary checks for one candidate matrix."""

    n: int
    S: Matrix
    cond1_integrality: bool
    cond2_proportion: bool
    cond3_eigenvalue: bool
    spectrum_point: SpectrumPoint | None
    cell_sizes: tuple[int, int] | None
    cond4_recursion: bool | None = None
    cond4_first_offending: int | None = None
    table: WeightDistributionTable | None = field(default=None, repr=False)
    thm2_c: int | None = None
    thm2_applied: bool = False
    thm2_ok: bool | None = None

    @property
    def overall(self) -> bool:
        verdicts = [self.cond1_integrality, self.cond2_proportion, self.cond3_eigenvalue]
        if self.cond4_recursion is not None:
            verdicts.append(self.cond4_recursion)
        if self.thm2_applied:
            verdicts.append(bool(self.thm2_ok))
        return all(verdicts)

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "S": [list(r) for r in self.S],
            "cond1_integrality": self.cond1_integrality,
            "cond2_proportion": self.cond2_proportion,
            "cond3_eigenvalue": self.cond3_eigenvalue,
            "overall": self.overall,
        }
        if self.spectrum_point is not None:
            out["eigenvalue"] = {"i": self.spectrum_point.i, "value": self.spectrum_point.value}
        if self.cell_sizes is not None:
            out["cell_sizes"] = list(self.cell_sizes)
        if self.cond4_recursion is not None:
            out["cond4_recursion"] = self.cond4_recursion
            if self.cond4_first_offending is not None:
                out["cond4_first_offending"] = self.cond4_first_offending
        if self.thm2_applied:
            out["thm2_ok"] = self.thm2_ok
            out["thm2_c"] = self.thm2_c
        return out


def check_conditions_1_to_3(S, n: int) -> AdmissibilityReport:
    """Checks 1 to 3 for a 2x2 candidate on the halved n-cube."""
    S = as_matrix(S)
    if len(S) != 2 or len(S[0]) != 2:
        raise ShapeError("conditions are formulated for 2x2 matrices")
    (a, b), (c, d) = S
    deg = halved_degree(n)
    cond1 = min(a, b, c, d) >= 0 and b > 0 and c > 0 and a + b == deg and c + d == deg

    # (b+c)/gcd(b,c) must divide 2^(n-1); dividing a power of two it is one
    cond2 = False
    sizes = None
    if b > 0 and c > 0:
        ratio = (b + c) // gcd(b, c)
        cond2 = (2 ** (n - 1)) % ratio == 0
        if cond2:
            s0, s1 = cell_sizes_2x2(S, 2 ** (n - 1))
            sizes = (int(s0), int(s1))

    point = None
    for i in range(n // 2 + 1):
        if a - c == theta(n, i) and d - b == theta(n, i):
            point = SpectrumPoint(n, i, theta(n, i))
            break
    cond3 = point is not None

    return AdmissibilityReport(n, S, cond1, cond2, cond3, point, sizes)


def check_all_conditions(S, n: int) -> AdmissibilityReport:
    """Conditions 1 to 3 plus the distance-count recursion (condition 4)."""
    rep = check_conditions_1_to_3(S, n)
    table = recursion_table(rep.S, n)
    rep.table = table
    rep.cond4_recursion = table.ok
    rep.cond4_first_offending = table.first_offending()
    return rep


def thm2_forward(Sprime, n: int) -> Matrix:
    """Map an H(n-1) eigenvalue -1 matrix to its halved n-cube partner.

    S' must have the parametric form [[c-1, n-c], [c, n-c-1]].  The
    corrected map S = (S'^2 - (n-1) Id)/2 + S' is applied; on this form
    it equals (n/2) S' and the result has eigenvalue -n/2.
    """
    Sp = as_matrix(Sprime)
    c = _thm2_param(Sp, n)
    sq = [[sum(Sp[r][m] * Sp[m][col] for m in range(2)) for col in range(2)] for r in range(2)]
    out = []
    for r in range(2):
        row = []
        for col in range(2):
            val = Fraction(sq[r][col] - (n - 1) * (r == col), 2) + Sp[r][col]
            if val.denominator != 1:
                raise ShapeError(f"correspondence image is not integral at {(r, col)}")
            row.append(int(val))
        out.append(tuple(row))
    result = tuple(out)
    assert result == tuple(tuple(n // 2 * x for x in row) for row in Sp), (c, result)
    return result


def thm2_inverse(S, n: int) -> int:
    """The unique c with thm2_forward([[c-1,n-c],[c,n-c-1]], n) == S.

    Raises NoPreimageError when S is not in the image; by the
    correspondence no partition with matrix S exists in that case.
    """
    S = as_matrix(S)
    if len(S) != 2 or len(S[0]) != 2:
        raise ShapeError("expected a 2x2 matrix")
    if n % 2:
        raise ShapeError("the correspondence needs even n")
    twice = 2 * S[1][0]
    if twice % n:
        raise NoPreimageError(f"{S} has no preimage: c would be {twice}/{n}")
    c = twice // n
    if not 1 <= c <= n - 2:
        raise NoPreimageError(f"{S} has no preimage: c={c} out of range")
    expected = thm2_parametric(c, n)
    if thm2_forward(expected, n) != S:
        raise NoPreimageError(f"{S} is not the image of c={c}")
    return c


def thm2_parametric(c: int, n: int) -> Matrix:
    """The H(n-1) matrix [[c-1, n-c], [c, n-c-1]]."""
    return ((c - 1, n - c), (c, n - c - 1))


def _thm2_param(Sp: Matrix, n: int) -> int:
    if len(Sp) != 2 or len(Sp[0]) != 2:
        raise ShapeError("expected a 2x2 matrix")
    c = Sp[1][0]
    if Sp != thm2_parametric(c, n) or not 1 <= c <= n - 2:
        raise ShapeError(f"{Sp} is not of the form [[c-1,n-c],[c,n-c-1]] for n={n}")
    if n % 2:
        raise ShapeError("the correspondence needs even n")
    return c


def enumerate_admissible(n: int, i: int, apply_cond4: bool = False,
                         apply_thm2_filter: bool = True) -> list[AdmissibilityReport]:
    """All 2x2 candidates with b >= c and eigenvalue theta_i(n).

    Candidates satisfy conditions 1 to 3; condition 4 and, for the
    minimum eigenvalue with even n, the H(n-1) correspondence filter
    are applied on request.  Sorted by descending a.
    """
    if not 1 <= i <= n // 2:
        raise IndexError(f"eigenvalue index {i} out of 1..{n // 2}")
    ev = theta(n, i)
    deg = halved_degree(n)
    out = []
    for c in range(1, deg + 1):
        a = ev + c
        b = deg - a
        d = deg - c
        if a < 0:
            continue
        if b < c:
            break
        rep = check_conditions_1_to_3(((a, b), (c, d)), n)
        if not (rep.cond1_integrality and rep.cond2_proportion and rep.cond3_eigenvalue):
            continue
        if apply_thm2_filter and n % 2 == 0 and i == n // 2:
            rep.thm2_applied = True
            try:
                rep.thm2_c = thm2_inverse(rep.S, n)
                rep.thm2_ok = True
            except NoPreimageError:
                rep.thm2_ok = False
                continue
        if apply_cond4:
            table = recursion_table(rep.S, n)
            rep.table = table
            rep.cond4_recursion = table.ok
            rep.cond4_first_offending = table.first_offending()
            if not table.ok:
                continue
        out.append(rep)
    out.sort(key=lambda r: -r.S[0][0])
    return out
