"""Constructions of equitable partitions.

Every function here returns a Partition whose claimed matrix has been
checked by the direct counting oracle; nothing is trusted symbolically.
For outputs on graphs with n <= 16 verification is mandatory, beyond
that it can be switched off (none of the bundled computations go that
far).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import LinearCode, UnrestrictedCode, code_distance, span_code, kernel_code
from .errors import (BoundError, CellOverlapError, DegenerateCellError,
                     DuplicateCosetError, EigenvalueMismatchError,
                     FaceCoverError, FormError, GraphMismatchError,
                     MergeConditionError, ParityError, RadiusError,
                     TranslateCollisionError)
from .graphs import CubeGraph, Face, Kind, face_of_pair, full_cube, halved_cube
from .partitions import (Partition, distance_partition, partition_from_cells,
                         verify_equitable)
from .quotient import Matrix, as_matrix, eigenvalues_2x2, thm2_forward, thm2_inverse, thm2_parametric
from .words import all_ones, parity, weight

VERIFY_LIMIT_N = 16


def _finalize(p: Partition, claimed: Matrix | None = None,
              verify: bool | None = None) -> Partition:
    """Attach the claim and run the oracle gate.

    verify=None means automatic: verify exactly when the graph is small
    enough for the adjacency table.  A verified partition always carries
    its true matrix as the claim.
    """
    if claimed is not None:
        p.claimed = as_matrix(claimed)
    if verify is None:
        verify = p.graph.n <= VERIFY_LIMIT_N
    if verify:
        matrix = verify_equitable(p).require(p.claimed)
        p.claimed = matrix
    return p


def partition_matrix(p: Partition) -> Matrix:
    """The verified quotient matrix of a partition."""
    return verify_equitable(p).require(p.claimed)


# ---------------------------------------------------------------------------
# Restriction and the odd-n lift

def restrict_from_cube(p: Partition, verify: bool | None = None) -> tuple[Partition, Partition]:
    """Restrict an equitable partition of H(n) to both halved cubes."""
    if p.graph.kind is not Kind.FULL:
        raise GraphMismatchError("restriction starts from a full-cube partition")
    out = []
    for odd in (False, True):
        g = halved_cube(p.graph.n, odd=odd)
        labels = p.labels[g.vertex_words_array()]
        if len(np.unique(labels)) < p.k:
            raise DegenerateCellError(
                "a cell dies under restriction; the bipartite-parts partition "
                "and its refinements are excluded")
        out.append(_finalize(Partition(g, p.k, labels), verify=verify))
    return out[0], out[1]


def odd_lift(p: Partition, verify: bool | None = None) -> Partition:
    """Lift a halved-cube partition to H(n) for odd n.

    Cell i of the lift is C_i together with its translate by the
    all-one word; each full-cube vertex w takes the label of w itself
    when w has even weight and of w + all-one otherwise.
    """
    if p.graph.kind is not Kind.HALVED_EVEN:
        raise ParityError("lift is defined on even halved-cube partitions")
    n = p.graph.n
    if n % 2 == 0:
        raise ParityError("lift needs odd n; for even n the all-one translate collides")
    g = full_cube(n)
    w = np.arange(g.num_vertices, dtype=np.int64)
    odd = np.bitwise_count(w).astype(np.int64) & 1
    u = np.where(odd == 1, w ^ all_ones(n), w)
    labels = p.labels[u >> 1]
    return _finalize(Partition(g, p.k, labels), verify=verify)


# ---------------------------------------------------------------------------
# The minimum-eigenvalue correspondence

def thm2_transfer(p: Partition, verify: bool | None = None) -> Partition:
    """Map an H(n-1) partition with eigenvalue -1 to the halved n-cube.

    Appending a parity bit to each (n-1)-bit word is an isomorphism
    onto the even halved n-cube's vertex set that sends distance {1,2}
    adjacency to halved adjacency; under the ordinal numbering used
    here the label array transfers unchanged.
    """
    if p.graph.kind is not Kind.FULL:
        raise GraphMismatchError("transfer starts from a full-cube partition")
    m = p.graph.n
    if m % 2 == 0:
        raise ParityError("transfer needs H(n-1) with odd n-1")
    S = partition_matrix(p)
    deg, ev = eigenvalues_2x2(S)
    if ev != -1:
        raise EigenvalueMismatchError(f"expected eigenvalue -1, matrix has {ev}")
    n = m + 1
    c = S[1][0]
    if S != thm2_parametric(c, n):
        raise EigenvalueMismatchError(f"{S} is not [[c-1,n-c],[c,n-c-1]] for n={n}")
    g = halved_cube(n)
    return _finalize(Partition(g, p.k, p.labels.copy()),
                     claimed=thm2_forward(S, n), verify=verify)


def thm2_transfer_inverse(p: Partition, verify: bool | None = None) -> Partition:
    """Drop the parity coordinate: the inverse of thm2_transfer."""
    if p.graph.kind is not Kind.HALVED_EVEN:
        raise GraphMismatchError("inverse transfer starts from an even halved cube")
    n = p.graph.n
    S = partition_matrix(p)
    c = thm2_inverse(S, n)
    g = full_cube(n - 1)
    return _finalize(Partition(g, p.k, p.labels.copy()),
                     claimed=thm2_parametric(c, n), verify=verify)


# ---------------------------------------------------------------------------
# Partitions from completely regular codes of radius 3 and 4

def radius3_partition(code: UnrestrictedCode, verify: bool | None = None) -> Partition:
    """Cells (C, C2) in the even halved cube, for an even-weight code of
    covering radius 3 in H(n)."""
    if not code.all_even():
        raise ParityError("code must consist of even-weight words")
    dp = distance_partition(full_cube(code.n), code.words)
    if dp.rho != 3:
        raise RadiusError(f"covering radius is {dp.rho}, construction needs 3")
    g = halved_cube(code.n)
    return _finalize(partition_from_cells(g, [dp.layer_words(0), dp.layer_words(2)]),
                     verify=verify)


def radius4_partition(code: UnrestrictedCode, verify: bool | None = None) -> Partition:
    """Cells (C1, C3) in the odd halved cube, for an even-weight code of
    covering radius 4 in H(n)."""
    if not code.all_even():
        raise ParityError("code must consist of even-weight words")
    dp = distance_partition(full_cube(code.n), code.words)
    if dp.rho != 4:
        raise RadiusError(f"covering radius is {dp.rho}, construction needs 4")
    g = halved_cube(code.n, odd=True)
    return _finalize(partition_from_cells(g, [dp.layer_words(1), dp.layer_words(3)]),
                     verify=verify)


def union_translates_radius4(codes, verify: bool | None = None) -> Partition:
    """First cell = union of the distance-1 layers of several translates.

    The translates must be pairwise at distance >= 4 so their layers do
    not collide.  With t translates of a base whose single-code
    partition has matrix [[a,b],[c,d]], the claim is the t-fold union
    matrix [[a+(t-1)c, b-(t-1)c], [tc, d-(t-1)c]].
    """
    codes = list(codes)
    if not codes:
        raise ValueError("need at least one code")
    n = codes[0].n
    if any(c.n != n for c in codes):
        raise GraphMismatchError("codes have different lengths")
    for i in range(len(codes)):
        for j in range(i + 1, len(codes)):
            d = code_distance(codes[i], codes[j])
            if d < 4:
                raise TranslateCollisionError(
                    f"codes {i} and {j} are at distance {d} < 4")
    base = radius4_partition(codes[0], verify=verify)
    (a, b), (c, d) = base.claimed
    t = len(codes)
    cell0: set[int] = set()
    for code in codes:
        dp = distance_partition(full_cube(n), code.words)
        if dp.rho != 4:
            raise RadiusError(f"covering radius is {dp.rho}, construction needs 4")
        layer = dp.layer_words(1)
        if cell0 & set(layer):
            raise TranslateCollisionError("distance-1 layers overlap")
        cell0.update(layer)
    g = halved_cube(n, odd=True)
    labels = np.ones(g.num_vertices, dtype=np.int16)
    for w in cell0:
        labels[g.vertex_index(w)] = 0
    claimed = ((a + (t - 1) * c, b - (t - 1) * c), (t * c, d - (t - 1) * c))
    return _finalize(Partition(g, 2, labels), claimed=claimed, verify=verify)


# ---------------------------------------------------------------------------
# Linear partitions and coset unions

@dataclass
class PairSumReport:
    """How often each column-pair sum of B occurs, plus the certificate.

    For the partition (kernel, complement) to be equitable every
    nonzero syndrome reachable from an even-weight word, i.e. every
    nonzero element of the span of the pairwise column sums, must occur
    the same number of times as a sum of two columns of B.
    """

    column_sums: dict[int, int]
    reachable: tuple[int, ...]
    constant: bool
    value: int | None


@dataclass
class LinearPartitionResult:
    code: LinearCode
    partition: Partition
    pair_sums: PairSumReport
    equitable: bool
    matrix: Matrix | None


def _pair_sum_report(rows: list[int], n: int) -> PairSumReport:
    height = len(rows)
    cols = []
    for j in range(n):
        v = 0
        for r, row in enumerate(rows):
            v |= ((row >> (n - 1 - j)) & 1) << (height - 1 - r)
        cols.append(v)
    counts: dict[int, int] = {}
    for i in range(n):
        for j in range(i + 1, n):
            s = cols[i] ^ cols[j]
            counts[s] = counts.get(s, 0) + 1
    span = {0}
    for s in counts:
        span |= {s ^ x for x in span}
    reachable = tuple(sorted(span - {0}))
    values = {counts.get(s, 0) for s in reachable}
    constant = len(values) <= 1
    return PairSumReport(counts, reachable, constant,
                         values.pop() if constant and values else None)


def linear_partition(parity_rows, n: int) -> LinearPartitionResult:
    """Kernel-versus-rest partition for a parity-check matrix (1; B).

    The first row must be all ones (so the kernel is even-weight).  The
    pair-sum table over the columns of B is the classical certificate;
    the verdict itself comes from the counting oracle.
    """
    rows = [int(r) for r in parity_rows]
    if not rows or rows[0] != all_ones(n):
        raise FormError("first parity-check row must be the all-one row")
    code = kernel_code(rows, n)
    g = halved_cube(n)
    if code.dimension >= n - 1:
        raise DegenerateCellError("kernel is the whole even-weight class")
    labels = np.ones(g.num_vertices, dtype=np.int16)
    for w in code.codewords():
        labels[g.vertex_index(w)] = 0
    p = Partition(g, 2, labels)
    report = _pair_sum_report(rows[1:], n)
    outcome = verify_equitable(p)
    if outcome.equitable:
        p.claimed = outcome.matrix
    return LinearPartitionResult(code, p, report, outcome.equitable, outcome.matrix)


def merge_cosets(code: LinearCode, t: int, reps=None,
                 verify: bool | None = None) -> Partition:
    """Union t cosets of an equitable linear first cell.

    The base partition (code, complement) must be equitable, say with
    matrix [[a,b],[c,d]]; the union of t < 2^(n-1)/|code| pairwise
    distinct cosets is then equitable with
    [[a+(t-1)c, b-(t-1)c], [tc, d-(t-1)c]].  Default representatives
    are the t smallest canonical ones, starting with the code itself.
    """
    n = code.n
    g = halved_cube(n)
    if any(parity(b) for b in code.basis):
        raise ParityError("code must consist of even-weight words")
    ambient = 1 << (n - 1)
    if not 1 <= t < ambient // code.size:
        raise BoundError(f"need 1 <= t < {ambient // code.size}, got {t}")
    if reps is None:
        reps = code.coset_representatives(even_only=True)[:t]
    reps = [int(r) for r in reps]
    if len(reps) != t:
        raise BoundError(f"need {t} representatives, got {len(reps)}")
    canon = set()
    for r in reps:
        if parity(r):
            raise ParityError(f"representative {r:#x} has odd weight")
        key = min(r ^ cw for cw in code.codewords())
        if key in canon:
            raise DuplicateCosetError(f"representative {r:#x} repeats a coset")
        canon.add(key)

    base_labels = np.ones(g.num_vertices, dtype=np.int16)
    for w in code.codewords():
        base_labels[g.vertex_index(w)] = 0
    (a, b), (c, d) = verify_equitable(Partition(g, 2, base_labels)).require()

    labels = np.ones(g.num_vertices, dtype=np.int16)
    for r in reps:
        for cw in code.codewords():
            labels[g.vertex_index(r ^ cw)] = 0
    claimed = ((a + (t - 1) * c, b - (t - 1) * c), (t * c, d - (t - 1) * c))
    return _finalize(Partition(g, 2, labels), claimed=claimed, verify=verify)


def union_disjoint(p1: Partition, p2: Partition,
                   verify: bool | None = None) -> Partition:
    """Union the first cells of two cospectral partitions.

    With matrices [[a',b'],[c',d']] and [[a'',b''],[c'',d'']] sharing
    the eigenvalue a'-c' = a''-c'' and disjoint first cells, the pair
    (C0 union P0, C1 intersect P1) is equitable with
    [[a'+c'', b'-c''], [c'+c'', d'-c'']]; the off-diagonal column
    follows from the row sums.
    """
    if p1.graph != p2.graph:
        raise GraphMismatchError("partitions live on different graphs")
    if p1.k != 2 or p2.k != 2:
        raise ValueError("union is defined for 2-partitions")
    S1 = partition_matrix(p1)
    S2 = partition_matrix(p2)
    if S1[0][0] - S1[1][0] != S2[0][0] - S2[1][0]:
        raise EigenvalueMismatchError(f"{S1} and {S2} are not cospectral")
    both = (p1.labels == 0) & (p2.labels == 0)
    if both.any():
        raise CellOverlapError("first cells intersect")
    labels = np.where((p1.labels == 0) | (p2.labels == 0), 0, 1).astype(np.int16)
    if not (labels == 1).any():
        raise DegenerateCellError("union of first cells covers the whole graph")
    (a, b), (c, d) = S1
    c2 = S2[1][0]
    claimed = ((a + c2, b - c2), (c + c2, d - c2))
    return _finalize(Partition(p1.graph, 2, labels), claimed=claimed, verify=verify)


# ---------------------------------------------------------------------------
# The block-sum (times t) constructions

def _block_fold(wordvals: np.ndarray, n: int, t: int) -> np.ndarray:
    mask = all_ones(n)
    acc = np.zeros_like(wordvals)
    for i in range(t):
        acc ^= (wordvals >> (n * i)) & mask
    return acc


def times_t_cube(p: Partition, t: int, verify: bool | None = None) -> Partition:
    """Label H(tn) by the cell of the XOR of the t blocks; matrix tS."""
    if p.graph.kind is not Kind.FULL:
        raise GraphMismatchError("expected a full-cube partition")
    if t < 1:
        raise ValueError("t must be positive")
    n = p.graph.n
    S = partition_matrix(p)
    g = full_cube(t * n)
    u = _block_fold(np.arange(g.num_vertices, dtype=np.int64), n, t)
    labels = p.labels[u]
    claimed = tuple(tuple(t * x for x in row) for row in S)
    return _finalize(Partition(g, p.k, labels), claimed=claimed, verify=verify)


def times_t_halved(p: Partition, t: int, verify: bool | None = None) -> Partition:
    """Same block-sum labeling on halved cubes; matrix t^2 S + n t(t-1)/2 Id.

    The XOR of the blocks of an even-weight tn-word has even weight, so
    the label of an even halved-cube partition is always defined.
    """
    if p.graph.kind is not Kind.HALVED_EVEN:
        raise ParityError("expected an even halved-cube partition")
    if t < 1:
        raise ValueError("t must be positive")
    n = p.graph.n
    S = partition_matrix(p)
    g = halved_cube(t * n)
    u = _block_fold(g.vertex_words_array(), n, t)
    labels = p.labels[u >> 1]
    shift = n * t * (t - 1) // 2
    claimed = tuple(tuple(t * t * x + shift * (r == col) for col, x in enumerate(row))
                    for r, row in enumerate(S))
    return _finalize(Partition(g, p.k, labels), claimed=claimed, verify=verify)


# ---------------------------------------------------------------------------
# The splitting construction

@dataclass(frozen=True)
class FacePartition:
    """A partition of a vertex subset of a halved cube into s-faces."""

    graph: CubeGraph
    faces: tuple[Face, ...]

    def __post_init__(self):
        if not self.faces:
            raise FaceCoverError("no faces given")
        s = self.faces[0].s
        owner: dict[int, int] = {}
        for idx, f in enumerate(self.faces):
            if f.graph != self.graph:
                raise GraphMismatchError("face on a different graph")
            if f.s != s:
                raise FaceCoverError("faces must share a common dimension")
            for w in f.vertices():
                if w in owner:
                    raise FaceCoverError(f"word {w:#x} lies in two faces")
                owner[w] = idx
        object.__setattr__(self, "_owner", owner)

    @property
    def s(self) -> int:
        return self.faces[0].s

    def covered_words(self) -> set[int]:
        return set(self._owner)

    def free_mask_of(self, w: int) -> int:
        return self.faces[self._owner[w]].free_mask


def edge_face_partition(g: CubeGraph, pairs) -> FacePartition:
    """Face partition made of 2-faces, one per adjacent pair."""
    return FacePartition(g, tuple(face_of_pair(g, u, v) for u, v in pairs))


def _split_labels(base: Partition, fp: FacePartition) -> tuple[np.ndarray, CubeGraph, int]:
    g = base.graph
    if g.kind is not Kind.HALVED_EVEN:
        raise ParityError("splitting starts from an even halved-cube partition")
    if base.k != 2:
        raise ValueError("splitting needs a 2-cell base")
    n = g.n
    p1 = set(base.cell_words(1))
    if fp.covered_words() != p1:
        raise FaceCoverError("faces must cover the second cell exactly")
    # free mask of the owning face, indexed by base ordinal (0 off P1)
    fmask = np.zeros(g.num_vertices, dtype=np.int64)
    for w in p1:
        fmask[g.vertex_index(w)] = fp.free_mask_of(w)
    target = halved_cube(2 * n)
    W = target.vertex_words_array()
    x = W >> n
    y = W & all_ones(n)
    u = x ^ y
    uord = u >> 1
    base_lab = base.labels[uord]
    sign = (np.bitwise_count(x).astype(np.int64) + np.bitwise_count(fmask[uord] & y).astype(np.int64)) & 1
    labels = np.where(base_lab == 0, 0, 1 + sign).astype(np.int16)
    return labels, target, n


def split(base: Partition, fp: FacePartition, base_matrix: Matrix | None = None,
          verify: bool | None = None) -> Partition:
    """Sign-split the preimage of the face-covered cell: a 3-partition
    of the halved 2n-cube.

    The three cells are the preimage of P0 and the two sign classes of
    the preimage of P1, where the sign of (x, y) adds the weight of x
    to the bits of y along the free directions of the face owning x+y.
    Claimed matrix rows: [4a+n, 2b, 2b], [4c, 2d+s^2, 2d+n-s^2] and its
    mirror.
    """
    if base_matrix is None:
        base_matrix = partition_matrix(base)
    (a, b), (c, d) = as_matrix(base_matrix)
    labels, target, n = _split_labels(base, fp)
    if not (labels == 0).any():
        raise DegenerateCellError("first cell empty; use split_merged for the "
                                  "whole-graph face cover")
    s = fp.s
    claimed = ((4 * a + n, 2 * b, 2 * b),
               (4 * c, 2 * d + s * s, 2 * d + n - s * s),
               (4 * c, 2 * d + n - s * s, 2 * d + s * s))
    return _finalize(Partition(target, 3, labels), claimed=claimed, verify=verify)


def split_merged(base: Partition, fp: FacePartition,
                 base_matrix: Matrix | None = None,
                 verify: bool | None = None) -> Partition:
    """Merge the first two split cells into one: a 2-partition of the
    halved 2n-cube.

    Needs s^2 = 2d + n - 2b exactly; the claim is then
    [[4a+n+2b, 2b], [4c+2b, 4d+n-2b]].  The base may have an empty
    first cell (the whole graph covered by faces) if a formal base
    matrix is supplied; the output is a genuine 2-partition either way
    and is verified as such.
    """
    if base_matrix is None:
        base_matrix = partition_matrix(base)
    (a, b), (c, d) = as_matrix(base_matrix)
    n = base.graph.n
    s = fp.s
    if s * s != 2 * d + n - 2 * b:
        raise MergeConditionError(
            f"s^2 = {s * s} but 2d+n-2b = {2 * d + n - 2 * b}; cells cannot merge")
    labels, target, _ = _split_labels(base, fp)
    merged = np.where(labels <= 1, 0, 1).astype(np.int16)
    claimed = ((4 * a + n + 2 * b, 2 * b), (4 * c + 2 * b, 4 * d + n - 2 * b))
    return _finalize(Partition(target, 2, merged), claimed=claimed, verify=verify)


# The length-6 family feeding the splitting construction.  The base
# cells are unions of cosets of the two-word code {000000, 111111}; the
# four-word code V = {000000, 111111, 000011, 111100} splits into two
# edges, and for odd coset counts the six-word set below splits into
# three edges across its pairs.
_N6 = 6
_C2 = (0b000000, 0b111111)
_SIX_SET = (0b000011, 0b111100, 0b001100, 0b110011, 0b110000, 0b001111)
_SIX_EDGES = ((0b000011, 0b001111), (0b001100, 0b111100), (0b110000, 0b110011))


def build_n6_split_family(c: int) -> tuple[Partition, FacePartition]:
    """Base pair for the halved 12-cube family: a 2-partition of the
    halved 6-cube with matrix [[c-1,16-c],[c,15-c]] whose second cell
    is partitioned into edges.

    c = 0 is the degenerate endpoint: the first cell is empty, the
    whole graph is covered by edges, and the formal matrix
    [[-1,16],[0,15]] is attached for split_merged's bookkeeping; the
    resulting 2-partition of the halved 12-cube is verified as usual.
    """
    if not 0 <= c <= 14:
        raise ValueError("c must be in 0..14")
    g = halved_cube(_N6)
    vcode = span_code([_C2[1], _SIX_SET[0]], _N6)
    vreps = vcode.coset_representatives(even_only=True)

    def vcoset(rep: int) -> list[int]:
        return vcode.coset(rep)

    def vcoset_edges(rep: int):
        lo = rep
        return [(lo, lo ^ _SIX_SET[0]), (lo ^ _C2[1], lo ^ _C2[1] ^ _SIX_SET[0])]

    cell0: list[int] = []
    edges: list[tuple[int, int]] = []
    if c % 2 == 0:
        for rep in vreps[: c // 2]:
            cell0 += vcoset(rep)
        for rep in vreps[c // 2:]:
            edges += vcoset_edges(rep)
    else:
        free = [r for r in vreps if r not in (0, 0b001100)]
        take = (c - 1) // 2
        cell0 += list(_C2)
        for rep in free[:take]:
            cell0 += vcoset(rep)
        edges += list(_SIX_EDGES)
        for rep in free[take:]:
            edges += vcoset_edges(rep)

    labels = np.ones(g.num_vertices, dtype=np.int16)
    for w in cell0:
        labels[g.vertex_index(w)] = 0
    claimed = ((c - 1, 16 - c), (c, 15 - c))
    base = Partition(g, 2, labels, claimed=claimed)
    if c > 0:
        verify_equitable(base).require(claimed)
    fp = edge_face_partition(g, edges)
    return base, fp
