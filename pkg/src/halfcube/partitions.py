"""Ground-truth verification of equitability by direct neighbor counting.

Nothing in this module trusts a construction: verify_equitable counts
neighbors of every vertex with the adjacency table and either extracts
the quotient matrix or produces a recountable witness.  Distance
partitions (BFS layers from a code) and covering radii live here too.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (DegenerateCellError, EmptyCodeError, GraphMismatchError,
                     NotEquitableError, ParityError)
from .graphs import CubeGraph, Kind, neighbor_table
from .quotient import Matrix, as_matrix
from .words import format_word

LABEL_ALPHABET = "0123456789"
WRAP = 64


@dataclass
class Partition:
    """An ordered k-cell labeling of a graph's vertex set.

    labels[ordinal] is the cell index of the vertex with that ordinal.
    The optional claimed matrix is what a construction promises; only
    verify_equitable decides whether it is true.
    """

    graph: CubeGraph
    k: int
    labels: np.ndarray
    claimed: Matrix | None = None

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int16)
        if self.labels.shape != (self.graph.num_vertices,):
            raise ValueError(f"label array must have length {self.graph.num_vertices}")
        if self.k < 1 or (len(self.labels) and int(self.labels.max()) >= self.k):
            raise ValueError("labels exceed the declared cell count")
        if int(self.labels.min()) < 0:
            raise ValueError("labels must be nonnegative")
        if self.claimed is not None:
            self.claimed = as_matrix(self.claimed)

    def cell_sizes(self) -> list[int]:
        return np.bincount(self.labels, minlength=self.k).tolist()

    def cell_words(self, i: int) -> list[int]:
        idx = np.flatnonzero(self.labels == i)
        words = self.graph.vertex_words_array()[idx]
        return [int(w) for w in words]

    def relabeled(self, perm) -> "Partition":
        """New partition with cell i renamed to perm[i]; claim dropped."""
        perm = np.asarray(perm, dtype=np.int16)
        return Partition(self.graph, self.k, perm[self.labels])


def partition_from_cells(g: CubeGraph, cells) -> Partition:
    """Build a partition from explicit word sets; they must tile the graph."""
    cells = list(cells)
    labels = np.full(g.num_vertices, -1, dtype=np.int16)
    for i, cell in enumerate(cells):
        for w in cell:
            idx = g.vertex_index(w)
            if labels[idx] != -1:
                raise ValueError(f"word {format_word(w, g.n)} assigned twice")
            labels[idx] = i
    if (labels == -1).any():
        raise ValueError("cells do not cover the vertex set")
    return Partition(g, len(cells), labels)


@dataclass
class Witness:
    vertex: int
    word: int
    cell: int
    j: int
    observed: int
    expected: int


@dataclass
class VerificationOutcome:
    equitable: bool
    matrix: Matrix | None = None
    witness: Witness | None = None
    claimed_matches: bool | None = None

    def require(self, claimed: Matrix | None = None) -> Matrix:
        """Return the verified matrix or raise with the witness attached."""
        if not self.equitable:
            w = self.witness
            raise NotEquitableError(
                f"vertex {w.vertex} has {w.observed} neighbors in cell {w.j}, "
                f"expected {w.expected}", witness=w)
        if claimed is not None and as_matrix(claimed) != self.matrix:
            raise NotEquitableError(
                f"verified matrix {self.matrix} differs from claimed {as_matrix(claimed)}")
        return self.matrix


def neighbor_counts(p: Partition) -> np.ndarray:
    """counts[v, j] = number of neighbors of vertex v inside cell j."""
    nbrs = neighbor_table(p.graph)
    nbr_labels = p.labels[nbrs]
    counts = np.empty((p.graph.num_vertices, p.k), dtype=np.int64)
    for j in range(p.k):
        counts[:, j] = (nbr_labels == j).sum(axis=1)
    return counts


def verify_equitable(p: Partition) -> VerificationOutcome:
    """Check every vertex's neighbor counts against its cell's profile.

    The expected profile of cell i is taken from the smallest-ordinal
    vertex of that cell; the reported witness is the lexicographically
    smallest offending (vertex, cell) pair, so reruns are deterministic
    and independent of any internal chunking.
    """
    sizes = p.cell_sizes()
    for i, s in enumerate(sizes):
        if s == 0:
            raise DegenerateCellError(
                f"cell {i} of a declared {p.k}-partition is empty; "
                f"pass a {p.k - 1}-partition instead")
    counts = neighbor_counts(p)
    first = [int(np.flatnonzero(p.labels == i)[0]) for i in range(p.k)]
    S = tuple(tuple(int(x) for x in counts[f]) for f in first)
    expected = np.array(S, dtype=np.int64)[p.labels]
    bad = np.argwhere(counts != expected)
    if len(bad):
        v, j = (int(x) for x in bad[0])
        wit = Witness(v, int(p.graph.vertex_word(v)), int(p.labels[v]), j,
                      int(counts[v, j]), int(expected[v, j]))
        out = VerificationOutcome(False, witness=wit)
    else:
        out = VerificationOutcome(True, matrix=S)
    if p.claimed is not None:
        out.claimed_matches = out.equitable and S == p.claimed
    return out


@dataclass
class DistancePartition:
    """BFS layers from a code: layers[d] holds the ordinals at distance d."""

    graph: CubeGraph
    code: tuple[int, ...]
    layers: list[np.ndarray] = field(repr=False)

    @property
    def rho(self) -> int:
        return len(self.layers) - 1

    def layer_words(self, d: int) -> list[int]:
        words = self.graph.vertex_words_array()[self.layers[d]]
        return [int(w) for w in words]

    def layer_sizes(self) -> list[int]:
        return [len(layer) for layer in self.layers]

    def to_partition(self) -> Partition:
        labels = np.empty(self.graph.num_vertices, dtype=np.int16)
        for d, layer in enumerate(self.layers):
            labels[layer] = d
        return Partition(self.graph, len(self.layers), labels)


def distance_partition(g: CubeGraph, code) -> DistancePartition:
    """Layer the vertex set by graph distance from the code."""
    code = sorted(set(code))
    if not code:
        raise EmptyCodeError("code has no words")
    for w in code:
        g.check_vertex(w)
    nbrs = neighbor_table(g)
    dist = np.full(g.num_vertices, -1, dtype=np.int32)
    frontier = np.array(sorted(g.vertex_index(w) for w in code), dtype=np.int64)
    dist[frontier] = 0
    layers = [frontier]
    d = 0
    while True:
        cand = np.unique(nbrs[frontier])
        frontier = cand[dist[cand] == -1]
        if len(frontier) == 0:
            break
        d += 1
        dist[frontier] = d
        layers.append(frontier)
    return DistancePartition(g, tuple(code), layers)


def covering_radius(g: CubeGraph, code) -> int:
    return distance_partition(g, code).rho


def is_completely_regular(g: CubeGraph, code) -> VerificationOutcome:
    """Equitability of the distance partition of the code."""
    return verify_equitable(distance_partition(g, code).to_partition())


def weight_distribution(p: Partition, dp: DistancePartition) -> list[list[int]]:
    """The k x (rho+1) table of counts |C_i intersect D^(d)|."""
    if dp.graph != p.graph:
        raise GraphMismatchError("partition and distance partition live on different graphs")
    table = []
    for i in range(p.k):
        row = [int((p.labels[layer] == i).sum()) for layer in dp.layers]
        table.append(row)
    return table


def empirical_distance_counts(p: Partition) -> dict[int, Matrix]:
    """Observed cell counts at every Hamming distance, when constant.

    For each even Hamming distance i (halved graphs) or each distance i
    (full cube), computes T[j][m] = #{u in C_m : d_H(u, v) = i} and
    checks it is the same for every v in C_j.  Raises NotEquitableError
    when some count is not constant on a cell.
    """
    g = p.graph
    words = g.vertex_words_array()
    step = 2 if g.kind is not Kind.FULL else 1
    dists = list(range(0, g.n + 1, step))
    onehot = np.equal.outer(p.labels, np.arange(p.k)).astype(np.int64)
    nv = g.num_vertices
    per_vertex = {i: np.empty((nv, p.k), dtype=np.int64) for i in dists}
    for lo in range(0, nv, 1024):  # block rows to bound the V x V scratch
        hi = min(lo + 1024, nv)
        hdist = np.bitwise_count(words[lo:hi, None] ^ words[None, :]).astype(np.int16)
        for i in dists:
            per_vertex[i][lo:hi] = (hdist == i).astype(np.int64) @ onehot
    out: dict[int, Matrix] = {}
    for i in dists:
        rows = []
        for j in range(p.k):
            block = per_vertex[i][p.labels == j]
            if not (block == block[0]).all():
                raise NotEquitableError(
                    f"distance-{i} counts are not constant on cell {j}")
            rows.append(tuple(int(x) for x in block[0]))
        out[i] = tuple(rows)
    return out


# ---------------------------------------------------------------------------
# Partition file format: a short header, an optional claimed matrix, and
# one label symbol per vertex in ordinal order, wrapped at 64 symbols.

def partition_to_text(p: Partition) -> str:
    lines = [f"n={p.graph.n} kind={p.graph.kind.value} k={p.k}"]
    if p.claimed is not None:
        lines.append("S=" + ";".join(",".join(str(x) for x in row) for row in p.claimed))
    if p.k <= len(LABEL_ALPHABET):
        body = "".join(LABEL_ALPHABET[x] for x in p.labels)
        lines.extend(body[i:i + WRAP] for i in range(0, len(body), WRAP))
    else:
        vals = [str(int(x)) for x in p.labels]
        lines.extend(",".join(vals[i:i + WRAP]) for i in range(0, len(vals), WRAP))
    return "\n".join(lines) + "\n"


def partition_from_text(text: str) -> Partition:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty partition file")
    head = dict(item.split("=", 1) for item in lines[0].split())
    try:
        n, kind, k = int(head["n"]), Kind(head["kind"]), int(head["k"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad partition header: {lines[0]!r}") from exc
    g = CubeGraph(kind, n)
    body_start = 1
    claimed = None
    if len(lines) > 1 and lines[1].startswith("S="):
        claimed = as_matrix([row.split(",") for row in lines[1][2:].split(";")])
        body_start = 2
    body = "".join(lines[body_start:])
    if k <= len(LABEL_ALPHABET):
        labels = [LABEL_ALPHABET.index(ch) for ch in body]
    else:
        labels = [int(tok) for tok in body.split(",") if tok]
    if len(labels) != g.num_vertices:
        raise ValueError(f"expected {g.num_vertices} labels, got {len(labels)}")
    return Partition(g, k, np.array(labels, dtype=np.int16), claimed=claimed)


def save_partition(p: Partition, path) -> None:
    with open(path, "w") as fh:
        fh.write(partition_to_text(p))


def load_partition(path) -> Partition:
    with open(path) as fh:
        return partition_from_text(fh.read())
