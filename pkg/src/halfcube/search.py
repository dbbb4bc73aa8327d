"""Exact existence decisions by depth-first search with propagation.

The labeling characterization A X = X S turns, for k = 2, into one
exact neighbor-count constraint per vertex plus a cardinality
constraint, and that is what the solver propagates: assigned vertices
whose counts saturate force their remaining neighbors, unassigned
vertices feasible for only one cell are forced into it, and a filled
cell forces the rest of the graph into the other one.

The root vertex is pinned into cell 0.  Both graph families are vertex
transitive under translations, so the pin loses no solutions and an
exhausted tree is a proof of nonexistence.  Optional symmetry breaking
adds lexicographic-leader constraints over adjacent coordinate
transpositions fixing the root word; it only removes branches whose
solutions have smaller images under those automorphisms, so soundness
of both outcomes is preserved.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .graphs import CubeGraph, Kind, neighbor_table
from .partitions import Partition, verify_equitable
from .quotient import (Matrix, as_matrix, enumerate_admissible,
                       full_cube_eigenvalues, recursion_table, theta, theta_list)

FOUND = "found"
EXHAUSTED_NONE = "exhausted-none"
PREFILTERED = "prefiltered-nonexistent"
ABORTED = "aborted"


@dataclass
class SearchProblem:
    graph: CubeGraph
    S: Matrix
    find_all: bool = False
    node_limit: int | None = None
    time_limit: float | None = None
    symmetry: bool = True
    cond4_prefilter: bool = True
    root: int = 0
    order_policy: str = "bfs"      # "bfs" (layers, then numeric) or "dynamic"
    value_policy: str = "zero"     # "zero" (cell 0 first) or "balance"
    all_transpositions: bool = False

    def __post_init__(self):
        self.S = as_matrix(self.S)
        if len(self.S) != 2 or len(self.S[0]) != 2:
            raise ValueError("search handles 2-cell targets")
        if self.order_policy not in ("bfs", "dynamic"):
            raise ValueError(f"unknown order policy {self.order_policy!r}")
        if self.value_policy not in ("zero", "balance"):
            raise ValueError(f"unknown value policy {self.value_policy!r}")


@dataclass
class SearchOutcome:
    status: str
    reason: str | None = None
    partition: Partition | None = None
    partitions: list[Partition] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"status": self.status, "reason": self.reason,
                "solutions": len(self.partitions) if self.partitions
                else int(self.partition is not None),
                "stats": self.stats}


def _prefilter(problem: SearchProblem):
    """Cheap impossibility checks; returns (reason, sizes) with one None."""
    g = problem.graph
    (a, b), (c, d) = problem.S
    deg = g.degree
    if min(a, b, c, d) < 0 or b == 0 or c == 0:
        return f"entries must be nonnegative with b,c > 0: {problem.S}", None
    if a + b != deg or c + d != deg:
        return f"row sums {a + b},{c + d} differ from the degree {deg}", None
    spectrum = (theta_list(g.n) if g.kind is not Kind.FULL
                else full_cube_eigenvalues(g.n))
    if a - c not in spectrum:
        return f"a-c = {a - c} is not a graph eigenvalue", None
    nv = g.num_vertices
    if (nv * c) % (b + c) or (nv * b) % (b + c):
        return f"cell sizes {nv}*{c}/{b + c} are not integral", None
    sizes = (nv * c // (b + c), nv * b // (b + c))
    if problem.cond4_prefilter and g.kind is not Kind.FULL:
        table = recursion_table(problem.S, g.n)
        if not table.ok:
            return (f"distance-count recursion fails at distance "
                    f"{table.first_offending()}"), None
    return None, sizes


def _coordinate_generators(g: CubeGraph, root_word: int,
                           all_pairs: bool = False) -> list[list[int]]:
    """Vertex permutations induced by coordinate transpositions fixing
    the root word; adjacent pairs by default, every pair on request."""
    gens = []
    words = g.vertex_words_array()
    pairs = ([(lo, hi) for lo in range(g.n) for hi in range(lo + 1, g.n)]
             if all_pairs else [(lo, lo + 1) for lo in range(g.n - 1)])
    for lo, hi in pairs:
        if ((root_word >> lo) & 1) != ((root_word >> hi) & 1):
            continue
        bit_lo = (words >> lo) & 1
        bit_hi = (words >> hi) & 1
        swapped = words ^ ((bit_lo ^ bit_hi) * ((1 << lo) | (1 << hi)))
        if g.kind is Kind.FULL:
            gens.append(swapped.tolist())
        else:
            gens.append((swapped >> 1).tolist())
    return gens


def _bfs_order(nbrs: list[list[int]], root: int) -> tuple[list[int], list[list[int]]]:
    """BFS order (each layer ascending) and the layers themselves."""
    seen = [False] * len(nbrs)
    order = [root]
    seen[root] = True
    layers = [[root]]
    frontier = [root]
    while frontier:
        nxt = sorted({u for v in frontier for u in nbrs[v] if not seen[u]})
        if not nxt:
            break
        for u in nxt:
            seen[u] = True
        order.extend(nxt)
        layers.append(nxt)
        frontier = nxt
    return order, layers


def _root_layer_quotas(S: Matrix, g: CubeGraph, layers: list[list[int]]) -> list[int] | None:
    """Exact |C0 intersect layer_d| counts implied by the matrix, with the
    root in cell 0.

    For any equitable partition the number of cell-m vertices at graph
    distance d from a vertex of cell j is the (j, m) entry of the d-th
    distance-count matrix, so the counts around the pinned root are
    forced.  Returns None when the distance-count matrices are not
    nonnegative integers (then the quota rule is unavailable and plain
    cardinality is used; such instances are normally prefiltered away).
    """
    n = g.n
    if g.kind is Kind.FULL:
        # S^(0)=Id, S^(1)=S, (i+1) S^(i+1) = S S^(i) - (n-i+1) S^(i-1)
        from fractions import Fraction
        prev = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
        cur = [[Fraction(x) for x in row] for row in S]
        mats = [prev, cur]
        for i in range(1, n):
            nxt = [[(sum(Fraction(S[r][m]) * cur[m][col] for m in range(2))
                     - (n - i + 1) * prev[r][col]) / (i + 1)
                    for col in range(2)] for r in range(2)]
            prev, cur = cur, nxt
            mats.append(nxt)
        cells0 = [m[0][0] for m in mats]
    else:
        table = recursion_table(S, n)
        if not table.ok:
            return None
        cells0 = [m[0][0] for m in table.matrices]
    if any(x.denominator != 1 or x < 0 for x in cells0):
        return None
    return [int(x) for x in cells0[: len(layers)]]


def search(problem: SearchProblem) -> SearchOutcome:
    """Decide existence of a 2-partition with the exact target matrix."""
    t_start = time.monotonic()
    reason, targets = _prefilter(problem)
    if reason is not None:
        return SearchOutcome(PREFILTERED, reason=reason,
                             stats={"nodes": 0, "wall_time": time.monotonic() - t_start})

    g = problem.graph
    S = problem.S
    caps = (S[0][0], S[0][1], S[1][0], S[1][1])
    nv = g.num_vertices
    nbrs = [row.tolist() for row in neighbor_table(g)]
    root = problem.root
    order, layers = _bfs_order(nbrs, root)

    label = [-1] * nv
    cnt0 = [0] * nv
    cnt1 = [0] * nv
    undec = [g.degree] * nv
    sizes = [0, 0]
    trail: list[int] = []

    stats = {"nodes": 0, "forced": 0, "max_depth": 0,
             "prunes": {"count": 0, "feasibility": 0, "cardinality": 0,
                        "layer": 0, "symmetry": 0}}
    prunes = stats["prunes"]

    # per-layer quotas around the pinned root, when available
    quotas = _root_layer_quotas(S, g, layers)
    stats["layer_quotas"] = quotas
    if quotas is not None:
        layer_sizes = [len(layer) for layer in layers]
        if any(q > ls for q, ls in zip(quotas, layer_sizes)):
            return SearchOutcome(EXHAUSTED_NONE,
                                 stats=_final_stats(stats, t_start))
        layer_of = [0] * nv
        for d, layer in enumerate(layers):
            for v in layer:
                layer_of[v] = d
        lay0 = [0] * len(layers)
        lay_und = list(layer_sizes)
    else:
        layer_of = lay0 = lay_und = []
    use_quotas = quotas is not None

    gen_orders = []
    if problem.symmetry:
        for perm in _coordinate_generators(g, g.vertex_word(root),
                                           problem.all_transpositions):
            gen_orders.append([perm[v] for v in order])

    def propagate(v0: int, val0: int) -> bool:
        start_mark = len(trail)
        queue = [(v0, val0)]
        qi = 0
        while qi < len(queue):
            v, val = queue[qi]
            qi += 1
            cur = label[v]
            if cur != -1:
                if cur != val:
                    prunes["count"] += 1
                    return False
                continue
            label[v] = val
            trail.append(v)
            sizes[val] += 1
            if sizes[val] > targets[val]:
                prunes["cardinality"] += 1
                return False
            if sizes[val] == targets[val]:
                other = 1 - val
                for u in order:
                    if label[u] == -1:
                        queue.append((u, other))
            if use_quotas:
                d = layer_of[v]
                lay_und[d] -= 1
                if val == 0:
                    lay0[d] += 1
                q0_left = quotas[d] - lay0[d]
                if q0_left < 0 or q0_left > lay_und[d]:
                    prunes["layer"] += 1
                    return False
                if lay_und[d]:
                    if q0_left == 0:
                        for u in layers[d]:
                            if label[u] == -1:
                                queue.append((u, 1))
                    elif q0_left == lay_und[d]:
                        for u in layers[d]:
                            if label[u] == -1:
                                queue.append((u, 0))
            if val == 0:
                for u in nbrs[v]:
                    cnt0[u] += 1
                    undec[u] -= 1
            else:
                for u in nbrs[v]:
                    cnt1[u] += 1
                    undec[u] -= 1
            for u in nbrs[v]:
                lu = label[u]
                if lu == -1:
                    f0 = cnt0[u] <= caps[0] and cnt1[u] <= caps[1]
                    f1 = cnt0[u] <= caps[2] and cnt1[u] <= caps[3]
                    if not (f0 or f1):
                        prunes["feasibility"] += 1
                        return False
                    if f0 != f1:
                        queue.append((u, 0 if f0 else 1))
                else:
                    base = 0 if lu == 0 else 2
                    need0 = caps[base] - cnt0[u]
                    need1 = caps[base + 1] - cnt1[u]
                    if need0 < 0 or need1 < 0:
                        prunes["count"] += 1
                        return False
                    if undec[u]:
                        if need0 == 0:
                            for w in nbrs[u]:
                                if label[w] == -1:
                                    queue.append((w, 1))
                        elif need1 == 0:
                            for w in nbrs[u]:
                                if label[w] == -1:
                                    queue.append((w, 0))
            # the just-assigned vertex itself must stay satisfiable
            base = 0 if val == 0 else 2
            need0 = caps[base] - cnt0[v]
            need1 = caps[base + 1] - cnt1[v]
            if need0 < 0 or need1 < 0 or need0 > undec[v] or need1 > undec[v]:
                prunes["count"] += 1
                return False
            if undec[v]:
                if need0 == 0:
                    for w in nbrs[v]:
                        if label[w] == -1:
                            queue.append((w, 1))
                elif need1 == 0:
                    for w in nbrs[v]:
                        if label[w] == -1:
                            queue.append((w, 0))
        stats["forced"] += len(trail) - start_mark - 1
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            v = trail.pop()
            val = label[v]
            label[v] = -1
            sizes[val] -= 1
            if use_quotas:
                d = layer_of[v]
                lay_und[d] += 1
                if val == 0:
                    lay0[d] -= 1
            if val == 0:
                for u in nbrs[v]:
                    cnt0[u] -= 1
                    undec[u] += 1
            else:
                for u in nbrs[v]:
                    cnt1[u] -= 1
                    undec[u] += 1

    def lex_ok() -> bool:
        for gorder in gen_orders:
            for t, v in enumerate(order):
                x = label[v]
                if x == -1:
                    break
                y = label[gorder[t]]
                if y == -1 or x < y:
                    break
                if x > y:
                    prunes["symmetry"] += 1
                    return False
        return True

    solutions: list[Partition] = []

    def snapshot() -> Partition:
        p = Partition(g, 2, np.array(label, dtype=np.int16), claimed=S)
        verify_equitable(p).require(S)
        return p

    dynamic = problem.order_policy == "dynamic"
    order_pos = {v: t for t, v in enumerate(order)}

    def pick_bfs(pos: int) -> tuple[int, int]:
        while pos < nv and label[order[pos]] != -1:
            pos += 1
        return (-1 if pos == nv else order[pos]), pos

    def pick_dynamic() -> int:
        best, best_key = -1, None
        for v in range(nv):
            if label[v] == -1:
                key = (undec[v], order_pos[v])
                if best_key is None or key < best_key:
                    best, best_key = v, key
        return best

    def first_value() -> int:
        if problem.value_policy == "zero":
            return 0
        return 0 if targets[0] - sizes[0] >= targets[1] - sizes[1] else 1

    def initial_quota_sweep() -> bool:
        if not use_quotas:
            return True
        for d, layer in enumerate(layers):
            q0_left = quotas[d] - lay0[d]
            if q0_left < 0 or q0_left > lay_und[d]:
                prunes["layer"] += 1
                return False
            forced = 1 if q0_left == 0 else (0 if q0_left == lay_und[d] else -1)
            if forced != -1:
                for u in layer:
                    if label[u] == -1 and not propagate(u, forced):
                        return False
        return True

    if not (propagate(root, 0) and initial_quota_sweep()):
        undo(0)
        return SearchOutcome(EXHAUSTED_NONE,
                             stats=_final_stats(stats, t_start))
    if problem.symmetry and not lex_ok():
        undo(0)
        return SearchOutcome(EXHAUSTED_NONE, stats=_final_stats(stats, t_start))

    # frames: [vertex, first value tried, retried flag, trail mark, scan position]
    stack: list[list[int]] = []
    pos = 0
    descend = True
    while True:
        if descend:
            if dynamic:
                v = pick_dynamic()
            else:
                v, pos = pick_bfs(pos)
            if v == -1:
                solutions.append(snapshot())
                if not problem.find_all:
                    return SearchOutcome(FOUND, partition=solutions[0],
                                         partitions=solutions,
                                         stats=_final_stats(stats, t_start))
                descend = False
                continue
            stats["nodes"] += 1
            stats["max_depth"] = max(stats["max_depth"], len(stack))
            if problem.node_limit and stats["nodes"] > problem.node_limit:
                return SearchOutcome(ABORTED, reason="node limit",
                                     stats=_final_stats(stats, t_start))
            if problem.time_limit and stats["nodes"] % 256 == 0 \
                    and time.monotonic() - t_start > problem.time_limit:
                return SearchOutcome(ABORTED, reason="time limit",
                                     stats=_final_stats(stats, t_start))
            val = first_value()
            stack.append([v, val, 0, len(trail), pos])
            if propagate(v, val) and (not gen_orders or lex_ok()):
                continue
            descend = False
        else:
            if not stack:
                break
            frame = stack[-1]
            undo(frame[3])
            if frame[2] == 0:
                frame[2] = 1
                if propagate(frame[0], 1 - frame[1]) and (not gen_orders or lex_ok()):
                    pos = frame[4]
                    descend = True
            else:
                stack.pop()

    if solutions:
        return SearchOutcome(FOUND, partition=solutions[0], partitions=solutions,
                             stats=_final_stats(stats, t_start))
    return SearchOutcome(EXHAUSTED_NONE, stats=_final_stats(stats, t_start))


def _final_stats(stats: dict, t_start: float) -> dict:
    out = dict(stats)
    out["wall_time"] = time.monotonic() - t_start
    return out


@dataclass
class ClassifyRow:
    i: int
    theta: int
    S: Matrix
    outcome: SearchOutcome

    @property
    def symbol(self) -> str:
        return {FOUND: "+", EXHAUSTED_NONE: "-", PREFILTERED: "-",
                ABORTED: "?"}[self.outcome.status]


DEFAULT_EXHAUSTIVE_BOUND = 8


def classify(n: int, kind: Kind = Kind.HALVED_EVEN, node_limit: int | None = None,
             time_limit: float | None = None, allow_long: bool = False,
             symmetry: bool = True) -> list[ClassifyRow]:
    """Search every admissible candidate matrix for the halved n-cube.

    Follows the published table conventions: candidates satisfy checks
    1 to 3 with b >= c, plus the minimum-eigenvalue correspondence
    filter; statuses come from exact search.  n beyond the default
    exhaustive bound must be requested explicitly (expect hours).
    """
    if kind is Kind.FULL:
        raise ValueError("classification is for halved cubes")
    if n > DEFAULT_EXHAUSTIVE_BOUND and not allow_long:
        raise ValueError(f"n={n} beyond the default bound "
                         f"{DEFAULT_EXHAUSTIVE_BOUND}; pass allow_long")
    g = CubeGraph(kind, n)
    rows = []
    for i in range(1, n // 2 + 1):
        for rep in enumerate_admissible(n, i):
            problem = SearchProblem(g, rep.S, node_limit=node_limit,
                                    time_limit=time_limit, symmetry=symmetry)
            rows.append(ClassifyRow(i, theta(n, i), rep.S, search(problem)))
    return rows


# ---------------------------------------------------------------------------
# Generic 0/1 instance export.  One binary variable per vertex, x_v = 1
# iff vertex v (ordinal order) lies in cell 0.  Each vertex contributes
# sum over neighbors of x_u minus (a-c) x_v = c, and the cardinality
# line fixes |C0|.  Lines are "name : coeff x<i> ... = rhs".

def export_instance(problem: SearchProblem) -> str:
    g = problem.graph
    (a, b), (c, d) = problem.S
    reason, targets = _prefilter(problem)
    header = [
        "# equitable 2-partition 0/1 instance, schema 1",
        f"# graph: n={g.n} kind={g.kind.value} vertices={g.num_vertices} degree={g.degree}",
        f"# matrix: [[{a},{b}],[{c},{d}]]",
        "# x_v = 1 iff vertex with ordinal v lies in cell 0",
    ]
    if reason is not None:
        header.append(f"# infeasible before search: {reason}")
    lines = [f"vars {g.num_vertices} binary"]
    ev = a - c
    nbrs = neighbor_table(g)
    for v in range(g.num_vertices):
        terms = [f"+1 x{u}" for u in nbrs[v]]
        if ev:
            terms.append(f"{-ev:+d} x{v}")
        lines.append(f"v{v} : " + " ".join(terms) + f" = {c}")
    if targets is not None:
        card = " ".join(f"+1 x{v}" for v in range(g.num_vertices))
        lines.append(f"card : {card} = {targets[0]}")
    return "\n".join(header + lines) + "\n"
