"""Colorings, exact chromatic numbers and greedy selections on finite graphs.

Colors are the integers ``1..palette``; a coloring is a tuple indexed by
vertex with ``None`` marking vertices outside a partial coloring's domain.
All tie-breaking is by vertex index, so identical inputs give identical
outputs.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .cayley import Cycle, FiniteGraph, bfs_distances
from .errors import BudgetExhausted, DomainError

DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class Coloring:
    colors: tuple
    palette: int
    provenance: dict = field(default_factory=dict, compare=False)

    @property
    def is_partial(self) -> bool:
        return any(c is None for c in self.colors)

    @property
    def domain(self) -> list:
        return [v for v, c in enumerate(self.colors) if c is not None]

    def used(self) -> set:
        return {c for c in self.colors if c is not None}

    def __getitem__(self, v):
        return self.colors[v]

    def __len__(self):
        return len(self.colors)

    def to_json(self) -> str:
        return json.dumps(
            {"provenance": self.provenance, "palette": self.palette, "colors": list(self.colors)},
            sort_keys=True,
        )


def coloring(colors, palette: int | None = None, **provenance) -> Coloring:
    colors = tuple(colors)
    if palette is None:
        palette = max((c for c in colors if c is not None), default=0)
    return Coloring(colors, palette, dict(provenance))


@dataclass(frozen=True)
class AnchorSet:
    """Spaced vertex subset: pairwise distance > N, maximal unless stated."""

    anchors: tuple
    N: int
    metric: str = "graph"
    orientation: dict | None = None

    def __iter__(self):
        return iter(self.anchors)

    def __len__(self):
        return len(self.anchors)


# -------------------------------------------------------------- properness


def is_proper(g: FiniteGraph, c) -> tuple:
    """``(True, None)`` or ``(False, (u, v))`` for the first monochromatic edge.

    Partial colorings are audited on their domain only.
    """
    colors = c.colors if isinstance(c, Coloring) else tuple(c)
    palette = c.palette if isinstance(c, Coloring) else None
    if len(colors) != g.n:
        raise DomainError(f"coloring has {len(colors)} entries for {g.n} vertices")
    for v, col in enumerate(colors):
        if col is None:
            continue
        if col < 1 or (palette is not None and col > palette):
            raise DomainError(f"vertex {v} has color {col} outside palette 1..{palette}")
    for u, v in g.edges():
        if colors[u] is not None and colors[u] == colors[v]:
            return False, (u, v)
    return True, None


# ------------------------------------------------------------------ greedy


def greedy_coloring(g: FiniteGraph, order=None) -> Coloring:
    """Smallest free color in index order; at most ``maxdeg + 1`` colors."""
    colors = [None] * g.n
    for v in order if order is not None else range(g.n):
        taken = {colors[w] for w in g.neighbors[v]}
        col = 1
        while col in taken:
            col += 1
        colors[v] = col
    return coloring(colors, algorithm="greedy")


def dsatur_coloring(g: FiniteGraph) -> Coloring:
    colors = [None] * g.n
    sat = [set() for _ in range(g.n)]
    left = set(range(g.n))
    while left:
        v = min(left, key=lambda x: (-len(sat[x]), -g.degree(x), x))
        col = 1
        while col in sat[v]:
            col += 1
        colors[v] = col
        left.discard(v)
        for w in g.neighbors[v]:
            sat[w].add(col)
    return coloring(colors, algorithm="dsatur")


def greedy_clique(g: FiniteGraph, start: int) -> list:
    clique = [start]
    cand = set(g.neighbors[start])
    while cand:
        v = min(cand, key=lambda x: (-len(cand.intersection(g.neighbors[x])), x))
        clique.append(v)
        cand &= set(g.neighbors[v])
    return clique


def max_greedy_clique(g: FiniteGraph) -> list:
    """Best greedy clique over all start vertices; a lower bound for chi."""
    best: list = []
    for v in sorted(range(g.n), key=lambda x: (-g.degree(x), x)):
        if g.degree(v) + 1 <= len(best):
            continue
        cl = greedy_clique(g, v)
        if len(cl) > len(best):
            best = cl
    return sorted(best)


# ------------------------------------------------------- exact k-coloring


class _Search:
    """DSATUR backtracking for ``c``-colorability with forward checking."""

    def __init__(self, g: FiniteGraph, c: int, budget: int):
        self.g = g
        self.c = c
        self.full = (1 << c) - 1
        self.budget = budget
        self.nodes = 0
        self.colors = [-1] * g.n
        self.forb = [0] * g.n
        self.maxused = -1
        self.left = set(range(g.n))

    def assign(self, v, col):
        """Color ``v``; return an undo log, or None on a domain wipe-out."""
        bit = 1 << col
        log = []
        self.colors[v] = col
        self.left.discard(v)
        prev_max = self.maxused
        self.maxused = max(self.maxused, col)
        ok = True
        for w in self.g.neighbors[v]:
            if self.colors[w] < 0 and not self.forb[w] & bit:
                log.append(w)
                self.forb[w] |= bit
                if self.forb[w] == self.full:
                    ok = False
        entry = (v, bit, log, prev_max)
        if not ok:
            self.undo(entry)
            return None
        return entry

    def undo(self, entry):
        v, bit, log, prev_max = entry
        for w in log:
            self.forb[w] &= ~bit
        self.colors[v] = -1
        self.left.add(v)
        self.maxused = prev_max

    def select(self):
        g, forb = self.g, self.forb
        return min(self.left, key=lambda x: (-bin(forb[x]).count("1"), -g.degree(x), x))

    def choices(self, v):
        top = min(self.c, self.maxused + 2)
        return [col for col in range(top) if not self.forb[v] >> col & 1]

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExhausted("node budget exhausted", self.nodes)

    def solve(self) -> bool:
        if not self.left:
            return True
        v = self.select()
        for col in self.choices(v):
            self.tick()
            entry = self.assign(v, col)
            if entry is None:
                continue
            if self.solve():
                return True
            self.undo(entry)
        return False


def _prepared(g, c, budget, clique):
    s = _Search(g, c, budget)
    for col, v in enumerate(clique[:c]):
        if s.assign(v, col) is None:
            return None
    return s


def _run_branch(g, c, budget, clique, col):
    s = _prepared(g, c, budget, clique)
    v = s.select()
    s.tick()
    entry = s.assign(v, col)
    try:
        found = entry is not None and s.solve()
    except BudgetExhausted:
        return "budget", s.nodes, None
    return ("found" if found else "none"), s.nodes, (tuple(x + 1 for x in s.colors) if found else None)


def k_colorable(g: FiniteGraph, c: int, budget: int = DEFAULT_BUDGET, threads: int = 1,
                clique=None):
    """Decide ``c``-colorability.

    Returns ``(coloring or None, nodes)``; raises BudgetExhausted when the
    node budget runs out first.  The search is split over the colors of the
    first branching vertex; results are merged in branch order so the answer
    and node count do not depend on ``threads``.
    """
    if g.n == 0:
        return (), 0
    if c <= 0:
        return None, 0
    clique = list(clique) if clique is not None else max_greedy_clique(g)
    if len(clique) > c:
        return None, 0
    s = _prepared(g, c, budget, clique)
    if s is None:
        return None, 0
    if not s.left:
        return tuple(x + 1 for x in s.colors), 0
    branches = s.choices(s.select())
    if threads > 1 and len(branches) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda col: _run_branch(g, c, budget, clique, col), branches))
    else:
        results = []
        spent = 0
        for col in branches:
            res = _run_branch(g, c, budget - spent, clique, col)
            results.append(res)
            spent += res[1]
            if res[0] != "none":
                break
    total = 0
    for status, nodes, col in results:
        total += nodes
        if status == "budget" or total > budget:
            raise BudgetExhausted(f"{c}-colorability undecided within budget", min(total, budget + 1))
        if status == "found":
            return col, total
    return None, total


@dataclass
class ChiResult:
    chi: int | None
    lower: int
    upper: int
    certificate: tuple | None
    nodes: int
    exhausted: bool  # chi - 1 refuted by exhausted search (or clique bound)
    lower_source: str
    budget_hit: bool = False

    def to_json(self) -> dict:
        return {
            "chi": self.chi,
            "lower": self.lower,
            "upper": self.upper,
            "certificate": list(self.certificate) if self.certificate else None,
            "nodes": self.nodes,
            "exhausted": self.exhausted,
            "lower_source": self.lower_source,
            "budget_hit": self.budget_hit,
        }


def chromatic_number(g: FiniteGraph, budget: int = DEFAULT_BUDGET, threads: int = 1) -> ChiResult:
    """Exact chromatic number by iterative deepening on the palette size.

    Lower bound from a greedy clique, upper bound from DSATUR; every palette
    size between them is decided by exhaustive search.  On budget
    exhaustion the result carries ``chi=None`` and the bounds reached.
    """
    if g.n == 0:
        return ChiResult(0, 0, 0, (), 0, True, "empty")
    clique = max_greedy_clique(g)
    lo = len(clique)
    upper_col = dsatur_coloring(g)
    hi = max(upper_col.colors)
    best = upper_col.colors
    nodes = 0
    source = "clique"
    for c in range(lo, hi):
        try:
            col, used = k_colorable(g, c, budget - nodes, threads, clique)
        except BudgetExhausted as exc:
            return ChiResult(None, c, hi, best, nodes + exc.nodes, False, source, True)
        nodes += used
        if col is not None:
            return ChiResult(c, c, c, col, nodes, True, source)
        source = "search"
    return ChiResult(hi, hi, hi, best, nodes, True, source)


# ------------------------------------------------------------- enumeration


def enumerate_colorings(g: FiniteGraph, k: int, visitor=None, budget: int = 10**7) -> int:
    """Visit every proper coloring with colors ``1..k`` (no symmetry quotient).

    Vertices are assigned in index order.  Raises BudgetExhausted rather
    than returning a partial count.
    """
    n = g.n
    colors = [0] * n
    earlier = [[w for w in g.neighbors[v] if w < v] for v in range(n)]
    nodes = 0
    count = 0

    def rec(v):
        nonlocal nodes, count
        if v == n:
            count += 1
            if visitor is not None:
                visitor(tuple(colors))
            return
        taken = {colors[w] for w in earlier[v]}
        for col in range(1, k + 1):
            if col in taken:
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetExhausted("enumeration budget exhausted", nodes, count)
            colors[v] = col
            rec(v + 1)
        colors[v] = 0

    rec(0)
    return count


# ---------------------------------------------------------- anchor sets


def _line_distance(g: FiniteGraph):
    m = g.shape.m if isinstance(g.shape, Cycle) else None

    def dist(u, v):
        d = abs(u - v)
        return min(d, m - d) if m is not None else d

    return dist


def greedy_maximal_discrete(g: FiniteGraph, N: int, order=None, metric: str = "graph") -> AnchorSet:
    """Scan vertices in ``order`` (index order by default), keeping a vertex
    iff it is farther than ``N`` from everything kept so far.

    ``metric="line"`` measures distance along the underlying unit-step line
    of a line-family instance instead of the graph's own path metric.
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    blocked = bytearray(g.n)
    chosen = []
    order = range(g.n) if order is None else order
    if metric == "line":
        m = g.shape.m if isinstance(g.shape, Cycle) else None
    for v in order:
        if blocked[v]:
            continue
        chosen.append(v)
        if metric == "graph":
            near = bfs_distances(g, v, N)
        else:
            near = [(v + d) % m if m else v + d for d in range(-N, N + 1)]
            near = [u for u in near if 0 <= u < g.n]
        for u in near:
            blocked[u] = 1
    return AnchorSet(tuple(sorted(chosen)), N, metric)


def anchor_set_problems(g: FiniteGraph, A: AnchorSet) -> list:
    """Violations of discreteness and maximality (empty when valid)."""
    out = []
    if A.metric == "graph":
        def dist(u, v):
            return bfs_distances(g, u, A.N + 1).get(v, math.inf)
    else:
        dist = _line_distance(g)
    anchors = list(A.anchors)
    for a, u in enumerate(anchors):
        for v in anchors[a + 1:]:
            if dist(u, v) <= A.N:
                out.append(("too-close", u, v))
    for v in range(g.n):
        if v not in A.anchors and all(dist(u, v) > A.N for u in anchors):
            out.append(("not-maximal", v))
    return out
